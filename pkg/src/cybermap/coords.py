"""Coordinate systems over the IP, port, and AS numbering spaces.

An order-n grid cell corresponds one-to-one with a /(2n) IPv4 prefix; the
scale text "1:/2n" names that granularity.  AS numbers live on a fixed
order-8 (256 x 256) grid covering the 16-bit ASN space.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import hilbert
from .hilbert import Rect, check_order

AS_ORDER = 8


def parse_ipv4(text: str) -> int:
    parts = text.strip().split(".")
    if len(parts) != 4:
        raise ValueError(f"bad IPv4 address {text!r}")
    value = 0
    for part in parts:
        if not part.isdigit() or len(part) > 3:
            raise ValueError(f"bad IPv4 address {text!r}")
        octet = int(part)
        if octet > 255:
            raise ValueError(f"bad IPv4 address {text!r}")
        value = (value << 8) | octet
    return value


def format_ipv4(value: int) -> str:
    if not 0 <= value < 2**32:
        raise ValueError(f"IPv4 value {value} out of range")
    return ".".join(str((value >> shift) & 0xFF) for shift in (24, 16, 8, 0))


@dataclass(frozen=True)
class Cidr:
    """An aligned IPv4 prefix: base address plus prefix length."""

    base: int
    len: int

    def __post_init__(self) -> None:
        if not 0 <= self.len <= 32:
            raise ValueError(f"prefix length {self.len} out of range")
        if not 0 <= self.base < 2**32:
            raise ValueError(f"base address {self.base} out of range")
        if self.len < 32 and self.base & ((1 << (32 - self.len)) - 1):
            raise ValueError(f"misaligned prefix {format_ipv4(self.base)}/{self.len}")

    @classmethod
    def parse(cls, text: str) -> "Cidr":
        base_text, _, len_text = text.strip().partition("/")
        if not len_text.isdigit():
            raise ValueError(f"bad CIDR {text!r}")
        return cls(parse_ipv4(base_text), int(len_text))

    @property
    def size(self) -> int:
        return 1 << (32 - self.len)

    def contains(self, ip: int) -> bool:
        return (ip >> (32 - self.len)) == (self.base >> (32 - self.len)) if self.len else True

    def __str__(self) -> str:
        return f"{format_ipv4(self.base)}/{self.len}"


@dataclass(frozen=True)
class Cell:
    """One grid square at a given curve order."""

    order: int
    x: int
    y: int

    def __post_init__(self) -> None:
        check_order(self.order)
        side = 1 << self.order
        if not (0 <= self.x < side and 0 <= self.y < side):
            raise ValueError(f"cell ({self.x}, {self.y}) out of range for order {self.order}")


@dataclass(frozen=True)
class IpPortCoord:
    """3-D coordinate: IP plane cell plus the port as the vertical axis."""

    cell: Cell
    port: int

    def __post_init__(self) -> None:
        check_port(self.port)


def check_port(port: int) -> int:
    if not 0 <= port <= 65535:
        raise ValueError(f"port {port} out of range")
    return port


def ip_to_cell(ip: int, order: int) -> Cell:
    """Cell visited by the top 2*order address bits; one cell per /(2*order)."""
    check_order(order)
    index = ip >> (32 - 2 * order)
    x, y = hilbert.index_to_point(order, index)
    return Cell(order, x, y)


def cell_to_prefix(cell: Cell) -> Cidr:
    """The unique /(2*order) prefix whose addresses map to this cell."""
    index = hilbert.point_to_index(cell.order, cell.x, cell.y)
    return Cidr(index << (32 - 2 * cell.order), 2 * cell.order)


def prefix_to_region(cidr: Cidr, order: int) -> list[Rect]:
    """Grid footprint of a CIDR: one square for even lengths, two for odd."""
    check_order(order)
    if cidr.len > 2 * order:
        raise ValueError(f"prefix /{cidr.len} finer than cell resolution at order {order}")
    if cidr.len % 2 == 0:
        level = order - cidr.len // 2
        block = cidr.base >> (32 - 2 * order + 2 * level) if cidr.len else 0
        return [hilbert.block_rect(order, block, level)]
    half = Cidr(cidr.base, cidr.len + 1)
    other = Cidr(cidr.base | (1 << (32 - cidr.len - 1)), cidr.len + 1)
    return prefix_to_region(half, order) + prefix_to_region(other, order)


def asn_to_cell(asn: int) -> Cell:
    """Place a 16-bit AS number on the fixed 256 x 256 AS grid."""
    if not 0 <= asn < 65536:
        raise ValueError(f"ASN {asn} not mappable: AS grid covers 16-bit ASNs only")
    x, y = hilbert.index_to_point(AS_ORDER, asn)
    return Cell(AS_ORDER, x, y)


def ipport_coord(ip: int, port: int, order: int) -> IpPortCoord:
    return IpPortCoord(ip_to_cell(ip, order), port)


def scale_notation(order: int) -> str:
    """Format an order as its one-pixel-per-prefix scale text, e.g. "1:/20"."""
    check_order(order)
    return f"1:/{2 * order}"


def parse_scale(text: str) -> int:
    """Inverse of scale_notation; rejects odd prefix lengths."""
    text = text.strip()
    if not text.startswith("1:/"):
        raise ValueError(f"bad scale {text!r}")
    rest = text[3:]
    if not rest.isdigit():
        raise ValueError(f"bad scale {text!r}")
    plen = int(rest)
    if plen % 2 or not 2 <= plen <= 32:
        raise ValueError(f"scale {text!r} does not name a square cell size")
    return plen // 2
