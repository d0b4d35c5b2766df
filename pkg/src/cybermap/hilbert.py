"""Hilbert and Morton space-filling curves on power-of-two grids.

The curve of order n walks a 2^n x 2^n grid in 4^n steps.  The fixed
orientation is: index 0 at (0, 0), first step in +y, last point at
(2^n - 1, 0).  y grows upward; any screen flipping is the renderer's job.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_ORDER = 16


@dataclass(frozen=True)
class Rect:
    """Inclusive integer bounds of an axis-aligned grid region."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self) -> None:
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"degenerate rect {self!r}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    def cells(self):
        for y in range(self.y0, self.y1 + 1):
            for x in range(self.x0, self.x1 + 1):
                yield (x, y)


def check_order(order: int) -> int:
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"curve order must be in 1..{MAX_ORDER}, got {order}")
    return order


def index_to_point(order: int, i: int) -> tuple[int, int]:
    """Map a curve index to the (x, y) lattice point it visits."""
    check_order(order)
    if not 0 <= i < 4**order:
        raise ValueError(f"index {i} out of range for order {order}")
    x, y = 0, 0
    t = i
    s = 1
    side = 1 << order
    while s < side:
        rx = 1 & (t >> 1)
        ry = 1 & (t ^ rx)
        x, y = _rotate(s, x, y, rx, ry)
        x += s * rx
        y += s * ry
        t >>= 2
        s <<= 1
    return x, y


def point_to_index(order: int, x: int, y: int) -> int:
    """Exact inverse of index_to_point."""
    check_order(order)
    side = 1 << order
    if not (0 <= x < side and 0 <= y < side):
        raise ValueError(f"point ({x}, {y}) out of range for order {order}")
    i = 0
    s = side >> 1
    while s > 0:
        rx = 1 if x & s else 0
        ry = 1 if y & s else 0
        i += s * s * ((3 * rx) ^ ry)
        x, y = _rotate(s, x, y, rx, ry)
        s >>= 1
    return i


def _rotate(s: int, x: int, y: int, rx: int, ry: int) -> tuple[int, int]:
    if ry == 0:
        if rx == 1:
            x = s - 1 - x
            y = s - 1 - y
        x, y = y, x
    return x, y


def curve_polyline(order: int) -> list[tuple[int, int]]:
    """Enumerate the curve by the recursive subdivision construction.

    Runs the recursion on the unit square (origin plus two direction
    vectors, halved per level) and normalizes each emitted subsquare
    midpoint to its integer lattice cell.  All midpoints are dyadic
    rationals, so the float arithmetic is exact.
    """
    check_order(order)
    side = 1 << order
    points: list[tuple[int, int]] = []

    def recurse(x: float, y: float, xi: float, xj: float, yi: float, yj: float, n: int) -> None:
        if n == 0:
            px = x + (xi + yi) / 2
            py = y + (xj + yj) / 2
            points.append((int(px * side), int(py * side)))
        else:
            recurse(x, y, yi / 2, yj / 2, xi / 2, xj / 2, n - 1)
            recurse(x + xi / 2, y + xj / 2, xi / 2, xj / 2, yi / 2, yj / 2, n - 1)
            recurse(x + (xi + yi) / 2, y + (xj + yj) / 2, xi / 2, xj / 2, yi / 2, yj / 2, n - 1)
            recurse(x + xi / 2 + yi, y + xj / 2 + yj, -yi / 2, -yj / 2, -xi / 2, -xj / 2, n - 1)

    recurse(0.0, 0.0, 0.0, 1.0, 1.0, 0.0, order)
    return points


def block_rect(order: int, block: int, level: int) -> Rect:
    """Bounding square of the aligned index block [block*4^level, (block+1)*4^level).

    Aligned blocks always cover an exact 2^level x 2^level square; this is
    the locality property that makes CIDR prefixes render as squares.
    """
    check_order(order)
    if not 0 <= level <= order:
        raise ValueError(f"level {level} out of range for order {order}")
    if not 0 <= block < 4 ** (order - level):
        raise ValueError(f"block {block} out of range for order {order}, level {level}")
    x, y = index_to_point(order, block << (2 * level))
    mask = ~((1 << level) - 1)
    x0 = x & mask
    y0 = y & mask
    return Rect(x0, y0, x0 + (1 << level) - 1, y0 + (1 << level) - 1)


def morton_index_to_point(order: int, i: int) -> tuple[int, int]:
    """Z-order (bit interleaving) decode; clustering baseline only."""
    check_order(order)
    if not 0 <= i < 4**order:
        raise ValueError(f"index {i} out of range for order {order}")
    x = _compact_even_bits(i >> 1)
    y = _compact_even_bits(i)
    return x, y


def _compact_even_bits(n: int) -> int:
    n &= 0x55555555
    n = (n ^ (n >> 1)) & 0x33333333
    n = (n ^ (n >> 2)) & 0x0F0F0F0F
    n = (n ^ (n >> 4)) & 0x00FF00FF
    n = (n ^ (n >> 8)) & 0x0000FFFF
    return n
