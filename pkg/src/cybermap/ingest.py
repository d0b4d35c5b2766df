"""Parsers for the input data families and the longest-prefix-match store.

All parsers accumulate per-line errors instead of aborting: operational
data is dirty and a map built from the clean 99% is still useful.  Every
parser returns (records, errors) where each error is (line_number, message).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Any, Iterable

from .coords import Cidr, format_ipv4, parse_ipv4

ALLOCATION_CATEGORIES = {"allocated", "reserved", "legacy", "available", "unallocated"}

LineError = tuple[int, str]


@dataclass(frozen=True)
class AllocationRecord:
    prefix: Cidr
    designation: str
    category: str
    date: str | None = None


@dataclass(frozen=True)
class PrefixAsRecord:
    prefix: Cidr
    asn: int
    multi_origin: bool = False


@dataclass(frozen=True)
class FlowRecord:
    timestamp: int
    src_ip: int
    src_port: int
    dst_ip: int
    dst_port: int
    protocol: str
    bytes: int
    direction: str


@dataclass(frozen=True)
class EventRecord:
    timestamp: int
    src_ip: int
    dst_ip: int
    kind: str


@dataclass(frozen=True)
class AsLink:
    a: int
    b: int
    relationship: str = "unknown"


def _lines(stream: IO[str]) -> Iterable[tuple[int, str]]:
    for line_no, raw in enumerate(stream, start=1):
        yield line_no, raw.rstrip("\r\n")


def _parse_iana_prefix(field_text: str) -> Cidr:
    # IANA registry files write /8 blocks as zero-padded first octets, "001/8".
    base_text, _, len_text = field_text.strip().partition("/")
    if not len_text:
        raise ValueError(f"bad prefix field {field_text!r}")
    if "." not in base_text:
        octet = int(base_text)
        if not 0 <= octet <= 255:
            raise ValueError(f"bad prefix field {field_text!r}")
        base = octet << 24
    else:
        base = parse_ipv4(base_text)
    return Cidr(base, int(len_text))


def parse_iana_csv(stream: IO[str]) -> tuple[list[AllocationRecord], list[LineError]]:
    """Parse IANA-style allocation CSV: prefix,designation,date,status."""
    records: list[AllocationRecord] = []
    errors: list[LineError] = []
    lines = iter(_lines(stream))
    next(lines, None)  # header
    for line_no, line in lines:
        if not line.strip():
            continue
        try:
            fields = line.split(",")
            if len(fields) < 4:
                raise ValueError(f"expected 4 fields, got {len(fields)}")
            prefix = _parse_iana_prefix(fields[0])
            category = fields[3].strip().lower()
            if category not in ALLOCATION_CATEGORIES:
                raise ValueError(f"unknown category {fields[3]!r}")
            records.append(
                AllocationRecord(
                    prefix=prefix,
                    designation=fields[1].strip(),
                    category=category,
                    date=fields[2].strip() or None,
                )
            )
        except ValueError as exc:
            errors.append((line_no, str(exc)))
    return records, errors


def parse_pfx2as(stream: IO[str]) -> tuple[list[PrefixAsRecord], list[LineError]]:
    """Parse tab-separated prefix-to-origin-AS lines: base<TAB>len<TAB>asn.

    Multi-origin announcements ("asn1_asn2" or "asn1,asn2") keep the first
    ASN and set the multi_origin flag.
    """
    records: list[PrefixAsRecord] = []
    errors: list[LineError] = []
    for line_no, line in _lines(stream):
        if not line.strip():
            continue
        try:
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"expected 3 tab-separated fields, got {len(fields)}")
            prefix = Cidr(parse_ipv4(fields[0]), int(fields[1]))
            asn_field = fields[2].strip()
            multi = "_" in asn_field or "," in asn_field
            first = asn_field.replace("_", ",").split(",")[0]
            asn = int(first)
            if asn < 0:
                raise ValueError(f"negative ASN {asn}")
            records.append(PrefixAsRecord(prefix=prefix, asn=asn, multi_origin=multi))
        except ValueError as exc:
            errors.append((line_no, str(exc)))
    return records, errors


def parse_flows_csv(stream: IO[str]) -> tuple[list[FlowRecord], list[LineError]]:
    """Parse flow export CSV: ts,src_ip,src_port,dst_ip,dst_port,proto,bytes,direction."""
    records: list[FlowRecord] = []
    errors: list[LineError] = []
    for line_no, line in _lines(stream):
        if not line.strip():
            continue
        try:
            fields = line.split(",")
            if len(fields) != 8:
                raise ValueError(f"expected 8 fields, got {len(fields)}")
            proto = fields[5].strip().lower()
            if proto not in ("tcp", "udp"):
                proto = "other"
            direction = fields[7].strip().lower()
            if direction not in ("up", "down"):
                raise ValueError(f"bad direction {fields[7]!r}")
            nbytes = int(fields[6])
            if nbytes < 0:
                raise ValueError(f"negative byte count {nbytes}")
            records.append(
                FlowRecord(
                    timestamp=int(fields[0]),
                    src_ip=parse_ipv4(fields[1]),
                    src_port=_parse_port(fields[2]),
                    dst_ip=parse_ipv4(fields[3]),
                    dst_port=_parse_port(fields[4]),
                    protocol=proto,
                    bytes=nbytes,
                    direction="upload" if direction == "up" else "download",
                )
            )
        except ValueError as exc:
            errors.append((line_no, str(exc)))
    return records, errors


def _parse_port(text: str) -> int:
    port = int(text)
    if not 0 <= port <= 65535:
        raise ValueError(f"port {port} out of range")
    return port


def parse_events_csv(stream: IO[str]) -> tuple[list[EventRecord], list[LineError]]:
    """Parse security-event CSV: ts,src_ip,dst_ip,kind."""
    records: list[EventRecord] = []
    errors: list[LineError] = []
    for line_no, line in _lines(stream):
        if not line.strip():
            continue
        try:
            fields = line.split(",")
            if len(fields) != 4:
                raise ValueError(f"expected 4 fields, got {len(fields)}")
            ts = int(fields[0])
            if ts < 0:
                raise ValueError(f"negative timestamp {ts}")
            records.append(
                EventRecord(
                    timestamp=ts,
                    src_ip=parse_ipv4(fields[1]),
                    dst_ip=parse_ipv4(fields[2]),
                    kind=fields[3].strip() or "unknown",
                )
            )
        except ValueError as exc:
            errors.append((line_no, str(exc)))
    return records, errors


def parse_aslinks_csv(stream: IO[str]) -> tuple[list[AsLink], list[LineError]]:
    """Parse AS topology CSV: asn_a,asn_b,relationship."""
    records: list[AsLink] = []
    errors: list[LineError] = []
    for line_no, line in _lines(stream):
        if not line.strip():
            continue
        try:
            fields = line.split(",")
            if len(fields) not in (2, 3):
                raise ValueError(f"expected 2 or 3 fields, got {len(fields)}")
            a, b = int(fields[0]), int(fields[1])
            if a == b:
                raise ValueError(f"self-link on ASN {a}")
            rel = fields[2].strip().lower() if len(fields) == 3 and fields[2].strip() else "unknown"
            if rel not in ("peer", "provider_customer", "unknown"):
                raise ValueError(f"bad relationship {rel!r}")
            records.append(AsLink(a=a, b=b, relationship=rel))
        except ValueError as exc:
            errors.append((line_no, str(exc)))
    return records, errors


class _TrieNode:
    __slots__ = ("children", "attrs", "has_attrs")

    def __init__(self) -> None:
        self.children: list[_TrieNode | None] = [None, None]
        self.attrs: dict[str, Any] | None = None
        self.has_attrs = False


@dataclass
class PrefixStore:
    """Binary trie from aligned prefixes to attribute dicts, LPM lookup."""

    _root: _TrieNode = field(default_factory=_TrieNode)
    _entries: dict[Cidr, dict[str, Any]] = field(default_factory=dict)

    def insert(self, prefix: Cidr, attrs: dict[str, Any]) -> None:
        node = self._root
        for depth in range(prefix.len):
            bit = (prefix.base >> (31 - depth)) & 1
            child = node.children[bit]
            if child is None:
                child = _TrieNode()
                node.children[bit] = child
            node = child
        node.attrs = attrs
        node.has_attrs = True
        self._entries[prefix] = attrs

    def lookup(self, ip: int) -> dict[str, Any] | None:
        node = self._root
        best = node.attrs if node.has_attrs else None
        for depth in range(32):
            child = node.children[(ip >> (31 - depth)) & 1]
            if child is None:
                break
            node = child
            if node.has_attrs:
                best = node.attrs
        return best

    def entries(self) -> list[tuple[Cidr, dict[str, Any]]]:
        return sorted(self._entries.items(), key=lambda kv: (kv[0].base, kv[0].len))

    def __len__(self) -> int:
        return len(self._entries)

    def partition(self):
        """Disjoint (Cidr, attrs-or-None) regions labeled by their LPM winner.

        The regions cover the whole IPv4 space; attrs is None where no
        stored prefix matches.
        """
        out: list[tuple[Cidr, dict[str, Any] | None]] = []

        def walk(node: _TrieNode | None, base: int, depth: int, inherited: dict[str, Any] | None) -> None:
            if node is None:
                out.append((Cidr(base, depth), inherited))
                return
            if node.has_attrs:
                inherited = node.attrs
            if node.children[0] is None and node.children[1] is None:
                out.append((Cidr(base, depth), inherited))
                return
            walk(node.children[0], base, depth + 1, inherited)
            walk(node.children[1], base | (1 << (31 - depth)), depth + 1, inherited)

        walk(self._root, 0, 0, None)
        return out

    def dump(self, stream: IO[str]) -> None:
        """Canonical text form: one "prefix<TAB>attrs-json" line per entry."""
        for prefix, attrs in self.entries():
            stream.write(f"{prefix}\t{json.dumps(attrs, sort_keys=True)}\n")

    @classmethod
    def load(cls, stream: IO[str]) -> "PrefixStore":
        store = cls()
        for _, line in _lines(stream):
            if not line.strip():
                continue
            prefix_text, _, attrs_text = line.partition("\t")
            store.insert(Cidr.parse(prefix_text), json.loads(attrs_text))
        return store


def store_from_allocations(records: Iterable[AllocationRecord]) -> PrefixStore:
    store = PrefixStore()
    for rec in records:
        store.insert(
            rec.prefix,
            {"designation": rec.designation, "category": rec.category, "date": rec.date},
        )
    return store


def store_from_pfx2as(records: Iterable[PrefixAsRecord]) -> PrefixStore:
    store = PrefixStore()
    for rec in records:
        store.insert(rec.prefix, {"asn": rec.asn, "multi_origin": rec.multi_origin})
    return store


def serialize_allocations(records: Iterable[AllocationRecord]) -> str:
    lines = ["prefix,designation,date,status"]
    for rec in records:
        lines.append(f"{rec.prefix},{rec.designation},{rec.date or ''},{rec.category.upper()}")
    return "\n".join(lines) + "\n"


def serialize_pfx2as(records: Iterable[PrefixAsRecord]) -> str:
    lines = []
    for rec in records:
        asn = f"{rec.asn}_?" if rec.multi_origin else str(rec.asn)
        lines.append(f"{format_ipv4(rec.prefix.base)}\t{rec.prefix.len}\t{asn}")
    return "\n".join(lines) + "\n" if lines else ""


def serialize_flows(records: Iterable[FlowRecord]) -> str:
    lines = []
    for rec in records:
        direction = "up" if rec.direction == "upload" else "down"
        lines.append(
            f"{rec.timestamp},{format_ipv4(rec.src_ip)},{rec.src_port},"
            f"{format_ipv4(rec.dst_ip)},{rec.dst_port},{rec.protocol},{rec.bytes},{direction}"
        )
    return "\n".join(lines) + "\n" if lines else ""


def serialize_events(records: Iterable[EventRecord]) -> str:
    lines = [
        f"{rec.timestamp},{format_ipv4(rec.src_ip)},{format_ipv4(rec.dst_ip)},{rec.kind}"
        for rec in records
    ]
    return "\n".join(lines) + "\n" if lines else ""


def serialize_aslinks(records: Iterable[AsLink]) -> str:
    lines = [f"{rec.a},{rec.b},{rec.relationship}" for rec in records]
    return "\n".join(lines) + "\n" if lines else ""
