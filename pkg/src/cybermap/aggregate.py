"""Reduce ingested records into dense renderable grids.

Layers are numpy matrices indexed [y][x] with y growing upward; all
aggregations are associative sums, so any partition/merge order gives the
same layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coords import Cidr, ip_to_cell, prefix_to_region
from .hilbert import Rect, check_order
from .ingest import EventRecord, FlowRecord, PrefixAsRecord, PrefixStore

UNALLOCATED = "unallocated"


def full_rect(order: int) -> Rect:
    side = 1 << order
    return Rect(0, 0, side - 1, side - 1)


@dataclass
class GridLayer:
    """Grid of aggregated cell values, whole or windowed to a sub-rect.

    kind "scalar": values holds counts or bytes.
    kind "updown": values holds upload bytes, down holds download bytes.
    kind "category": values holds indices into categories, mixed flags
    cells whose addresses span more than one category.

    `rect` is the covered window; matrices are shaped (rect.height,
    rect.width) and indexed [y - rect.y0][x - rect.x0].  High orders are
    too large to hold densely, so aggregations can build just a window.
    """

    order: int
    kind: str
    values: np.ndarray
    down: np.ndarray | None = None
    mixed: np.ndarray | None = None
    categories: tuple[str, ...] = ()
    rect: Rect | None = None

    def __post_init__(self) -> None:
        check_order(self.order)
        if self.rect is None:
            self.rect = full_rect(self.order)
        side = 1 << self.order
        if not (self.rect.x1 < side and self.rect.y1 < side):
            raise ValueError(f"window {self.rect} outside order-{self.order} grid")
        if self.values.shape != (self.rect.height, self.rect.width):
            raise ValueError(
                f"matrix shape {self.values.shape} does not match window {self.rect}"
            )

    @property
    def side(self) -> int:
        return 1 << self.order


@dataclass(frozen=True)
class Frame:
    """One fixed time interval of events aggregated into a scalar layer."""

    start: int
    end: int
    layer: GridLayer


@dataclass
class PortHistogram:
    """Per-IP, per-port-bucket traffic matrix for one viewed IP block."""

    block: Cidr
    bucket_size: int
    upload: np.ndarray
    download: np.ndarray


def rasterize_allocations(
    store: PrefixStore, order: int, key: str = "category", rect: Rect | None = None
) -> GridLayer:
    """Paint each cell with the majority attribute value by address count.

    `key` selects the attribute used as the color class ("category" for
    IANA data, "asn" for pfx2as data).  Cells whose addresses resolve to
    more than one distinct value get the mixed flag.
    """
    check_order(order)
    window = rect or full_rect(order)
    cell_bits = 32 - 2 * order
    shape = (window.height, window.width)

    counts: dict[str, np.ndarray] = {}

    def plane(label: str) -> np.ndarray:
        if label not in counts:
            counts[label] = np.zeros(shape, dtype=np.uint64)
        return counts[label]

    for region, attrs in store.partition():
        label = UNALLOCATED if attrs is None or attrs.get(key) is None else str(attrs[key])
        if label == UNALLOCATED:
            continue
        if region.len <= 2 * order:
            # region covers whole cells: every cell in its footprint is
            # fully owned, so each gets one cell's worth of addresses
            for foot in prefix_to_region(region, order):
                x0 = max(foot.x0, window.x0) - window.x0
                x1 = min(foot.x1, window.x1) - window.x0
                y0 = max(foot.y0, window.y0) - window.y0
                y1 = min(foot.y1, window.y1) - window.y0
                if x0 <= x1 and y0 <= y1:
                    plane(label)[y0 : y1 + 1, x0 : x1 + 1] += np.uint64(1 << cell_bits)
        else:
            cell = ip_to_cell(region.base, order)
            if window.x0 <= cell.x <= window.x1 and window.y0 <= cell.y <= window.y1:
                plane(label)[cell.y - window.y0, cell.x - window.x0] += np.uint64(region.size)

    categories = (UNALLOCATED,) + tuple(sorted(counts))
    if not counts:
        return GridLayer(
            order=order,
            kind="category",
            values=np.zeros(shape, dtype=np.int32),
            mixed=np.zeros(shape, dtype=bool),
            categories=categories,
            rect=window,
        )

    stack = np.stack([counts[c] for c in categories[1:]])
    allocated = stack.sum(axis=0)
    cell_size = np.uint64(1) << np.uint64(cell_bits)
    unalloc = cell_size - allocated

    full = np.concatenate([unalloc[None], stack])
    ids = full.argmax(axis=0).astype(np.int32)
    mixed = (full > 0).sum(axis=0) > 1
    return GridLayer(
        order=order, kind="category", values=ids, mixed=mixed, categories=categories, rect=window
    )


def rasterize_flows(
    flows: list[FlowRecord], order: int, endpoint: str = "src", rect: Rect | None = None
) -> GridLayer:
    """Sum upload/download bytes per cell of the chosen endpoint address."""
    check_order(order)
    if endpoint not in ("src", "dst"):
        raise ValueError(f"bad endpoint {endpoint!r}")
    window = rect or full_rect(order)
    up = np.zeros((window.height, window.width), dtype=np.uint64)
    down = np.zeros((window.height, window.width), dtype=np.uint64)
    for flow in flows:
        ip = flow.src_ip if endpoint == "src" else flow.dst_ip
        cell = ip_to_cell(ip, order)
        if not (window.x0 <= cell.x <= window.x1 and window.y0 <= cell.y <= window.y1):
            continue
        plane = up if flow.direction == "upload" else down
        plane[cell.y - window.y0, cell.x - window.x0] += np.uint64(flow.bytes)
    return GridLayer(order=order, kind="updown", values=up, down=down, rect=window)


def as_ip_counts(records: list[PrefixAsRecord]) -> dict[int, int]:
    """Announced address count per ASN, deduplicated by covered address.

    Overlapping announcements by the same ASN count each address once;
    the same address announced by two ASNs counts for both.
    """
    ranges: dict[int, list[tuple[int, int]]] = {}
    for rec in records:
        ranges.setdefault(rec.asn, []).append((rec.prefix.base, rec.prefix.base + rec.prefix.size))
    heights: dict[int, int] = {}
    for asn, ivals in ranges.items():
        total = 0
        last_end = -1
        for start, end in sorted(ivals):
            if start > last_end:
                total += end - start
                last_end = end
            elif end > last_end:
                total += end - last_end
                last_end = end
        heights[asn] = total
    return heights


def ipport_histogram(
    flows: list[FlowRecord], block: Cidr, bucket_size: int = 256, endpoint: str = "src"
) -> PortHistogram:
    """Traffic per (IP offset within block, port bucket); flows outside the block are ignored."""
    if block.len < 16:
        raise ValueError(f"block /{block.len} too coarse for a per-IP histogram")
    if bucket_size <= 0 or 65536 % bucket_size:
        raise ValueError(f"bucket size {bucket_size} does not divide 65536")
    if endpoint not in ("src", "dst"):
        raise ValueError(f"bad endpoint {endpoint!r}")
    n_ips = block.size
    n_buckets = 65536 // bucket_size
    upload = np.zeros((n_ips, n_buckets), dtype=np.uint64)
    download = np.zeros((n_ips, n_buckets), dtype=np.uint64)
    for flow in flows:
        ip = flow.src_ip if endpoint == "src" else flow.dst_ip
        port = flow.src_port if endpoint == "src" else flow.dst_port
        if not block.contains(ip):
            continue
        offset = ip - block.base
        plane = upload if flow.direction == "upload" else download
        plane[offset, port // bucket_size] += np.uint64(flow.bytes)
    return PortHistogram(block=block, bucket_size=bucket_size, upload=upload, download=download)


def make_frames(events: list[EventRecord], interval: int, order: int) -> list[Frame]:
    """Bucket events into contiguous equal intervals of src-IP cell counts."""
    if interval <= 0:
        raise ValueError(f"interval must be positive, got {interval}")
    check_order(order)
    if not events:
        return []
    t0 = min(e.timestamp for e in events)
    t1 = max(e.timestamp for e in events)
    n_frames = (t1 - t0) // interval + 1
    side = 1 << order
    grids = [np.zeros((side, side), dtype=np.uint64) for _ in range(n_frames)]
    for event in events:
        cell = ip_to_cell(event.src_ip, order)
        grids[(event.timestamp - t0) // interval][cell.y, cell.x] += np.uint64(1)
    return [
        Frame(
            start=t0 + k * interval,
            end=t0 + (k + 1) * interval,
            layer=GridLayer(order=order, kind="scalar", values=grid),
        )
        for k, grid in enumerate(grids)
    ]


def _rle_encode(flat: list) -> list[list]:
    runs: list[list] = []
    for value in flat:
        if runs and runs[-1][1] == value:
            runs[-1][0] += 1
        else:
            runs.append([1, value])
    return runs


def _rle_decode(runs: list[list]) -> list:
    out: list = []
    for count, value in runs:
        out.extend([value] * count)
    return out


def layer_to_json(layer: GridLayer) -> dict:
    """JSON envelope with run-length-encoded row-major values."""
    env: dict = {"order": layer.order, "kind": layer.kind}
    if layer.rect != full_rect(layer.order):
        env["rect"] = [layer.rect.x0, layer.rect.y0, layer.rect.x1, layer.rect.y1]
    env["values"] = _rle_encode([int(v) for v in layer.values.ravel()])
    if layer.down is not None:
        env["down"] = _rle_encode([int(v) for v in layer.down.ravel()])
    if layer.mixed is not None:
        env["mixed"] = _rle_encode([int(v) for v in layer.mixed.ravel()])
    if layer.categories:
        env["categories"] = list(layer.categories)
    return env


def layer_from_json(env: dict) -> GridLayer:
    order = int(env["order"])
    kind = env["kind"]
    window = Rect(*env["rect"]) if "rect" in env else full_rect(order)
    shape = (window.height, window.width)
    dtype = np.int32 if kind == "category" else np.uint64
    values = np.array(_rle_decode(env["values"]), dtype=dtype).reshape(shape)
    down = None
    mixed = None
    if "down" in env:
        down = np.array(_rle_decode(env["down"]), dtype=np.uint64).reshape(shape)
    if "mixed" in env:
        mixed = np.array(_rle_decode(env["mixed"]), dtype=bool).reshape(shape)
    return GridLayer(
        order=order,
        kind=kind,
        values=values,
        down=down,
        mixed=mixed,
        categories=tuple(env.get("categories", ())),
        rect=window,
    )


def frames_to_json(frames: list[Frame]) -> list[dict]:
    return [
        {"start": frame.start, "end": frame.end, **layer_to_json(frame.layer)} for frame in frames
    ]


def frames_from_json(envelopes: list[dict]) -> list[Frame]:
    return [
        Frame(start=int(env["start"]), end=int(env["end"]), layer=layer_from_json(env))
        for env in envelopes
    ]
