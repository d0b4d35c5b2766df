"""Data-directory snapshot and the named layer catalog.

A Snapshot is an immutable view of one ingest batch, loaded from
conventional file names inside the data directory.  Both the CLI and the
HTTP service build layers through this module, so a tile and the
equivalent CLI render are produced by the same code path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import aggregate, ingest, render
from .aggregate import GridLayer
from .coords import AS_ORDER, asn_to_cell, ip_to_cell, prefix_to_region
from .hilbert import Rect, check_order
from .imaging import Image
from .ingest import PrefixStore

DATA_DIR_ENV = "CYBERMAP_DATA_DIR"

FILE_NAMES = {
    "iana": "iana.csv",
    "pfx2as": "pfx2as.txt",
    "flows": "flows.csv",
    "events": "events.csv",
    "aslinks": "aslinks.csv",
}

LAYER_NAMES = ("allocation", "traffic", "events", "as_heights")
RESOLVE_ORDERS = (4, 8, 10, 12, 14, 16)

# grids up to this order are built whole and cached; beyond it only the
# requested window is aggregated (a full order-12 grid already holds 16M cells)
FULL_GRID_MAX_ORDER = 11


def resolve_data_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path.cwd() / "data"


@dataclass
class Snapshot:
    data_dir: Path
    allocations: list[ingest.AllocationRecord] = field(default_factory=list)
    pfx2as: list[ingest.PrefixAsRecord] = field(default_factory=list)
    flows: list[ingest.FlowRecord] = field(default_factory=list)
    events: list[ingest.EventRecord] = field(default_factory=list)
    links: list[ingest.AsLink] = field(default_factory=list)
    errors: dict[str, list[ingest.LineError]] = field(default_factory=dict)
    alloc_store: PrefixStore = field(default_factory=PrefixStore)
    asn_store: PrefixStore = field(default_factory=PrefixStore)
    _layer_cache: dict = field(default_factory=dict, repr=False)
    _heights: dict[int, int] | None = field(default=None, repr=False)

    def as_heights(self) -> dict[int, int]:
        if self._heights is None:
            self._heights = aggregate.as_ip_counts(self.pfx2as)
        return self._heights

    def available_layers(self) -> list[str]:
        out = []
        if self.allocations or self.pfx2as:
            out.append("allocation")
        if self.flows:
            out.append("traffic")
        if self.events:
            out.append("events")
        if self.pfx2as:
            out.append("as_heights")
        return out

    def layer(self, name: str, order: int, rect: Rect | None = None) -> GridLayer:
        """Build (or fetch cached) the named layer at the requested order.

        Above FULL_GRID_MAX_ORDER only the requested window is aggregated;
        at or below it the whole grid is built once and shared.
        """
        check_order(order)
        window = rect if order > FULL_GRID_MAX_ORDER else None
        if window is None and order > FULL_GRID_MAX_ORDER:
            raise ValueError(f"order {order} requires an explicit window rect")
        key = (name, order, window)
        if key in self._layer_cache:
            return self._layer_cache[key]
        if name == "allocation":
            if self.allocations:
                built = aggregate.rasterize_allocations(self.alloc_store, order, rect=window)
            else:
                built = aggregate.rasterize_allocations(
                    self.asn_store, order, key="asn", rect=window
                )
        elif name == "traffic":
            built = aggregate.rasterize_flows(self.flows, order, endpoint="src", rect=window)
        elif name == "events":
            built = _events_layer(self.events, order, window)
        elif name == "as_heights":
            if order != AS_ORDER:
                raise ValueError(f"as_heights layer exists only at order {AS_ORDER}")
            built = _heights_layer(self.as_heights())
        else:
            raise KeyError(f"unknown layer {name!r}")
        self._layer_cache[key] = built
        return built

    def catalog(self) -> list[dict]:
        entries = []
        sources = {
            "allocation": FILE_NAMES["iana"] if self.allocations else FILE_NAMES["pfx2as"],
            "traffic": FILE_NAMES["flows"],
            "events": FILE_NAMES["events"],
            "as_heights": FILE_NAMES["pfx2as"],
        }
        for name in self.available_layers():
            source = self.data_dir / sources[name]
            entries.append(
                {
                    "name": name,
                    "kind": {"allocation": "category", "traffic": "updown"}.get(name, "scalar"),
                    "orders": [AS_ORDER] if name == "as_heights" else list(RESOLVE_ORDERS),
                    "source": str(source),
                    "built": int(source.stat().st_mtime) if source.exists() else None,
                }
            )
        return entries


def _events_layer(
    events: list[ingest.EventRecord], order: int, rect: Rect | None = None
) -> GridLayer:
    window = rect or aggregate.full_rect(order)
    values = np.zeros((window.height, window.width), dtype=np.uint64)
    for event in events:
        cell = ip_to_cell(event.src_ip, order)
        if window.x0 <= cell.x <= window.x1 and window.y0 <= cell.y <= window.y1:
            values[cell.y - window.y0, cell.x - window.x0] += np.uint64(1)
    return GridLayer(order=order, kind="scalar", values=values, rect=window)


def _heights_layer(heights: dict[int, int]) -> GridLayer:
    side = 1 << AS_ORDER
    values = np.zeros((side, side), dtype=np.uint64)
    for asn, count in heights.items():
        if 0 <= asn < 65536:
            cell = asn_to_cell(asn)
            values[cell.y, cell.x] += np.uint64(count)
    return GridLayer(order=AS_ORDER, kind="scalar", values=values)


def load_snapshot(data_dir: Path) -> Snapshot:
    """Parse whichever conventional files exist under the data directory."""
    snapshot = Snapshot(data_dir=data_dir)
    parsers = {
        "iana": ingest.parse_iana_csv,
        "pfx2as": ingest.parse_pfx2as,
        "flows": ingest.parse_flows_csv,
        "events": ingest.parse_events_csv,
        "aslinks": ingest.parse_aslinks_csv,
    }
    for kind, parser in parsers.items():
        path = data_dir / FILE_NAMES[kind]
        if not path.exists():
            continue
        with path.open("r", encoding="utf-8") as stream:
            records, errors = parser(stream)
        if errors:
            snapshot.errors[kind] = errors
        if kind == "iana":
            snapshot.allocations = records
        elif kind == "pfx2as":
            snapshot.pfx2as = records
        elif kind == "flows":
            snapshot.flows = records
        elif kind == "events":
            snapshot.events = records
        else:
            snapshot.links = records
    snapshot.alloc_store = ingest.store_from_allocations(snapshot.allocations)
    snapshot.asn_store = ingest.store_from_pfx2as(snapshot.pfx2as)
    return snapshot


def render_tile(
    snapshot: Snapshot, name: str, order: int, rect: Rect | None = None, cell_px: int = 1
) -> Image:
    layer = snapshot.layer(name, order, rect)
    return render.render_layer(layer, render.default_palette(layer), cell_px, rect)


def resolve_ip(snapshot: Snapshot, ip: int) -> dict:
    cells = {}
    for order in RESOLVE_ORDERS:
        cell = ip_to_cell(ip, order)
        cells[str(order)] = {"x": cell.x, "y": cell.y}
    asn_attrs = snapshot.asn_store.lookup(ip)
    return {
        "cells": cells,
        "attrs": snapshot.alloc_store.lookup(ip),
        "asn": asn_attrs.get("asn") if asn_attrs else None,
    }


def as_info(snapshot: Snapshot, asn: int, order: int | None = None) -> dict | None:
    heights = snapshot.as_heights()
    prefixes = [rec.prefix for rec in snapshot.pfx2as if rec.asn == asn]
    links = [
        {"a": link.a, "b": link.b, "relationship": link.relationship}
        for link in snapshot.links
        if asn in (link.a, link.b)
    ]
    if asn not in heights and not links:
        return None
    mappable = 0 <= asn < 65536
    body = {
        "asn": asn,
        "height": heights.get(asn, 0),
        "prefixes": [str(p) for p in prefixes],
        "links": links,
        "mappable": mappable,
    }
    if order is not None:
        check_order(order)
        regions = []
        for prefix in prefixes:
            if prefix.len > 2 * order:  # sub-cell prefix: its containing cell
                cell = ip_to_cell(prefix.base, order)
                rects = [Rect(cell.x, cell.y, cell.x, cell.y)]
            else:
                rects = prefix_to_region(prefix, order)
            for rect in rects:
                regions.append({"x0": rect.x0, "y0": rect.y0, "x1": rect.x1, "y1": rect.y1})
        body["regions"] = regions
        if mappable:
            cell = asn_to_cell(asn)
            body["cell"] = {"x": cell.x, "y": cell.y}
    return body
