#!/usr/bin/env python3
"""Render every map once from the bundled fixtures into out/.

A quick end-to-end smoke run: whole-space allocation map at 1:/20, the
AS-4538 stand-in drill-down at 1:/28, traffic and event layers, the AS
map with topology links, the /24 IP-Port heatmap, curve figures, and the
DDoS frame sequence.
"""

from __future__ import annotations

import json
from pathlib import Path

from cybermap import aggregate, catalog, coords, render

REPO_ROOT = Path(__file__).resolve().parent.parent
OUT_DIR = REPO_ROOT / "out"


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    snapshot = catalog.load_snapshot(REPO_ROOT / "data")

    image = catalog.render_tile(snapshot, "allocation", 10)
    image.save(OUT_DIR / "allocation_1_20.png")

    [rect] = coords.prefix_to_region(coords.Cidr.parse("59.0.0.0/8"), 14)
    tile = catalog.render_tile(snapshot, "allocation", 14, rect, cell_px=1)
    tile.save(OUT_DIR / "as4538_region_1_28.png")

    catalog.render_tile(snapshot, "traffic", 10).save(OUT_DIR / "traffic_1_20.png")
    catalog.render_tile(snapshot, "events", 10).save(OUT_DIR / "events_1_20.png")

    as_image, skipped = render.render_as_map(
        snapshot.as_heights(), snapshot.links, highlight=4538
    )
    as_image.save(OUT_DIR / "as_map.png")
    if skipped:
        print(f"skipped {skipped} unmappable links")

    hist = aggregate.ipport_histogram(snapshot.flows, coords.Cidr.parse("10.0.0.0/24"), 256)
    render.render_ipport(hist).save(OUT_DIR / "ipport_10_0_0_0_24.png")

    for order in (1, 2, 3):
        render.render_curve(order).save(OUT_DIR / f"curve_order{order}.png")

    frames = aggregate.make_frames(snapshot.events, 60, 8)
    (OUT_DIR / "frames.json").write_text(json.dumps(aggregate.frames_to_json(frames)))
    for k, frame in enumerate(frames):
        render.render_layer(frame.layer, cell_px=2).save(OUT_DIR / f"frame_{k:03d}.png")

    print(f"wrote {len(list(OUT_DIR.iterdir()))} files to {OUT_DIR}")


if __name__ == "__main__":
    main()
