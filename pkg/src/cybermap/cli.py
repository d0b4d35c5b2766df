"""Command-line frontend: ingest, render, query, frames, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import aggregate, catalog, coords, ingest, render
from .coords import Cell, Cidr
from .hilbert import Rect


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cybermap", description=__doc__)
    parser.add_argument("--data-dir", help=f"data directory (default ${catalog.DATA_DIR_ENV} or ./data)")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p_ingest = verbs.add_parser("ingest", help="parse and normalize an input file into the data dir")
    p_ingest.add_argument("--kind", required=True, choices=sorted(catalog.FILE_NAMES))
    p_ingest.add_argument("file", help="input path, or - for stdin")

    p_render = verbs.add_parser("render", help="render a map image")
    targets = p_render.add_subparsers(dest="target", required=True)

    p_ip = targets.add_parser("ip", help="IP map layer")
    scale = p_ip.add_mutually_exclusive_group(required=True)
    scale.add_argument("--scale", help='scale text, e.g. "1:/20"')
    scale.add_argument("--order", type=int, help="curve order (alternative to --scale)")
    p_ip.add_argument("--layer", default="allocation", choices=catalog.LAYER_NAMES)
    p_ip.add_argument("--rect", help="sub-rect x0,y0,x1,y1 in grid cells")
    p_ip.add_argument("--cell-px", type=int, default=1)
    p_ip.add_argument("--legend-out", help="write the palette legend JSON sidecar here")
    p_ip.add_argument("-o", "--output", required=True)

    p_as = targets.add_parser("as", help="AS map with heights and topology links")
    p_as.add_argument("--highlight", type=int)
    p_as.add_argument("--cell-px", type=int, default=2)
    p_as.add_argument("-o", "--output", required=True)

    p_ipport = targets.add_parser("ipport", help="IP-Port traffic heatmap of a block")
    p_ipport.add_argument("--block", required=True, help="CIDR block, e.g. 10.0.0.0/24")
    p_ipport.add_argument("--bucket", type=int, default=256, help="port bucket size")
    p_ipport.add_argument("--endpoint", default="src", choices=["src", "dst"])
    p_ipport.add_argument("-o", "--output", required=True)

    p_curve = targets.add_parser("curve", help="curve construction figure")
    p_curve.add_argument("--order", type=int, required=True)
    p_curve.add_argument("--cell-px", type=int)
    p_curve.add_argument("-o", "--output", required=True)

    p_query = verbs.add_parser("query", help="resolve an IP or a cell")
    what = p_query.add_subparsers(dest="what", required=True)
    p_qip = what.add_parser("ip")
    p_qip.add_argument("address")
    p_qcell = what.add_parser("cell")
    p_qcell.add_argument("order", type=int)
    p_qcell.add_argument("x", type=int)
    p_qcell.add_argument("y", type=int)

    p_frames = verbs.add_parser("frames", help="aggregate events into fixed-interval frames")
    p_frames.add_argument("--interval", type=int, default=60, help="seconds per frame")
    p_frames.add_argument("--order", type=int, default=8)
    p_frames.add_argument("-o", "--output", required=True)

    p_serve = verbs.add_parser("serve", help="start the HTTP map service")
    p_serve.add_argument("--listen", default="127.0.0.1:8337", help="host:port")
    p_serve.add_argument("--static-dir", help="directory of viewer assets to serve")
    return parser


def _parse_rect(text: str | None) -> Rect | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"bad rect {text!r}; expected x0,y0,x1,y1")
    x0, y0, x1, y1 = (int(p) for p in parts)
    return Rect(x0, y0, x1, y1)


def cmd_ingest(args, data_dir: Path) -> int:
    parsers = {
        "iana": (ingest.parse_iana_csv, ingest.serialize_allocations),
        "pfx2as": (ingest.parse_pfx2as, ingest.serialize_pfx2as),
        "flows": (ingest.parse_flows_csv, ingest.serialize_flows),
        "events": (ingest.parse_events_csv, ingest.serialize_events),
        "aslinks": (ingest.parse_aslinks_csv, ingest.serialize_aslinks),
    }
    parse, serialize = parsers[args.kind]
    if args.file == "-":
        records, errors = parse(sys.stdin)
    else:
        with open(args.file, "r", encoding="utf-8") as stream:
            records, errors = parse(stream)
    data_dir.mkdir(parents=True, exist_ok=True)
    out_path = data_dir / catalog.FILE_NAMES[args.kind]
    out_path.write_text(serialize(records), encoding="utf-8")
    print(f"{args.kind}: {len(records)} records -> {out_path}")
    for line_no, message in errors:
        print(f"line {line_no}: {message}", file=sys.stderr)
    return 1 if errors else 0


def cmd_render(args, data_dir: Path) -> int:
    if args.target == "curve":
        image = render.render_curve(args.order, args.cell_px)
        image.save(args.output)
        return 0

    snapshot = catalog.load_snapshot(data_dir)
    if args.target == "ip":
        order = coords.parse_scale(args.scale) if args.scale else args.order
        rect = _parse_rect(args.rect)
        image = catalog.render_tile(snapshot, args.layer, order, rect, args.cell_px)
        image.save(args.output)
        if args.legend_out:
            layer = snapshot.layer(args.layer, order, rect)
            Path(args.legend_out).write_text(json.dumps(render.legend_json(layer), indent=2))
    elif args.target == "as":
        image, skipped = render.render_as_map(
            snapshot.as_heights(), snapshot.links, args.highlight, args.cell_px
        )
        if skipped:
            print(f"warning: skipped {skipped} links outside the 16-bit AS grid", file=sys.stderr)
        image.save(args.output)
    elif args.target == "ipport":
        hist = aggregate.ipport_histogram(
            snapshot.flows, Cidr.parse(args.block), args.bucket, args.endpoint
        )
        render.render_ipport(hist).save(args.output)
    return 1 if snapshot.errors else 0


def cmd_query(args, data_dir: Path) -> int:
    snapshot = catalog.load_snapshot(data_dir)
    if args.what == "ip":
        body = catalog.resolve_ip(snapshot, coords.parse_ipv4(args.address))
        print(json.dumps(body, indent=2))
    else:
        cell = Cell(args.order, args.x, args.y)
        print(coords.cell_to_prefix(cell))
    return 0


def cmd_frames(args, data_dir: Path) -> int:
    snapshot = catalog.load_snapshot(data_dir)
    frames = aggregate.make_frames(snapshot.events, args.interval, args.order)
    envelope = {
        "interval": args.interval,
        "order": args.order,
        "event_count": len(snapshot.events),
        "frames": aggregate.frames_to_json(frames),
    }
    Path(args.output).write_text(json.dumps(envelope))
    print(f"{len(frames)} frames over {len(snapshot.events)} events -> {args.output}")
    return 1 if snapshot.errors else 0


def cmd_serve(args, data_dir: Path) -> int:
    import threading

    from . import server as server_mod

    static_dir = Path(args.static_dir) if args.static_dir else None
    httpd = server_mod.serve(data_dir, args.listen, static_dir)
    print(f"serving {data_dir} on http://{args.listen}/api/v1/layers")
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        httpd.shutdown()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    data_dir = catalog.resolve_data_dir(args.data_dir)
    commands = {
        "ingest": cmd_ingest,
        "render": cmd_render,
        "query": cmd_query,
        "frames": cmd_frames,
        "serve": cmd_serve,
    }
    try:
        return commands[args.verb](args, data_dir)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
