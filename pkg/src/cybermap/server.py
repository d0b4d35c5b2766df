"""HTTP service exposing tiles, resolution, AS queries, and frame sequences.

Handlers are read-only over an immutable Snapshot; replacing the snapshot
(a single attribute assignment) is the only write, so concurrent requests
never see a half-ingested state.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from . import aggregate, catalog, coords
from .coords import Cell, cell_to_prefix, parse_ipv4
from .hilbert import MAX_ORDER, Rect

_AS_ROUTE = re.compile(r"^/api/v1/as/(\d+)$")


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str = ""):
        super().__init__(detail or error)
        self.status = status
        self.error = error
        self.detail = detail


def _query_int(query: dict, name: str, default: int | None = None) -> int:
    if name not in query:
        if default is None:
            raise ApiError(400, "missing_parameter", f"query parameter {name!r} is required")
        return default
    try:
        return int(query[name][0])
    except ValueError:
        raise ApiError(400, "bad_parameter", f"{name!r} must be an integer")


class MapServer:
    def __init__(self, snapshot: catalog.Snapshot, static_dir: Path | None = None):
        self.snapshot = snapshot
        self.static_dir = static_dir

    def swap_snapshot(self, snapshot: catalog.Snapshot) -> None:
        self.snapshot = snapshot

    # each handler returns (status, content_type, body)

    def handle(self, path: str, query: dict) -> tuple[int, str, bytes]:
        snapshot = self.snapshot
        if path == "/api/v1/layers":
            return _json_response(200, {"layers": snapshot.catalog()})
        if path == "/api/v1/tile":
            return self._tile(snapshot, query)
        if path == "/api/v1/resolve":
            return self._resolve(snapshot, query)
        if path == "/api/v1/cell":
            return self._cell(snapshot, query)
        if path == "/api/v1/frames":
            return self._frames(snapshot, query)
        match = _AS_ROUTE.match(path)
        if match:
            return self._as_info(snapshot, int(match.group(1)), query)
        if not path.startswith("/api/"):
            return self._static(path)
        raise ApiError(404, "not_found", f"no route for {path}")

    def _tile(self, snapshot, query) -> tuple[int, str, bytes]:
        name = query.get("layer", [""])[0]
        if name not in catalog.LAYER_NAMES:
            raise ApiError(404, "unknown_layer", f"layer {name!r} not in catalog")
        order = _query_int(query, "order")
        if not 1 <= order <= MAX_ORDER:
            raise ApiError(400, "bad_order", f"order {order} out of range")
        side = 1 << order
        x0 = _query_int(query, "x0", 0)
        y0 = _query_int(query, "y0", 0)
        x1 = _query_int(query, "x1", side - 1)
        y1 = _query_int(query, "y1", side - 1)
        cell_px = _query_int(query, "cell_px", 1)
        if not (0 <= x0 <= x1 < side and 0 <= y0 <= y1 < side):
            raise ApiError(400, "bad_rect", f"rect ({x0},{y0})..({x1},{y1}) outside order-{order} grid")
        try:
            image = catalog.render_tile(snapshot, name, order, Rect(x0, y0, x1, y1), cell_px)
        except ValueError as exc:
            raise ApiError(400, "bad_tile", str(exc))
        return 200, "image/png", image.to_png()

    def _resolve(self, snapshot, query) -> tuple[int, str, bytes]:
        text = query.get("ip", [""])[0]
        try:
            ip = parse_ipv4(text)
        except ValueError as exc:
            raise ApiError(400, "bad_ip", str(exc))
        body = catalog.resolve_ip(snapshot, ip)
        body["ip"] = coords.format_ipv4(ip)
        return _json_response(200, body)

    def _cell(self, snapshot, query) -> tuple[int, str, bytes]:
        order = _query_int(query, "order")
        x = _query_int(query, "x")
        y = _query_int(query, "y")
        try:
            cell = Cell(order, x, y)
        except ValueError as exc:
            raise ApiError(400, "bad_cell", str(exc))
        prefix = cell_to_prefix(cell)
        children = []
        if order < MAX_ORDER:
            step = 1 << (32 - 2 * (order + 1))
            for k in range(4):
                child = coords.ip_to_cell(prefix.base + k * step, order + 1)
                children.append({"order": child.order, "x": child.x, "y": child.y})
        asn_attrs = snapshot.asn_store.lookup(prefix.base)
        return _json_response(
            200,
            {
                "cidr": str(prefix),
                "attrs": snapshot.alloc_store.lookup(prefix.base),
                "asn": asn_attrs.get("asn") if asn_attrs else None,
                "children": children,
            },
        )

    def _frames(self, snapshot, query) -> tuple[int, str, bytes]:
        name = query.get("layer", ["events"])[0]
        if name != "events":
            raise ApiError(404, "unknown_layer", f"frames exist only for the events layer, not {name!r}")
        interval = _query_int(query, "interval", 60)
        order = _query_int(query, "order", 8)
        if interval <= 0:
            raise ApiError(400, "bad_interval", "interval must be positive")
        if not 1 <= order <= MAX_ORDER:
            raise ApiError(400, "bad_order", f"order {order} out of range")
        frames = aggregate.make_frames(snapshot.events, interval, order)
        return _json_response(
            200,
            {
                "layer": name,
                "interval": interval,
                "order": order,
                "event_count": len(snapshot.events),
                "frames": aggregate.frames_to_json(frames),
            },
        )

    def _as_info(self, snapshot, asn: int, query: dict) -> tuple[int, str, bytes]:
        order = _query_int(query, "order", 0) or None
        if order is not None and not 1 <= order <= MAX_ORDER:
            raise ApiError(400, "bad_order", f"order {order} out of range")
        info = catalog.as_info(snapshot, asn, order)
        if info is None:
            raise ApiError(404, "unknown_asn", f"ASN {asn} has no announced prefixes or links")
        return _json_response(200, info)

    def _static(self, path: str) -> tuple[int, str, bytes]:
        if self.static_dir is None:
            raise ApiError(404, "not_found", "no static directory configured")
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            raise ApiError(404, "not_found", f"no static file {rel}")
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        return 200, ctype, target.read_bytes()


def _json_response(status: int, body: dict) -> tuple[int, str, bytes]:
    return status, "application/json", json.dumps(body).encode()


def make_http_server(server: MapServer, host: str, port: int) -> ThreadingHTTPServer:
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):
            return

        def do_GET(self):
            parts = urlsplit(self.path)
            try:
                status, ctype, body = server.handle(parts.path, parse_qs(parts.query))
            except ApiError as exc:
                status, ctype, body = _json_response(
                    exc.status, {"error": exc.error, "detail": exc.detail}
                )
            except Exception as exc:  # keep the server alive on handler bugs
                status, ctype, body = _json_response(
                    500, {"error": "internal", "detail": str(exc)}
                )
            self.send_response(status)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

    return ThreadingHTTPServer((host, port), Handler)


def serve(
    data_dir: Path, listen: str = "127.0.0.1:8337", static_dir: Path | None = None
) -> ThreadingHTTPServer:
    """Start the map service in a background thread; returns the HTTP server."""
    host, _, port_text = listen.rpartition(":")
    snapshot = catalog.load_snapshot(data_dir)
    httpd = make_http_server(MapServer(snapshot, static_dir), host or "127.0.0.1", int(port_text))
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    return httpd
