#!/usr/bin/env python3
"""Record live API responses into frontend/test/fixtures/api.json.

The viewer's test suite runs against a stubbed API client that replays
these recordings, so its assertions are checked against genuine server
responses without needing a running server (or a browser) at test time.
"""

from __future__ import annotations

import json
import random
import urllib.error
import urllib.request
from pathlib import Path

from cybermap import catalog, server

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_PATH = REPO_ROOT / "frontend" / "test" / "fixtures" / "api.json"


def record(base: str, url: str, out: dict) -> dict:
    try:
        with urllib.request.urlopen(base + url) as resp:
            status, body = resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        status, body = exc.code, json.loads(exc.read())
    out[url] = {"status": status, "body": body}
    return body


def main() -> None:
    snapshot = catalog.load_snapshot(REPO_ROOT / "data")
    httpd = server.make_http_server(server.MapServer(snapshot), "127.0.0.1", 0)
    import threading

    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"

    out: dict = {}
    record(base, "/api/v1/layers", out)

    rng = random.Random(20260824)
    for order in (10,) * 50 + (14,) * 10:
        side = 1 << order
        x, y = rng.randrange(side), rng.randrange(side)
        body = record(base, f"/api/v1/cell?order={order}&x={x}&y={y}", out)
        ip = body["cidr"].split("/")[0]
        record(base, f"/api/v1/resolve?ip={ip}", out)

    record(base, "/api/v1/frames?layer=events&interval=60&order=8", out)

    for url in (
        "/api/v1/as/4538",
        "/api/v1/as/4538?order=10",
        "/api/v1/as/4538?order=14",
        "/api/v1/as/123?order=10",
        "/api/v1/as/19281?order=10",
        "/api/v1/as/65000",
    ):
        record(base, url, out)

    httpd.shutdown()
    FIXTURE_PATH.parent.mkdir(parents=True, exist_ok=True)
    FIXTURE_PATH.write_text(json.dumps(out, indent=1, sort_keys=True))
    print(f"recorded {len(out)} responses -> {FIXTURE_PATH}")


if __name__ == "__main__":
    main()
