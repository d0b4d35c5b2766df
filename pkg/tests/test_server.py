import json
import urllib.error
import urllib.request

import pytest

from cybermap import aggregate, catalog, coords
from cybermap.coords import Cell
from cybermap.imaging import decode_png_size


def get(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return resp.status, resp.headers.get("Content-Type"), resp.read()


def get_json(base, path):
    status, ctype, body = get(base, path)
    assert ctype == "application/json"
    return status, json.loads(body)


def get_error(base, path):
    try:
        urllib.request.urlopen(base + path)
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())
    raise AssertionError(f"expected an error from {path}")


def test_layers_catalog(live_server):
    _, body = get_json(live_server, "/api/v1/layers")
    names = [entry["name"] for entry in body["layers"]]
    assert names == ["allocation", "traffic", "events", "as_heights"]
    for entry in body["layers"]:
        assert entry["orders"] and entry["source"]


def test_tile_full_grid(live_server):
    status, ctype, body = get(live_server, "/api/v1/tile?layer=allocation&order=10")
    assert status == 200 and ctype == "image/png"
    assert decode_png_size(body) == (1024, 1024)


def test_tile_drilldown_order14(live_server, snapshot):
    # the 1:/28 drill-down of the AS-4538 fixture region
    [rect] = coords.prefix_to_region(coords.Cidr.parse("59.0.0.0/8"), 14)
    path = (
        f"/api/v1/tile?layer=allocation&order=14"
        f"&x0={rect.x0}&y0={rect.y0}&x1={rect.x1}&y1={rect.y1}"
    )
    status, ctype, body = get(live_server, path)
    assert status == 200
    assert decode_png_size(body) == (rect.width, rect.height)


def test_tile_errors(live_server):
    status, body = get_error(live_server, "/api/v1/tile?layer=nope&order=10")
    assert status == 404 and body["error"] == "unknown_layer"
    status, body = get_error(live_server, "/api/v1/tile?layer=traffic&order=99")
    assert status == 400
    status, body = get_error(live_server, "/api/v1/tile?layer=traffic&order=4&x1=99")
    assert status == 400 and body["error"] == "bad_rect"


def test_resolve(live_server, snapshot):
    _, body = get_json(live_server, "/api/v1/resolve?ip=0.0.0.0")
    for order, cell in body["cells"].items():
        assert cell == {"x": 0, "y": 0}
    assert body["asn"] is None

    _, body = get_json(live_server, "/api/v1/resolve?ip=1.0.0.77")
    assert body["asn"] == 13335
    assert body["attrs"]["designation"] == "APNIC"

    status, body = get_error(live_server, "/api/v1/resolve?ip=256.1.1.1")
    assert status == 400 and body["error"] == "bad_ip"


def test_cell_endpoint(live_server):
    _, body = get_json(live_server, "/api/v1/cell?order=10&x=0&y=0")
    assert body["cidr"] == "0.0.0.0/20"
    assert len(body["children"]) == 4
    for child in body["children"]:
        assert child["order"] == 11

    _, body = get_json(live_server, "/api/v1/cell?order=16&x=0&y=0")
    assert body["cidr"].endswith("/32")
    assert body["children"] == []

    status, body = get_error(live_server, "/api/v1/cell?order=4&x=99&y=0")
    assert status == 400 and body["error"] == "bad_cell"


def test_cell_children_refine_parent(live_server):
    _, body = get_json(live_server, "/api/v1/cell?order=6&x=17&y=40")
    parent = coords.Cidr.parse(body["cidr"])
    for child in body["children"]:
        _, child_body = get_json(
            live_server, f"/api/v1/cell?order=7&x={child['x']}&y={child['y']}"
        )
        assert parent.contains(coords.Cidr.parse(child_body["cidr"]).base)


def test_as_endpoint(live_server, snapshot):
    _, body = get_json(live_server, "/api/v1/as/4538")
    assert body["height"] == 33_554_432
    assert "59.0.0.0/8" in body["prefixes"] and "101.0.0.0/8" in body["prefixes"]
    assert body["links"] and body["mappable"]

    status, body = get_error(live_server, "/api/v1/as/65000")
    assert status == 404 and body["error"] == "unknown_asn"


def test_as_endpoint_regions(live_server, snapshot):
    _, body = get_json(live_server, "/api/v1/as/4538")
    assert "regions" not in body

    _, body = get_json(live_server, "/api/v1/as/4538?order=10")
    # 59/8 and 101/8 each cover a 64x64 square, 59.64/16 one 4x4 square
    sizes = sorted(
        (r["x1"] - r["x0"] + 1) * (r["y1"] - r["y0"] + 1) for r in body["regions"]
    )
    assert sizes == [16, 4096, 4096]
    for region, prefix in zip(body["regions"], body["prefixes"]):
        cidr = coords.Cidr.parse(prefix)
        [expect] = coords.prefix_to_region(cidr, 10)
        assert region == {"x0": expect.x0, "y0": expect.y0, "x1": expect.x1, "y1": expect.y1}
    cell = coords.asn_to_cell(4538)
    assert body["cell"] == {"x": cell.x, "y": cell.y}

    # AS123 announces two discrete blocks: a /14 (one square at order 10)
    # and a /15 (odd length -> two squares)
    _, body = get_json(live_server, "/api/v1/as/123?order=10")
    assert len(body["prefixes"]) == 2 and len(body["regions"]) == 3

    status, body = get_error(live_server, "/api/v1/as/4538?order=99")
    assert status == 400 and body["error"] == "bad_order"


def test_frames_endpoint(live_server, snapshot):
    _, body = get_json(live_server, "/api/v1/frames?layer=events&interval=60&order=8")
    assert body["event_count"] == len(snapshot.events)
    frames = aggregate.frames_from_json(body["frames"])
    assert len(frames) == 10
    assert sum(int(f.layer.values.sum()) for f in frames) == body["event_count"]


def test_unknown_route(live_server):
    status, body = get_error(live_server, "/api/v1/nothing")
    assert status == 404


def test_read_only_identical_bodies(live_server):
    a = get(live_server, "/api/v1/tile?layer=events&order=8&cell_px=2")
    b = get(live_server, "/api/v1/tile?layer=events&order=8&cell_px=2")
    assert a == b


def test_resolve_round_trips_cell(live_server):
    # a hovered cell's prefix base must resolve back to that cell
    for x, y in ((3, 7), (100, 200), (511, 0)):
        _, body = get_json(live_server, f"/api/v1/cell?order=10&x={x}&y={y}")
        ip = body["cidr"].split("/")[0]
        _, resolved = get_json(live_server, f"/api/v1/resolve?ip={ip}")
        assert resolved["cells"]["10"] == {"x": x, "y": y}
