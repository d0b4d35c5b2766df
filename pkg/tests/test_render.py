import numpy as np
import pytest

from cybermap import aggregate, coords, render
from cybermap.aggregate import GridLayer
from cybermap.coords import Cidr
from cybermap.hilbert import Rect
from cybermap.imaging import Image, decode_png_size
from cybermap.ingest import AsLink, PrefixStore


def scalar_layer(order, cells):
    side = 1 << order
    values = np.zeros((side, side), dtype=np.uint64)
    for (x, y), v in cells.items():
        values[y, x] = v
    return GridLayer(order=order, kind="scalar", values=values)


def count_non_background(image):
    return int((image.pixels != render.BACKGROUND).any(axis=2).sum())


def test_render_layer_dimensions():
    layer = scalar_layer(10, {})
    image = render.render_layer(layer, cell_px=1)
    assert (image.width, image.height) == (1024, 1024)
    assert count_non_background(image) == 0


def test_single_cell_pixel_accounting():
    layer = scalar_layer(4, {(3, 5): 1234})
    for cell_px in (1, 3, 8):
        image = render.render_layer(layer, cell_px=cell_px)
        assert count_non_background(image) == cell_px * cell_px


def test_screen_y_flip():
    # grid (0, 0) must land at the bottom-left of the picture
    layer = scalar_layer(2, {(0, 0): 9})
    image = render.render_layer(layer, cell_px=1)
    assert tuple(image.pixels[3, 0]) != render.BACKGROUND
    assert tuple(image.pixels[0, 0]) == render.BACKGROUND


def test_render_rect_crop_matches_full():
    layer = scalar_layer(4, {(1, 1): 5, (9, 12): 500, (15, 15): 10**9})
    full = render.render_layer(layer, cell_px=2)
    rect = Rect(8, 8, 15, 15)
    tile = render.render_layer(layer, cell_px=2, rect=rect)
    assert (tile.width, tile.height) == (16, 16)
    # rect is the top-right quadrant in screen orientation
    assert (tile.pixels == full.pixels[0:16, 16:32]).all()


def test_palette_totality_extremes():
    layer = scalar_layer(2, {(0, 0): 0, (1, 1): 2**32})
    image = render.render_layer(layer)
    assert tuple(image.pixels[3, 0]) == render.BACKGROUND
    assert count_non_background(image) == 1


def test_updown_color_dominance():
    side = 4
    up = np.zeros((side, side), dtype=np.uint64)
    down = np.zeros((side, side), dtype=np.uint64)
    down[1, 1] = 100000
    layer = GridLayer(order=2, kind="updown", values=up, down=down)
    image = render.render_layer(layer)
    pixel = image.pixels[side - 2, 1]
    assert pixel[0] > pixel[2]  # red-dominant for download

    layer = GridLayer(order=2, kind="updown", values=down.copy(), down=up.copy())
    image = render.render_layer(layer)
    pixel = image.pixels[side - 2, 1]
    assert pixel[2] > pixel[0]  # blue-dominant for upload


def test_category_layer_colors():
    store = PrefixStore()
    store.insert(Cidr.parse("12.0.0.0/8"), {"category": "allocated"})
    layer = aggregate.rasterize_allocations(store, 6)
    image = render.render_layer(layer, cell_px=1)
    assert count_non_background(image) == 16  # a /8 is a 4x4 square at order 6


def test_determinism_two_runs():
    layer = scalar_layer(5, {(1, 2): 7, (30, 30): 12345})
    a = render.render_layer(layer, cell_px=3).to_png()
    b = render.render_layer(layer, cell_px=3).to_png()
    assert a == b
    assert render.render_curve(3).to_png() == render.render_curve(3).to_png()


def test_dimension_limit():
    layer = scalar_layer(10, {})
    with pytest.raises(ValueError):
        render.render_layer(layer, cell_px=16)


def test_render_as_map():
    image, skipped = render.render_as_map({}, [])
    assert (image.width, image.height) == (512, 512)
    assert count_non_background(image) == 0
    assert skipped == 0

    heights = {4538: 33_554_432}
    image, _ = render.render_as_map(heights, [], cell_px=1)
    cell = coords.asn_to_cell(4538)
    assert tuple(image.pixels[255 - cell.y, cell.x]) != render.BACKGROUND
    assert count_non_background(image) == 1


def test_render_as_map_links_and_skip():
    links = [AsLink(0, 4538), AsLink(1, 70000)]
    image, skipped = render.render_as_map({}, links, cell_px=1)
    assert skipped == 1
    assert count_non_background(image) > 0
    a = coords.asn_to_cell(0)
    b = coords.asn_to_cell(4538)
    assert tuple(image.pixels[255 - a.y, a.x]) == render.LINK_COLOR
    assert tuple(image.pixels[255 - b.y, b.x]) == render.LINK_COLOR


def test_render_as_map_highlight():
    image, _ = render.render_as_map({}, [], highlight=4538, cell_px=4)
    assert count_non_background(image) > 0
    assert (image.pixels == render.HIGHLIGHT_COLOR).all(axis=2).any()


def test_render_ipport():
    block = Cidr.parse("10.0.0.0/24")
    hist = aggregate.ipport_histogram([], block, 256)
    image = render.render_ipport(hist)
    assert (image.width, image.height) == (256, 256)

    hist.download[5, 1] = 10000  # ip offset 5, ports 256..511
    image = render.render_ipport(hist)
    assert count_non_background(image) == 1
    pixel = image.pixels[256 - 1 - 1, 5]
    assert pixel[0] > pixel[2]  # download -> red

    hist.download[5, 1] = 0
    hist.upload[5, 1] = 10000
    pixel = render.render_ipport(hist).pixels[254, 5]
    assert pixel[2] > pixel[0]  # upload -> blue


def test_render_curve_segment_counts():
    for order, segments in ((1, 3), (2, 15), (3, 63)):
        image = render.render_curve(order)
        assert image.width == image.height
        assert count_non_background(image) > segments  # strokes cover many pixels

    # order 1 "U": both top cells lit, connected along the bottom? No:
    # curve starts bottom-left, goes up, right, down -> opening faces down
    image = render.render_curve(1, cell_px=4)
    pix = image.pixels
    assert tuple(pix[2, 2]) == render.CURVE_COLOR  # top-left center
    assert tuple(pix[2, 6]) == render.CURVE_COLOR  # top-right center
    assert tuple(pix[6, 2]) == render.CURVE_COLOR  # bottom-left center
    assert tuple(pix[6, 6]) == render.CURVE_COLOR  # bottom-right center
    assert tuple(pix[6, 4]) == render.BACKGROUND  # gap between the U's legs


def test_render_curve_order_limit():
    with pytest.raises(ValueError):
        render.render_curve(9)


def test_legend_json():
    layer = scalar_layer(3, {(0, 0): 10})
    legend = render.legend_json(layer)
    assert legend["kind"] == "sequential"
    assert legend["max_value"] == 10
    assert len(legend["stops"]) == 5

    store = PrefixStore()
    store.insert(Cidr.parse("12.0.0.0/8"), {"category": "allocated"})
    cat = aggregate.rasterize_allocations(store, 4)
    legend = render.legend_json(cat)
    assert legend["categories"][0]["name"] == "unallocated"


def test_ppm_and_png_encoders():
    image = Image.filled(3, 2, (10, 20, 30))
    ppm = image.to_ppm()
    assert ppm.startswith(b"P6\n3 2\n255\n")
    assert len(ppm) == len(b"P6\n3 2\n255\n") + 18
    png = image.to_png()
    assert decode_png_size(png) == (3, 2)
