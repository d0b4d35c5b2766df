"""Deterministic rasterization of grid layers, AS maps, and curve figures.

This module owns the grid-to-screen flip: grid y grows upward, screen y
grows downward, and nothing else in the package flips anything.  Scalar
values are log-scaled (log2(1+v), normalized to the layer maximum) because
traffic magnitudes span many orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import coords
from .aggregate import GridLayer, PortHistogram
from .hilbert import Rect, curve_polyline
from .imaging import MAX_SIDE_PX, Image
from .ingest import AsLink

BACKGROUND = (12, 12, 16)
LINK_COLOR = (120, 120, 130)
HIGHLIGHT_COLOR = (255, 255, 255)
CURVE_COLOR = (235, 235, 235)

# distinct hues for categorical layers; id 0 (unallocated) stays background
CATEGORY_COLORS = [
    (35, 151, 65),
    (31, 155, 120),
    (27, 137, 159),
    (23, 75, 164),
    (31, 18, 168),
    (99, 14, 172),
    (175, 10, 176),
    (180, 6, 102),
    (184, 2, 19),
    (189, 67, 0),
    (193, 157, 0),
    (140, 197, 0),
]

_SEQ_STOPS = [(40, 40, 110), (190, 60, 160), (255, 230, 80)]


@dataclass(frozen=True)
class Palette:
    kind: str  # categorical | sequential | diverging
    background: tuple[int, int, int] = BACKGROUND


CATEGORICAL = Palette("categorical")
SEQUENTIAL = Palette("sequential")
DIVERGING = Palette("diverging")


def default_palette(layer: GridLayer) -> Palette:
    return {"category": CATEGORICAL, "scalar": SEQUENTIAL, "updown": DIVERGING}[layer.kind]


def sequential_color(t: float) -> tuple[int, int, int]:
    """Color for a normalized magnitude t in [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(_SEQ_STOPS) - 1)
    k = min(int(pos), len(_SEQ_STOPS) - 2)
    frac = pos - k
    a, b = _SEQ_STOPS[k], _SEQ_STOPS[k + 1]
    return tuple(round(a[i] + (b[i] - a[i]) * frac) for i in range(3))


def diverging_color(t_up: float, t_down: float) -> tuple[int, int, int]:
    """Upload drives blue, download drives red."""
    return (40 + round(215 * t_down), 40, 40 + round(215 * t_up))


def category_color(cat_id: int, mixed: bool) -> tuple[int, int, int]:
    if cat_id == 0:
        return BACKGROUND
    r, g, b = CATEGORY_COLORS[(cat_id - 1) % len(CATEGORY_COLORS)]
    if mixed:
        return (r * 2 // 3, g * 2 // 3, b * 2 // 3)
    return (r, g, b)


def _log_norm(values: np.ndarray, vmax: int) -> np.ndarray:
    if vmax <= 0:
        return np.zeros(values.shape, dtype=np.float64)
    return np.log2(1.0 + values.astype(np.float64)) / math.log2(1.0 + vmax)


def _layer_colors(layer: GridLayer, palette: Palette) -> np.ndarray:
    """Per-cell colors in grid orientation, shaped like the layer window."""
    rgb = np.empty(layer.values.shape + (3,), dtype=np.uint8)
    rgb[:, :] = palette.background
    if palette.kind == "categorical":
        mixed = layer.mixed if layer.mixed is not None else np.zeros(layer.values.shape, dtype=bool)
        for cat_id in np.unique(layer.values):
            if cat_id == 0:
                continue
            mask = layer.values == cat_id
            rgb[mask & ~mixed] = category_color(int(cat_id), False)
            rgb[mask & mixed] = category_color(int(cat_id), True)
    elif palette.kind == "sequential":
        vmax = int(layer.values.max())
        t = _log_norm(layer.values, vmax)
        nz = layer.values > 0
        for ty, tx in zip(*np.nonzero(nz)):
            rgb[ty, tx] = sequential_color(float(t[ty, tx]))
    elif palette.kind == "diverging":
        down = layer.down if layer.down is not None else np.zeros_like(layer.values)
        vmax = max(int(layer.values.max()), int(down.max()))
        t_up = _log_norm(layer.values, vmax)
        t_down = _log_norm(down, vmax)
        nz = (layer.values > 0) | (down > 0)
        for ty, tx in zip(*np.nonzero(nz)):
            rgb[ty, tx] = diverging_color(float(t_up[ty, tx]), float(t_down[ty, tx]))
    else:
        raise ValueError(f"unknown palette kind {palette.kind!r}")
    return rgb


def render_layer(
    layer: GridLayer,
    palette: Palette | None = None,
    cell_px: int = 1,
    rect: Rect | None = None,
) -> Image:
    """Rasterize a layer (or a sub-rect of it) at cell_px pixels per cell.

    Scalar normalization always uses the full layer's maximum, so a tile
    crop is pixel-identical to the same region of the full rendering.
    """
    if cell_px < 1:
        raise ValueError(f"cell_px must be >= 1, got {cell_px}")
    palette = palette or default_palette(layer)
    window = layer.rect
    if rect is None:
        rect = window
    if not (window.x0 <= rect.x0 and rect.x1 <= window.x1 and window.y0 <= rect.y0 and rect.y1 <= window.y1):
        raise ValueError(f"rect {rect} outside layer window {window}")
    if rect.width * cell_px > MAX_SIDE_PX or rect.height * cell_px > MAX_SIDE_PX:
        raise ValueError(f"rendered size exceeds {MAX_SIDE_PX} px side limit")
    rgb = _layer_colors(layer, palette)
    crop = rgb[rect.y0 - window.y0 : rect.y1 - window.y0 + 1, rect.x0 - window.x0 : rect.x1 - window.x0 + 1]
    crop = crop[::-1]  # grid y up -> screen y down
    if cell_px > 1:
        crop = np.repeat(np.repeat(crop, cell_px, axis=0), cell_px, axis=1)
    return Image(np.ascontiguousarray(crop))


def legend_json(layer: GridLayer, palette: Palette | None = None) -> dict:
    """Value-to-color breakpoints for the JSON sidecar next to an image."""
    palette = palette or default_palette(layer)
    legend: dict = {"kind": palette.kind, "background": list(palette.background)}
    if palette.kind == "categorical":
        legend["categories"] = [
            {"id": i, "name": name, "color": list(category_color(i, False))}
            for i, name in enumerate(layer.categories)
        ]
    else:
        vmax = int(layer.values.max())
        if layer.down is not None:
            vmax = max(vmax, int(layer.down.max()))
        stops = [0.0, 0.25, 0.5, 0.75, 1.0]
        legend["max_value"] = vmax
        if palette.kind == "sequential":
            legend["stops"] = [
                {"t": t, "color": list(sequential_color(t))} for t in stops
            ]
        else:
            legend["upload_stops"] = [
                {"t": t, "color": list(diverging_color(t, 0.0))} for t in stops
            ]
            legend["download_stops"] = [
                {"t": t, "color": list(diverging_color(0.0, t))} for t in stops
            ]
    return legend


def _draw_line(pixels: np.ndarray, x0: int, y0: int, x1: int, y1: int, color) -> None:
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        pixels[y0, x0] = color
        if x0 == x1 and y0 == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def render_as_map(
    heights: dict[int, int],
    links: list[AsLink] | None = None,
    highlight: int | None = None,
    cell_px: int = 2,
) -> tuple[Image, int]:
    """AS grid colored by log address count, with topology link segments.

    Returns (image, skipped_links): links touching an ASN outside the
    16-bit grid are skipped and counted, not fatal.
    """
    side = 1 << coords.AS_ORDER
    values = np.zeros((side, side), dtype=np.uint64)
    for asn, count in heights.items():
        if 0 <= asn < 65536:
            cell = coords.asn_to_cell(asn)
            values[cell.y, cell.x] += np.uint64(count)
    layer = GridLayer(order=coords.AS_ORDER, kind="scalar", values=values)
    image = render_layer(layer, SEQUENTIAL, cell_px)

    def center_px(asn: int) -> tuple[int, int]:
        cell = coords.asn_to_cell(asn)
        sx = cell.x * cell_px + cell_px // 2
        sy = (side - 1 - cell.y) * cell_px + cell_px // 2
        return sx, sy

    skipped = 0
    for link in links or []:
        if link.a >= 65536 or link.b >= 65536 or link.a < 0 or link.b < 0:
            skipped += 1
            continue
        ax, ay = center_px(link.a)
        bx, by = center_px(link.b)
        _draw_line(image.pixels, ax, ay, bx, by, LINK_COLOR)

    if highlight is not None and 0 <= highlight < 65536:
        cell = coords.asn_to_cell(highlight)
        x0 = cell.x * cell_px
        y0 = (side - 1 - cell.y) * cell_px
        x1 = min(x0 + cell_px, image.width - 1)
        y1 = min(y0 + cell_px, image.height - 1)
        image.pixels[y0 : y1 + 1, x0] = HIGHLIGHT_COLOR
        image.pixels[y0 : y1 + 1, x1] = HIGHLIGHT_COLOR
        image.pixels[y0, x0 : x1 + 1] = HIGHLIGHT_COLOR
        image.pixels[y1, x0 : x1 + 1] = HIGHLIGHT_COLOR
    return image, skipped


def render_ipport(hist: PortHistogram, palette: Palette | None = None) -> Image:
    """Heatmap of a block's traffic: x = IP offset, y = port bucket, low ports at bottom."""
    palette = palette or DIVERGING
    n_ips, n_buckets = hist.upload.shape
    if n_ips > MAX_SIDE_PX or n_buckets > MAX_SIDE_PX:
        raise ValueError(f"histogram {n_ips}x{n_buckets} exceeds {MAX_SIDE_PX} px side limit")
    vmax = max(int(hist.upload.max()), int(hist.download.max()))
    t_up = _log_norm(hist.upload, vmax)
    t_down = _log_norm(hist.download, vmax)
    pixels = np.empty((n_buckets, n_ips, 3), dtype=np.uint8)
    pixels[:, :] = palette.background
    nz = (hist.upload > 0) | (hist.download > 0)
    for ip_off, bucket in zip(*np.nonzero(nz)):
        pixels[n_buckets - 1 - bucket, ip_off] = diverging_color(
            float(t_up[ip_off, bucket]), float(t_down[ip_off, bucket])
        )
    return Image(pixels)


def render_curve(order: int, cell_px: int | None = None) -> Image:
    """Draw the order-n curve as a polyline through cell centers."""
    if order > 8:
        raise ValueError(f"curve figures support orders 1..8, got {order}")
    points = curve_polyline(order)
    side = 1 << order
    if cell_px is None:
        cell_px = max(1, 256 // side)
    image = Image.filled(side * cell_px, side * cell_px, BACKGROUND)

    def center(p: tuple[int, int]) -> tuple[int, int]:
        x, y = p
        return x * cell_px + cell_px // 2, (side - 1 - y) * cell_px + cell_px // 2

    for a, b in zip(points, points[1:]):
        ax, ay = center(a)
        bx, by = center(b)
        _draw_line(image.pixels, ax, ay, bx, by, CURVE_COLOR)
    return image
