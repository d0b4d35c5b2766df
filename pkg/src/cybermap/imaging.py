"""Minimal RGB8 image buffer with deterministic PNG and PPM encoders.

The PNG encoder writes fixed headers and a fixed-level zlib stream, so
identical pixel buffers always produce byte-identical files regardless of
library versions; golden-file tests rely on this.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_SIDE_PX = 8192

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass
class Image:
    """Row-major RGB8 raster; row 0 is the top of the picture."""

    pixels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3 or self.pixels.dtype != np.uint8:
            raise ValueError("pixels must be an (h, w, 3) uint8 array")

    @classmethod
    def filled(cls, width: int, height: int, color: tuple[int, int, int]) -> "Image":
        if width > MAX_SIDE_PX or height > MAX_SIDE_PX:
            raise ValueError(f"image {width}x{height} exceeds {MAX_SIDE_PX} px side limit")
        pixels = np.empty((height, width, 3), dtype=np.uint8)
        pixels[:, :] = color
        return cls(pixels)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_png(self) -> bytes:
        raw = b"".join(b"\x00" + row.tobytes() for row in self.pixels)
        ihdr = struct.pack(">IIBBBBB", self.width, self.height, 8, 2, 0, 0, 0)
        return (
            _PNG_SIGNATURE
            + _chunk(b"IHDR", ihdr)
            + _chunk(b"IDAT", zlib.compress(raw, 9))
            + _chunk(b"IEND", b"")
        )

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode()
        return header + self.pixels.tobytes()

    def save(self, path: str | Path) -> None:
        path = Path(path)
        if path.suffix == ".ppm":
            path.write_bytes(self.to_ppm())
        else:
            path.write_bytes(self.to_png())


def _chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def decode_png_size(data: bytes) -> tuple[int, int]:
    """Read (width, height) from a PNG header; used by tests."""
    if data[:8] != _PNG_SIGNATURE:
        raise ValueError("not a PNG")
    width, height = struct.unpack(">II", data[16:24])
    return width, height
