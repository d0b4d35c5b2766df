#!/usr/bin/env python3
"""Regenerate the committed golden curve images under tests/golden/."""

from pathlib import Path

from cybermap import render

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for order in (1, 2, 3):
        path = GOLDEN_DIR / f"curve_order{order}.png"
        path.write_bytes(render.render_curve(order).to_png())
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
