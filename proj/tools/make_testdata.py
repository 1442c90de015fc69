#!/usr/bin/env python3
"""Regenerate the desk-scale fixtures under tests/data.

Covers are 256x256 center crops, converted to 8-bit luma:

  lena.pgm       scikit-image 0.10.1 sdist, skimage/data/lena.png
  barbara.pgm    sporco wheel, sporco/data/barbara.png
  cameraman.pgm  scikit-image, skimage/data/camera.png
  baboon.pgm     opencv-python 4.9.0.80 sdist, opencv/samples/data/baboon.jpg

The secret pattern (secret.pbm) is synthetic: large flat shapes plus fine
stripes, a checker patch, thin rings and a petal rosette.

usage: make_testdata.py --lena P --barbara P --cameraman P --baboon P --out DIR
"""

import argparse
import math
import os

from PIL import Image, ImageDraw

SIZE = 256


def center_crop_gray(path: str) -> Image.Image:
    im = Image.open(path).convert("L")
    w, h = im.size
    left = (w - SIZE) // 2
    top = (h - SIZE) // 2
    return im.crop((left, top, left + SIZE, top + SIZE))


def secret_pattern() -> Image.Image:
    # 255 = white (W_w), 0 = black (W_b)
    im = Image.new("L", (SIZE, SIZE), 255)
    d = ImageDraw.Draw(im)

    # flat regions
    d.rectangle((16, 16, 112, 112), fill=0)
    d.ellipse((140, 20, 236, 116), fill=0)
    d.rectangle((160, 44, 216, 92), fill=255)

    # fine vertical stripes, 2 px period
    for x in range(16, 112, 4):
        d.rectangle((x, 136, x + 1, 176), fill=0)

    # 4x4 checker patch
    for by in range(0, 10):
        for bx in range(0, 10):
            if (bx + by) % 2 == 0:
                x0 = 16 + 4 * bx
                y0 = 196 + 4 * by
                d.rectangle((x0, y0, x0 + 3, y0 + 3), fill=0)

    # thin concentric rings
    cx, cy = 100, 216
    for r in range(6, 36, 6):
        d.ellipse((cx - r, cy - r, cx + r, cy + r), outline=0, width=2)

    # rosette of petals
    cx, cy = 196, 196
    for k in range(8):
        a = 2.0 * math.pi * k / 8.0
        px = cx + 28 * math.cos(a)
        py = cy + 28 * math.sin(a)
        d.ellipse((px - 12, py - 7, px + 12, py + 7), fill=0)
    d.ellipse((cx - 9, cy - 9, cx + 9, cy + 9), fill=255)

    return im.point(lambda v: 255 if v >= 128 else 0).convert("1")


def main() -> None:
    ap = argparse.ArgumentParser()
    for name in ("lena", "barbara", "cameraman", "baboon"):
        ap.add_argument(f"--{name}", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for name in ("lena", "barbara", "cameraman", "baboon"):
        center_crop_gray(getattr(args, name)).save(os.path.join(args.out, f"{name}.pgm"))
    secret_pattern().save(os.path.join(args.out, "secret.pbm"))


if __name__ == "__main__":
    main()
