#!/usr/bin/env python3
"""Generate the bundled handwritten-style digits dataset in IDX format.

Renders digits 0-9 as 28x28 grayscale glyphs (DejaVu fonts shipped with
matplotlib) with random shift, rotation, stroke weight and mild pixel
noise, then writes gzipped IDX files compatible with the MNIST layout:

    data/digits/train-images-idx3-ubyte.gz   (2500 images)
    data/digits/train-labels-idx1-ubyte.gz
    data/digits/t10k-images-idx3-ubyte.gz    (1000 images)
    data/digits/t10k-labels-idx1-ubyte.gz

Output is deterministic: fixed RNG seed, gzip mtime pinned to 0. Re-run
from the repository root:  python3 scripts/make_digits_dataset.py
"""

import gzip
import os
import struct
import sys

import numpy as np
from PIL import Image, ImageDraw, ImageFont

SEED = 20140915
SIZE = 28
TRAIN_N = 2500
TEST_N = 1000

FONT_DIR = None
try:
    import matplotlib

    FONT_DIR = os.path.join(
        os.path.dirname(matplotlib.__file__), "mpl-data", "fonts", "ttf"
    )
except ImportError:
    sys.exit("matplotlib (for its bundled fonts) is required")

FONTS = ["DejaVuSans-Bold.ttf", "DejaVuSerif-Bold.ttf"]


def render_digit(rng, digit, fonts):
    font = fonts[rng.integers(0, len(fonts))]
    canvas = Image.new("L", (SIZE * 2, SIZE * 2), 0)
    draw = ImageDraw.Draw(canvas)
    draw.text((SIZE // 2, SIZE // 4), str(digit), fill=255, font=font)
    angle = rng.uniform(-8.0, 8.0)
    canvas = canvas.rotate(angle, resample=Image.BILINEAR, center=(SIZE, SIZE))

    arr = np.asarray(canvas)
    ys, xs = np.nonzero(arr)
    if len(ys) == 0:
        return np.zeros((SIZE, SIZE), dtype=np.uint8)
    cy, cx = (ys.min() + ys.max()) / 2, (xs.min() + xs.max()) / 2
    shift_y = int(round(SIZE - cy + rng.integers(-2, 3)))
    shift_x = int(round(SIZE - cx + rng.integers(-2, 3)))
    arr = np.roll(np.roll(arr, shift_y, axis=0), shift_x, axis=1)

    # crop the centered 28x28 window
    y0 = x0 = SIZE - SIZE // 2
    img = arr[y0 : y0 + SIZE, x0 : x0 + SIZE].astype(np.float64)

    # mild amplitude jitter and additive noise keep examples distinct
    img *= rng.uniform(0.9, 1.0)
    img += rng.normal(0.0, 5.0, img.shape)
    return np.clip(img, 0, 255).astype(np.uint8)


def write_idx_images(path, images):
    payload = struct.pack(">IIII", 0x803, len(images), SIZE, SIZE)
    payload += b"".join(img.tobytes() for img in images)
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(payload)


def write_idx_labels(path, labels):
    payload = struct.pack(">II", 0x801, len(labels)) + bytes(labels)
    with gzip.GzipFile(path, "wb", mtime=0) as f:
        f.write(payload)


def make_split(rng, n, fonts):
    images, labels = [], []
    for k in range(n):
        digit = k % 10
        images.append(render_digit(rng, digit, fonts))
        labels.append(digit)
    return images, labels


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "..", "data", "digits")
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(SEED)
    fonts = []
    for name in FONTS:
        path = os.path.join(FONT_DIR, name)
        for size in (19, 21, 23):
            fonts.append(ImageFont.truetype(path, size))

    train_images, train_labels = make_split(rng, TRAIN_N, fonts)
    test_images, test_labels = make_split(rng, TEST_N, fonts)

    write_idx_images(os.path.join(out_dir, "train-images-idx3-ubyte.gz"), train_images)
    write_idx_labels(os.path.join(out_dir, "train-labels-idx1-ubyte.gz"), train_labels)
    write_idx_images(os.path.join(out_dir, "t10k-images-idx3-ubyte.gz"), test_images)
    write_idx_labels(os.path.join(out_dir, "t10k-labels-idx1-ubyte.gz"), test_labels)
    print(f"wrote {TRAIN_N} train / {TEST_N} test images to {out_dir}")


if __name__ == "__main__":
    main()
