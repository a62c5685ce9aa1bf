"""Regenerate the bundled synthetic fixtures in data/fixtures.

Needs numpy and the rainweave Python module (for PNG writing). The output
is deterministic; rerunning it should leave the files unchanged.
"""

import argparse
import pathlib

import numpy as np

import rainweave as rw


def background(h, w, channels, rng):
    y, x = np.mgrid[0:h, 0:w]
    base = 0.25 + 0.35 * y / h + 0.08 * np.sin(x / 7.0) + 0.05 * np.cos(y / 11.0)
    tint = np.array([0.0, 0.03, 0.07][:channels])
    img = base[..., None] + tint + rng.normal(0, 0.01, (h, w, channels))
    return img


def add_streaks(img, region, count, rng):
    h, w, _ = img.shape
    x_lo, x_hi = region
    rain = np.zeros((h, w))
    for _ in range(count):
        x0 = rng.uniform(x_lo, x_hi)
        y0 = rng.uniform(-10, h)
        length = rng.integers(8, 22)
        amp = rng.uniform(0.2, 0.45)
        for t in range(length):
            x = int(x0 + 0.35 * t)
            y = int(y0 + t)
            if x_lo <= x < x_hi and 0 <= y < h:
                rain[y, x] = max(rain[y, x], amp)
    return img + rain[..., None]


def quantize(img):
    return (np.round(np.clip(img, 0, 1) * 255) / 255).astype(np.float32)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)

    h, w = 96, 128
    exemplar = add_streaks(background(h, w, 3, rng), (40, w), 220, rng)
    mask = np.zeros((h, w, 1), dtype=np.float32)
    mask[:, 40:] = 1.0
    rw.save_image(quantize(exemplar), str(out / "exemplar.png"))
    rw.save_image(mask, str(out / "mask.png"))

    gray = add_streaks(background(64, 64, 1, rng), (16, 64), 90, rng)
    gray_mask = np.zeros((64, 64, 1), dtype=np.float32)
    gray_mask[:, 16:] = 1.0
    rw.save_image(quantize(gray), str(out / "exemplar_gray.png"))
    rw.save_image(gray_mask, str(out / "mask_gray.png"))

    y, x = np.mgrid[0:80, 0:112]
    street = np.stack([0.2 + 0.5 * x / 112, 0.3 + 0.2 * y / 80, 0.5 - 0.2 * x / 112], axis=-1)
    street[20:50, 30:70] = [0.7, 0.65, 0.6]
    rw.save_image(quantize(street), str(out / "street.png"))

    y, x = np.mgrid[0:72, 0:72]
    field = 0.45 + 0.25 * np.exp(-((x - 40) ** 2 + (y - 30) ** 2) / 400.0)
    rw.save_image(quantize(field[..., None]), str(out / "field_gray.png"))


if __name__ == "__main__":
    main()
