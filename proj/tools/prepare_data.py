#!/usr/bin/env python3
"""Rebuild data/train and data/test from images bundled with Python packages.

All images ship with scikit-image and matplotlib; nothing is downloaded.
The two sets share no image.
Colour images are converted with Y = 0.299 R + 0.587 G + 0.114 B, rounded.

File names carry a numeric prefix because `dct2net train` holds out the last
image in sorted order for validation.
"""

import argparse
import os

import numpy as np
from PIL import Image


def to_gray(arr):
    arr = np.asarray(arr)
    if arr.ndim == 3:
        rgb = arr[..., :3].astype(np.float64)
        arr = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    elif arr.dtype != np.uint8:
        arr = arr.astype(np.float64)
    return np.clip(np.round(arr), 0, 255).astype(np.uint8)


def save(arr, path):
    Image.fromarray(to_gray(arr), mode="L").save(path, optimize=True)
    print(path, to_gray(arr).shape)


def training_images():
    from skimage import data
    import matplotlib

    sample = os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "sample_data")
    return [
        ("01_astronaut", data.astronaut()),
        ("02_chelsea", data.chelsea()),
        ("03_coffee", data.coffee()),
        ("04_rocket", data.rocket()),
        ("05_motorcycle", data.stereo_motorcycle()[0]),
        ("06_grace_hopper", np.asarray(Image.open(os.path.join(sample, "grace_hopper.jpg")))),
        ("07_coins", data.coins()),
        ("08_clock", data.clock()),
        ("09_brick", data.brick()),
        ("10_gravel", data.gravel()),
        ("11_moon", data.moon()),  # validation
    ]


def center_crop(arr, side):
    top = (arr.shape[0] - side) // 2
    left = (arr.shape[1] - side) // 2
    return arr[top:top + side, left:left + side]


def test_images():
    from skimage import data

    return [
        ("camera", data.camera()),
        ("grass", data.grass()),
        ("ihc", data.immunohistochemistry()),
        ("hubble", center_crop(data.hubble_deep_field(), 512)),
        ("retina", center_crop(data.retina(), 512)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--root", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = parser.parse_args()

    train_dir = os.path.join(args.root, "train")
    os.makedirs(train_dir, exist_ok=True)
    for name, arr in training_images():
        save(arr, os.path.join(train_dir, name + ".png"))
    test_dir = os.path.join(args.root, "test")
    os.makedirs(test_dir, exist_ok=True)
    for name, arr in test_images():
        save(arr, os.path.join(test_dir, name + ".png"))


if __name__ == "__main__":
    main()
