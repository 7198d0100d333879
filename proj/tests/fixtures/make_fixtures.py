#!/usr/bin/env python3
# Copyright 2026 The dpcda Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the binary and CSV fixtures under tests/data/fixtures.

Byte layouts are produced with struct directly; expected values are computed
here in plain Python and stored next to the fixtures as JSON.

Usage: python3 make_fixtures.py
"""

import json
import math
import os
import random
import struct

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "fixtures")


def write(name, data):
    with open(os.path.join(OUT, name), "wb") as fh:
        fh.write(data)


def idx_fixture():
    rows, cols = 2, 3
    images = [
        [0, 1, 2, 3, 4, 5],
        [255, 128, 64, 32, 16, 8],
        [9, 0, 250, 7, 100, 1],
    ]
    labels = [7, 2, 7]
    img = struct.pack(">IIII", 0x00000803, len(images), rows, cols)
    for im in images:
        img += bytes(im)
    lab = struct.pack(">II", 0x00000801, len(labels)) + bytes(labels)
    write("idx3-images.idx", img)
    write("idx3-labels.idx", lab)
    # Labels are remapped through the sorted distinct values.
    distinct = sorted(set(labels))
    return {
        "rows": rows,
        "cols": cols,
        "features": [[float(v) for v in im] for im in images],
        "labels": [distinct.index(v) + 1 for v in labels],
        "original_labels": distinct,
        "image_bytes": len(img),
        "label_bytes": len(lab),
    }


def cifar_fixture():
    records = []
    label_bytes = [3, 0]
    for r, lb in enumerate(label_bytes):
        pixels = [(i + 7 * r) % 256 for i in range(3072)]
        records.append((lb, pixels))
    data = b"".join(bytes([lb]) + bytes(px) for lb, px in records)
    write("cifar2.bin", data)
    distinct = sorted(set(label_bytes))
    return {
        "labels": [distinct.index(lb) + 1 for lb in label_bytes],
        "original_labels": distinct,
        "first_pixels": [px[:16] for _, px in records],
        "last_pixels": [px[-16:] for _, px in records],
        "pixel_sums": [sum(px) for _, px in records],
    }


def csv_fixture(rng):
    header = ["f1", "f2", "f3", "class", "f4", "f5"]
    features = []
    raw_labels = []
    lines = [",".join(header)]
    for _ in range(100):
        row = [rng.uniform(-1e3, 1e3) for _ in range(5)]
        lab = rng.choice([5, -2, 11])
        features.append(row)
        raw_labels.append(lab)
        cells = [repr(v) for v in row[:3]] + [str(lab)] + [repr(v) for v in row[3:]]
        lines.append(",".join(cells))
    with open(os.path.join(OUT, "random100.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    first_seen = []
    for lab in raw_labels:
        if lab not in first_seen:
            first_seen.append(lab)
    return {
        "label_column": "class",
        "features": features,
        "labels": [first_seen.index(v) + 1 for v in raw_labels],
        "original_labels": first_seen,
    }


def two_pass(matrix):
    n = len(matrix)
    d = len(matrix[0])
    means = [math.fsum(row[j] for row in matrix) / n for j in range(d)]
    stds = [math.sqrt(math.fsum((row[j] - means[j]) ** 2 for row in matrix) / n) for j in range(d)]
    return means, stds


def zscore_fixture(rng):
    train = [[rng.gauss(10.0 * j, 1.0 + j) for j in range(8)] for _ in range(1000)]
    test = [[rng.gauss(10.0 * j, 1.0 + j) for j in range(8)] for _ in range(50)]
    means, stds = two_pass(train)
    applied = [[(v - means[j]) / stds[j] for j, v in enumerate(row)] for row in test]
    return {"train": train, "test": test, "means": means, "stddevs": stds, "applied": applied}


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20261018)
    expected = {
        "idx3": idx_fixture(),
        "cifar2": cifar_fixture(),
        "csv100": csv_fixture(rng),
        "zscore": zscore_fixture(rng),
    }
    with open(os.path.join(OUT, "expected.json"), "w") as fh:
        json.dump(expected, fh, indent=1, allow_nan=False)
        fh.write("\n")


if __name__ == "__main__":
    main()
