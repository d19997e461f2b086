#!/usr/bin/env python3
# Copyright 2026 The revmap Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Re-encode the Fashion-MNIST pixels shipped in the `fashion-mnist` npm
package as standard gzip-compressed IDX files.

Only the Sandal (5) and Ankle boot (9) classes are written. The npm package
stores 7000 images per class (train and test merged); the first 6000 of each
class go to the train-* files and the remaining 1000 to the t10k-* files.

    npm pack fashion-mnist && tar xzf fashion-mnist-*.tgz
    tools/fashion_mnist_npm_to_idx.py --package-dir package --out data/fashion-mnist
"""
import argparse
import gzip
import json
import pathlib
import struct

CLASSES = (5, 9)
TRAIN_PER_CLASS = 6000


def write_idx(path, magic, dims, payload):
    header = struct.pack(">I", magic) + b"".join(struct.pack(">I", d) for d in dims)
    with gzip.open(path, "wb") as f:
        f.write(header + bytes(payload))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--package-dir", required=True, type=pathlib.Path)
    ap.add_argument("--out", required=True, type=pathlib.Path)
    args = ap.parse_args()

    per_class = {}
    for c in CLASSES:
        data = json.loads((args.package_dir / "src" / "clothes" / f"{c}.json").read_text())["data"]
        for img in data:
            if len(img) != 784 or not all(0 <= v <= 255 for v in img):
                raise SystemExit(f"class {c}: malformed image")
        per_class[c] = data

    splits = {
        "train": {c: per_class[c][:TRAIN_PER_CLASS] for c in CLASSES},
        "t10k": {c: per_class[c][TRAIN_PER_CLASS:] for c in CLASSES},
    }
    args.out.mkdir(parents=True, exist_ok=True)
    for name, by_class in splits.items():
        images, labels = [], []
        # Interleave classes so any prefix is roughly balanced.
        longest = max(len(v) for v in by_class.values())
        for i in range(longest):
            for c in CLASSES:
                if i < len(by_class[c]):
                    images.append(by_class[c][i])
                    labels.append(c)
        pixels = bytearray()
        for img in images:
            pixels.extend(int(v) for v in img)
        write_idx(args.out / f"{name}-images-idx3-ubyte.gz", 0x00000803, (len(images), 28, 28), pixels)
        write_idx(args.out / f"{name}-labels-idx1-ubyte.gz", 0x00000801, (len(labels),), labels)
        print(f"{name}: {len(images)} images")


if __name__ == "__main__":
    main()
