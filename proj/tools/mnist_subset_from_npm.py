#!/usr/bin/env python3
"""Convert the digits bundled with the `mnist` npm package into IDX files.

The npm package (MIT, https://github.com/cazala/mnist) ships ~10k MNIST
digits as JSON arrays of pixel intensities in [0, 1] rounded to three
decimals. Each value maps back to a unique byte via round(v * 255).

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/mnist_subset_from_npm.py package/src/digits data/mnist10k
"""
import argparse
import gzip
import json
import pathlib
import random
import struct

SIZE = 28 * 28


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("digits_dir")
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    samples = []
    for label in range(10):
        raw = json.loads(pathlib.Path(args.digits_dir, f"{label}.json").read_text())["data"]
        count = len(raw) // SIZE
        for k in range(count):
            px = bytes(min(255, max(0, round(v * 255))) for v in raw[k * SIZE:(k + 1) * SIZE])
            samples.append((px, label))

    random.Random(args.seed).shuffle(samples)
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = len(samples)
    with gzip.GzipFile(out / "images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 2051, n, 28, 28))
        for px, _ in samples:
            f.write(px)
    with gzip.GzipFile(out / "labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 2049, n))
        f.write(bytes(label for _, label in samples))
    print(f"wrote {n} samples to {out}")


if __name__ == "__main__":
    main()
