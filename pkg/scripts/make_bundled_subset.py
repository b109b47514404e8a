"""Regenerate src/adacat/data/a1a_like_subset.txt.

The real a1a file (LIBSVM binary collection) could not be downloaded where
this package was built, so the bundled test data is a seeded synthetic set
with the same layout: 123 binary features made of one-hot encodings of 14
categorical attributes (group sizes as in a1a), labels in {-1, +1} with
roughly a quarter positive.  Use ``adacat fetch-a1a`` for the real data.

    python scripts/make_bundled_subset.py [rows] [seed]
"""

import sys
from pathlib import Path

import numpy as np

from adacat.numkit import Rng
from adacat.problems import Dataset, serialize_libsvm

GROUPS = [5, 8, 5, 16, 5, 7, 14, 6, 5, 2, 2, 2, 5, 41]
# attributes that are occasionally missing in a1a (workclass, occupation, country)
MISSING = {1: 0.05, 6: 0.05, 13: 0.02}


def generate(rows=200, seed=20190410):
    assert sum(GROUPS) == 123
    rng = Rng(seed)
    probs = []
    for size in GROUPS:
        # skewed category frequencies: a few common values and a long tail
        w = np.exp(-1.2 * np.arange(size)) * (0.5 + rng.uniforms(size))
        probs.append(w / w.sum())
    weights = rng.gaussians(123)
    data = Dataset(n_features=123)
    offset = np.cumsum([0] + GROUPS[:-1])
    for _ in range(rows):
        feats = {}
        for g, (size, p) in enumerate(zip(GROUPS, probs)):
            if g in MISSING and rng.uniform() < MISSING[g]:
                continue
            cat = int(np.searchsorted(np.cumsum(p), rng.uniform(), side="right"))
            feats[int(offset[g]) + min(cat, size - 1)] = 1.0
        score = sum(weights[i] for i in feats) - 2.5
        label = 1.0 if rng.uniform() < 1.0 / (1.0 + np.exp(-score)) else -1.0
        data.labels.append(label)
        data.rows.append(feats)
    return data


if __name__ == "__main__":
    rows = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 20190410
    out = Path(__file__).resolve().parents[1] / "src/adacat/data/a1a_like_subset.txt"
    text = serialize_libsvm(generate(rows, seed))
    header = ("# synthetic stand-in for a1a (123 features, one-hot layout); "
              "generated by scripts/make_bundled_subset.py\n")
    out.write_text(header + text)
    print(f"wrote {rows} rows to {out}")
