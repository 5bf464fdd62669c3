"""Samples the desk corpus from the MOSES training split.

Usage: python3 make_desk_corpus.py path/to/moses/train.csv.gz out.smi
Draws 10,000 rows uniformly without replacement with a fixed seed and keeps
the file order.
"""
import gzip
import random
import sys

src, dst = sys.argv[1], sys.argv[2]
with gzip.open(src, "rt") as f:
    header = next(f).strip()
    assert header.split(",")[0] == "SMILES", header
    rows = [line.strip().split(",")[0] for line in f if line.strip()]
picked = sorted(random.Random(7).sample(range(len(rows)), 10_000))
with open(dst, "w") as out:
    out.write("# 10,000 molecules sampled from the MOSES training split\n")
    out.write("# (https://github.com/molecularsets/moses, MIT licence).\n")
    for i in picked:
        out.write(f"{rows[i]} moses-{i}\n")
