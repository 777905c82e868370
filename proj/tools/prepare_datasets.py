#!/usr/bin/env python3
"""Convert the UCI Ionosphere / WPBC tables into the ARFF shape softod reads.

    prepare_datasets.py ionosphere <ionosphere.data|ionosphere.tab> data/ionosphere.arff
    prepare_datasets.py wpbc <wpbc.data> data/wpbc.arff

Ionosphere: attributes 1 (binary) and 2 (constant 0) are dropped, leaving 32
numeric dimensions; class 'b' (bad return) is the outlier class.
WPBC: the id and outcome columns are removed, leaving 33 numeric columns;
outcome 'R' (recurrence) is the outlier class. The four missing lymph node
status values ('?') are filled with the column median so all 198 rows stay.
"""

import sys


def read_rows(path):
    rows = []
    with open(path) as f:
        lines = [l.rstrip("\n") for l in f if l.strip()]
    if path.endswith(".tab"):
        lines = lines[3:]  # Orange header: names, types, flags
        return [l.split("\t") for l in lines]
    return [l.split(",") for l in lines]


def write_arff(path, relation, names, rows, labels):
    with open(path, "w") as f:
        f.write(f"@RELATION '{relation}'\n\n")
        for n in names:
            f.write(f"@ATTRIBUTE '{n}' real\n")
        f.write("@ATTRIBUTE 'outlier' {'no','yes'}\n\n@DATA\n")
        for r, lab in zip(rows, labels):
            f.write(",".join(r) + "," + ("'yes'" if lab else "'no'") + "\n")


def ionosphere(src, dst):
    rows = read_rows(src)
    feats = [r[2:34] for r in rows]
    labels = [r[34].strip() == "b" for r in rows]
    write_arff(dst, "Ionosphere", [f"att{i + 1}" for i in range(32)], feats, labels)


def wpbc(src, dst):
    rows = read_rows(src)
    feats = [[v.strip() for v in r[2:]] for r in rows]
    labels = [r[1].strip() == "R" for r in rows]
    for j in range(len(feats[0])):
        known = sorted(float(f[j]) for f in feats if f[j] != "?")
        if len(known) == len(feats):
            continue
        mid = len(known) // 2
        median = known[mid] if len(known) % 2 else 0.5 * (known[mid - 1] + known[mid])
        for f in feats:
            if f[j] == "?":
                f[j] = repr(median)
    write_arff(dst, "WPBC", [f"att{i + 1}" for i in range(len(feats[0]))], feats, labels)


if __name__ == "__main__":
    kind, src, dst = sys.argv[1:4]
    {"ionosphere": ionosphere, "wpbc": wpbc}[kind](src, dst)
