"""Writes descriptor/QED golden files using RDKit as the reference oracle.

Usage: python3 make_oracle_fixtures.py crates/core/tests/data
Reads desk_corpus.smi and curated.smi from that directory and the alert
patterns from crates/core/data/alerts.tsv.
"""
import math
import os
import sys

from rdkit import Chem, rdBase
from rdkit.Chem import QED, Crippen, Descriptors, rdMolDescriptors as rd

out_dir = sys.argv[1]
root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
alert_rows = [
    l.rstrip("\n").split("\t")
    for l in open(os.path.join(root, "crates/core/data/alerts.tsv"))
    if l.strip() and not l.startswith("#")
]
SHIPPED_ALERTS = [Chem.MolFromSmarts(p) for _, p in alert_rows]


def props(mol):
    p = QED.properties(mol)
    return p


def shipped_alerts(mol):
    return sum(1 for a in SHIPPED_ALERTS if mol.HasSubstructMatch(a))


def unweighted(p):
    return QED.qed(None, w=(1.0,) * 8, qedProperties=p)


def row(mol):
    p = props(mol)
    return p, [
        f"{p.MW:.6f}", f"{p.ALOGP:.6f}", str(p.HBA), str(p.HBD), f"{p.PSA:.6f}",
        str(p.ROTB), str(p.AROM), str(p.ALERTS),
    ]


HEAD = "mw\talogp\thba\thbd\tpsa\trotb\tarom\talerts_reference"

with open(os.path.join(out_dir, "desk_descriptors.tsv"), "w") as f:
    f.write(f"# RDKit {rdBase.rdkitVersion} descriptors for desk_corpus.smi\n")
    f.write(f"id\t{HEAD}\tqed_no_alerts\n")
    for line in open(os.path.join(out_dir, "desk_corpus.smi")):
        if line.startswith("#") or not line.strip():
            continue
        smi, name = line.split()
        mol = Chem.MolFromSmiles(smi)
        p, cells = row(mol)
        q = unweighted(p._replace(ALERTS=0))
        f.write("\t".join([name, *cells, f"{q:.9f}"]) + "\n")

with open(os.path.join(out_dir, "qed_golden.tsv"), "w") as f:
    f.write(f"# RDKit {rdBase.rdkitVersion} reference values; QED is unweighted.\n")
    f.write("# qed_no_alerts zeroes ALERTS; qed_shipped_alerts uses the shipped alert\n")
    f.write("# patterns evaluated by the reference toolkit.\n")
    f.write(f"name\tsmiles\t{HEAD}\tshipped_alerts\tqed_no_alerts\tqed_shipped_alerts\n")
    for line in open(os.path.join(out_dir, "curated.smi")):
        if line.startswith("#") or not line.strip():
            continue
        smi, name = line.split()
        mol = Chem.MolFromSmiles(smi)
        canon = Chem.MolToSmiles(mol)
        p, cells = row(mol)
        k = shipped_alerts(mol)
        q0 = unweighted(p._replace(ALERTS=0))
        qk = unweighted(p._replace(ALERTS=k))
        f.write("\t".join([name, canon, *cells, str(k), f"{q0:.9f}", f"{qk:.9f}"]) + "\n")

with open(os.path.join(out_dir, "desirability_golden.tsv"), "w") as f:
    f.write(f"# RDKit {rdBase.rdkitVersion} desirability values\n")
    f.write("descriptor\tx\tvalue\n")
    for name, x in [("MW", 305.0), ("MW", 150.0), ("ALOGP", 2.5), ("PSA", 80.0), ("ROTB", 4.0)]:
        f.write(f"{name}\t{x}\t{QED.ads(x, QED.adsParameters[name]):.17g}\n")
