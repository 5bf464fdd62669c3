"""Reference Crippen atom typing using the RDKit SMARTS table.

Usage: python3 crippen_types.py SMILES...   (or SMILES on stdin)
Prints one line per molecule: SMILES, then `type[/htype]` per heavy atom.
"""
import sys
from rdkit import Chem
from rdkit.Chem import Crippen

PATH = "/usr/local/lib/python3.10/dist-packages/rdkit/Data/Crippen.txt"
RULES = []
for line in open(PATH):
    if line.startswith("#") or not line.strip():
        continue
    f = line.rstrip("\n").split("\t")
    RULES.append((f[0], Chem.MolFromSmarts(f[1]), float(f[2])))
# RDKit applies the amine/amide hydrogen type before the generic polar one.
_h3 = [r for r in RULES if r[0] == "H3"]
_first_h2 = next(i for i, r in enumerate(RULES) if r[0] == "H2")
RULES = [r for r in RULES if r[0] != "H3"]
RULES[_first_h2:_first_h2] = _h3


def types(smiles):
    mol = Chem.AddHs(Chem.MolFromSmiles(smiles))
    assigned = {}
    for name, patt, _ in RULES:
        for match in mol.GetSubstructMatches(patt, uniquify=False):
            assigned.setdefault(match[0], name)
    out = []
    logp = 0.0
    table = {n: v for n, _, v in RULES}
    for atom in mol.GetAtoms():
        logp += table.get(assigned.get(atom.GetIdx()), 0.0)
        if atom.GetAtomicNum() == 1:
            continue
        hs = {assigned.get(n.GetIdx()) for n in atom.GetNeighbors() if n.GetAtomicNum() == 1}
        t = assigned.get(atom.GetIdx(), "?")
        out.append(t + ("/" + "|".join(sorted(hs)) if hs else ""))
    assert abs(logp - Crippen.MolLogP(mol)) < 1e-6, (smiles, logp, Crippen.MolLogP(mol))
    return out


if __name__ == "__main__":
    items = sys.argv[1:] or [l.split()[0] for l in sys.stdin if l.strip()]
    for s in items:
        print(s, " ".join(types(s)))
