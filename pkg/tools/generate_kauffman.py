"""Offline generator for the kauffman_F fields of the bundled corpus.

Not part of the library. The library treats Kauffman F as ingested data;
this script produced that data (Dubrovnik convention) by the unoriented
skein recursion on PD codes, and records provenance in each entry's notes.

    python tools/generate_kauffman.py src/knotapprox/data/corpus.json

Dubrovnik conventions used: D(X) - D(X') = z (D(S_A) - D(S_B)) with S_A the
Kauffman-bracket A-smoothing of X, a positive curl multiplies by a, the
unknot is 1, and F = a^(-writhe) D. With these, F(-A^3, A - A^-1) is the
Jones polynomial at t = A^-4.
"""

from __future__ import annotations

import json
import sys
from functools import lru_cache

from knotapprox.algebra import TwoVarLaurent
from knotapprox.notation import CorpusEntry, writhe

DELTA = TwoVarLaurent({(1, -1): 1, (-1, -1): -1, (0, 0): 1})
Z = TwoVarLaurent.monomial(0, 1)
PROVENANCE = "kauffman_F: Dubrovnik polynomial, generated offline by tools/generate_kauffman.py."


def _delta_power(k: int) -> TwoVarLaurent:
    return DELTA ** k


def _smooth(crossings, idx, pairs, loops):
    rest = [list(x) for i, x in enumerate(crossings) if i != idx]
    pending = [list(p) for p in pairs]
    for k, (u, v) in enumerate(pending):
        if u == v:
            loops += 1
            continue
        for x in rest:
            for j in range(4):
                if x[j] == v:
                    x[j] = u
        for p in pending[k + 1:]:
            for j in range(2):
                if p[j] == v:
                    p[j] = u
    return _canon(rest), loops


def _canon(crossings):
    mapping = {}
    out = []
    for x in crossings:
        out.append(tuple(mapping.setdefault(v, len(mapping) + 1) for v in x))
    return tuple(out)


def _walk(crossings):
    """Traverse all components; yield (component_index, crossing, entry)."""
    ends = {}
    for ci, x in enumerate(crossings):
        for p, label in enumerate(x):
            ends.setdefault(label, []).append((ci, p))
    seen = set()
    comp = 0
    for label in sorted(ends):
        # rotation-independent start: lowest crossing, then lowest exit label
        start = min(ends[label], key=lambda e: (e[0], crossings[e[0]][(e[1] + 2) % 4]))
        if start in seen:
            continue
        ci, entry = start
        while True:
            seen.add((ci, entry))
            seen.add((ci, (entry + 2) % 4))
            yield comp, ci, entry
            out = (ci, (entry + 2) % 4)
            a, b = ends[crossings[ci][out[1]]]
            ci, entry = b if a == out else a
            if (ci, entry) == start:
                break
        comp += 1


@lru_cache(maxsize=None)
def regular_D(crossings: tuple, loops: int) -> TwoVarLaurent:
    if not crossings:
        return _delta_power(loops - 1)
    first_entry = {}
    passes = {}
    n_comp = 0
    for comp, ci, entry in _walk(crossings):
        n_comp = max(n_comp, comp + 1)
        passes.setdefault(ci, []).append(entry)
        if ci in first_entry:
            continue
        first_entry[ci] = entry
        if entry in (0, 2):
            a, b, c, d = crossings[ci]
            switched = list(crossings)
            switched[ci] = (b, c, d, a)
            s_a, la = _smooth(crossings, ci, [(a, b), (c, d)], loops)
            s_b, lb = _smooth(crossings, ci, [(a, d), (b, c)], loops)
            return regular_D(tuple(switched), loops) + Z * (regular_D(s_a, la) - regular_D(s_b, lb))
    w = 0
    for ci, entries in passes.items():
        under = next(e for e in entries if e in (0, 2))
        over = next(e for e in entries if e in (1, 3))
        w += 1 if over == (under + 3) % 4 else -1
    return TwoVarLaurent.monomial(w, 0) * _delta_power(n_comp + loops - 1)


def dubrovnik(entry: CorpusEntry) -> TwoVarLaurent:
    pd = entry.diagram()
    D = regular_D(_canon(pd.crossings), 0) if pd.crossings else TwoVarLaurent.constant(1)
    return TwoVarLaurent.monomial(-writhe(pd), 0) * D


def main(path: str) -> None:
    data = json.load(open(path))
    for obj in data:
        entry = CorpusEntry.from_json(obj)
        F = dubrovnik(entry)
        obj["kauffman_F"] = F.to_json()
        notes = obj.get("notes", "")
        if PROVENANCE not in notes:
            obj["notes"] = (notes + " " + PROVENANCE).strip()
        print(entry.name, F.to_json(), file=sys.stderr)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])
