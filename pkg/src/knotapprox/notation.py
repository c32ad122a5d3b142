"""Link presentations: PD codes, braid words, and the bundled corpus."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Union

from .algebra import TwoVarLaurent


class PresentationError(ValueError):
    """A PD code or braid word violates its format or invariants."""


# ---------------------------------------------------------------------------
# PD codes


@dataclass(frozen=True)
class PDCode:
    """Planar diagram code.

    Each crossing lists its four arc labels counterclockwise, starting from
    the incoming under-strand. The empty code is the 0-crossing unknot.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    arc_count: int

    def __post_init__(self):
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise PresentationError(f"crossing {x} does not have 4 labels")
            for label in x:
                if not isinstance(label, int) or label < 1 or label > self.arc_count:
                    raise PresentationError(f"arc label {label!r} out of range 1..{self.arc_count}")
                counts[label] = counts.get(label, 0) + 1
        for label in range(1, self.arc_count + 1):
            if counts.get(label, 0) != 2:
                raise PresentationError(f"arc label {label} appears {counts.get(label, 0)} times, expected 2")

    @classmethod
    def from_crossings(cls, crossings) -> "PDCode":
        xs = tuple(tuple(int(v) for v in x) for x in crossings)
        return cls(xs, max((max(x) for x in xs), default=0))

    def __len__(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return serialize_pd(self)


def parse_pd(text: str) -> PDCode:
    """Parse whitespace-separated ``X(a,b,c,d)`` terms."""
    text = text.strip()
    if not text:
        return PDCode((), 0)
    crossings = []
    for m in re.finditer(r"\S+", text):
        token = m.group(0)
        term = re.fullmatch(r"X\((\d+),(\d+),(\d+),(\d+)\)", token)
        if term is None:
            raise PresentationError(f"malformed PD term {token!r} at offset {m.start()}")
        crossings.append(tuple(int(g) for g in term.groups()))
    labels = [v for x in crossings for v in x]
    if min(labels) < 1:
        raise PresentationError("arc labels must be positive")
    return PDCode(tuple(crossings), max(labels))


def serialize_pd(pd: PDCode) -> str:
    return " ".join("X({},{},{},{})".format(*x) for x in pd.crossings)


@dataclass(frozen=True)
class _Passage:
    crossing: int
    entry: int  # position the strand enters through; it leaves through (entry + 2) % 4


def _endpoints(pd: PDCode) -> dict[int, list[tuple[int, int]]]:
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(pd.crossings):
        for p, label in enumerate(x):
            ends.setdefault(label, []).append((ci, p))
    return ends


def _follow(pd: PDCode, ends, ci: int, entry: int) -> Iterator[_Passage]:
    """Walk a component starting by entering crossing ``ci`` at ``entry``."""
    start = (ci, entry)
    while True:
        yield _Passage(ci, entry)
        exit_pos = (entry + 2) % 4
        label = pd.crossings[ci][exit_pos]
        a, b = ends[label]
        ci, entry = b if a == (ci, exit_pos) else a
        if (ci, entry) == start:
            return


def oriented_components(pd: PDCode) -> list[list[_Passage]]:
    """Components as cyclic passage lists, oriented by the PD convention.

    A component that passes under somewhere is oriented so that it enters
    each under-crossing at position 0. A component that only passes over
    is oriented from its lowest arc toward the larger neighbouring label.
    """
    ends = _endpoints(pd)
    seen: set[tuple[int, int]] = set()
    comps = []
    for label in sorted(ends):
        (ci, p), _ = ends[label]
        if (ci, p) in seen:
            continue
        walk = list(_follow(pd, ends, ci, p))
        under = [q for q in walk if q.entry in (0, 2)]
        if under:
            if under[0].entry == 2:
                walk = _reverse(pd, ends, walk)
        else:
            walk = _orient_overpass(pd, ends, walk)
        bad = [q for q in walk if q.entry == 2]
        if bad:
            raise PresentationError(
                f"cannot orient component: crossing {pd.crossings[bad[0].crossing]} is entered against its under-strand"
            )
        for q in walk:
            seen.add((q.crossing, q.entry))
            seen.add((q.crossing, (q.entry + 2) % 4))
        comps.append(walk)
    return comps


def _reverse(pd, ends, walk):
    q = walk[0]
    return list(_follow(pd, ends, q.crossing, (q.entry + 2) % 4))


def _orient_overpass(pd, ends, walk):
    labels_in = [pd.crossings[q.crossing][q.entry] for q in walk]
    labels_out = [pd.crossings[q.crossing][(q.entry + 2) % 4] for q in walk]
    lowest = min(labels_in)
    i = labels_in.index(lowest)
    if labels_out[i] < labels_in[i - 1] and len(walk) > 1:
        return _reverse(pd, ends, walk)
    return walk


def components(link: Union[PDCode, "BraidWord"]) -> int:
    """Number of components of the link."""
    if isinstance(link, BraidWord):
        return len(link.permutation_cycles())
    if not link.crossings:
        return 1
    return len(oriented_components(link))


def crossing_signs(pd: PDCode) -> list[int]:
    """Sign of each crossing under the inferred orientation."""
    signs = [0] * len(pd.crossings)
    for comp in oriented_components(pd):
        for q in comp:
            if q.entry == 3:
                signs[q.crossing] = 1
            elif q.entry == 1:
                signs[q.crossing] = -1
    return signs


def writhe(pd: PDCode) -> int:
    return sum(crossing_signs(pd))


def mirror(pd: PDCode) -> PDCode:
    """Switch every crossing, keeping the PD convention."""
    signs = crossing_signs(pd)
    out = []
    for (a, b, c, d), s in zip(pd.crossings, signs):
        # the old over-strand becomes the under-strand; start from where it enters
        out.append((d, a, b, c) if s > 0 else (b, c, d, a))
    return PDCode(tuple(out), pd.arc_count)


def relabel(pd: PDCode) -> PDCode:
    """Relabel arcs 1..n consecutively along each oriented component."""
    if not pd.crossings:
        return pd
    mapping: dict[int, int] = {}
    for comp in oriented_components(pd):
        for q in comp:
            label = pd.crossings[q.crossing][q.entry]
            if label not in mapping:
                mapping[label] = len(mapping) + 1
    return PDCode(tuple(tuple(mapping[v] for v in x) for x in pd.crossings), pd.arc_count)


# ---------------------------------------------------------------------------
# Braid words


@dataclass(frozen=True)
class BraidWord:
    """A braid on ``strands`` strands; entry ``+-i`` is the generator sigma_i^(+-1)."""

    strands: int
    word: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.strands, int) or self.strands < 1:
            raise PresentationError("a braid needs at least one strand")
        for g in self.word:
            if g == 0:
                raise PresentationError("generator index 0 is not allowed")
            if abs(g) >= self.strands:
                raise PresentationError(f"generator {g} out of range for {self.strands} strands")

    def permutation(self) -> tuple[int, ...]:
        """Image of each bottom position at the top of the braid."""
        pos = list(range(self.strands))
        for g in self.word:
            i = abs(g) - 1
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
        perm = [0] * self.strands
        for top, bottom in enumerate(pos):
            perm[bottom] = top
        return tuple(perm)

    def permutation_cycles(self) -> list[tuple[int, ...]]:
        perm = self.permutation()
        seen, cycles = set(), []
        for s in range(self.strands):
            if s in seen:
                continue
            cyc = []
            while s not in seen:
                seen.add(s)
                cyc.append(s)
                s = perm[s]
            cycles.append(tuple(cyc))
        return cycles

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-g for g in self.word))

    def __str__(self) -> str:
        return serialize_braid(self)


def parse_braid(text: str) -> BraidWord:
    """Parse ``"n; w1 w2 ..."``."""
    head, sep, tail = text.partition(";")
    if not sep:
        raise PresentationError(f"braid text {text!r} lacks the ';' separator")
    try:
        strands = int(head.strip())
        word = tuple(int(tok) for tok in tail.split())
    except ValueError as exc:
        raise PresentationError(f"malformed braid text {text!r}") from exc
    return BraidWord(strands, word)


def serialize_braid(b: BraidWord) -> str:
    return f"{b.strands}; " + " ".join(str(g) for g in b.word) if b.word else f"{b.strands};"


def torus_braid(m: int) -> BraidWord:
    """The (2, 2m+1) torus knot T_m as sigma_1^(2m+1)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return BraidWord(2, (1,) * (2 * m + 1))


def braid_to_pd(braid: BraidWord) -> PDCode:
    """PD code of the braid closure, strands oriented upward.

    Every strand must meet at least one crossing, otherwise the closure has
    a split unknotted component that a PD code cannot carry.
    """
    if not braid.word:
        if braid.strands == 1:
            return PDCode((), 0)
        raise PresentationError("closure of a trivial braid on several strands is a split unlink")
    touched = {abs(g) - 1 for g in braid.word} | {abs(g) for g in braid.word}
    if touched != set(range(braid.strands)):
        raise PresentationError("every strand must take part in a crossing")
    bottom = list(range(1, braid.strands + 1))
    current = list(bottom)
    fresh = braid.strands + 1
    raw = []
    for g in braid.word:
        i = abs(g) - 1
        left, right = current[i], current[i + 1]
        new_left, new_right = fresh, fresh + 1
        fresh += 2
        if g > 0:
            # left strand passes over from SW to NE
            raw.append((right, new_right, new_left, left))
        else:
            # right strand passes over from SE to NW
            raw.append((left, right, new_right, new_left))
        current[i], current[i + 1] = new_left, new_right
    alias = {top: bot for top, bot in zip(current, bottom)}
    xs = tuple(tuple(alias.get(v, v) for v in x) for x in raw)
    used = sorted({v for x in xs for v in x})
    compact = {v: k + 1 for k, v in enumerate(used)}
    pd = PDCode(tuple(tuple(compact[v] for v in x) for x in xs), len(used))
    return relabel(pd)


# ---------------------------------------------------------------------------
# Corpus


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    components: int
    pd: PDCode | None = None
    braid: BraidWord | None = None
    kauffman_F: TwoVarLaurent | None = None
    notes: str = ""

    def __post_init__(self):
        if self.pd is None and self.braid is None:
            raise PresentationError(f"corpus entry {self.name!r} has neither pd nor braid")
        if self.components < 1:
            raise PresentationError(f"corpus entry {self.name!r} has components < 1")

    @property
    def is_knot(self) -> bool:
        return self.components == 1

    def diagram(self) -> PDCode:
        """The PD code, derived from the braid when none is stored."""
        return self.pd if self.pd is not None else braid_to_pd(self.braid)

    def to_json(self) -> dict:
        out: dict = {"name": self.name}
        if self.pd is not None:
            out["pd"] = serialize_pd(self.pd)
        if self.braid is not None:
            out["braid"] = serialize_braid(self.braid)
        out["components"] = self.components
        if self.kauffman_F is not None:
            out["kauffman_F"] = self.kauffman_F.to_json()
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CorpusEntry":
        if not isinstance(obj, dict):
            raise PresentationError("corpus entries must be JSON objects")
        unknown = set(obj) - {"name", "pd", "braid", "components", "kauffman_F", "notes"}
        if unknown:
            raise PresentationError(f"unknown corpus fields {sorted(unknown)}")
        if not isinstance(obj.get("name"), str) or not isinstance(obj.get("components"), int):
            raise PresentationError("corpus entries need a string name and integer components")
        pd = parse_pd(obj["pd"]) if obj.get("pd") is not None else None
        braid = parse_braid(obj["braid"]) if obj.get("braid") is not None else None
        F = TwoVarLaurent.from_json(obj["kauffman_F"]) if obj.get("kauffman_F") is not None else None
        entry = cls(obj["name"], obj["components"], pd, braid, F, obj.get("notes", ""))
        for rep in (pd, braid):
            if rep is not None and components(rep) != entry.components:
                raise PresentationError(
                    f"corpus entry {entry.name!r}: presentation has {components(rep)} components, "
                    f"declared {entry.components}"
                )
        return entry


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("knotapprox") / "data" / "corpus.json"))


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    path = Path(path) if path is not None else bundled_corpus_path()
    data = json.loads(path.read_text())
    if not isinstance(data, list):
        raise PresentationError("corpus file must hold a JSON array")
    entries, names = [], set()
    for obj in data:
        entry = CorpusEntry.from_json(obj)
        if entry.name in names:
            raise PresentationError(f"duplicate corpus name {entry.name!r}")
        names.add(entry.name)
        entries.append(entry)
    return entries


ALIASES = {"trefoil": "3_1", "figure-eight": "4_1", "figure_eight": "4_1"}


def find_entry(corpus: list[CorpusEntry], name: str) -> CorpusEntry:
    """Look up a corpus entry by name or by one of the common ALIASES."""
    name = ALIASES.get(name, name)
    for entry in corpus:
        if entry.name == name:
            return entry
    raise KeyError(f"unknown link {name!r}")
