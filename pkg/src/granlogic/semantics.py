"""Models of binary constraints and a brute-force entailment oracle.

Binary constraints only care about which combinations of granules share a
domain element, so a structure is summarised by its set of inhabited
membership patterns: for each element, the set of granules containing it.
In full and strong-quasi mode a pattern lists named granules only (top
always contains the element, bottom never does).  In quasi mode bottom and
top are ordinary granules and appear in patterns explicitly.

The oracle enumerates every set of patterns.  With ``P`` possible patterns
there are ``2**P`` candidate models, each identified by a ``P``-bit mask;
for every constraint we precompute which masks satisfy it and store that as
a Python integer bitset, so a schema's models are an AND of bitsets.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

import numpy as np

from .core import BOT, TOP, Constraint, Granule, Kind, Pred, Schema, all_atoms
from .graph import SmasGraph


class Mode(enum.Enum):
    FULL = "full"
    STRONG_QUASI = "strong-quasi"
    QUASI = "quasi"


# Largest number of named granules the oracle will enumerate, per mode.
ORACLE_CAP = {Mode.FULL: 4, Mode.STRONG_QUASI: 4, Mode.QUASI: 2}


class OracleLimitError(ValueError):
    pass


Pattern = frozenset  # frozenset[Granule]


@dataclass(frozen=True)
class AtomModel:
    mode: Mode
    universe: frozenset[Granule]
    inhabited: frozenset[Pattern]

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe) | {BOT, TOP})
        object.__setattr__(self, "inhabited", frozenset(frozenset(p) for p in self.inhabited))

    @property
    def named(self) -> tuple[Granule, ...]:
        return tuple(sorted(g for g in self.universe if g.kind is Kind.NAMED))

    def member(self, pattern: Pattern, g: Granule) -> bool:
        if self.mode is not Mode.QUASI:
            if g == TOP:
                return True
            if g == BOT:
                return False
        return g in pattern

    def image(self, g: Granule) -> frozenset[Pattern]:
        """The inhabited patterns (one representative element each) inside ``g``."""
        return frozenset(p for p in self.inhabited if self.member(p, g))

    def is_valid(self) -> bool:
        """Whether the pattern set describes a structure of this model's mode."""
        named = set(self.named)
        if self.mode is Mode.QUASI:
            return all(p and p <= self.universe for p in self.inhabited)
        if not all(p <= named for p in self.inhabited):
            return False
        if self.mode is Mode.STRONG_QUASI:
            return True
        covered = set().union(*self.inhabited) if self.inhabited else set()
        return bool(self.inhabited) and covered == named

    def dump(self) -> str:
        lines = sorted("{" + ",".join(sorted(g.name for g in p)) + "}" for p in self.inhabited)
        return "\n".join(lines) + ("\n" if lines else "")


def holds(m: AtomModel, c: Constraint) -> bool:
    for g in c.atom.terms():
        if g not in m.universe:
            raise KeyError(f"unknown granule {g}")
    a, b = c.left, c.right
    if c.pred is Pred.SUB:
        ok = all(m.member(p, b) for p in m.inhabited if m.member(p, a))
    else:
        ok = not any(m.member(p, a) and m.member(p, b) for p in m.inhabited)
    return ok if c.positive else not ok


def is_model(m: AtomModel, s: Schema) -> bool:
    return m.is_valid() and all(holds(m, c) for c in s.constraints)


@dataclass(frozen=True)
class Structure:
    """An explicit granule structure: a domain and an image set per granule."""

    domain: frozenset
    images: dict

    @classmethod
    def from_model(cls, m: AtomModel, copies: int = 1) -> "Structure":
        elems = {}
        for i, p in enumerate(sorted(m.inhabited, key=lambda p: sorted(p))):
            for j in range(copies):
                elems[(i, j)] = p
        images = {g: frozenset(e for e, p in elems.items() if m.member(p, g)) for g in m.universe}
        return cls(frozenset(elems), images)

    def holds(self, c: Constraint) -> bool:
        a, b = self.images[c.left], self.images[c.right]
        ok = a <= b if c.pred is Pred.SUB else not (a & b)
        return ok if c.positive else not ok

    def patterns(self, mode: Mode) -> frozenset[Pattern]:
        out = set()
        for e in self.domain:
            p = {g for g, img in self.images.items() if e in img}
            if mode is not Mode.QUASI:
                p = {g for g in p if g.kind is Kind.NAMED}
            out.add(frozenset(p))
        return frozenset(out)


# ---------------------------------------------------------------------------
# The oracle


class _Space:
    """All candidate pattern sets for one tuple of named granules and one mode."""

    def __init__(self, named: tuple[Granule, ...], mode: Mode):
        self.named = named
        self.mode = mode
        self.universe = frozenset(named) | {BOT, TOP}
        if mode is Mode.QUASI:
            base = (BOT, TOP) + named
            pats = [
                frozenset(c)
                for r in range(1, len(base) + 1)
                for c in itertools.combinations(base, r)
            ]
        else:
            pats = [
                frozenset(c)
                for r in range(len(named) + 1)
                for c in itertools.combinations(named, r)
            ]
        self.patterns: list[Pattern] = pats
        self.size = 1 << len(pats)
        self.masks = np.arange(self.size, dtype=np.uint64)
        self.all_bits = (1 << self.size) - 1
        self._probe = AtomModel(mode, self.universe, frozenset())
        self._cache: dict[Constraint, int] = {}
        if mode is Mode.FULL:
            ok = self.masks != 0
            for g in named:
                ok &= (self.masks & np.uint64(self._pattern_bits(lambda p, g=g: g in p))) != 0
            self.valid = self._pack(ok)
        else:
            self.valid = self.all_bits

    def _pattern_bits(self, pred) -> int:
        return sum(1 << i for i, p in enumerate(self.patterns) if pred(p))

    @staticmethod
    def _pack(flags: np.ndarray) -> int:
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def bits(self, c: Constraint) -> int:
        """Bitset over candidate masks whose pattern set satisfies ``c``."""
        hit = self._cache.get(c)
        if hit is not None:
            return hit
        if not c.positive:
            out = self.all_bits & ~self.bits(~c)
        else:
            for g in c.atom.terms():
                if g not in self.universe:
                    raise KeyError(f"unknown granule {g}")
            member = self._probe.member
            a, b = c.left, c.right
            if c.pred is Pred.SUB:
                bad = self._pattern_bits(lambda p: member(p, a) and not member(p, b))
            else:
                bad = self._pattern_bits(lambda p: member(p, a) and member(p, b))
            out = self._pack((self.masks & np.uint64(bad)) == 0)
        self._cache[c] = out
        return out

    def models(self, constraints: Iterable[Constraint]) -> int:
        m = self.valid
        for c in constraints:
            m &= self.bits(c)
        return m

    def model_at(self, mask: int) -> AtomModel:
        pats = frozenset(p for i, p in enumerate(self.patterns) if mask >> i & 1)
        return AtomModel(self.mode, self.universe, pats)


@lru_cache(maxsize=64)
def _space(named: tuple[Granule, ...], mode: Mode) -> _Space:
    return _Space(named, mode)


def space_for(universe: Iterable[Granule], mode: Mode = Mode.FULL) -> _Space:
    named = tuple(sorted(g for g in universe if g.kind is Kind.NAMED))
    if len(named) > ORACLE_CAP[mode]:
        raise OracleLimitError(
            f"{len(named)} named granules exceeds the {mode.value} oracle cap of {ORACLE_CAP[mode]}"
        )
    return _space(named, mode)


def enumerate_models(s: Schema, mode: Mode = Mode.FULL) -> Iterator[AtomModel]:
    space = space_for(s.universe, mode)
    bits = space.models(s.constraints)
    i = 0
    while bits:
        if bits & 1:
            yield space.model_at(i)
        bits >>= 1
        i += 1


def oracle_satisfiable(s: Schema, mode: Mode = Mode.FULL) -> bool:
    return space_for(s.universe, mode).models(s.constraints) != 0


def oracle_entails(s: Schema, c: Constraint, mode: Mode = Mode.FULL) -> bool:
    space = space_for(s.universe, mode)
    return space.models(s.constraints) & ~space.bits(c) == 0


def oracle_countermodel(s: Schema, c: Constraint, mode: Mode = Mode.FULL) -> Optional[AtomModel]:
    space = space_for(s.universe, mode)
    bad = space.models(s.constraints) & ~space.bits(c)
    if not bad:
        return None
    return space.model_at((bad & -bad).bit_length() - 1)


# ---------------------------------------------------------------------------
# Armstrong models


class UnsatisfiableError(ValueError):
    pass


def canonical_model(s: Schema, graph: Optional[SmasGraph] = None) -> AtomModel:
    """A full model of the positive part satisfying exactly the positive constraints it entails.

    One element per non-bottom granule, lying in everything that granule is
    entailed to be below.  One more element per pair of named granules whose
    disjointness is not entailed, lying in both up-sets.
    """
    pos = s.positive_part()
    if graph is None or graph.schema.pos != pos.pos or graph.schema.universe != pos.universe:
        graph = SmasGraph(pos)
    if graph.is_unsatisfiable():
        raise UnsatisfiableError("positive constraints have no full model")
    named = pos.named

    def up(g: Granule) -> frozenset[Granule]:
        return frozenset(h for h in named if graph.entails_sub(g, h))

    ups = {g: up(g) for g in named + (TOP,)}
    patterns = set(ups.values())
    for i, a in enumerate(named):
        for b in named[i + 1:]:
            if not graph.entails_disj(a, b):
                patterns.add(ups[a] | ups[b])
    return AtomModel(Mode.FULL, pos.universe, frozenset(patterns))


def positive_theory(m: AtomModel) -> frozenset[Constraint]:
    """The positive constraints over the model's universe that hold in it."""
    return frozenset(
        Constraint(a) for a in all_atoms(m.universe) if holds(m, Constraint(a))
    )
