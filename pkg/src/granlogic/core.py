"""Value types for binary granule constraints.

A schema is a finite set of granules (always containing the bottom and top
granules) together with signed binary constraints of the forms ``Sub(a, b)``
(subsumption) and ``Disj(a, b)`` (disjointness).  Terms may also be granule
variables, which is what inference rules are written over; substitutions
ground them.

Everything here is an immutable value.  Disjointness atoms over ground terms
are kept in a canonical operand order so that ``Disj(a, b)`` and
``Disj(b, a)`` compare and hash equal.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

BOTTOM_TOKEN = "bot"
TOP_TOKEN = "top"
RESERVED = frozenset({BOTTOM_TOKEN, TOP_TOKEN})

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Kind(enum.IntEnum):
    # Value order doubles as the canonical order for Disj operands.
    BOTTOM = 0
    TOP = 1
    NAMED = 2


@dataclass(frozen=True, order=True)
class Granule:
    kind: Kind
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("granule name must be non-empty")
        if self.kind is Kind.NAMED:
            if self.name in RESERVED:
                raise ValueError(f"{self.name!r} is reserved")
            if not _IDENT.match(self.name):
                raise ValueError(f"invalid granule name {self.name!r}")
        elif self.kind is Kind.BOTTOM and self.name != BOTTOM_TOKEN:
            raise ValueError("bottom granule must be named 'bot'")
        elif self.kind is Kind.TOP and self.name != TOP_TOKEN:
            raise ValueError("top granule must be named 'top'")
        object.__setattr__(self, "_hash", hash((self.kind, self.name)))

    def __hash__(self):
        return self._hash

    @property
    def is_bottom(self) -> bool:
        return self.kind is Kind.BOTTOM

    @property
    def is_top(self) -> bool:
        return self.kind is Kind.TOP

    def __str__(self):
        return self.name

    def __repr__(self):
        return self.name


BOT = Granule(Kind.BOTTOM, BOTTOM_TOKEN)
TOP = Granule(Kind.TOP, TOP_TOKEN)


def granule(name: str) -> Granule:
    """Return the granule called ``name``; ``bot``/``top`` map to the reserved ones."""
    if name == BOTTOM_TOKEN:
        return BOT
    if name == TOP_TOKEN:
        return TOP
    return Granule(Kind.NAMED, name)


def granules(names: str) -> tuple[Granule, ...]:
    return tuple(granule(n) for n in names.split())


@dataclass(frozen=True, order=True)
class Var:
    """A granule variable.  Indices live in their own namespace."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be a natural number")

    def __str__(self):
        return f"?{self.index}"


Term = Union[Granule, Var]


class Pred(enum.Enum):
    SUB = "Sub"
    DISJ = "Disj"


def _term_key(t: Term):
    if isinstance(t, Granule):
        return (0, t.kind, t.name)
    return (1, t.index, "")


@dataclass(frozen=True)
class Atom:
    pred: Pred
    left: Term
    right: Term

    def __post_init__(self):
        if (
            self.pred is Pred.DISJ
            and isinstance(self.left, Granule)
            and isinstance(self.right, Granule)
            and _term_key(self.right) < _term_key(self.left)
        ):
            left, right = self.right, self.left
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash((self.pred, self.left, self.right)))

    def __hash__(self):
        return self._hash

    @property
    def is_ground(self) -> bool:
        return isinstance(self.left, Granule) and isinstance(self.right, Granule)

    def terms(self) -> tuple[Term, Term]:
        return (self.left, self.right)

    def __str__(self):
        return f"{self.pred.value}({self.left},{self.right})"


@dataclass(frozen=True)
class Constraint:
    """A signed atom.  With variables in it, it is a WFF rather than a constraint."""

    atom: Atom
    positive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.atom, self.positive)))

    def __hash__(self):
        return self._hash

    @property
    def pred(self) -> Pred:
        return self.atom.pred

    @property
    def left(self) -> Term:
        return self.atom.left

    @property
    def right(self) -> Term:
        return self.atom.right

    @property
    def is_ground(self) -> bool:
        return self.atom.is_ground

    def variables(self) -> set[int]:
        return {t.index for t in self.atom.terms() if isinstance(t, Var)}

    def __invert__(self) -> "Constraint":
        return Constraint(self.atom, not self.positive)

    def sort_key(self):
        return (
            not self.positive,
            self.pred is Pred.DISJ,
            _term_key(self.left),
            _term_key(self.right),
        )

    def __lt__(self, other: "Constraint"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return ("" if self.positive else "!") + str(self.atom)

    def __repr__(self):
        return str(self)


def _as_term(x) -> Term:
    if isinstance(x, (Granule, Var)):
        return x
    if isinstance(x, int):
        return Var(x)
    if isinstance(x, str):
        return granule(x)
    raise TypeError(f"cannot use {x!r} as a term")


def Sub(left, right) -> Constraint:
    """``Sub(a, b)``; plain strings are taken as granule names, ints as variables."""
    return Constraint(Atom(Pred.SUB, _as_term(left), _as_term(right)))


def Disj(left, right) -> Constraint:
    return Constraint(Atom(Pred.DISJ, _as_term(left), _as_term(right)))


def normalize(c: Constraint) -> Constraint:
    # Atoms canonicalize on construction; rebuilding keeps this honest for
    # values created through object.__setattr__ or pickling.
    return Constraint(Atom(c.atom.pred, c.atom.left, c.atom.right), bool(c.positive))


def negate(c: Constraint) -> Constraint:
    return ~c


Substitution = Mapping[int, Term]


def substitute(w: Constraint, s: Substitution) -> Constraint:
    def sub(t: Term) -> Term:
        if isinstance(t, Var) and t.index in s:
            return s[t.index]
        return t

    return Constraint(Atom(w.pred, sub(w.left), sub(w.right)), w.positive)


def is_ground_substitution(s: Substitution) -> bool:
    return all(isinstance(t, Granule) for t in s.values())


def is_complete_for(s: Substitution, w: Constraint) -> bool:
    return w.variables() <= set(s)


class SyntacticClass(enum.Enum):
    TAUTOLOGY = "tautology"
    UNSATISFIABLE = "unsatisfiable"
    CONTINGENT = "contingent"


def _classify_positive(atom: Atom) -> SyntacticClass:
    a, b = atom.left, atom.right
    if atom.pred is Pred.SUB:
        if a == b or a.is_bottom or b.is_top:
            return SyntacticClass.TAUTOLOGY
        if b.is_bottom:
            return SyntacticClass.UNSATISFIABLE
    else:
        if a.is_bottom or b.is_bottom:
            return SyntacticClass.TAUTOLOGY
        # A non-bottom granule is nonempty and lies inside top, so it can be
        # disjoint from neither itself nor top.
        if a == b or a.is_top or b.is_top:
            return SyntacticClass.UNSATISFIABLE
    return SyntacticClass.CONTINGENT


def classify(c: Constraint, universe: Iterable[Granule] | None = None) -> SyntacticClass:
    """Tautology / unsatisfiable / contingent in full structures, decided from the syntax alone.

    Positive tautologies are ``Sub(g,g)``, ``Sub(bot,g)``, ``Sub(g,top)`` and
    ``Disj(bot,g)``.  Positive unsatisfiable constraints are ``Sub(g,bot)``,
    ``Disj(g,g)`` and ``Disj(top,g)`` for ``g`` other than bottom.  Negative
    constraints take the dual class of their atom.
    """
    if not c.is_ground:
        raise ValueError(f"cannot classify non-ground {c}")
    if universe is not None:
        universe = frozenset(universe)
        missing = {t for t in c.atom.terms() if t not in universe}
        if missing:
            raise ValueError(f"unknown granule(s) {sorted(map(str, missing))}")
    cls = _classify_positive(c.atom)
    if c.positive or cls is SyntacticClass.CONTINGENT:
        return cls
    if cls is SyntacticClass.TAUTOLOGY:
        return SyntacticClass.UNSATISFIABLE
    return SyntacticClass.TAUTOLOGY


def tautologies(universe: Iterable[Granule]) -> frozenset[Constraint]:
    """The positive binary tautologies over ``universe``."""
    gs = list(universe)
    out = set()
    for g in gs:
        out.add(Sub(g, g))
        out.add(Sub(BOT, g))
        out.add(Sub(g, TOP))
        out.add(Disj(BOT, g))
    return frozenset(out)


def all_atoms(universe: Iterable[Granule]) -> list[Atom]:
    """Every ground atom over ``universe`` (Disj counted once per unordered pair)."""
    gs = sorted(universe)
    atoms = [Atom(Pred.SUB, a, b) for a in gs for b in gs]
    atoms += [Atom(Pred.DISJ, a, b) for i, a in enumerate(gs) for b in gs[i:]]
    return atoms


def all_constraints(universe: Iterable[Granule], signs=(True, False)) -> list[Constraint]:
    return [Constraint(a, s) for s in signs for a in all_atoms(universe)]


@dataclass(frozen=True)
class Schema:
    """A granule universe plus a set of ground binary constraints."""

    universe: frozenset[Granule]
    constraints: frozenset[Constraint] = field(default_factory=frozenset)

    def __post_init__(self):
        universe = frozenset(self.universe) | {BOT, TOP}
        # Constraint values are canonical from construction, so no rebuild is needed.
        constraints = frozenset(self.constraints)
        for c in constraints:
            if not c.is_ground:
                raise ValueError(f"schema constraint {c} is not ground")
            for t in c.atom.terms():
                if t not in universe:
                    raise ValueError(f"constraint {c} mentions unknown granule {t}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "constraints", constraints)

    @classmethod
    def of(cls, constraints: Iterable[Constraint] = (), extra: Iterable = ()) -> "Schema":
        """Build a schema whose universe is whatever the constraints mention, plus ``extra``."""
        constraints = list(constraints)
        universe = {_as_term(g) for g in extra}
        for c in constraints:
            universe.update(c.atom.terms())
        return cls(frozenset(universe), frozenset(constraints))

    @property
    def named(self) -> tuple[Granule, ...]:
        return tuple(sorted(g for g in self.universe if g.kind is Kind.NAMED))

    @property
    def pos(self) -> frozenset[Constraint]:
        return frozenset(c for c in self.constraints if c.positive)

    @property
    def neg(self) -> frozenset[Constraint]:
        return frozenset(c for c in self.constraints if not c.positive)

    def positive_part(self) -> "Schema":
        return Schema(self.universe, self.pos)

    def with_constraints(self, *extra: Constraint) -> "Schema":
        return Schema(self.universe, self.constraints | frozenset(extra))

    def without(self, *dropped: Constraint) -> "Schema":
        return Schema(self.universe, self.constraints - frozenset(map(normalize, dropped)))

    def sorted_constraints(self) -> list[Constraint]:
        return sorted(self.constraints)

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.sorted_constraints())

    def __len__(self):
        return len(self.constraints)

    def __contains__(self, c: Constraint):
        return normalize(c) in self.constraints
