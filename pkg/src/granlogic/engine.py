"""Decision procedures: satisfiability, entailment with proofs, closure, RCC5+.

Positive questions are graph questions (reachability and protected pairs).
A negative query ``!b`` is reduced to positive ones: it follows from a
satisfiable schema exactly when adding ``b`` to the positive part is
unsatisfiable, or makes one of the negated constraints provable.  The
proof found there is then contraposed at the ``b`` leaf.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .core import Constraint, Granule, Pred, Schema, Sub, Disj, all_constraints
from .graph import SmasGraph
from .proofs import (
    Proof,
    complement_pair,
    contrapose,
    positive_proof,
    to_json,
    unsat_proof,
)
from .semantics import AtomModel, canonical_model

DEFAULT_COUNTERMODEL_LIMIT = 4


@dataclass(frozen=True)
class Entailed:
    proof: Proof
    vacuous: bool = False

    is_entailed = True

    def to_json(self) -> dict:
        return {"verdict": "entailed", "vacuous": self.vacuous, "proof": to_json(self.proof)}


@dataclass(frozen=True)
class NotEntailed:
    countermodel: Optional[AtomModel] = None

    is_entailed = False

    def to_json(self) -> dict:
        return {"verdict": "not-entailed", "countermodel": _model_json(self.countermodel)}


Decision = Union[Entailed, NotEntailed]


@dataclass(frozen=True)
class Sat:
    model: Optional[AtomModel] = None

    is_satisfiable = True

    def to_json(self) -> dict:
        return {"verdict": "sat", "model": _model_json(self.model)}


@dataclass(frozen=True)
class Unsat:
    proof: Proof

    is_satisfiable = False

    def to_json(self) -> dict:
        return {"verdict": "unsat", "proof": to_json(self.proof)}


SatResult = Union[Sat, Unsat]


def _model_json(m: Optional[AtomModel]):
    if m is None:
        return None
    return sorted(sorted(g.name for g in p) for p in m.inhabited)


class Rcc5(enum.Enum):
    DC = "DC"
    PO = "PO"
    EQ = "EQ"
    PP = "PP"
    PPI = "PPI"
    EQE = "EQE"
    PPE = "PPE"
    PPIE = "PPIE"

    def __str__(self):
        return self.value


# <Sub(g1,g2), Sub(g2,g1), Disj(g1,g2)> for each relation.
RCC5_TABLE: dict[Rcc5, tuple[bool, bool, bool]] = {
    Rcc5.DC: (False, False, True),
    Rcc5.PO: (False, False, False),
    Rcc5.EQ: (True, True, False),
    Rcc5.PP: (True, False, False),
    Rcc5.PPI: (False, True, False),
    Rcc5.EQE: (True, True, True),
    Rcc5.PPE: (True, False, True),
    Rcc5.PPIE: (False, True, True),
}


@dataclass(frozen=True)
class StateVector:
    """Three-valued ``<Sub(g1,g2), Sub(g2,g1), Disj(g1,g2)>``; None means unknown."""

    sub12: Optional[bool]
    sub21: Optional[bool]
    disj: Optional[bool]

    def entries(self) -> tuple[Optional[bool], Optional[bool], Optional[bool]]:
        return (self.sub12, self.sub21, self.disj)

    @property
    def complete(self) -> bool:
        return None not in self.entries()

    def __str__(self):
        names = {True: "true", False: "false", None: "unknown"}
        return "<" + ",".join(names[v] for v in self.entries()) + ">"


def rcc5_classify(v: StateVector) -> frozenset[Rcc5]:
    return frozenset(
        r
        for r, row in RCC5_TABLE.items()
        if all(e is None or e == t for e, t in zip(v.entries(), row))
    )


class Reasoner:
    """Answers queries about one schema, caching the graph work they share."""

    def __init__(self, schema: Schema, countermodel_limit: Optional[int] = DEFAULT_COUNTERMODEL_LIMIT):
        self.schema = schema
        self.positive = schema.positive_part()
        self.graph = SmasGraph(self.positive)
        self.countermodel_limit = countermodel_limit
        self._sat: Optional[SatResult] = None
        self._extended: dict[Constraint, "Reasoner"] = {}

    def _check(self, c: Constraint):
        if not c.is_ground:
            raise ValueError(f"query {c} is not ground")
        for g in c.atom.terms():
            if g not in self.schema.universe:
                raise KeyError(f"unknown granule {g}")

    def _want_model(self) -> bool:
        limit = self.countermodel_limit
        return limit is not None and len(self.schema.named) <= limit

    def positive_unsat_proof(self) -> Optional[Proof]:
        if not self.graph.is_unsatisfiable():
            return None
        return unsat_proof(self.positive, self.graph)

    def entails_positive(self, c: Constraint) -> Decision:
        """Entailment of a positive constraint by the positive part alone."""
        self._check(c)
        if not c.positive:
            raise ValueError("entails_positive needs a positive constraint")
        u = self.positive_unsat_proof()
        if u is not None:
            return Entailed(u, vacuous=True)
        p = positive_proof(c, self.graph)
        if p is not None:
            return Entailed(p)
        model = canonical_model(self.positive, self.graph) if self._want_model() else None
        return NotEntailed(model)

    def check_satisfiable(self) -> SatResult:
        if self._sat is None:
            self._sat = self._decide_sat()
        return self._sat

    def _decide_sat(self) -> SatResult:
        u = self.positive_unsat_proof()
        if u is not None:
            return Unsat(u)
        for neg in sorted(self.schema.neg):
            p = positive_proof(~neg, self.graph)
            if p is not None:
                return Unsat(complement_pair(p, Proof.axiom(neg)))
        return Sat(canonical_model(self.positive, self.graph) if self._want_model() else None)

    def _with(self, beta: Constraint) -> "Reasoner":
        r = self._extended.get(beta)
        if r is None:
            r = Reasoner(self.schema.with_constraints(beta), countermodel_limit=self.countermodel_limit)
            self._extended[beta] = r
        return r

    def entails(self, c: Constraint) -> Decision:
        self._check(c)
        sat = self.check_satisfiable()
        if not sat.is_satisfiable:
            return Entailed(sat.proof, vacuous=True)
        if c.positive:
            return self.entails_positive(c)
        beta = ~c
        ext = self._with(beta)
        u = ext.positive_unsat_proof()
        if u is not None:
            return Entailed(contrapose(u, beta))
        for neg in sorted(self.schema.neg):
            p = positive_proof(~neg, ext.graph)
            if p is not None:
                # beta is always a leaf here: without it the schema itself
                # would be unsatisfiable.
                return Entailed(contrapose(p, beta))
        model = canonical_model(ext.positive, ext.graph) if self._want_model() else None
        return NotEntailed(model)

    def closure(self) -> frozenset[Constraint]:
        if not self.check_satisfiable().is_satisfiable:
            return frozenset(all_constraints(self.schema.universe))
        out = set()
        for c in all_constraints(self.schema.universe):
            if c.positive:
                if self._entails_positive_fast(c):
                    out.add(c)
            elif self._entails_negative_fast(~c):
                out.add(c)
        return frozenset(out)

    # Closure and state vectors only need verdicts, so they skip proof building.

    def _entails_positive_fast(self, c: Constraint) -> bool:
        if c.pred is Pred.SUB:
            return self.graph.entails_sub(c.left, c.right)
        return self.graph.entails_disj(c.left, c.right)

    def _entails_negative_fast(self, beta: Constraint) -> bool:
        ext = self._with(beta)
        if ext.graph.is_unsatisfiable():
            return True
        return any(ext._entails_positive_fast(~neg) for neg in self.schema.neg)

    def holds_entailed(self, c: Constraint) -> bool:
        """Verdict only (no proof, no countermodel)."""
        self._check(c)
        if not self.check_satisfiable().is_satisfiable:
            return True
        if c.positive:
            return self._entails_positive_fast(c)
        return self._entails_negative_fast(~c)

    def state(self, c: Constraint) -> Optional[bool]:
        if self.holds_entailed(c):
            return True
        if self.holds_entailed(~c):
            return False
        return None

    def state_vector(self, g1: Granule, g2: Granule) -> StateVector:
        return StateVector(self.state(Sub(g1, g2)), self.state(Sub(g2, g1)), self.state(Disj(g1, g2)))

    def classify(self, g1: Granule, g2: Granule) -> frozenset[Rcc5]:
        return rcc5_classify(self.state_vector(g1, g2))


def entails_positive(s: Schema, c: Constraint, **kw) -> Decision:
    return Reasoner(s, **kw).entails_positive(c)


def check_satisfiable(s: Schema, **kw) -> SatResult:
    return Reasoner(s, **kw).check_satisfiable()


def entails(s: Schema, c: Constraint, **kw) -> Decision:
    return Reasoner(s, **kw).entails(c)


def closure(s: Schema) -> frozenset[Constraint]:
    return Reasoner(s, countermodel_limit=None).closure()


def state_vector(s: Schema, g1: Granule, g2: Granule) -> StateVector:
    return Reasoner(s, countermodel_limit=None).state_vector(g1, g2)
