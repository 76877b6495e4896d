"""Subsumption and disjointness reasoning over granule schemas."""

from .core import (
    BOT,
    TOP,
    Atom,
    Constraint,
    Disj,
    Granule,
    Kind,
    Pred,
    Schema,
    Sub,
    SyntacticClass,
    Var,
    classify,
    granule,
    granules,
    negate,
    normalize,
    substitute,
)
from .dsl import ParseError, format_schema, parse_constraint, parse_schema
from .engine import (
    Entailed,
    NotEntailed,
    Rcc5,
    Reasoner,
    Sat,
    StateVector,
    Unsat,
    check_satisfiable,
    closure,
    entails,
    entails_positive,
    rcc5_classify,
    state_vector,
)
from .graph import SmasGraph
from .proofs import BFULL, BPOS, FALSE, TRUE, Proof, RuleId, contrapose, single_use, validate
from .semantics import AtomModel, Mode, canonical_model, holds, oracle_entails, oracle_satisfiable

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "AtomModel",
    "BFULL",
    "BOT",
    "BPOS",
    "Constraint",
    "Disj",
    "Entailed",
    "FALSE",
    "Granule",
    "Kind",
    "Mode",
    "NotEntailed",
    "ParseError",
    "Pred",
    "Proof",
    "Rcc5",
    "Reasoner",
    "RuleId",
    "Sat",
    "Schema",
    "SmasGraph",
    "StateVector",
    "Sub",
    "SyntacticClass",
    "TOP",
    "TRUE",
    "Unsat",
    "Var",
    "canonical_model",
    "check_satisfiable",
    "classify",
    "closure",
    "contrapose",
    "entails",
    "entails_positive",
    "format_schema",
    "granule",
    "granules",
    "holds",
    "negate",
    "normalize",
    "oracle_entails",
    "oracle_satisfiable",
    "parse_constraint",
    "parse_schema",
    "rcc5_classify",
    "single_use",
    "state_vector",
    "substitute",
    "validate",
]
