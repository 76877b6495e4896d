"""Command-line front end.

Every command reads a ``.gl`` schema document.  Results go to stdout as
JSON except for ``model`` (pattern dump) and ``graph`` (DOT).  Exit status
2 always means an input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .core import granule
from .dsl import ParseError, load, parse_constraint
from .engine import Reasoner, RCC5_TABLE
from .graph import SmasGraph
from .proofs import render_dot, render_text, to_json
from .semantics import UnsatisfiableError, canonical_model

EXIT_ERROR = 2


def _render_proof(proof, fmt: str):
    if fmt == "text":
        return render_text(proof)
    if fmt == "dot":
        return render_dot(proof)
    return to_json(proof)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_entail(args) -> int:
    schema = load(args.file)
    query = parse_constraint(args.constraint, schema.universe)
    decision = Reasoner(schema).entails(query)
    out = {"query": str(query), **decision.to_json()}
    if decision.is_entailed:
        out["proof"] = _render_proof(decision.proof, args.prove)
    _emit(out)
    return 0 if decision.is_entailed else 1


def cmd_sat(args) -> int:
    schema = load(args.file)
    result = Reasoner(schema).check_satisfiable()
    out = result.to_json()
    if not result.is_satisfiable:
        out["proof"] = _render_proof(result.proof, args.prove)
    _emit(out)
    return 0 if result.is_satisfiable else 1


def cmd_closure(args) -> int:
    schema = load(args.file)
    r = Reasoner(schema, countermodel_limit=None)
    sat = r.check_satisfiable().is_satisfiable
    members = sorted(r.closure())
    _emit({"verdict": "sat" if sat else "unsat", "closure": [str(c) for c in members]})
    return 0


def cmd_classify(args) -> int:
    schema = load(args.file)
    g1, g2 = granule(args.g1), granule(args.g2)
    for g in (g1, g2):
        if g not in schema.universe:
            raise KeyError(f"unknown granule {g}")
    r = Reasoner(schema, countermodel_limit=None)
    v = r.state_vector(g1, g2)
    rels = r.classify(g1, g2)
    names = {True: "true", False: "false", None: "unknown"}
    _emit(
        {
            "pair": [str(g1), str(g2)],
            "vector": [names[e] for e in v.entries()],
            "relations": [str(x) for x in RCC5_TABLE if x in rels],
        }
    )
    return 0


def cmd_model(args) -> int:
    schema = load(args.file)
    r = Reasoner(schema, countermodel_limit=None)
    result = r.check_satisfiable()
    if not result.is_satisfiable:
        sys.stderr.write("schema is unsatisfiable; no model\n")
        return 1
    sys.stdout.write(canonical_model(schema, r.graph).dump())
    return 0


def cmd_graph(args) -> int:
    schema = load(args.file)
    text = SmasGraph(schema).to_dot(include_tautologies=args.tautologies)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="granlogic",
        description="Reason about subsumption and disjointness constraints between granules.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="schema document (.gl)")
        return sp

    sp = with_file("entail", "decide whether the schema entails a constraint")
    sp.add_argument("constraint", help='query, e.g. "!Sub(g3,g4)"')
    sp.add_argument("--prove", choices=("json", "text", "dot"), default="json")
    sp.set_defaults(func=cmd_entail)

    sp = with_file("sat", "decide satisfiability")
    sp.add_argument("--prove", choices=("json", "text", "dot"), default="json")
    sp.set_defaults(func=cmd_sat)

    with_file("closure", "list every entailed constraint").set_defaults(func=cmd_closure)

    sp = with_file("classify", "RCC5+ relations possible between two granules")
    sp.add_argument("g1")
    sp.add_argument("g2")
    sp.set_defaults(func=cmd_classify)

    with_file("model", "print a canonical model, one inhabited pattern per line").set_defaults(
        func=cmd_model
    )

    sp = with_file("graph", "export the subsumption/disjointness graph")
    sp.add_argument("--dot", action="store_true", help="DOT output (the only format)")
    sp.add_argument("--out", help="write to this path instead of stdout")
    sp.add_argument("--tautologies", action="store_true", help="include tautology edges")
    sp.set_defaults(func=cmd_graph)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    try:
        return args.func(args)
    except ParseError as e:
        sys.stderr.write(f"parse error at {e}\n")
    except (OSError, KeyError, ValueError, UnsatisfiableError) as e:
        sys.stderr.write(f"error: {e}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
