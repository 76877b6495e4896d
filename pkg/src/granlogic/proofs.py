"""Inference rules, proof trees and the constructive proof builders.

A proof is a tree of ``Proof`` nodes.  Leaves are either axioms (a
constraint taken as given) or the artificial ``TRUE`` leaf that sits under
every rule with no antecedents.  Every inner node records the rule used and
the ground substitution that instantiates it, so checking a proof never has
to guess at a match.

All traversals are iterative; left-linear proofs over long chains are
thousands of levels deep.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, Union

from .core import (
    BOT,
    TOP,
    Constraint,
    Disj,
    Granule,
    Pred,
    Schema,
    Sub,
    substitute,
)
from .graph import Path, SelfDisjointWitness, SmasGraph, steps


class Truth(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"

    def __invert__(self):
        return Truth.FALSE if self is Truth.TRUE else Truth.TRUE

    def __str__(self):
        return self.value


TRUE = Truth.TRUE
FALSE = Truth.FALSE

Formula = Union[Constraint, Truth]


def negate_formula(f: Formula) -> Formula:
    return ~f


class RuleId(enum.Enum):
    I1 = "I1"
    I2 = "I2"
    M1 = "M1"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    U1 = "U1"
    D1 = "D1"
    M2 = "M2"
    U2 = "U2"
    I2sa = "I2-sa"
    I2sb = "I2-sb"
    M1sa = "M1-sa"
    M1sb = "M1-sb"
    U1s = "U1-s"
    C1 = "C1"
    C2 = "C2"
    AXIOM = "Axiom"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Rule:
    """A rule schematic over granule variables.

    ``nonbottom`` lists the variables that may not be bound to bottom.
    """

    id: Optional[RuleId]
    antecedents: tuple[Constraint, ...]
    consequent: Formula
    nonbottom: frozenset[int] = frozenset()

    @property
    def variables(self) -> frozenset[int]:
        vs: set[int] = set()
        for a in self.antecedents:
            vs |= a.variables()
        if isinstance(self.consequent, Constraint):
            vs |= self.consequent.variables()
        return frozenset(vs)

    def same_schematic(self, other: "Rule") -> bool:
        return (
            Counter(self.antecedents) == Counter(other.antecedents)
            and self.consequent == other.consequent
            and self.nonbottom == other.nonbottom
        )

    def instantiate(self, subst: Mapping[int, Granule]) -> tuple[list[Constraint], Formula]:
        ants = [substitute(a, subst) for a in self.antecedents]
        cons = self.consequent
        if isinstance(cons, Constraint):
            cons = substitute(cons, subst)
        return ants, cons

    def __str__(self):
        ants = ", ".join(map(str, self.antecedents)) or "TRUE"
        side = ""
        if self.nonbottom:
            side = "  if " + ", ".join(f"?{v} != bot" for v in sorted(self.nonbottom))
        return f"({self.id}) {ants} |- {self.consequent}{side}"


def swap_rule(rule: Rule, position: int) -> Rule:
    """Exchange antecedent ``position`` with the consequent, negating both.

    A FALSE consequent contributes no antecedent (its negation is TRUE).
    """
    if not rule.antecedents:
        raise ValueError(f"rule {rule.id} has no antecedents to swap")
    if not 0 <= position < len(rule.antecedents):
        raise IndexError(f"rule {rule.id} has no antecedent {position}")
    ants = list(rule.antecedents)
    swapped_out = ants[position]
    if rule.consequent is FALSE:
        del ants[position]
    else:
        ants[position] = ~rule.consequent
    return Rule(None, tuple(ants), ~swapped_out, rule.nonbottom)


def _base_rules() -> dict[RuleId, Rule]:
    # Variable numbering: for M1, 0 is g1, 1 is g1' and 2 is g2.
    R = RuleId
    return {
        R.I1: Rule(R.I1, (), Sub(0, 0)),
        R.I2: Rule(R.I2, (Sub(0, 1), Sub(1, 2)), Sub(0, 2)),
        R.M1: Rule(R.M1, (Sub(0, 1), Disj(1, 2)), Disj(0, 2)),
        R.D1: Rule(R.D1, (Disj(0, 0),), Disj(0, 1)),
        R.M2: Rule(R.M2, (Disj(0, 0),), Sub(0, 1)),
        R.T1: Rule(R.T1, (), Disj(BOT, 0)),
        R.T2: Rule(R.T2, (), Sub(BOT, 0)),
        R.T3: Rule(R.T3, (), Sub(0, TOP)),
        R.U1: Rule(R.U1, (Disj(0, 0),), FALSE, frozenset({0})),
        R.U2: Rule(R.U2, (Sub(0, BOT),), FALSE, frozenset({0})),
        R.C1: Rule(R.C1, (Sub(0, 1), ~Sub(0, 1)), FALSE),
        R.C2: Rule(R.C2, (Disj(0, 1), ~Disj(0, 1)), FALSE),
    }


def _build_catalog() -> dict[RuleId, Rule]:
    rules = _base_rules()
    R = RuleId
    for name, base, pos in (
        (R.I2sa, R.I2, 1),
        (R.I2sb, R.I2, 0),
        (R.M1sa, R.M1, 1),
        (R.M1sb, R.M1, 0),
        (R.U1s, R.U1, 0),
    ):
        rules[name] = replace(swap_rule(rules[base], pos), id=name)
    return rules


CATALOG: dict[RuleId, Rule] = _build_catalog()


def _swap_table() -> dict[tuple[RuleId, int], RuleId]:
    table = {}
    for rid, rule in CATALOG.items():
        for i in range(len(rule.antecedents)):
            s = swap_rule(rule, i)
            for other in CATALOG.values():
                if other.same_schematic(s):
                    table[(rid, i)] = other.id
                    break
    return table


SWAPS: dict[tuple[RuleId, int], RuleId] = _swap_table()


class RuleSet(frozenset):
    """A named set of rule ids.  Axioms are always admissible."""

    name: str = ""

    def __new__(cls, name: str, ids: Iterable[RuleId]):
        obj = super().__new__(cls, ids)
        obj.name = name
        return obj

    def __repr__(self):
        return f"RuleSet({self.name})"


_R = RuleId
QPOS = RuleSet("QPos", {_R.I1, _R.I2, _R.D1, _R.M1, _R.M2})
SQPOS = RuleSet("SQPos", QPOS | {_R.T1, _R.T2, _R.T3})
SQPOS_EXT = RuleSet("SQPosExt", SQPOS | {_R.U1, _R.U2})
BPOS = RuleSet("BPos", {_R.I2, _R.M1, _R.I1, _R.T1, _R.T2, _R.T3, _R.U1})
BFULL = RuleSet(
    "BFull", BPOS | {_R.I2sa, _R.I2sb, _R.M1sa, _R.M1sb, _R.U1s, _R.C1, _R.C2}
)
RULESETS = {rs.name: rs for rs in (QPOS, SQPOS, SQPOS_EXT, BPOS, BFULL)}


# ---------------------------------------------------------------------------
# Proof trees


@dataclass(frozen=True, eq=False, repr=False)
class Proof:
    conclusion: Formula
    rule: RuleId
    subst: tuple[tuple[int, Granule], ...] = ()
    premises: tuple["Proof", ...] = ()
    _hash: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        h = hash((self.conclusion, self.rule, self.subst, tuple(hash(p) for p in self.premises)))
        object.__setattr__(self, "_hash", h)

    @staticmethod
    def axiom(c: Constraint) -> "Proof":
        return Proof(c, RuleId.AXIOM)

    @staticmethod
    def true_leaf() -> "Proof":
        return Proof(TRUE, RuleId.AXIOM)

    @staticmethod
    def step(rule: RuleId, subst: Mapping[int, Granule], premises: Iterable["Proof"] = ()) -> "Proof":
        """Apply ``rule`` under ``subst``; the conclusion is computed from the schematic."""
        premises = tuple(premises)
        schematic = CATALOG[rule]
        if not schematic.antecedents and not premises:
            premises = (Proof.true_leaf(),)
        _, cons = schematic.instantiate(subst)
        return Proof(cons, rule, tuple(sorted(subst.items())), premises)

    @property
    def is_leaf(self) -> bool:
        return not self.premises

    @property
    def is_axiom(self) -> bool:
        return self.rule is RuleId.AXIOM and isinstance(self.conclusion, Constraint)

    @property
    def substitution(self) -> dict[int, Granule]:
        return dict(self.subst)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Proof):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if (
                a._hash != b._hash
                or a.conclusion != b.conclusion
                or a.rule is not b.rule
                or a.subst != b.subst
                or len(a.premises) != len(b.premises)
            ):
                return False
            stack.extend(zip(a.premises, b.premises))
        return True

    def nodes(self) -> Iterator["Proof"]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.premises))

    def postorder(self) -> list["Proof"]:
        out, stack = [], [(self, False)]
        while stack:
            n, done = stack.pop()
            if done:
                out.append(n)
                continue
            stack.append((n, True))
            stack.extend((p, False) for p in reversed(n.premises))
        return out

    def depth(self) -> int:
        best, stack = 0, [(self, 0)]
        while stack:
            n, d = stack.pop()
            best = max(best, d)
            stack.extend((p, d + 1) for p in n.premises)
        return best

    def rules_used(self) -> set[RuleId]:
        return {n.rule for n in self.nodes() if n.rule is not RuleId.AXIOM}

    def __str__(self):
        return render_text(self)

    def __repr__(self):
        # Shallow on purpose: the dataclass repr recurses through every premise.
        return f"Proof({self.conclusion} by {self.rule}, {len(self.premises)} premises)"


def antecedents(t: Proof) -> Counter:
    """The multiset of axiom leaves."""
    return Counter(n.conclusion for n in t.nodes() if n.is_axiom)


def single_use(t: Proof) -> bool:
    return all(k == 1 for k in antecedents(t).values())


def diagnose(t: Proof, rules: Iterable[RuleId]) -> Optional[str]:
    """None if ``t`` is a well-formed proof using only ``rules``; else what is wrong and where.

    The location is the sequence of premise indices from the root.
    """
    allowed = frozenset(rules)
    stack: list[tuple[Proof, tuple[int, ...], bool]] = [(t, (), True)]
    while stack:
        n, where, may_be_true = stack.pop()
        loc = "/".join(map(str, where)) or "root"
        if n.rule is RuleId.AXIOM:
            if n.premises or n.subst:
                return f"{loc}: axiom leaf with premises or substitution"
            if n.conclusion is TRUE:
                if not may_be_true:
                    return f"{loc}: TRUE leaf outside an empty-antecedent rule"
            elif not isinstance(n.conclusion, Constraint) or not n.conclusion.is_ground:
                return f"{loc}: axiom {n.conclusion} is not a ground constraint"
            continue
        if n.rule not in allowed:
            return f"{loc}: rule {n.rule} not in rule set"
        schematic = CATALOG[n.rule]
        subst = dict(n.subst)
        if len(subst) != len(n.subst) or set(subst) != set(schematic.variables):
            return f"{loc}: substitution does not bind exactly the variables of {n.rule}"
        if not all(isinstance(g, Granule) for g in subst.values()):
            return f"{loc}: substitution is not ground"
        for v in schematic.nonbottom:
            if subst[v] == BOT:
                return f"{loc}: side condition ?{v} != bot violated"
        ants, cons = schematic.instantiate(subst)
        if cons != n.conclusion:
            return f"{loc}: conclusion {n.conclusion} does not match {n.rule} (expected {cons})"
        if len(set(ants)) != len(ants):
            return f"{loc}: instance of {n.rule} lists an antecedent twice"
        if not ants:
            if len(n.premises) != 1 or n.premises[0].conclusion is not TRUE:
                return f"{loc}: {n.rule} takes exactly one TRUE leaf"
            stack.append((n.premises[0], where + (0,), True))
            continue
        got = Counter(p.conclusion for p in n.premises)
        if got != Counter(ants):
            shown = ", ".join(str(p.conclusion) for p in n.premises)
            return f"{loc}: premises [{shown}] do not match {n.rule} antecedents"
        for i, p in enumerate(n.premises):
            stack.append((p, where + (i,), False))
    if t.conclusion is TRUE:
        return "root: TRUE is not a conclusion"
    return None


def validate(t: Proof, rules: Iterable[RuleId]) -> bool:
    return diagnose(t, rules) is None


# ---------------------------------------------------------------------------
# Constructors


def _tautology_step(c: Constraint) -> Optional[Proof]:
    a, b = c.left, c.right
    if c.pred is Pred.SUB:
        if a == b:
            return Proof.step(RuleId.I1, {0: a})
        if a == BOT:
            return Proof.step(RuleId.T2, {0: b})
        if b == TOP:
            return Proof.step(RuleId.T3, {0: a})
    elif a == BOT:
        return Proof.step(RuleId.T1, {0: b})
    return None


def step_proof(c: Constraint, given: frozenset[Constraint]) -> Proof:
    """A declared constraint as an axiom, else a tautology as a rule node."""
    if c in given:
        return Proof.axiom(c)
    t = _tautology_step(c)
    if t is None:
        raise ValueError(f"{c} is neither given nor a tautology")
    return t


def left_linear(path: Path, schema: Schema | Iterable[Constraint]) -> Proof:
    """Left-nested chain of I2 steps proving ``Sub(path[0], path[-1])``."""
    given = _positive(schema)
    if len(path) < 2:
        raise ValueError("a subsumption path has at least two vertices")
    cs = steps(path)
    cur = step_proof(cs[0], given)
    for i, c in enumerate(cs[1:], start=1):
        cur = Proof.step(
            RuleId.I2, {0: path[0], 1: path[i], 2: path[i + 1]}, (cur, step_proof(c, given))
        )
    return cur


def _positive(schema) -> frozenset[Constraint]:
    cs = schema.constraints if isinstance(schema, Schema) else schema
    return frozenset(c for c in cs if c.positive)


def _disj_from_paths(p_left: Path, p_right: Path, edge_proof: Proof, given) -> Proof:
    """``Disj(p_left[0], p_right[0])`` from paths into the ends of ``edge_proof``.

    ``edge_proof`` concludes ``Disj(p_left[-1], p_right[-1])``.
    """
    g1, a = p_left[0], p_left[-1]
    g2, b = p_right[0], p_right[-1]
    cur = edge_proof
    if g2 != b:
        cur = Proof.step(RuleId.M1, {0: g2, 1: b, 2: a}, (left_linear(p_right, given), cur))
    if g1 != a:
        cur = Proof.step(RuleId.M1, {0: g1, 1: a, 2: g2}, (left_linear(p_left, given), cur))
    return cur


def disjointness_proof(g1: Granule, g2: Granule, graph: SmasGraph) -> Proof:
    """Proof of ``Disj(g1, g2)`` from the positive part of the graph's schema.

    The four shapes: the constraint itself, the bottom tautology, one path
    into a declared disjointness, or two paths into one.
    """
    given = _positive(graph.schema)
    target = Disj(g1, g2)
    if target in given:
        return Proof.axiom(target)
    if g1 == BOT or g2 == BOT:
        return _tautology_step(target)
    if g1 == g2:
        raise ValueError(f"{target} does not follow")
    prot = graph.find_protector(g1, g2)
    if prot is None:
        raise ValueError(f"{target} does not follow")
    edge = Disj(*prot.edge)
    return _disj_from_paths(prot.path_a, prot.path_b, Proof.axiom(edge), given)


def self_disjoint_proof(w: SelfDisjointWitness, given) -> Proof:
    if w.edge[0] == BOT:
        edge_proof = step_proof(Disj(BOT, w.edge[1]), frozenset(given))
    else:
        edge_proof = Proof.axiom(Disj(*w.edge))
    return _disj_from_paths(w.path_a, w.path_b, edge_proof, given)


def unsat_proof(schema: Schema, graph: Optional[SmasGraph] = None) -> Proof:
    """U1-terminated proof that the positive constraints of ``schema`` have no full model."""
    graph = graph or SmasGraph(schema)
    w = graph.unsat_witness()
    if w is None:
        raise ValueError("positive constraints are satisfiable")
    given = _positive(schema)
    inner = self_disjoint_proof(w, given)
    return Proof.step(RuleId.U1, {0: w.base}, (inner,))


def positive_proof(c: Constraint, graph: SmasGraph) -> Optional[Proof]:
    """Proof of positive ``c`` from a satisfiable positive set, or None if it does not follow."""
    if not c.positive:
        raise ValueError("positive_proof needs a positive constraint")
    if c.pred is Pred.SUB:
        p = graph.sub_star(c.left, c.right)
        if p is None:
            return None
        return left_linear(p, graph.schema)
    try:
        return disjointness_proof(c.left, c.right, graph)
    except ValueError:
        return None


def complement_pair(positive: Proof, negative: Proof) -> Proof:
    """FALSE from proofs of some constraint and of its negation."""
    c = positive.conclusion
    rule = RuleId.C1 if c.pred is Pred.SUB else RuleId.C2
    return Proof.step(rule, {0: c.left, 1: c.right}, (positive, negative))


# ---------------------------------------------------------------------------
# Contraposition


def _path_to_leaf(t: Proof, leaf: Constraint) -> list[int]:
    hits: list[list[int]] = []
    stack: list[tuple[Proof, list[int]]] = [(t, [])]
    while stack:
        n, where = stack.pop()
        if n.is_axiom and n.conclusion == leaf:
            hits.append(where)
        for i, p in enumerate(n.premises):
            stack.append((p, where + [i]))
    if not hits:
        raise ValueError(f"{leaf} is not an antecedent of the proof")
    if len(hits) > 1:
        raise ValueError(f"{leaf} is used {len(hits)} times; contraposition needs a single use")
    return hits[0]


def contrapose(t: Proof, leaf: Constraint) -> Proof:
    """Turn a proof of β from A ∪ {leaf} into a proof of ¬leaf from A ∪ {¬β}.

    When β is FALSE the ¬β antecedent is simply absent.  Every rule between
    the root and the leaf is replaced by its swap.
    """
    where = _path_to_leaf(t, leaf)
    cur: Optional[Proof] = None if t.conclusion is FALSE else Proof.axiom(~t.conclusion)
    node = t
    for i in where:
        child = node.premises[i]
        swapped = SWAPS.get((node.rule, i))
        if swapped is None:
            raise ValueError(f"rule {node.rule} has no swap at antecedent {i} in the catalog")
        premises = list(node.premises)
        if cur is None:
            del premises[i]
        else:
            premises[i] = cur
        if not premises:
            premises = [Proof.true_leaf()]
        cur = Proof(~child.conclusion, swapped, node.subst, tuple(premises))
        node = child
    if cur is None:
        raise ValueError("cannot contrapose FALSE against itself")
    return cur


# ---------------------------------------------------------------------------
# Rendering


def _indexed(t: Proof) -> tuple[list[Proof], list[list[int]]]:
    """Preorder node list plus child index lists; shared subtrees are counted per occurrence."""
    nodes: list[Proof] = []
    children: list[list[int]] = []
    stack: list[tuple[Proof, int]] = [(t, -1)]
    while stack:
        n, parent = stack.pop()
        k = len(nodes)
        nodes.append(n)
        children.append([])
        if parent >= 0:
            children[parent].append(k)
        stack.extend((p, k) for p in reversed(n.premises))
    return nodes, children


def _labels(nodes: list[Proof], children: list[list[int]]) -> dict[int, str]:
    """Instance labels d1, d2, ... for rule nodes in postorder."""
    order: list[int] = []
    stack = [(0, False)]
    while stack:
        k, done = stack.pop()
        if done:
            order.append(k)
            continue
        stack.append((k, True))
        stack.extend((c, False) for c in reversed(children[k]))
    out = {}
    for k in order:
        if nodes[k].rule is not RuleId.AXIOM:
            out[k] = f"d{len(out) + 1}"
    return out


def render_text(t: Proof) -> str:
    """Indented text, one node per line, premises below their conclusion."""
    nodes, children = _indexed(t)
    labels = _labels(nodes, children)
    depth = [0] * len(nodes)
    lines = []
    for k, n in enumerate(nodes):
        for c in children[k]:
            depth[c] = depth[k] + 1
        if n.rule is RuleId.AXIOM:
            tag = "[axiom]" if n.is_axiom else ""
        else:
            binds = ", ".join(f"?{v}={g}" for v, g in n.subst)
            tag = f"[{n.rule} {labels[k]}: {binds}]"
        lines.append(f"{'  ' * depth[k]}{n.conclusion}  {tag}".rstrip())
    return "\n".join(lines) + "\n"


def render_dot(t: Proof, name: str = "proof") -> str:
    """Graphviz digraph: one vertex per node, edges from conclusion to premises.

    Edges carry the instance label and rule name of the step they belong to.
    """
    nodes, children = _indexed(t)
    labels = _labels(nodes, children)
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for k, n in enumerate(nodes):
        shape = "box" if n.is_axiom else "plaintext"
        lines.append(f'  n{k} [label="{n.conclusion}", shape={shape}];')
    for k, n in enumerate(nodes):
        for c in children[k]:
            lines.append(f'  n{k} -> n{c} [label="{labels[k]} {n.rule}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(t: Proof) -> dict:
    """Nested JSON-ready dict."""
    nodes, children = _indexed(t)
    built: list[dict] = [{} for _ in nodes]
    for k in reversed(range(len(nodes))):
        n = nodes[k]
        d = built[k]
        d["conclusion"] = str(n.conclusion)
        d["rule"] = str(n.rule)
        if n.subst:
            d["subst"] = {f"?{v}": str(g) for v, g in n.subst}
        if children[k]:
            d["premises"] = [built[c] for c in children[k]]
    return built[0]


def render_json(t: Proof) -> str:
    return json.dumps(to_json(t), indent=2)
