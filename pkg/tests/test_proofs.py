import json
import re
from pathlib import Path

import pytest

from granlogic.core import BOT, TOP, Disj, Schema, Sub, granules
from granlogic.engine import Reasoner
from granlogic.graph import SmasGraph
from granlogic.proofs import (
    BFULL,
    BPOS,
    CATALOG,
    FALSE,
    SWAPS,
    TRUE,
    Proof,
    Rule,
    RuleId,
    antecedents,
    complement_pair,
    contrapose,
    diagnose,
    disjointness_proof,
    left_linear,
    render_dot,
    render_json,
    render_text,
    single_use,
    swap_rule,
    to_json,
    unsat_proof,
    validate,
)

from worked import (
    CHAIN5,
    CHAIN5_TREE,
    CYCLIC,
    NEGINF1,
    NEGINF1_TREE,
    NEGINF2,
    NEGINF2_TREE,
    PDEDUCTSAT,
    PDEDUCTSAT_TREE,
    PDEDUCTUNSAT,
    PDEDUCTUNSAT_TREE,
    SINGLE2_TREE,
    canon,
    tree_shape,
)

DATA = Path(__file__).parent / "data"
g, g1, g2, g3, g4, g5, g6 = granules("g g1 g2 g3 g4 g5 g6")
R = RuleId


def chain_proof():
    return left_linear((g1, g2, g3, g4, g5), CHAIN5)


def test_validate_chain():
    t = chain_proof()
    assert validate(t, BPOS)
    assert tree_shape(t) == canon(CHAIN5_TREE)


def test_validate_rejects_altered_consequent():
    t = chain_proof()
    inner = t.premises[0]
    bad = Proof(Sub(g5, g1), inner.rule, inner.subst, inner.premises)
    broken = Proof(t.conclusion, t.rule, t.subst, (bad, t.premises[1]))
    assert not validate(broken, BPOS)
    assert "do not match" in diagnose(broken, BPOS)


def test_validate_rejects_u1_on_bottom():
    t = Proof(FALSE, R.U1, ((0, BOT),), (Proof.axiom(Disj(BOT, BOT)),))
    assert "side condition" in diagnose(t, BPOS)


def test_validate_rejects_rules_outside_the_set():
    t = Proof.step(R.U1s, {0: g1})
    assert validate(t, BFULL)
    assert not validate(t, BPOS)


def test_validate_rejects_misplaced_true_leaf():
    t = Proof.step(R.I2, {0: g1, 1: g2, 2: g3}, (Proof.true_leaf(), Proof.axiom(Sub(g2, g3))))
    assert not validate(t, BPOS)
    assert not validate(Proof.true_leaf(), BPOS)


def test_single_use_examples():
    multi = left_linear((g1, g2, g3, g2, g3, g4), CYCLIC)
    assert validate(multi, BPOS)
    assert not single_use(multi)
    assert antecedents(multi)[Sub(g2, g3)] == 2
    single = left_linear(SmasGraph(CYCLIC).sub_star(g1, g4), CYCLIC)
    assert single_use(single)
    assert tree_shape(single) == canon(SINGLE2_TREE)
    assert single_use(Proof.axiom(Sub(g1, g2)))


def test_left_linear_examples():
    assert left_linear((g1, g2), CHAIN5) == Proof.axiom(Sub(g1, g2))
    t = left_linear((BOT, g), Schema.of([], extra=[g]))
    assert t.rule is R.T2 and not antecedents(t)
    t = left_linear((g1, g2, TOP), CHAIN5)
    assert validate(t, BPOS) and t.conclusion == Sub(g1, TOP)
    with pytest.raises(ValueError):
        left_linear((g2, g1), CHAIN5)


def test_disjointness_proof_examples():
    G = SmasGraph(PDEDUCTSAT)
    t = disjointness_proof(g1, granules("g5")[0], G)
    assert validate(t, BPOS) and single_use(t)
    assert tree_shape(t, merge_m1=True) == canon(PDEDUCTSAT_TREE)
    assert disjointness_proof(BOT, g1, G).rule is R.T1
    gp = granules("h")[0]
    one = disjointness_proof(g1, g2, SmasGraph(Schema.of([Sub(g1, gp), Disj(gp, g2)])))
    assert one.rule is R.M1
    assert [p.conclusion for p in one.premises] == [Sub(g1, gp), Disj(gp, g2)]
    with pytest.raises(ValueError):
        disjointness_proof(g1, g2, SmasGraph(CHAIN5))


def test_unsat_proof_examples():
    t = unsat_proof(PDEDUCTUNSAT)
    assert validate(t, BPOS) and single_use(t)
    assert tree_shape(t) == canon(PDEDUCTUNSAT_TREE)
    t = unsat_proof(Schema.of([Disj(g, g)]))
    assert t.rule is R.U1 and t.premises == (Proof.axiom(Disj(g, g)),)
    t = unsat_proof(Schema.of([Sub(g, BOT)]))
    assert validate(t, BPOS)
    assert t.rules_used() == {R.U1, R.M1, R.T1}
    assert set(antecedents(t)) == {Sub(g, BOT)}
    with pytest.raises(ValueError):
        unsat_proof(CHAIN5)


def test_swapped_rules_match_hand_transcription():
    expected = {
        R.I2sa: Rule(None, (Sub(0, 1), ~Sub(0, 2)), ~Sub(1, 2)),
        R.I2sb: Rule(None, (~Sub(0, 2), Sub(1, 2)), ~Sub(0, 1)),
        R.M1sa: Rule(None, (Sub(0, 1), ~Disj(0, 2)), ~Disj(1, 2)),
        R.M1sb: Rule(None, (~Disj(0, 2), Disj(1, 2)), ~Sub(0, 1)),
        R.U1s: Rule(None, (), ~Disj(0, 0), frozenset({0})),
    }
    for rid, rule in expected.items():
        assert CATALOG[rid].same_schematic(rule), rid
    assert SWAPS[(R.I2, 1)] is R.I2sa and SWAPS[(R.I2, 0)] is R.I2sb
    assert SWAPS[(R.M1, 1)] is R.M1sa and SWAPS[(R.M1, 0)] is R.M1sb
    assert SWAPS[(R.U1, 0)] is R.U1s


def test_swap_of_rule_without_antecedents():
    for rid in (R.I1, R.T1, R.T2, R.T3):
        with pytest.raises(ValueError):
            swap_rule(CATALOG[rid], 0)
    with pytest.raises(IndexError):
        swap_rule(CATALOG[R.I2], 2)


def test_swapping_twice_at_the_same_place_restores_the_rule():
    for rid in (R.I2, R.M1):
        rule = CATALOG[rid]
        for i in range(len(rule.antecedents)):
            assert swap_rule(swap_rule(rule, i), i).same_schematic(rule)


def test_contrapose_neginf1():
    d = Reasoner(NEGINF1).entails(~Sub(g3, g4))
    t = d.proof
    assert validate(t, BFULL) and single_use(t)
    assert tree_shape(t) == canon(NEGINF1_TREE)
    assert t.rule is R.I2sa


def test_contrapose_unit_cases():
    u = unsat_proof(Schema.of([Disj(g, g)]))
    t = contrapose(u, Disj(g, g))
    assert t.rule is R.U1s and t.conclusion == ~Disj(g, g)
    assert [p.conclusion for p in t.premises] == [TRUE]
    assert validate(t, BFULL)
    a = Proof.axiom(Sub(g1, g2))
    assert contrapose(a, Sub(g1, g2)) == Proof.axiom(~Sub(g1, g2))


def test_contrapose_contract_on_chain():
    t = chain_proof()
    for leaf in list(antecedents(t)):
        c = contrapose(t, leaf)
        assert c.conclusion == ~leaf
        expected = antecedents(t)
        del expected[leaf]
        expected[~t.conclusion] += 1
        assert antecedents(c) == expected
        assert validate(c, BFULL) and single_use(c)


def test_contrapose_errors():
    t = chain_proof()
    with pytest.raises(ValueError):
        contrapose(t, Sub(g5, g6))
    multi = left_linear((g1, g2, g3, g2, g3, g4), CYCLIC)
    with pytest.raises(ValueError):
        contrapose(multi, Sub(g2, g3))


def test_neginf2_refutation():
    r = Reasoner(NEGINF2).check_satisfiable()
    assert not r.is_satisfiable
    assert r.proof.rule is R.C2
    assert validate(r.proof, BFULL) and single_use(r.proof)
    assert tree_shape(r.proof, merge_m1=True) == canon(NEGINF2_TREE)


def test_complement_pair():
    t = complement_pair(Proof.axiom(Sub(g1, g2)), Proof.axiom(~Sub(g1, g2)))
    assert t.rule is R.C1 and t.conclusion is FALSE and validate(t, BFULL)


def test_render_text_golden():
    assert render_text(chain_proof()) == (DATA / "chain5_proof.txt").read_text()


def test_render_dot_golden():
    assert render_dot(chain_proof()) == (DATA / "chain5_proof.dot").read_text()


def _dot_graph(text):
    labels = dict(re.findall(r'^  (n\d+) \[label="([^"]+)", shape', text, re.M))
    edges = re.findall(r"(n\d+) -> (n\d+) \[label=\"(d\d+) (\S+)\"\]", text)
    return labels, edges


def test_render_dot_matches_tree_topology():
    t = chain_proof()
    labels, edges = _dot_graph(render_dot(t))
    assert len(labels) == 7 and len(edges) == 6
    # Each derived node's out-edges name one instance; leaves have none.
    by_src = {}
    for a, b, inst, rule in edges:
        by_src.setdefault(a, set()).add((inst, rule))
    assert sorted(labels[s] for s in by_src) == ["Sub(g1,g3)", "Sub(g1,g4)", "Sub(g1,g5)"]
    assert all(len(v) == 1 for v in by_src.values())
    assert {next(iter(v)) for v in by_src.values()} == {("d1", "I2"), ("d2", "I2"), ("d3", "I2")}


def test_render_dot_single_leaf():
    labels, edges = _dot_graph(render_dot(Proof.axiom(Sub(g1, g2))))
    assert list(labels.values()) == ["Sub(g1,g2)"] and edges == []


def test_render_neginf2_topology():
    t = Reasoner(NEGINF2).check_satisfiable().proof
    labels, edges = _dot_graph(render_dot(t))
    assert len(labels) == len(list(t.nodes()))
    assert len(edges) == len(labels) - 1
    assert labels["n0"] == "FALSE"


def test_json_round_trips_through_text():
    t = chain_proof()
    d = json.loads(render_json(t))
    assert d == to_json(t)
    assert d["rule"] == "I2" and d["subst"] == {"?0": "g1", "?1": "g4", "?2": "g5"}
    assert d["premises"][1] == {"conclusion": "Sub(g4,g5)", "rule": "Axiom"}


def test_deep_proofs_do_not_recurse():
    names = granules(" ".join(f"c{i}" for i in range(3000)))
    s = Schema.of([Sub(a, b) for a, b in zip(names, names[1:])])
    t = left_linear(names, s)
    # 2999 steps need 2998 I2 nodes; the deepest leaf sits under all of them.
    assert t.depth() == len(names) - 2
    assert validate(t, BPOS) and single_use(t)
    assert t == left_linear(names, s)
    assert render_text(t).count("\n") == len(list(t.nodes()))
