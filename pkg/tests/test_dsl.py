import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from granlogic.core import Disj, Schema, Sub, all_constraints, granules
from granlogic.dsl import ParseError, format_schema, parse_constraint, parse_schema, tokenize

g1, g2 = granules("g1 g2")


def test_parse_basic():
    s = parse_schema("granules g1 g2; constraints { Sub(g1,g2); !Disj(g1,g2); }")
    assert s.named == (g1, g2)
    assert s.constraints == {Sub(g1, g2), ~Disj(g1, g2)}


def test_declarations_are_order_free_and_disj_dedups():
    s = parse_schema("constraints { Disj(b,a); Disj(a,b); } granules a b;")
    assert len(s) == 1 and Disj("a", "b") in s


def test_reserved_names_need_no_declaration():
    s = parse_schema("granules g; constraints { Sub(bot, g); Sub(g, top); }")
    assert len(s) == 2


def test_comments_and_whitespace():
    text = """
    # a comment
    granules g1   g2 ;   # trailing
    constraints {
        Sub( g1 , g2 ) ;
    }
    """
    assert parse_schema(text).constraints == {Sub(g1, g2)}


def test_repeated_blocks():
    s = parse_schema("granules g1; constraints { } granules g2; constraints { Sub(g1,g2); }")
    assert s.named == (g1, g2) and len(s) == 1


@pytest.mark.parametrize(
    "text, line, column, fragment",
    [
        ("granules bot;", 1, 10, "reserved"),
        ("granules g1;\nconstraints { Sub(g1,g9); }", 2, 22, "unknown granule"),
        ("granules g1;\nconstraints { Sub(g1 g1); }", 2, 22, "expected ','"),
        ("granules g1;\nconstraints { Foo(g1,g1); }", 2, 15, "'Sub' or 'Disj'"),
        ("granules g1; constraints { Sub(g1,g1) }", 1, 39, "expected ';'"),
        ("granules g1; constraints { Sub(g1,g1);", 1, 39, "unterminated"),
        ("granules g1; $", 1, 14, "unexpected character"),
        ("", 1, 1, "empty document"),
        ("granules ;", 1, 10, "granule name"),
        ("Sub(g1,g2);", 1, 1, "'granules' or 'constraints'"),
    ],
)
def test_errors_carry_positions(text, line, column, fragment):
    with pytest.raises(ParseError) as e:
        parse_schema(text)
    assert (e.value.line, e.value.column) == (line, column)
    assert fragment in e.value.message


def test_parse_constraint():
    assert parse_constraint("!Sub(g3,g4)") == ~Sub("g3", "g4")
    assert parse_constraint(" Disj(g2 , g1) ;") == Disj(g1, g2)
    with pytest.raises(ParseError):
        parse_constraint("Sub(g1,g2) extra")
    with pytest.raises(ParseError):
        parse_constraint("Sub(g1,g9)", {g1, g2})


def test_tokenizer_positions():
    toks = tokenize("granules\n  a;")
    assert [(t.text, t.line, t.column) for t in toks] == [
        ("granules", 1, 1),
        ("a", 2, 3),
        (";", 2, 4),
        ("", 2, 5),
    ]


def test_round_trip_examples():
    s = parse_schema("granules b a; constraints { !Sub(a,top); Disj(b,a); Sub(bot,b); }")
    text = format_schema(s)
    assert parse_schema(text) == s
    assert format_schema(parse_schema(text)) == text
    assert text.splitlines()[0] == "granules a b;"


NAMES = ["g1", "g2", "g3", "x_y"]


@st.composite
def schemas(draw):
    named = draw(st.sets(st.sampled_from(NAMES), min_size=0, max_size=4))
    universe = set(granules(" ".join(named)))
    pool = all_constraints(universe | set(granules("bot top")))
    cs = draw(st.lists(st.sampled_from(pool), max_size=8))
    return Schema(frozenset(universe), frozenset(cs))


@given(schemas())
def test_round_trip_is_a_fixed_point(s):
    text = format_schema(s)
    assert parse_schema(text) == s
    assert format_schema(parse_schema(text)) == text


ALPHABET = st.sampled_from(list("granulesconstraintsSubDisj(){};,!# \n\tg12abtop") + ["bot", "top"])


@settings(max_examples=300)
@given(st.one_of(st.text(max_size=60), st.lists(ALPHABET, max_size=40).map("".join)))
def test_fuzz_never_crashes(text):
    try:
        parse_schema(text)
    except ParseError as e:
        assert e.line >= 1 and e.column >= 1
