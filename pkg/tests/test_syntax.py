from __future__ import annotations

import pytest

from pingpong.errors import WordSyntaxError
from pingpong.groups import GroupSpec, random_element
from pingpong.syntax import parse_free_word, parse_word
from pingpong.words import FreeProductWord, Var

SL2 = GroupSpec.SL(2)


def test_variables_and_exponents():
    assert parse_word("x1 x2^-1") == [Var(1), Var(2, -1)]
    assert parse_word("x1^3") == [Var(1)] * 3
    assert parse_word("(x1 x2)^-1") == [Var(2, -1), Var(1, -1)]
    assert parse_word("1") == []


def test_commutator_expands():
    w = FreeProductWord(parse_word("[x1, x2]"))
    assert w.parts == (Var(1), Var(2), Var(1, -1), Var(2, -1))


def test_constants():
    g = random_element(SL2, 1, 3)
    parts = parse_word("g x1 g^-1", {"g": g})
    assert parts[0] == g and parts[2] == g.inverse()


@pytest.mark.parametrize("text,pos,msg", [
    ("x1 (", 4, "unbalanced '('"),
    ("x1 )", 4, "unbalanced ')'"),
    ("x1 ^", 5, "missing exponent"),
    ("x1 $", 4, "unexpected character"),
    ("h x1", 1, "unknown constant"),
    ("[x1 x2", 1, "unbalanced '['"),
    ("[x1 x2]", 7, "separated by ','"),
    ("x1^a", 4, "exponent must be an integer"),
    ("x0", 1, "start at x1"),
])
def test_errors_report_positions(text, pos, msg):
    with pytest.raises(WordSyntaxError) as ei:
        parse_word(text)
    assert ei.value.position == pos
    assert msg in str(ei.value)
    assert str(ei.value).startswith(f"position {pos}:")


def test_parse_free_word():
    assert parse_free_word("x2 x1^-1").letters == ((2, 1), (1, -1))
