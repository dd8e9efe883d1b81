import pytest

from hypothesis import given
import hypothesis.strategies as st

from SwitchLab.core.exceptions import FormulaError, ParseError
from SwitchLab.core.formats import (
    is_php_text,
    load_dnf,
    load_php,
    parse_blocks,
    parse_dnf,
    parse_php,
    serialize_blocks,
    serialize_dnf,
    serialize_php,
)
from SwitchLab.core.formula import BlockStructure, Dnf, PhpInstance, Term


def test_parse_dnf():
    formula = parse_dnf("dnf 3 2\n1 -2\n3\n")

    assert formula == Dnf(n=3, r=2, terms=(Term.of(1, -2), Term.of(3)))


def test_parse_dnf_skips_blank_lines():
    assert parse_dnf("\ndnf 2 1\n\n  2\n\n") == Dnf(n=2, r=1, terms=(Term.of(2),))


def test_parse_empty_dnf():
    formula = parse_dnf("dnf 4 3\n")

    assert formula.terms == ()
    assert str(formula) == "(false)"


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("dnf 2 1\n1 2\n", 2, 3),
        ("dnf 3 2\n1 x\n", 2, 3),
        ("dnf 3 2\n1\n  4\n", 3, 3),
        ("dnf 3 2\n-1 1\n", 2, 4),
        ("cnf 3 2\n1\n", 1, 1),
        ("dnf 3 two\n", 1, 7),
        ("dnf 3 2\n0\n", 2, 1),
    ],
)
def test_parse_dnf_errors_are_positioned(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_dnf(text)

    assert info.value.line == line
    assert info.value.column == column


def test_parse_error_is_a_formula_error():
    with pytest.raises(FormulaError):
        parse_dnf("dnf 2 1\n1 2\n")

    with pytest.raises(ParseError):
        parse_dnf("")


def test_serialize_dnf():
    formula = Dnf(n=3, r=2, terms=(Term.of(1, -2), Term.of(3)))

    assert serialize_dnf(formula) == "dnf 3 2\n1 -2\n3\n"
    assert serialize_dnf(Dnf(n=2, r=1)) == "dnf 2 1\n"


@given(
    st.lists(
        st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True).flatmap(
            lambda variables: st.tuples(*[st.sampled_from((1, -1))] * len(variables)).map(
                lambda signs: Term.of(*(var * sign for var, sign in zip(variables, signs)))
            )
        ),
        max_size=5,
    )
)
def test_dnf_text_is_stable(terms):
    formula = Dnf(n=5, r=3, terms=tuple(terms))

    assert parse_dnf(serialize_dnf(formula)) == formula


def test_load_dnf(tmp_path):
    path = tmp_path / "f.dnf"
    path.write_text("dnf 2 2\n1 2\n", encoding="utf-8")

    assert load_dnf(path) == Dnf(n=2, r=2, terms=(Term.of(1, 2),))


def test_parse_blocks():
    blocks = parse_blocks("blocks 4\n1 3\n2\n4\n")

    assert blocks == BlockStructure(n=4, blocks=((0, 2), (1,), (3,)))
    assert serialize_blocks(blocks) == "blocks 4\n1 3\n2\n4\n"


@pytest.mark.parametrize(
    "text",
    [
        "blocks 3\n1 2\n2 3\n",
        "blocks 3\n1 2\n",
        "blocks 2\n1 5\n",
        "blocks 2\n1 -1\n",
    ],
)
def test_parse_blocks_rejects_bad_partitions(text):
    with pytest.raises(ParseError):
        parse_blocks(text)


def test_parse_php():
    instance, formula = parse_php("php 2\ndnf 6 2\n1 4\n-6\n")

    assert instance == PhpInstance(n=2)
    assert formula.terms == (Term.of(1, 4), Term.of(-6))
    assert serialize_php(instance, formula) == "php 2\ndnf 6 2\n1 4\n-6\n"


def test_load_php(tmp_path):
    path = tmp_path / "pair.php"
    path.write_text("php 2\ndnf 6 2\n1 4\n", encoding="utf-8")

    instance, formula = load_php(path)

    assert instance.universe == 6
    assert formula == Dnf(n=6, r=2, terms=(Term.of(1, 4),))


def test_parse_php_checks_universe():
    with pytest.raises(ParseError):
        parse_php("php 2\ndnf 5 2\n1\n")

    with pytest.raises(ParseError):
        parse_php("php 0\ndnf 0 1\n")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("php 3\ndnf 12 2\n", 3),
        ("\n  php 1\ndnf 2 1\n", 1),
        ("dnf 3 2\n1\n", None),
        ("php x\n", None),
        ("", None),
    ],
)
def test_is_php_text(text, expected):
    assert is_php_text(text) == expected
