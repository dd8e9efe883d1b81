import pytest

from SwitchLab.core.corpus import all_terms, canonical_dnfs, random_dnf, random_php_dnf, random_term
from SwitchLab.core.exceptions import InvalidParametersError
from SwitchLab.core.formula import Dnf, Literal, Term
from SwitchLab.utils.utils import make_rng


def test_all_terms_order():
    assert all_terms(2, 1) == [
        Term((Literal(0),)),
        Term((Literal(0, False),)),
        Term((Literal(1),)),
        Term((Literal(1, False),)),
    ]


@pytest.mark.parametrize("n, r, count", [(1, 1, 2), (2, 2, 8), (3, 2, 18), (3, 5, 26)])
def test_all_terms_count(n, r, count):
    assert len(all_terms(n, r)) == count


def test_canonical_dnfs():
    unordered = list(canonical_dnfs(2, 1, 2))
    ordered = list(canonical_dnfs(2, 1, 2, ordered=True))

    assert unordered[0] == Dnf(n=2, r=1)
    assert len(unordered) == 1 + 4 + 6
    assert len(ordered) == 1 + 4 + 12
    assert len(set(ordered)) == len(ordered)
    assert all(formula.r == 1 and formula.n == 2 for formula in ordered)


def test_random_dnfs_are_reproducible():
    first = random_dnf(5, 3, 6, make_rng(8))
    second = random_dnf(5, 3, 6, make_rng(8))

    assert first == second
    assert len(first.terms) == 6
    assert all(0 < len(term.literals) <= 3 for term in first.terms)


def test_random_terms_list_variables_in_order(rng):
    for _ in range(200):
        variables = [literal.var for literal in random_term(6, 3, rng).literals]

        assert variables == sorted(set(variables))


def test_random_php_dnf_spans_the_pigeonhole_universe(rng):
    formula = random_php_dnf(3, 2, 4, rng)

    assert formula.n == 12
    assert all(literal.var < 12 for term in formula.terms for literal in term.literals)


def test_random_term_needs_variables(rng):
    with pytest.raises(InvalidParametersError):
        random_term(0, 2, rng)
