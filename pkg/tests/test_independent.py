from collections import Counter
from fractions import Fraction

import pytest

from hypothesis import given
import hypothesis.strategies as st

from SwitchLab.core.exceptions import InvalidParametersError
from SwitchLab.core.formula import Restriction, Value
from SwitchLab.core.independent import (
    IndepParams,
    enumerate_indep,
    indep_from_index,
    indep_outcome_count,
    sample_indep,
    weight_indep,
)


def test_weight_of_a_mixed_restriction():
    params = IndepParams(n=3, p=Fraction(1, 3))

    assert weight_indep(Restriction.from_string("10*"), params) == Fraction(1, 27)


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1, 7), Fraction(1, 2), Fraction(1)])
def test_all_star_weighs_p_to_the_n(p):
    params = IndepParams(n=4, p=p)

    assert weight_indep(Restriction.all_star(4), params) == p ** 4


@given(st.integers(0, 4), st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_weights_sum_to_one(n, p):
    params = IndepParams(n=n, p=p)

    assert sum(weight_indep(rho, params) for rho in enumerate_indep(n)) == 1


def test_enumeration_order():
    order = [rho.to_string() for rho in enumerate_indep(2)]

    assert order[:4] == ["00", "10", "*0", "01"]
    assert order[-1] == "**"
    assert len(order) == indep_outcome_count(2) == 9


def test_enumeration_slices_agree_with_indices():
    full = list(enumerate_indep(3))

    assert list(enumerate_indep(3, 5, 11)) == full[5:11]
    assert [indep_from_index(3, index) for index in range(27)] == full
    assert list(enumerate_indep(3, 20, 100)) == full[20:]


def test_params_validation():
    with pytest.raises(InvalidParametersError):
        IndepParams(n=2, p=Fraction(3, 2))

    with pytest.raises(InvalidParametersError):
        IndepParams(n=2, p=0.1)

    assert IndepParams(n=2, p="1/4").p == Fraction(1, 4)


def test_weight_checks_universe():
    with pytest.raises(InvalidParametersError):
        weight_indep(Restriction.from_string("1*"), IndepParams(n=3, p=Fraction(1, 4)))


def test_sampler_frequencies(rng):
    params = IndepParams(n=1, p=Fraction(1, 3))
    trials = 30_000

    counts = Counter(sample_indep(params, rng)[0] for _ in range(trials))

    assert counts[Value.STAR] / trials == pytest.approx(1 / 3, abs=0.02)
    assert counts[Value.ZERO] / trials == pytest.approx(1 / 3, abs=0.02)
    assert counts[Value.ONE] / trials == pytest.approx(1 / 3, abs=0.02)


@pytest.mark.parametrize("p", [Fraction(0), Fraction(1)])
def test_sampler_endpoints(rng, p):
    params = IndepParams(n=6, p=p)

    for _ in range(50):
        rho = sample_indep(params, rng)

        if p == 1:
            assert rho == Restriction.all_star(6)
        else:
            assert Value.STAR not in rho.values
