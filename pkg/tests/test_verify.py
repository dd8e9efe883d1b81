import dataclasses

from fractions import Fraction

import pytest

from SwitchLab.core.block import BlockParams
from SwitchLab.core.codec import Lemma, decode_indep, encode_indep, encode_php
from SwitchLab.core.corpus import canonical_dnfs, random_dnf, random_php_dnf
from SwitchLab.core.exceptions import InvalidParametersError, PreconditionError, SizeGuardError
from SwitchLab.core.formula import BlockStructure, Dnf, Literal, Restriction, Term
from SwitchLab.core.independent import IndepParams
from SwitchLab.core.php import PhpParams
from SwitchLab.core.verify import (
    BlockSetting,
    IndependentSetting,
    LemmaVerifier,
    Mode,
    PhpSetting,
    PowerBound,
    bound_value,
    check_lemma,
    exact_failure_weight,
    lemma_violations,
    monte_carlo_coverage,
    monte_carlo_failure,
    sweep_injectivity,
)
from SwitchLab.utils.utils import make_rng


TENTH = Fraction(1, 10)
SIXTEENTH = Fraction(1, 16)


def indep(formula, p=TENTH):
    return IndependentSetting(formula, IndepParams(n=formula.n, p=p))


def pairs(n):
    return BlockStructure(n=n, blocks=tuple(tuple(range(start, min(start + 2, n))) for start in range(0, n, 2)))


def test_power_bound():
    assert PowerBound(Fraction(2, 3), 2).exact == Fraction(4, 9)
    assert PowerBound(Fraction(2, 3), 2).to_string() == "4/9"
    assert PowerBound(2, Fraction(1, 2)).exact is None
    assert PowerBound(2, Fraction(1, 2)).to_string() == "(2/1)^(1/2)"
    assert PowerBound(2, Fraction(1, 2)).admits(Fraction(7, 5))
    assert not PowerBound(2, Fraction(1, 2)).admits(Fraction(3, 2))
    assert PowerBound(0, 3).admits(0)

    with pytest.raises(InvalidParametersError):
        PowerBound(-1, 2)


def test_lemma_one_bounds():
    loose, tight = bound_value(Lemma.INDEPENDENT, 1, 1, p=TENTH)

    assert loose.exact == Fraction(9, 10)
    assert tight.exact == Fraction(8, 9)


def test_lemma_two_bounds():
    loose, tight = bound_value(Lemma.BLOCK, 2, 2, q=SIXTEENTH)

    assert loose.exact == Fraction(13, 8) ** 2
    assert tight.exact == Fraction(8, 5) ** 2


def test_lemma_three_bounds_and_regime():
    loose, tight = bound_value(Lemma.PIGEONHOLE, 1, 2, q=Fraction(1, 8), n=4)

    assert loose.exact == 2
    assert tight.exponent == 1
    assert lemma_violations(Lemma.PIGEONHOLE, 1, q=Fraction(1, 8), n=4)
    assert not lemma_violations(Lemma.PIGEONHOLE, 1, q=Fraction(1, 16), n=4)


def test_undefined_bounds_are_reported():
    with pytest.raises(InvalidParametersError):
        bound_value(Lemma.INDEPENDENT, 1, 1, p=Fraction(1))

    with pytest.raises(InvalidParametersError):
        bound_value(Lemma.BLOCK, 1, 1)


@pytest.mark.parametrize(
    "lemma, kwargs, count",
    [
        (Lemma.INDEPENDENT, {"p": TENTH}, 0),
        (Lemma.INDEPENDENT, {"p": Fraction(1, 9)}, 1),
        (Lemma.BLOCK, {"p": SIXTEENTH, "q": SIXTEENTH}, 0),
        (Lemma.BLOCK, {"p": Fraction(1, 4), "q": Fraction(1, 13)}, 2),
        (Lemma.PIGEONHOLE, {"q": Fraction(1, 2), "n": 1}, 2),
        (Lemma.PIGEONHOLE, {"q": Fraction(1, 32), "n": 4}, 0),
    ],
)
def test_lemma_violations(lemma, kwargs, count):
    assert len(lemma_violations(lemma, 2, **kwargs)) == count


def test_single_literal_failure_weight(make_dnf):
    assert exact_failure_weight(indep(make_dnf(1, 1, [1])), 1) == TENTH


def test_failure_weight_by_hand(make_dnf, verifier):
    setting = indep(make_dnf(2, 1, [1], [2]))

    first = verifier.failure_weight(setting, 1)
    second = verifier.failure_weight(setting, 2)

    assert (first.count, first.total) == (4, Fraction(29, 200))
    assert (second.count, second.total) == (1, Fraction(1, 100))
    assert first.trimmed == first.total

    with pytest.raises(PreconditionError):
        verifier.failure_weight(setting, 0)


def test_failure_weight_ignores_thread_count():
    formula = random_dnf(6, 3, 5, make_rng(11))

    assert exact_failure_weight(indep(formula), 2, threads=1) == exact_failure_weight(indep(formula), 2, threads=3)


def test_size_guards(make_dnf):
    big = indep(Dnf(n=13, r=1))

    with pytest.raises(SizeGuardError):
        exact_failure_weight(big, 1)

    big.check_size(unsafe=True)

    with pytest.raises(SizeGuardError):
        PhpSetting(Dnf(n=42, r=1), PhpParams(n=6, q=Fraction(1, 4))).check_size()


def test_settings_check_universes(make_dnf):
    with pytest.raises(InvalidParametersError):
        IndependentSetting(make_dnf(2, 1, [1]), IndepParams(n=3, p=TENTH))

    with pytest.raises(InvalidParametersError):
        PhpSetting(make_dnf(5, 1, [1]), PhpParams(n=2, q=Fraction(1, 4)))


def test_check_passes_within_bounds(make_dnf, verifier):
    report = verifier.check(indep(make_dnf(2, 1, [1], [2])), 2)

    assert report.passed
    assert report.exact_weight == Fraction(1, 100)
    assert report.bound_loose.exact == Fraction(81, 100)
    assert report.bound_tight.exact == Fraction(64, 81)
    assert list(report.as_dict()) == ["lemma", "params", "exact_weight", "bound_loose", "bound_tight", "pass"]
    assert report.as_dict()["params"] == {"n": 2, "r": 1, "p": "1/10", "s": 2}


def test_check_fails_on_violated_preconditions(make_dnf):
    report = check_lemma(indep(make_dnf(1, 1, [1]), p=Fraction(1, 2)), 1)

    assert not report.passed
    assert report.violations
    assert report.as_dict()["pass"] is False


def test_check_in_sample_mode(make_dnf):
    report = check_lemma(indep(make_dnf(2, 1, [1], [2])), 1, mode=Mode.SAMPLE, trials=5000, seed=3)

    assert report.exact_weight is None
    assert report.estimate.trials == 5000
    assert report.params["seed"] == 3
    assert list(report.as_dict()) == [
        "lemma",
        "params",
        "estimate",
        "half_width",
        "bound_loose",
        "bound_tight",
        "pass",
    ]
    assert report.passed


def test_monte_carlo_is_reproducible(make_dnf):
    setting = indep(make_dnf(3, 2, [1, -2], [3]))

    one = monte_carlo_failure(setting, 1, trials=9000, seed=42, threads=1)
    many = monte_carlo_failure(setting, 1, trials=9000, seed=42, threads=4)

    assert one == many
    assert one.low <= one.estimate <= one.high

    with pytest.raises(InvalidParametersError):
        monte_carlo_failure(setting, 1, trials=0, seed=42)


def test_monte_carlo_agrees_with_enumeration(make_dnf):
    setting = indep(make_dnf(3, 2, [1, -2], [3]), p=Fraction(1, 3))

    exact = exact_failure_weight(setting, 1)
    estimate = monte_carlo_failure(setting, 1, trials=20_000, seed=5)

    assert estimate.estimate == pytest.approx(float(exact), abs=0.02)


def test_monte_carlo_coverage(make_dnf):
    setting = indep(make_dnf(2, 1, [1], [2]), p=Fraction(1, 4))

    report = monte_carlo_coverage(setting, 1, batches=100, trials=1000, seed=7)

    assert report.exact == exact_failure_weight(setting, 1)
    assert report.batches == 100
    assert report.covered >= 95


def test_independent_sweep(make_dnf):
    report = sweep_injectivity(indep(make_dnf(3, 2, [1, -2], [3], [-1, 2]), p=SIXTEENTH), 2)

    assert report.passed, [str(violation) for violation in report.violations]
    assert report.failures.count > 0
    assert report.code_space.beta == 16


def test_independent_sweep_over_small_corpus():
    for formula in canonical_dnfs(2, 2, 2):
        for s in (1, 2):
            report = sweep_injectivity(indep(formula, p=SIXTEENTH), s)

            assert report.passed, (str(formula), [str(violation) for violation in report.violations])


@pytest.mark.slow
def test_independent_sweep_over_corpus():
    with LemmaVerifier(threads=4) as verifier:
        for formula in canonical_dnfs(3, 2, 3):
            for p in (SIXTEENTH, TENTH):
                for s in (1, 2, 3):
                    report = verifier.sweep(indep(formula, p=p), s)

                    assert report.passed, (str(formula), [str(violation) for violation in report.violations])


def test_block_failure_weight(make_dnf):
    formula = make_dnf(2, 2, [1, 2])
    setting = BlockSetting(formula, BlockParams(pairs(2), SIXTEENTH, SIXTEENTH))

    # The only failing outcomes leave the block starred
    p, q = SIXTEENTH, SIXTEENTH

    assert exact_failure_weight(setting, 1) == (2 * p * (1 - p) + p * p) * q


def test_block_sweep_and_check(verifier):
    formula = random_dnf(4, 2, 4, make_rng(19))
    setting = BlockSetting(formula, BlockParams(pairs(4), SIXTEENTH, SIXTEENTH))

    for s in (1, 2):
        report = verifier.sweep(setting, s)

        assert report.passed, [str(violation) for violation in report.violations]

    check = verifier.check(setting, 1)

    assert check.passed
    assert check.params["blocks"] == "0 1|2 3"


@pytest.mark.slow
def test_block_sweep_over_corpus():
    with LemmaVerifier(threads=4) as verifier:
        for formula in canonical_dnfs(4, 2, 2):
            setting = BlockSetting(formula, BlockParams(pairs(4), Fraction(1, 8), SIXTEENTH))

            for s in (1, 2):
                report = verifier.sweep(setting, s)

                assert report.passed, (str(formula), [str(violation) for violation in report.violations])


def test_php_sweep(verifier):
    # p00 and p11 over two holes
    formula = Dnf(n=6, r=2, terms=(Term((Literal(0), Literal(3))),))
    setting = PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4)))

    for s in (1, 2):
        report = verifier.sweep(setting, s)

        assert report.passed, [str(violation) for violation in report.violations]
        assert report.reply_width >= 1
        assert report.unset_width >= 1


def test_php_sweep_over_random_formulas(verifier):
    rng = make_rng(23)

    for _ in range(10):
        formula = random_php_dnf(2, 2, 3, rng)
        setting = PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4)))

        for s in (1, 2, 3):
            report = verifier.sweep(setting, s)

            assert report.passed, (str(formula), [str(violation) for violation in report.violations])


def test_php_check_reports_exceptions(verifier):
    formula = Dnf(n=6, r=1, terms=(Term((Literal(0),)),))
    setting = PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4)))

    weight = verifier.failure_weight(setting, 1)
    report = verifier.check(setting, 1)

    # l = 1, so every outcome leaves at least l pigeons unset
    assert weight.trimmed == 0
    assert report.exact_weight == 0
    assert report.exception_mass == weight.total > 0
    assert report.printed_weight == weight.total * Fraction(1, 4)
    assert "exception_mass" in report.as_dict()
    assert report.params["l"] == "1/1"


def test_php_sampling_sets_exceptions_apart(verifier):
    formula = Dnf(n=6, r=1, terms=(Term((Literal(0),)),))
    setting = PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4)))

    weight = verifier.failure_weight(setting, 1)
    report = verifier.check(setting, 1, mode=Mode.SAMPLE, trials=4000, seed=3)

    assert report.estimate.hits == 0
    assert report.estimate.exceptions > 0
    assert report.exception_mass == Fraction(report.estimate.exceptions, 4000)
    assert float(report.exception_mass) == pytest.approx(float(weight.total), abs=0.04)


def test_php_coverage_uses_the_trimmed_weight(verifier):
    formula = Dnf(n=6, r=1, terms=(Term((Literal(0),)),))
    setting = PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4)))

    report = verifier.coverage(setting, 1, batches=5, trials=500, seed=1)

    assert report.exact == 0
    assert report.covered == 5


def test_php_sweep_flags_reply_indices_beyond_the_unset_range(verifier, monkeypatch):
    def widened(*args, **kwargs):
        witness = encode_php(*args, **kwargs)

        return dataclasses.replace(witness, pi=tuple((False, 7) for _ in witness.pi))

    monkeypatch.setattr("SwitchLab.core.verify.encode_php", widened)

    formula = Dnf(n=6, r=2, terms=(Term((Literal(0), Literal(3))),))
    report = verifier.sweep(PhpSetting(formula, PhpParams(n=2, q=Fraction(1, 4))), 1)

    assert not report.passed
    assert report.reply_width == 8
    assert report.reply_width > report.unset_width
    assert report.code_space.pi == 2 * report.unset_width
    assert any(violation.kind == "code-space" for violation in report.violations)


def test_sweep_reports_a_decoder_that_does_not_invert(make_dnf, monkeypatch):
    def reversed_decoder(formula, witness, s):
        return Restriction(decode_indep(formula, witness, s).values[::-1])

    monkeypatch.setattr("SwitchLab.core.verify.decode_indep", reversed_decoder)

    report = sweep_injectivity(indep(make_dnf(2, 1, [1], [2])), 1)
    failed = {violation.outcome for violation in report.violations if violation.kind == "roundtrip"}

    assert not report.passed
    assert failed == {"*0", "*1", "0*"}


def test_sweep_reports_colliding_witnesses(make_dnf, monkeypatch):
    formula = make_dnf(2, 1, [1], [2])
    shared = encode_indep(formula, Restriction.all_star(2), 1)

    monkeypatch.setattr("SwitchLab.core.verify.encode_indep", lambda *_: shared)

    report = sweep_injectivity(indep(formula), 1)
    kinds = [violation.kind for violation in report.violations]

    assert kinds.count("collision") == 3
    assert kinds.count("roundtrip") == 3
