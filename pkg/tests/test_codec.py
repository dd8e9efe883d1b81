from fractions import Fraction

import pytest

from hypothesis import assume, given
import hypothesis.strategies as st

from SwitchLab.core.block import BlockClass, BlockOutcome, BlockParams, BlockTag, weight_block
from SwitchLab.core.codec import (
    Lemma,
    WitnessIndep,
    WitnessPhp,
    code_space,
    decode_block,
    decode_indep,
    decode_php,
    dump_witness,
    encode_block,
    encode_indep,
    encode_php,
    load_witness,
)
from SwitchLab.core.exceptions import DecodeError, FormulaError, PreconditionError
from SwitchLab.core.formula import BlockStructure, Dnf, Literal, Restriction, Term, Value
from SwitchLab.core.independent import IndepParams, weight_indep
from SwitchLab.core.php import PartialInjection
from SwitchLab.core.tree import BlockTree, IndependentTree


THIRD = Fraction(1, 3)
QUARTER = Fraction(1, 4)

# p00 and p11 over two holes
PHP_FPRIME = Dnf(n=6, r=2, terms=(Term((Literal(0), Literal(3))),))


def restrictions(n):
    return st.tuples(*[st.sampled_from((Value.ZERO, Value.ONE, Value.STAR))] * n).map(Restriction)


def formulas(n, r, max_terms=4):
    term = st.lists(st.integers(0, n - 1), min_size=1, max_size=r, unique=True).flatmap(
        lambda variables: st.tuples(*[st.booleans()] * len(variables)).map(
            lambda signs: Term(tuple(Literal(var, sign) for var, sign in zip(variables, signs)))
        )
    )

    return st.lists(term, min_size=1, max_size=max_terms).map(lambda terms: Dnf(n=n, r=r, terms=tuple(terms)))


def test_encode_indep(make_dnf):
    formula = make_dnf(2, 1, [1], [2])
    rho = Restriction.all_star(2)

    witness = encode_indep(formula, rho, 1)

    assert witness.rho_sigma.to_string() == "1*"
    assert witness.beta == ((0, True),)
    assert witness.pi == (0,)
    assert witness.terms == (0,)

    params = IndepParams(n=2, p=THIRD)

    assert weight_indep(witness.rho_sigma, params) / weight_indep(rho, params) == 1
    assert decode_indep(formula, witness, 1) == rho


def test_encode_indep_over_two_rounds(make_dnf):
    formula = make_dnf(3, 2, [1], [-2, 3])
    rho = Restriction.all_star(3)

    witness = encode_indep(formula, rho, 3)

    assert witness.rho_sigma.to_string() == "101"
    assert witness.beta == ((0, True), (0, False), (1, True))
    assert witness.pi == (0, 0, 0)
    assert witness.terms == (0, 1)
    assert decode_indep(formula, witness, 3) == rho


def test_encoders_need_a_long_branch(make_dnf):
    with pytest.raises(PreconditionError):
        encode_indep(make_dnf(1, 1, [1]), Restriction.all_star(1), 2)

    blocks = BlockStructure.singletons(1)

    with pytest.raises(PreconditionError):
        encode_block(make_dnf(1, 1, [1]), Restriction.from_string("1"), BlockClass((BlockTag.ALL_ONES,)), blocks, 1)


@pytest.mark.parametrize(
    "witness",
    [
        WitnessIndep(Restriction.from_string("1*"), ((0, True),), (1,)),
        WitnessIndep(Restriction.from_string("1*"), ((0, False),), (0,)),
        WitnessIndep(Restriction.from_string("1*"), ((1, True),), (0,)),
        WitnessIndep(Restriction.from_string("0*"), ((0, True),), (0,)),
        WitnessIndep(Restriction.from_string("1*"), ((0, True), (0, True)), (0, 0)),
    ],
)
def test_decode_indep_rejects_foreign_witnesses(make_dnf, witness):
    with pytest.raises(DecodeError):
        decode_indep(make_dnf(2, 1, [1], [2]), witness, 1)


@given(st.data())
def test_indep_codec_inverts_on_failing_restrictions(data):
    formula = data.draw(formulas(4, 2))
    rho = data.draw(restrictions(4))
    s = data.draw(st.integers(1, 3))

    assume(IndependentTree(formula, rho).depth_at_least(s))

    witness = encode_indep(formula, rho, s)

    assert decode_indep(formula, witness, s) == rho
    assert len(witness.beta) == len(witness.pi) == s
    assert witness.rho_sigma.counts()[2] == rho.counts()[2] - s


def test_encode_block(make_dnf):
    formula = make_dnf(2, 2, [1, 2])
    blocks = BlockStructure(n=2, blocks=((0, 1),))
    rho = Restriction.all_star(2)
    classes = BlockClass((BlockTag.STAR_BLOCK,))

    witness = encode_block(formula, rho, classes, blocks, 1)

    assert witness.rho_sigma.to_string() == "11"
    assert witness.classes == BlockClass((BlockTag.ALL_ONES,))
    assert witness.gamma == ((True, True),)
    assert witness.pi == (0,)
    assert witness.beta == ((0, True),)
    assert witness.ones == 2

    params = BlockParams(blocks, QUARTER, QUARTER)
    ratio = weight_block(witness.rho_sigma, witness.classes, params) / weight_block(rho, classes, params)

    assert ratio == 36
    assert ratio >= ((1 - QUARTER) / QUARTER) ** 2 * ((1 - QUARTER) / QUARTER)
    assert decode_block(formula, witness, blocks, 1) == (rho, classes)


def test_encode_block_zeroes_unmarked_stars(make_dnf):
    formula = make_dnf(3, 2, [1, -2])
    blocks = BlockStructure(n=3, blocks=((0, 1, 2),))
    rho = Restriction.all_star(3)
    classes = BlockClass((BlockTag.STAR_BLOCK,))

    witness = encode_block(formula, rho, classes, blocks, 1)

    assert witness.rho_sigma.to_string() == "100"
    assert witness.classes == BlockClass((BlockTag.ZERO_BLOCK,))
    assert witness.gamma == ((True, False),)
    assert decode_block(formula, witness, blocks, 1) == (rho, classes)


@given(st.data())
def test_block_codec_inverts_on_failing_outcomes(data):
    formula = data.draw(formulas(4, 2))
    blocks = BlockStructure(n=4, blocks=((0, 2), (1, 3)))
    values = list(data.draw(restrictions(4)).values)
    tags = []

    for block in blocks.blocks:
        if all(values[var] == Value.ONE for var in block):
            tags.append(BlockTag.ALL_ONES)
        elif any(values[var] == Value.STAR for var in block):
            for var in block:
                if values[var] == Value.ZERO:
                    values[var] = Value.STAR

            tags.append(BlockTag.STAR_BLOCK)
        else:
            tags.append(BlockTag.ZERO_BLOCK)

    rho = Restriction(tuple(values))
    classes = BlockClass(tuple(tags))
    s = data.draw(st.integers(1, 2))

    assume(BlockTree(formula, BlockOutcome(rho, classes), blocks).depth_at_least(s))

    witness = encode_block(formula, rho, classes, blocks, s)

    assert decode_block(formula, witness, blocks, s) == (rho, classes)


def test_decode_block_rejects_bad_gamma(make_dnf):
    formula = make_dnf(2, 2, [1, 2])
    blocks = BlockStructure(n=2, blocks=((0, 1),))
    witness = encode_block(formula, Restriction.all_star(2), BlockClass((BlockTag.STAR_BLOCK,)), blocks, 1)

    tampered = type(witness)(
        rho_sigma=witness.rho_sigma,
        classes=witness.classes,
        beta=witness.beta,
        pi=witness.pi,
        gamma=((False, True),),
    )

    with pytest.raises(DecodeError):
        decode_block(formula, tampered, blocks, 1)


def test_encode_php():
    rho = PartialInjection.empty(2)

    witness = encode_php(PHP_FPRIME, rho, 2, QUARTER, 2)

    assert witness.rho_sigma == PartialInjection.from_dict(2, {0: 0, 1: 1})
    assert witness.beta == ((0, False), (1, True))
    assert witness.pi == ((True, 0), (True, 0))
    assert witness.width == 1
    assert decode_php(PHP_FPRIME, witness, 2, QUARTER, 2) == rho


def test_encode_php_indexes_foreign_replies():
    # p01: the first branch sends pigeon 0 to hole 0
    fprime = Dnf(n=6, r=1, terms=(Term((Literal(1),)),))
    rho = PartialInjection.empty(2)

    witness = encode_php(fprime, rho, 2, QUARTER, 1)

    assert witness.rho_sigma == PartialInjection.from_dict(2, {0: 1})
    assert witness.pi == ((False, 0),)
    assert decode_php(fprime, witness, 2, QUARTER, 1) == rho


def test_encode_php_strict_trimming():
    with pytest.raises(PreconditionError):
        encode_php(PHP_FPRIME, PartialInjection.empty(2), 2, Fraction(1, 8), 1, strict=True)

    with pytest.raises(PreconditionError):
        encode_php(PHP_FPRIME, PartialInjection.empty(2), 2, QUARTER, 1, strict=True)


def test_decode_php_rejects_foreign_witnesses():
    forged = WitnessPhp(
        rho_sigma=PartialInjection.from_dict(2, {0: 0}),
        beta=((0, True),),
        pi=((False, 0),),
    )

    with pytest.raises(DecodeError):
        decode_php(PHP_FPRIME, forged, 2, QUARTER, 1)

    with pytest.raises(DecodeError):
        decode_php(PHP_FPRIME, forged, 2, QUARTER, 2)


def test_code_space():
    indep = code_space(Lemma.INDEPENDENT, 2, 3)

    assert (indep.beta, indep.pi, indep.gamma) == (64, 8, 1)
    assert code_space(Lemma.BLOCK, 2, 3).gamma == 64
    assert code_space(Lemma.PIGEONHOLE, 2, 2, l=Fraction(3)).pi == 36
    assert code_space(Lemma.PIGEONHOLE, 1, 1, l=Fraction(1)).total == 4

    with pytest.raises(FormulaError):
        code_space(Lemma.PIGEONHOLE, 2, 2)


def test_witness_text(make_dnf):
    witness = encode_indep(make_dnf(2, 1, [1], [2]), Restriction.all_star(2), 1)
    text = dump_witness(witness)

    assert text == "kind indep\nrho_sigma 1*\nbeta 0/1\npi 0\nterms 0\n"
    assert load_witness(text) == witness


def test_witness_text_for_every_kind(make_dnf):
    blocks = BlockStructure(n=3, blocks=((0, 1, 2),))
    block_witness = encode_block(
        make_dnf(3, 2, [1, -2]), Restriction.all_star(3), BlockClass((BlockTag.STAR_BLOCK,)), blocks, 1
    )
    php_witness = encode_php(PHP_FPRIME, PartialInjection.empty(2), 2, QUARTER, 2)

    assert "gamma 10" in dump_witness(block_witness)
    assert load_witness(dump_witness(block_witness)) == block_witness
    assert "rho_sigma 0:0 1:1" in dump_witness(php_witness)
    assert load_witness(dump_witness(php_witness)) == php_witness


@pytest.mark.parametrize("text", ["kind cnf\nbeta\n", "kind indep\nrho_sigma 1*\n", "beta 0/1\n"])
def test_load_witness_rejects_malformed_text(text):
    with pytest.raises(DecodeError):
        load_witness(text)
