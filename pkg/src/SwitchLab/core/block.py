"""
The two-stage block distribution, its weights and the g extension.

Date: 2026-10-18
"""

import itertools
import math

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Final, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import InconsistentOutcomeError, InvalidParametersError
from .formula import BlockStructure, Restriction, Value
from ..utils.utils import as_fraction


__all__: Final[List[str]] = [
    "BlockClass",
    "BlockOutcome",
    "BlockParams",
    "BlockTag",
    "block_from_index",
    "block_outcome_count",
    "block_weight",
    "classify",
    "enumerate_block",
    "first_star",
    "g_extension",
    "sample_block",
    "validate_outcome",
    "weight_block",
]


class BlockTag(IntEnum):
    """
    The second-stage fate of a block.
    """

    ZERO_BLOCK = 0
    STAR_BLOCK = 1
    ALL_ONES = 2

    @property
    def symbol(self) -> str:
        """
        Returns the one-character symbol of the tag ("0", "*" or "1").

        :return: The symbol
        :rtype: str
        """

        return "0*1"[self]


@dataclass(frozen=True)
class BlockClass:
    """
    The tag of every block, in block order.

    Attributes:
        tags (Tuple[BlockTag, ...]): The tags.
    """

    tags: Tuple[BlockTag, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tags", tuple(BlockTag(tag) for tag in self.tags))

    def to_string(self) -> str:
        """
        Returns the tags as a string over "0", "*" and "1".

        :return: The string
        :rtype: str
        """

        return "".join(tag.symbol for tag in self.tags)

    def __getitem__(
        self,
        index: int,
    ) -> BlockTag:
        return self.tags[index]

    def __len__(self) -> int:
        return len(self.tags)


@dataclass(frozen=True)
class BlockOutcome:
    """
    One outcome of the block distribution.

    Attributes:
        restriction (Restriction): The values of the variables.
        classes (BlockClass): The tag of every block.
    """

    restriction: Restriction
    classes: BlockClass

    def __str__(self) -> str:
        return f"{self.restriction.to_string()}/{self.classes.to_string()}"


@dataclass(frozen=True)
class BlockParams:
    """
    Parameters of the block distribution.

    Attributes:
        blocks (BlockStructure): The partition of the variables.
        p (Fraction): The first-stage probability of leaving a variable starred.
        q (Fraction): The second-stage probability of keeping a block starred.
    """

    blocks: BlockStructure
    p: Fraction
    q: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "q", as_fraction(self.q))

        for name in ("p", "q"):
            value: Fraction = getattr(self, name)

            if not 0 <= value <= 1:
                raise InvalidParametersError(f"{name} = {value} is not a probability")

    @property
    def n(self) -> int:
        """
        Returns the universe size.

        :return: The number of variables
        :rtype: int
        """

        return self.blocks.n


def classify(
    values: Sequence[int],
    block: Sequence[int],
) -> Tuple[int, int]:
    """
    Returns the number of ones and non-ones in a block.

    :param values: The restriction values
    :type values: Sequence[int]
    :param block: The variables of the block
    :type block: Sequence[int]

    :return: The (ones, non-ones) counts
    :rtype: Tuple[int, int]
    """

    ones: int = sum(1 for var in block if values[var] == Value.ONE)

    return ones, len(block) - ones


def block_weight(
    values: Sequence[int],
    block: Sequence[int],
    tag: BlockTag,
    p: Fraction,
    q: Fraction,
) -> Fraction:
    """
    Returns the weight of a single block.

    A block with a ones and b > 0 non-ones weighs (1-p)^a p^b (1-q) as a
    0-block and (1-p)^a p^b q as a *-block; an all-ones block weighs
    (1-p)^|B|.

    :param values: The restriction values
    :type values: Sequence[int]
    :param block: The variables of the block
    :type block: Sequence[int]
    :param tag: The tag of the block
    :type tag: BlockTag
    :param p: The first-stage star probability
    :type p: Fraction
    :param q: The second-stage star probability
    :type q: Fraction

    :return: The exact weight
    :rtype: Fraction
    """

    ones, others = classify(values, block)

    if tag is BlockTag.ALL_ONES:
        if others:
            raise InconsistentOutcomeError(f"block {tuple(block)} is tagged all-ones but has a non-1")

        return (1 - p) ** len(block)

    if not others:
        raise InconsistentOutcomeError(f"block {tuple(block)} is all ones but tagged {tag.name}")

    expected: Value = Value.ZERO if tag is BlockTag.ZERO_BLOCK else Value.STAR

    for var in block:
        if values[var] != Value.ONE and values[var] != expected:
            raise InconsistentOutcomeError(
                f"block {tuple(block)} is tagged {tag.name} but variable {var} is "
                f"{Value(values[var]).symbol}"
            )

    stage_two: Fraction = (1 - q) if tag is BlockTag.ZERO_BLOCK else q

    return (1 - p) ** ones * p ** others * stage_two


def weight_block(
    rho: Restriction,
    classes: BlockClass,
    params: BlockParams,
) -> Fraction:
    """
    Returns the weight of an outcome, the product of its block weights.

    :param rho: The restriction
    :type rho: Restriction
    :param classes: The block tags
    :type classes: BlockClass
    :param params: The distribution parameters
    :type params: BlockParams

    :return: The exact weight
    :rtype: Fraction
    """

    if rho.n != params.n or len(classes) != len(params.blocks):
        raise InconsistentOutcomeError("outcome does not match the block structure")

    weight: Fraction = Fraction(1)

    for block, tag in zip(params.blocks.blocks, classes.tags):
        weight *= block_weight(rho.values, block, tag, params.p, params.q)

    return weight


def validate_outcome(
    rho: Restriction,
    classes: BlockClass,
    blocks: BlockStructure,
) -> None:
    """
    Raises InconsistentOutcomeError unless every block agrees with its tag.

    :param rho: The restriction
    :type rho: Restriction
    :param classes: The block tags
    :type classes: BlockClass
    :param blocks: The block structure
    :type blocks: BlockStructure

    :return: None
    :rtype: None
    """

    if rho.n != blocks.n or len(classes) != len(blocks):
        raise InconsistentOutcomeError("outcome does not match the block structure")

    # Any probabilities work; the weight check raises on a mismatch
    half: Fraction = Fraction(1, 2)

    for block, tag in zip(blocks.blocks, classes.tags):
        block_weight(rho.values, block, tag, half, half)


def sample_block(
    params: BlockParams,
    rng: np.random.Generator,
) -> BlockOutcome:
    """
    Draws an outcome in two stages.

    Stage one sets each variable to 1 with probability 1-p and stars it
    otherwise; stage two turns every block with a star into a 0-block with
    probability 1-q and keeps it a *-block otherwise.

    :param params: The distribution parameters
    :type params: BlockParams
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The outcome
    :rtype: BlockOutcome
    """

    # Stage one
    stage_one: np.ndarray = rng.random(params.n)
    p: float = float(params.p)
    values: List[int] = [Value.STAR if draw < p else Value.ONE for draw in stage_one]

    # Stage two, one draw per block whether or not it is needed
    stage_two: np.ndarray = rng.random(len(params.blocks))
    q: float = float(params.q)
    tags: List[BlockTag] = []

    for block, draw in zip(params.blocks.blocks, stage_two):
        if all(values[var] == Value.ONE for var in block):
            tags.append(BlockTag.ALL_ONES)
            continue

        if draw < q:
            tags.append(BlockTag.STAR_BLOCK)
            continue

        tags.append(BlockTag.ZERO_BLOCK)

        for var in block:
            if values[var] == Value.STAR:
                values[var] = Value.ZERO

    return BlockOutcome(Restriction(tuple(values)), BlockClass(tuple(tags)))


def first_star(
    values: Sequence[int],
    block: Sequence[int],
) -> int:
    """
    Returns the first starred variable of a block in its internal order, or -1.

    :param values: The restriction values
    :type values: Sequence[int]
    :param block: The variables of the block
    :type block: Sequence[int]

    :return: The variable, or -1 if the block has no star
    :rtype: int
    """

    for var in block:
        if values[var] == Value.STAR:
            return var

    return -1


def g_extension(
    rho: Restriction,
    classes: BlockClass,
    blocks: BlockStructure,
) -> Restriction:
    """
    Sets every starred variable of each *-block, except the first, to 1.

    :param rho: The restriction
    :type rho: Restriction
    :param classes: The block tags
    :type classes: BlockClass
    :param blocks: The block structure
    :type blocks: BlockStructure

    :return: The extended restriction
    :rtype: Restriction
    """

    values: List[int] = list(rho.values)

    for block, tag in zip(blocks.blocks, classes.tags):
        if tag is not BlockTag.STAR_BLOCK:
            continue

        keep: int = first_star(values, block)

        for var in block:
            if var != keep and values[var] == Value.STAR:
                values[var] = Value.ONE

    return Restriction(tuple(values))


def _block_choices(
    block: Tuple[int, ...],
    p: Fraction,
    q: Fraction,
) -> List[Tuple[Tuple[Tuple[int, int], ...], BlockTag, Fraction]]:
    """
    Lists every outcome of one block with positive weight.

    Each outcome is (assignments, tag, weight) where assignments gives the
    value of every variable of the block. The all-ones outcome comes first,
    then the non-one subsets in ascending bitmask order, each as a 0-block
    before the *-block.
    """

    choices: List[Tuple[Tuple[Tuple[int, int], ...], BlockTag, Fraction]] = []
    size: int = len(block)

    for mask in range(1 << size):
        for tag in ((BlockTag.ALL_ONES,) if mask == 0 else (BlockTag.ZERO_BLOCK, BlockTag.STAR_BLOCK)):
            fill: Value = Value.ZERO if tag is BlockTag.ZERO_BLOCK else Value.STAR
            assignments: Tuple[Tuple[int, int], ...] = tuple(
                (var, fill if mask >> position & 1 else Value.ONE)
                for position, var in enumerate(block)
            )
            others: int = bin(mask).count("1")

            if tag is BlockTag.ALL_ONES:
                weight: Fraction = (1 - p) ** size
            else:
                weight = (1 - p) ** (size - others) * p ** others * ((1 - q) if tag is BlockTag.ZERO_BLOCK else q)

            if weight > 0:
                choices.append((assignments, tag, weight))

    return choices


def block_outcome_count(blocks: BlockStructure) -> int:
    """
    Returns the number of outcomes, the product of 2^(|B|+1) - 1 over the blocks.

    :param blocks: The block structure
    :type blocks: BlockStructure

    :return: The count
    :rtype: int
    """

    count: int = 1

    for block in blocks.blocks:
        count *= (1 << (len(block) + 1)) - 1

    return count


def _block_tables(params: BlockParams) -> List[list]:
    return [_block_choices(block, params.p, params.q) for block in params.blocks.blocks]


def _assemble(
    n: int,
    combination: Sequence[Tuple[Tuple[Tuple[int, int], ...], BlockTag, Fraction]],
) -> Tuple[BlockOutcome, Fraction]:
    values: List[int] = [Value.ONE] * n
    tags: List[BlockTag] = []
    weight: Fraction = Fraction(1)

    for assignments, tag, block_weight_value in combination:
        for var, value in assignments:
            values[var] = value

        tags.append(tag)
        weight *= block_weight_value

    return BlockOutcome(Restriction(tuple(values)), BlockClass(tuple(tags))), weight


def block_from_index(
    params: BlockParams,
    index: int,
) -> Tuple[BlockOutcome, Fraction]:
    """
    Returns the outcome at a position of the enumeration order, with its weight.

    The index is read as a mixed-radix number over the positive-weight
    choices of each block, the last block least significant.

    :param params: The distribution parameters
    :type params: BlockParams
    :param index: The position, below the number of enumerated outcomes
    :type index: int

    :return: The (outcome, weight) pair
    :rtype: Tuple[BlockOutcome, Fraction]
    """

    return _block_at(params.n, _block_tables(params), index)


def _block_at(
    n: int,
    tables: List[list],
    index: int,
) -> Tuple[BlockOutcome, Fraction]:
    if not 0 <= index < math.prod(len(choices) for choices in tables):
        raise InvalidParametersError(f"no block outcome at position {index}")

    combination: list = []

    for choices in reversed(tables):
        index, digit = divmod(index, len(choices))
        combination.append(choices[digit])

    return _assemble(n, combination[::-1])


def enumerate_block(
    params: BlockParams,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Tuple[BlockOutcome, Fraction]]:
    """
    Enumerates every outcome with positive weight together with its weight.

    The weight of an outcome is the product of its per-block weights; the
    first block varies slowest.

    :param params: The distribution parameters
    :type params: BlockParams
    :param start: The first position to produce. Defaults to 0.
    :type start: int
    :param stop: The position to stop before. Defaults to the end.
    :type stop: Optional[int]

    :return: The (outcome, weight) pairs
    :rtype: Iterator[Tuple[BlockOutcome, Fraction]]
    """

    tables: List[list] = _block_tables(params)
    total: int = math.prod(len(choices) for choices in tables)
    stop = total if stop is None else min(stop, total)

    if start == 0 and stop == total:
        for combination in itertools.product(*tables):
            yield _assemble(params.n, combination)

        return

    for index in range(start, stop):
        yield _block_at(params.n, tables, index)
