"""
Small helpers for exact rationals, seeded randomness and confidence intervals.

Date: 2026-10-18
"""

import math
import re

from fractions import Fraction
from statistics import NormalDist
from typing import Final, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import InvalidParametersError


__all__: Final[List[str]] = [
    "as_fraction",
    "chunk_ranges",
    "format_fraction",
    "make_rng",
    "parse_fraction",
    "spawn_rngs",
    "wilson_interval",
]


# Accepts "a/b" or a bare integer, nothing else
_RATIONAL_PATTERN: Final[re.Pattern] = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_fraction(text: str) -> Fraction:
    """
    Parses an exact rational of the form "a/b" or "a".

    Decimal notation is rejected so that every probability stays exact.

    :param text: The text to parse
    :type text: str

    :return: The parsed rational
    :rtype: Fraction
    """

    # Match the text against the rational pattern
    match: Optional[re.Match] = _RATIONAL_PATTERN.match(text)

    # Check if the text is a rational
    if not match:
        raise InvalidParametersError(
            f"{text!r} is not an exact rational; write it as a/b"
        )

    # Get the denominator (defaults to 1)
    denominator: int = int(match.group(2)) if match.group(2) is not None else 1

    # Check for a zero denominator
    if denominator == 0:
        raise InvalidParametersError(f"{text!r} has a zero denominator")

    # Return the fraction
    return Fraction(int(match.group(1)), denominator)


def as_fraction(value: Union[Fraction, int, str]) -> Fraction:
    """
    Coerces an int, Fraction or "a/b" string into a Fraction.

    Floats are rejected.

    :param value: The value to coerce
    :type value: Union[Fraction, int, str]

    :return: The value as a Fraction
    :rtype: Fraction
    """

    # bool is an int subclass but never a probability
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidParametersError(
            f"{value!r} is not an exact rational; use Fraction or 'a/b'"
        )

    if isinstance(value, str):
        return parse_fraction(value)

    return Fraction(value)


def format_fraction(value: Fraction) -> str:
    """
    Formats a rational as "num/den" (the denominator is always written).

    :param value: The rational to format
    :type value: Fraction

    :return: The formatted rational
    :rtype: str
    """

    return f"{value.numerator}/{value.denominator}"


def make_rng(seed: int) -> np.random.Generator:
    """
    Returns a numpy generator seeded with a 64-bit seed.

    :param seed: The seed
    :type seed: int

    :return: The generator
    :rtype: np.random.Generator
    """

    return np.random.default_rng(np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF))


def spawn_rngs(
    seed: int,
    count: int,
) -> List[np.random.Generator]:
    """
    Returns independent generators for a fixed number of batches.

    The generators depend only on the seed and the batch index, never on how
    the batches are later spread over workers.

    :param seed: The root seed
    :type seed: int
    :param count: The number of generators
    :type count: int

    :return: The generators, one per batch
    :rtype: List[np.random.Generator]
    """

    # Spawn one child sequence per batch
    children: List[np.random.SeedSequence] = np.random.SeedSequence(
        seed & 0xFFFFFFFFFFFFFFFF
    ).spawn(count)

    # Return one generator per child
    return [np.random.default_rng(child) for child in children]


def chunk_ranges(
    total: int,
    chunks: int,
) -> Iterator[Tuple[int, int]]:
    """
    Splits [0, total) into at most `chunks` contiguous half-open ranges.

    :param total: The size of the range
    :type total: int
    :param chunks: The maximum number of chunks
    :type chunks: int

    :return: The (start, stop) pairs in ascending order
    :rtype: Iterator[Tuple[int, int]]
    """

    # Never produce empty chunks
    chunks = max(1, min(chunks, total))

    # Get the base size and remainder
    size, extra = divmod(total, chunks)

    start: int = 0

    for index in range(chunks):
        stop: int = start + size + (1 if index < extra else 0)

        if stop > start:
            yield start, stop

        start = stop


def wilson_interval(
    hits: int,
    trials: int,
    confidence: float = 0.99,
) -> Tuple[float, float]:
    """
    Returns the Wilson score interval for a binomial proportion.

    :param hits: The number of successes
    :type hits: int
    :param trials: The number of trials (at least 1)
    :type trials: int
    :param confidence: The two-sided confidence level. Defaults to 0.99.
    :type confidence: float

    :return: The (low, high) interval
    :rtype: Tuple[float, float]
    """

    if trials < 1:
        raise InvalidParametersError("the Wilson interval needs at least one trial")

    # Two-sided normal quantile
    z: float = NormalDist().inv_cdf(0.5 + confidence / 2.0)

    phat: float = hits / trials
    z2: float = z * z
    denominator: float = 1.0 + z2 / trials

    center: float = (phat + z2 / (2.0 * trials)) / denominator
    half: float = (
        z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
    ) / denominator

    # The ends are exactly 0 and 1 at the extremes; clamp against rounding elsewhere
    low: float = 0.0 if hits == 0 else max(0.0, center - half)
    high: float = 1.0 if hits == trials else min(1.0, center + half)

    return low, high
