"""
The distribution that sets every variable independently to 0, 1 or *.

Date: 2026-10-18
"""

import itertools

from dataclasses import dataclass
from fractions import Fraction
from typing import Final, Iterator, List, Tuple, Union

import numpy as np

from .exceptions import InvalidParametersError
from .formula import Restriction, Value
from ..utils.utils import as_fraction


__all__: Final[List[str]] = [
    "IndepParams",
    "enumerate_indep",
    "indep_from_index",
    "indep_outcome_count",
    "sample_indep",
    "weight_indep",
]


# Ternary digit order used by the enumeration
_DIGITS: Final[Tuple[Value, Value, Value]] = (Value.ZERO, Value.ONE, Value.STAR)


@dataclass(frozen=True)
class IndepParams:
    """
    Parameters of the independent distribution.

    The degenerate endpoints p = 0 and p = 1 are accepted so that the
    sampler can be exercised there; the lemma checks demand 0 < p < 1/9.

    Attributes:
        n (int): The universe size.
        p (Fraction): The probability of a star.
    """

    n: int
    p: Fraction

    def __post_init__(self) -> None:
        p: Fraction = as_fraction(self.p)
        object.__setattr__(self, "p", p)

        if self.n < 0:
            raise InvalidParametersError(f"universe size {self.n} is negative")

        if not 0 <= p <= 1:
            raise InvalidParametersError(f"p = {p} is not a probability")

    @property
    def half_complement(self) -> Fraction:
        """
        Returns (1 - p) / 2, the probability of each of 0 and 1.

        :return: The probability
        :rtype: Fraction
        """

        return (1 - self.p) / 2


def sample_indep(
    params: IndepParams,
    rng: np.random.Generator,
) -> Restriction:
    """
    Draws a restriction: each variable is * with probability p, else 0 or 1 with equal probability.

    :param params: The distribution parameters
    :type params: IndepParams
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The restriction
    :rtype: Restriction
    """

    # One uniform draw per variable
    draws: np.ndarray = rng.random(params.n)

    p: float = float(params.p)
    zero_cut: float = p + (1.0 - p) / 2.0

    return Restriction(
        tuple(
            Value.STAR if draw < p else (Value.ZERO if draw < zero_cut else Value.ONE)
            for draw in draws
        )
    )


def weight_indep(
    rho: Restriction,
    params: IndepParams,
) -> Fraction:
    """
    Returns the probability of a restriction, ((1-p)/2)^(a+b) * p^c.

    :param rho: The restriction
    :type rho: Restriction
    :param params: The distribution parameters
    :type params: IndepParams

    :return: The exact weight
    :rtype: Fraction
    """

    if rho.n != params.n:
        raise InvalidParametersError(
            f"restriction over {rho.n} variables, distribution over {params.n}"
        )

    ones, zeros, stars = rho.counts()

    return params.half_complement ** (ones + zeros) * params.p ** stars


def indep_outcome_count(n: int) -> int:
    """
    Returns the number of restrictions over n variables, 3^n.

    :param n: The universe size
    :type n: int

    :return: The count
    :rtype: int
    """

    return 3 ** n


def indep_from_index(
    n: int,
    index: int,
) -> Restriction:
    """
    Returns the restriction at a position of the enumeration order.

    The index is read as a ternary number with variable 0 least significant
    and digits 0, 1, * in that order.

    :param n: The universe size
    :type n: int
    :param index: The position in [0, 3^n)
    :type index: int

    :return: The restriction
    :rtype: Restriction
    """

    values: List[Value] = []

    for _ in range(n):
        index, digit = divmod(index, 3)
        values.append(_DIGITS[digit])

    return Restriction(tuple(values))


def enumerate_indep(
    n: int,
    start: int = 0,
    stop: Union[int, None] = None,
) -> Iterator[Restriction]:
    """
    Enumerates all 3^n restrictions in ternary counting order, variable 0 least significant.

    :param n: The universe size
    :type n: int
    :param start: The first position to produce. Defaults to 0.
    :type start: int
    :param stop: The position to stop before. Defaults to 3^n.
    :type stop: Union[int, None]

    :return: The restrictions
    :rtype: Iterator[Restriction]
    """

    total: int = indep_outcome_count(n)
    stop = total if stop is None else min(stop, total)

    if start == 0 and stop == total:
        # product varies its last position fastest, so reverse each tuple
        for digits in itertools.product(_DIGITS, repeat=n):
            yield Restriction(digits[::-1])

        return

    for index in range(start, stop):
        yield indep_from_index(n, index)
