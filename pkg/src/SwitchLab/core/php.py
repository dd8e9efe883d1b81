"""
The distribution over partial injections of n+1 pigeons into n holes.

Date: 2026-10-18
"""

import itertools
import math

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Final, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .exceptions import CompositionError, InvalidParametersError
from .formula import Dnf, Literal, PhpInstance, Restriction, Term, Value
from ..utils.utils import as_fraction


__all__: Final[List[str]] = [
    "PartialInjection",
    "PhpParams",
    "enumerate_php",
    "extension_factor",
    "php_from_index",
    "php_outcome_count",
    "php_view",
    "sample_php",
    "satisfies_dnf",
    "satisfies_literal",
    "satisfies_term",
    "weight_php",
    "weight_php_printed",
]


@dataclass(frozen=True)
class PhpParams:
    """
    Parameters of the partial-injection distribution.

    Attributes:
        n (int): The number of holes; there are n + 1 pigeons.
        q (Fraction): The probability that a hole stays out of the range.
    """

    n: int
    q: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", as_fraction(self.q))

        if self.n < 1:
            raise InvalidParametersError(f"need at least one hole, got {self.n}")

        if not 0 <= self.q <= 1:
            raise InvalidParametersError(f"q = {self.q} is not a probability")

    @property
    def l(self) -> Fraction:
        """
        Returns the trimming threshold l = 2qn.

        :return: The threshold
        :rtype: Fraction
        """

        return 2 * self.q * self.n

    @property
    def instance(self) -> PhpInstance:
        """
        Returns the pigeonhole instance with n holes.

        :return: The instance
        :rtype: PhpInstance
        """

        return PhpInstance(n=self.n)


@dataclass(frozen=True)
class PartialInjection:
    """
    An injective partial map from the n+1 pigeons into the n holes.

    Attributes:
        n (int): The number of holes.
        mapping (Tuple[Optional[int], ...]): The hole of every pigeon, None if unset.
    """

    n: int
    mapping: Tuple[Optional[int], ...]
    owners: Tuple[Optional[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mapping: Tuple[Optional[int], ...] = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)

        if len(mapping) != self.n + 1:
            raise CompositionError(
                f"a partial injection into {self.n} holes maps {self.n + 1} pigeons, got {len(mapping)}"
            )

        owners: List[Optional[int]] = [None] * self.n

        for pigeon, hole in enumerate(mapping):
            if hole is None:
                continue

            if not 0 <= hole < self.n:
                raise CompositionError(f"pigeon {pigeon} sent to missing hole {hole}")

            if owners[hole] is not None:
                raise CompositionError(
                    f"pigeons {owners[hole]} and {pigeon} both sent to hole {hole}"
                )

            owners[hole] = pigeon

        object.__setattr__(self, "owners", tuple(owners))

    @classmethod
    def empty(
        cls,
        n: int,
    ) -> "PartialInjection":
        """
        Returns the partial injection that sets no pigeon.

        :param n: The number of holes
        :type n: int

        :return: The empty injection
        :rtype: PartialInjection
        """

        return cls(n=n, mapping=(None,) * (n + 1))

    @classmethod
    def from_dict(
        cls,
        n: int,
        pairs: Mapping[int, int],
    ) -> "PartialInjection":
        """
        Creates a partial injection from a pigeon-to-hole mapping.

        :param n: The number of holes
        :type n: int
        :param pairs: The mapping
        :type pairs: Mapping[int, int]

        :return: The partial injection
        :rtype: PartialInjection
        """

        mapping: List[Optional[int]] = [None] * (n + 1)

        for pigeon, hole in pairs.items():
            if not 0 <= pigeon <= n:
                raise CompositionError(f"pigeon {pigeon} does not exist")

            mapping[pigeon] = hole

        return cls(n=n, mapping=tuple(mapping))

    @property
    def size(self) -> int:
        """
        Returns the number of pigeons that are set.

        :return: The size m
        :rtype: int
        """

        return sum(1 for hole in self.mapping if hole is not None)

    def as_dict(self) -> Dict[int, int]:
        """
        Returns the set pigeons as a pigeon-to-hole dictionary.

        :return: The mapping
        :rtype: Dict[int, int]
        """

        return {pigeon: hole for pigeon, hole in enumerate(self.mapping) if hole is not None}

    def unset_pigeons(self) -> Tuple[int, ...]:
        """
        Returns the pigeons that are not set, ascending.

        :return: The pigeons
        :rtype: Tuple[int, ...]
        """

        return tuple(pigeon for pigeon, hole in enumerate(self.mapping) if hole is None)

    def unset_holes(self) -> Tuple[int, ...]:
        """
        Returns the holes outside the range, ascending.

        :return: The holes
        :rtype: Tuple[int, ...]
        """

        return tuple(hole for hole, owner in enumerate(self.owners) if owner is None)

    def union(
        self,
        pairs: Mapping[int, int],
    ) -> "PartialInjection":
        """
        Extends the injection by new pigeon-to-hole pairs.

        :param pairs: The pairs to add; pigeons and holes must be free
        :type pairs: Mapping[int, int]

        :return: The extended injection
        :rtype: PartialInjection
        """

        mapping: List[Optional[int]] = list(self.mapping)

        for pigeon, hole in pairs.items():
            if mapping[pigeon] is not None:
                raise CompositionError(f"pigeon {pigeon} is already set")

            mapping[pigeon] = hole

        return PartialInjection(n=self.n, mapping=tuple(mapping))

    def without(
        self,
        pigeons: Tuple[int, ...],
    ) -> "PartialInjection":
        """
        Returns a copy with the given pigeons unset.

        :param pigeons: The pigeons to unset
        :type pigeons: Tuple[int, ...]

        :return: The smaller injection
        :rtype: PartialInjection
        """

        mapping: List[Optional[int]] = list(self.mapping)

        for pigeon in pigeons:
            mapping[pigeon] = None

        return PartialInjection(n=self.n, mapping=tuple(mapping))

    def __str__(self) -> str:
        pairs: str = " ".join(f"{pigeon}:{hole}" for pigeon, hole in self.as_dict().items())

        return "{" + pairs + "}"


def sample_php(
    params: PhpParams,
    rng: np.random.Generator,
) -> PartialInjection:
    """
    Draws a partial injection.

    Each hole joins the range with probability 1-q; then a uniformly random
    injection of pigeons onto exactly that range is chosen.

    :param params: The distribution parameters
    :type params: PhpParams
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The partial injection
    :rtype: PartialInjection
    """

    # Choose the range hole by hole
    draws: np.ndarray = rng.random(params.n)
    keep: float = 1.0 - float(params.q)
    holes: List[int] = [hole for hole, draw in enumerate(draws) if draw < keep]

    # An ordered choice of distinct pigeons for the chosen holes
    pigeons: np.ndarray = rng.permutation(params.n + 1)[: len(holes)]

    return PartialInjection.from_dict(
        params.n, {int(pigeon): hole for pigeon, hole in zip(pigeons, holes)}
    )


def _falling(
    top: int,
    count: int,
) -> int:
    """
    Returns top * (top - 1) * ... with count factors.
    """

    return math.perm(top, count)


def weight_php(
    rho: PartialInjection,
    params: PhpParams,
) -> Fraction:
    """
    Returns the probability of a partial injection, (1-q)^m q^(n-m) (n+1-m)!/(n+1)!.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param params: The distribution parameters
    :type params: PhpParams

    :return: The exact weight
    :rtype: Fraction
    """

    if rho.n != params.n:
        raise InvalidParametersError(f"injection into {rho.n} holes, distribution over {params.n}")

    m: int = rho.size

    return (1 - params.q) ** m * params.q ** (params.n - m) / _falling(params.n + 1, m)


def weight_php_printed(
    rho: PartialInjection,
    params: PhpParams,
) -> Fraction:
    """
    Returns the weight with exponent n+1-m on q, the convention that does not sum to 1.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param params: The distribution parameters
    :type params: PhpParams

    :return: The exact value
    :rtype: Fraction
    """

    return weight_php(rho, params) * params.q


def extension_factor(
    m: int,
    params: PhpParams,
) -> Fraction:
    """
    Returns the weight ratio of adding one pigeon to an injection of size m, (1-q)/(q(n+1-m)).

    :param m: The current size
    :type m: int
    :param params: The distribution parameters
    :type params: PhpParams

    :return: The exact ratio
    :rtype: Fraction
    """

    return (1 - params.q) / (params.q * (params.n + 1 - m))


def php_outcome_count(n: int) -> int:
    """
    Returns the number of partial injections, the sum over m of C(n, m) (n+1)!/(n+1-m)!.

    :param n: The number of holes
    :type n: int

    :return: The count
    :rtype: int
    """

    return sum(math.comb(n, m) * _falling(n + 1, m) for m in range(n + 1))


def php_from_index(
    n: int,
    index: int,
) -> PartialInjection:
    """
    Returns the partial injection at a position of the enumeration order.

    :param n: The number of holes
    :type n: int
    :param index: The position, below php_outcome_count(n)
    :type index: int

    :return: The partial injection
    :rtype: PartialInjection
    """

    if index < 0:
        raise InvalidParametersError(f"no partial injection at position {index}")

    for m in range(n + 1):
        per_range: int = _falling(n + 1, m)
        size: int = math.comb(n, m) * per_range

        if index >= size:
            index -= size
            continue

        rank, index = divmod(index, per_range)

        # The rank-th m-subset of the holes in lexicographic order
        holes: List[int] = []
        candidate: int = 0

        while len(holes) < m:
            below: int = math.comb(n - candidate - 1, m - len(holes) - 1)

            if rank < below:
                holes.append(candidate)
            else:
                rank -= below

            candidate += 1

        # The index-th m-arrangement of the pigeons in lexicographic order
        free: List[int] = list(range(n + 1))
        mapping: List[Optional[int]] = [None] * (n + 1)

        for position, hole in enumerate(holes):
            digit, index = divmod(index, _falling(len(free) - 1, m - position - 1))
            mapping[free.pop(digit)] = hole

        return PartialInjection(n=n, mapping=tuple(mapping))

    raise InvalidParametersError(f"no partial injection at position {index}")


def enumerate_php(
    n: int,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[PartialInjection]:
    """
    Enumerates every partial injection, by size, then range, then pigeon order.

    :param n: The number of holes
    :type n: int
    :param start: The first position to produce. Defaults to 0.
    :type start: int
    :param stop: The position to stop before. Defaults to php_outcome_count(n).
    :type stop: Optional[int]

    :return: The partial injections
    :rtype: Iterator[PartialInjection]
    """

    total: int = php_outcome_count(n)
    stop = total if stop is None else min(stop, total)

    if start != 0 or stop != total:
        for index in range(start, stop):
            yield php_from_index(n, index)

        return

    for m in range(n + 1):
        for holes in itertools.combinations(range(n), m):
            for pigeons in itertools.permutations(range(n + 1), m):
                mapping: List[Optional[int]] = [None] * (n + 1)

                for pigeon, hole in zip(pigeons, holes):
                    mapping[pigeon] = hole

                yield PartialInjection(n=n, mapping=tuple(mapping))


def php_view(
    rho: PartialInjection,
    n: int,
) -> Restriction:
    """
    Returns the restriction to the variables p_xy that a partial injection induces.

    For x sent to y: p_xy is 1, p_xy' is 0 for y' != y and p_x'y is 0 for
    x' != x. Every other variable stays starred.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param n: The number of holes
    :type n: int

    :return: The restriction over (n+1)*n variables
    :rtype: Restriction
    """

    values: List[int] = [Value.STAR] * ((n + 1) * n)

    for pigeon, hole in rho.as_dict().items():
        for other in range(n):
            values[pigeon * n + other] = Value.ZERO

        for other in range(n + 1):
            values[other * n + hole] = Value.ZERO

        values[pigeon * n + hole] = Value.ONE

    return Restriction(tuple(values))


def satisfies_literal(
    rho: PartialInjection,
    literal: Literal,
    instance: PhpInstance,
) -> bool:
    """
    Returns True if a partial injection makes a literal true.

    p_xy holds iff pigeon x goes to hole y; -p_xy holds iff pigeon x goes to
    some other hole. A hole taken by another pigeon does not by itself make
    -p_xy true, since -p_xy is read as the disjunction of p_xy' over y' != y.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param literal: The literal
    :type literal: Literal
    :param instance: The pigeonhole instance
    :type instance: PhpInstance

    :return: True if the literal holds
    :rtype: bool
    """

    pigeon, hole = instance.pigeon_hole(literal.var)
    target: Optional[int] = rho.mapping[pigeon]

    if literal.positive:
        return target == hole

    return target is not None and target != hole


def satisfies_term(
    rho: PartialInjection,
    term: Term,
    instance: PhpInstance,
) -> bool:
    """
    Returns True if a partial injection makes every literal of a term true.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param term: The term
    :type term: Term
    :param instance: The pigeonhole instance
    :type instance: PhpInstance

    :return: True if the term holds
    :rtype: bool
    """

    return all(satisfies_literal(rho, literal, instance) for literal in term.literals)


def satisfies_dnf(
    rho: PartialInjection,
    formula: Dnf,
    instance: PhpInstance,
) -> bool:
    """
    Returns True if a partial injection makes some term of a DNF true.

    :param rho: The partial injection
    :type rho: PartialInjection
    :param formula: The DNF over pigeonhole variables
    :type formula: Dnf
    :param instance: The pigeonhole instance
    :type instance: PhpInstance

    :return: True if the formula holds
    :rtype: bool
    """

    return any(satisfies_term(rho, term, instance) for term in formula.terms)
