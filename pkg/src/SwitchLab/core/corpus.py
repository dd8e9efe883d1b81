"""
Formula corpora: every small DNF in canonical form, and seeded random DNFs.

Date: 2026-10-18
"""

import itertools
import math

from typing import Final, Iterator, List, Tuple

import numpy as np

from .exceptions import InvalidParametersError
from .formula import Dnf, Literal, PhpInstance, Term


__all__: Final[List[str]] = [
    "all_terms",
    "canonical_dnfs",
    "random_dnf",
    "random_php_dnf",
    "random_term",
]


def all_terms(
    n: int,
    r: int,
) -> List[Term]:
    """
    Lists every term of width 1 to r over n variables, literals sorted by variable.

    Terms come by width, then by variables, then by polarity with the
    positive literal first.

    :param n: The universe size
    :type n: int
    :param r: The maximum width
    :type r: int

    :return: The terms
    :rtype: List[Term]
    """

    terms: List[Term] = []

    for width in range(1, min(r, n) + 1):
        for variables in itertools.combinations(range(n), width):
            for signs in itertools.product((True, False), repeat=width):
                terms.append(Term(tuple(Literal(var, sign) for var, sign in zip(variables, signs))))

    return terms


def canonical_dnfs(
    n: int,
    r: int,
    max_terms: int,
    ordered: bool = False,
) -> Iterator[Dnf]:
    """
    Enumerates every r-DNF over n variables with at most max_terms distinct terms.

    Each DNF lists its terms in the order of all_terms, so every set of terms
    appears once. With ordered=True every ordering of each set appears, which
    matters for the canonical trees since they scan terms in order.

    :param n: The universe size
    :type n: int
    :param r: The maximum width
    :type r: int
    :param max_terms: The maximum number of terms
    :type max_terms: int
    :param ordered: Produce every ordering. Defaults to False.
    :type ordered: bool

    :return: The DNFs, fewest terms first
    :rtype: Iterator[Dnf]
    """

    terms: List[Term] = all_terms(n, r)
    choose = itertools.permutations if ordered else itertools.combinations

    for count in range(max_terms + 1):
        for chosen in choose(terms, count):
            yield Dnf(n=n, r=r, terms=tuple(chosen))


def random_term(
    n: int,
    r: int,
    rng: np.random.Generator,
) -> Term:
    """
    Draws a term uniformly from the terms of width 1 to r over n variables.

    :param n: The universe size
    :type n: int
    :param r: The maximum width
    :type r: int
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The term
    :rtype: Term
    """

    widths: Tuple[int, ...] = tuple(range(1, min(r, n) + 1))

    if not widths:
        raise InvalidParametersError(f"no term of width 1 to {r} exists over {n} variables")

    # A width is drawn in proportion to the number of terms of that width
    counts: np.ndarray = np.array([math.comb(n, width) * 2 ** width for width in widths], dtype=float)
    width: int = int(rng.choice(widths, p=counts / counts.sum()))

    variables: np.ndarray = np.sort(rng.choice(n, size=width, replace=False))
    signs: np.ndarray = rng.integers(0, 2, size=width)

    return Term(tuple(Literal(int(var), bool(sign)) for var, sign in zip(variables, signs)))


def random_dnf(
    n: int,
    r: int,
    terms: int,
    rng: np.random.Generator,
) -> Dnf:
    """
    Draws an r-DNF with the given number of independent uniform terms.

    :param n: The universe size
    :type n: int
    :param r: The maximum width
    :type r: int
    :param terms: The number of terms
    :type terms: int
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The DNF
    :rtype: Dnf
    """

    return Dnf(n=n, r=r, terms=tuple(random_term(n, r, rng) for _ in range(terms)))


def random_php_dnf(
    n: int,
    r: int,
    terms: int,
    rng: np.random.Generator,
) -> Dnf:
    """
    Draws an r-DNF over the pigeonhole variables p_xy of n+1 pigeons and n holes.

    :param n: The number of holes
    :type n: int
    :param r: The maximum width
    :type r: int
    :param terms: The number of terms
    :type terms: int
    :param rng: The seeded generator
    :type rng: np.random.Generator

    :return: The DNF
    :rtype: Dnf
    """

    return random_dnf(PhpInstance(n=n).universe, r, terms, rng)
