"""
Exact and sampled failure weights, the lemma bounds and the injectivity sweeps.

A LemmaSetting bundles a formula with one restriction family: how to
enumerate, weigh and sample outcomes, which canonical tree to build and
which codec to run. The LemmaVerifier service spreads enumeration chunks
and Monte Carlo batches over a thread pool and memoises pruned depth
results in a shared ResultCache.

Date: 2026-10-18
"""

import itertools
import math

from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Final, Hashable, Iterator, List, Optional, Tuple, Union

import numpy as np

from DateUtil import DateUtil
from Logger import Logger

from .block import (
    BlockOutcome,
    BlockParams,
    BlockTag,
    block_outcome_count,
    enumerate_block,
    sample_block,
    weight_block,
)
from .cache import ResultCache
from .codec import (
    CodeSpace,
    Lemma,
    Witness,
    WitnessBlock,
    WitnessIndep,
    WitnessPhp,
    code_space,
    decode_block,
    decode_indep,
    decode_php,
    encode_block,
    encode_indep,
    encode_php,
)
from .exceptions import (
    DecodeError,
    InvalidParametersError,
    PreconditionError,
    SizeGuardError,
    SwitchLabError,
)
from .formula import Dnf, Restriction, php_preprocess
from .independent import (
    IndepParams,
    enumerate_indep,
    indep_outcome_count,
    sample_indep,
    weight_indep,
)
from .php import (
    PartialInjection,
    PhpParams,
    enumerate_php,
    extension_factor,
    php_outcome_count,
    sample_php,
    weight_php,
    weight_php_printed,
)
from .tree import BlockTree, CanonicalTree, IndependentTree, PhpTree
from ..utils.utils import as_fraction, chunk_ranges, format_fraction, spawn_rngs, wilson_interval


__all__: Final[List[str]] = [
    "DEFAULT_CONFIDENCE",
    "MAX_BLOCK_OUTCOMES",
    "MAX_INDEPENDENT_VARIABLES",
    "MAX_PHP_HOLES",
    "MONTE_CARLO_BATCH",
    "BlockSetting",
    "CoverageReport",
    "FailureWeight",
    "IndependentSetting",
    "InjectivityReport",
    "Lemma",
    "LemmaReport",
    "LemmaSetting",
    "LemmaVerifier",
    "Mode",
    "MonteCarloEstimate",
    "PhpSetting",
    "PowerBound",
    "Violation",
    "bound_value",
    "check_lemma",
    "exact_failure_weight",
    "lemma_violations",
    "monte_carlo_coverage",
    "monte_carlo_failure",
    "sweep_injectivity",
]


MAX_INDEPENDENT_VARIABLES: Final[int] = 12

MAX_BLOCK_OUTCOMES: Final[int] = 10**7

MAX_PHP_HOLES: Final[int] = 5

DEFAULT_CONFIDENCE: Final[float] = 0.99

MONTE_CARLO_BATCH: Final[int] = 4096


Outcome = Union[Restriction, BlockOutcome, PartialInjection]


class Mode(Enum):
    """
    How the failure weight is obtained.
    """

    EXACT = "exact"
    SAMPLE = "sample"


@dataclass(frozen=True)
class PowerBound:
    """
    The exact quantity base^exponent for a rational exponent.

    Comparisons raise both sides to the exponent's denominator, so bounds
    such as x^(s/2) are compared without irrational arithmetic.

    Attributes:
        base (Fraction): The base, non-negative.
        exponent (Fraction): The exponent, non-negative.
    """

    base: Fraction
    exponent: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "exponent", as_fraction(self.exponent))

        if self.base < 0 or self.exponent < 0:
            raise InvalidParametersError(f"{self.base}^{self.exponent} is not a bound")

    @property
    def exact(self) -> Optional[Fraction]:
        """
        Returns the value when the exponent is an integer.

        :return: The rational value, or None for a fractional exponent
        :rtype: Optional[Fraction]
        """

        if self.exponent.denominator != 1:
            return None

        return self.base ** self.exponent.numerator

    def admits(
        self,
        value: Fraction,
    ) -> bool:
        """
        Returns True if value <= base^exponent.

        :param value: The value to compare
        :type value: Fraction

        :return: True if the value is within the bound
        :rtype: bool
        """

        value = as_fraction(value)

        if value <= 0:
            return True

        return value ** self.exponent.denominator <= self.base ** self.exponent.numerator

    def __float__(self) -> float:
        return float(self.base) ** float(self.exponent)

    def to_string(self) -> str:
        """
        Returns "num/den" for a rational value, "(num/den)^(a/b)" otherwise.

        :return: The text
        :rtype: str
        """

        if self.exact is not None:
            return format_fraction(self.exact)

        return f"({format_fraction(self.base)})^({format_fraction(self.exponent)})"


def bound_value(
    lemma: Lemma,
    r: int,
    s: int,
    p: Optional[Fraction] = None,
    q: Optional[Fraction] = None,
    n: Optional[int] = None,
) -> Tuple[PowerBound, PowerBound]:
    """
    Returns the (loose, tight) bounds on the failure weight of a lemma.

    Lemma 1: (9pr)^s and (8pr/(1-p))^s. Lemma 2: (13qr)^s and
    (12qr/(1-q))^s. Lemma 3: (128 r^2 n^3 q^4)^(s/2) and
    ((2r)^2 (2l)^2 ql/(1-q))^(s/2) with l = 2qn.

    :param lemma: The lemma
    :type lemma: Lemma
    :param r: The term width
    :type r: int
    :param s: The number of queries
    :type s: int
    :param p: The star probability (lemmas 1 and 2). Defaults to None.
    :type p: Optional[Fraction]
    :param q: The block or hole probability (lemmas 2 and 3). Defaults to None.
    :type q: Optional[Fraction]
    :param n: The number of holes (lemma 3). Defaults to None.
    :type n: Optional[int]

    :return: The loose and tight bounds
    :rtype: Tuple[PowerBound, PowerBound]
    """

    lemma = Lemma(lemma)

    try:
        if lemma is Lemma.INDEPENDENT:
            p = as_fraction(p)

            return PowerBound(9 * p * r, s), PowerBound(8 * p * r / (1 - p), s)

        q = as_fraction(q)

        if lemma is Lemma.BLOCK:
            return PowerBound(13 * q * r, s), PowerBound(12 * q * r / (1 - q), s)

        l: Fraction = 2 * q * n
        half: Fraction = Fraction(s, 2)

        return (
            PowerBound(128 * r**2 * n**3 * q**4, half),
            PowerBound((2 * r) ** 2 * (2 * l) ** 2 * q * l / (1 - q), half),
        )
    except ZeroDivisionError as error:
        raise InvalidParametersError(f"the bounds of lemma {int(lemma)} are undefined here") from error
    except TypeError as error:
        raise InvalidParametersError(f"lemma {int(lemma)} is missing a parameter") from error


def lemma_violations(
    lemma: Lemma,
    r: int,
    p: Optional[Fraction] = None,
    q: Optional[Fraction] = None,
    n: Optional[int] = None,
) -> List[str]:
    """
    Returns the parameter preconditions of a lemma that do not hold.

    :param lemma: The lemma
    :type lemma: Lemma
    :param r: The term width
    :type r: int
    :param p: The star probability. Defaults to None.
    :type p: Optional[Fraction]
    :param q: The block or hole probability. Defaults to None.
    :type q: Optional[Fraction]
    :param n: The number of holes. Defaults to None.
    :type n: Optional[int]

    :return: One message per violated precondition
    :rtype: List[str]
    """

    lemma = Lemma(lemma)
    violations: List[str] = []

    if lemma is Lemma.INDEPENDENT:
        if not 0 < p < Fraction(1, 9):
            violations.append(f"lemma 1 needs 0 < p < 1/9, got p = {format_fraction(p)}")

        return violations

    if lemma is Lemma.BLOCK:
        if not 0 < p < Fraction(1, 2 * r):
            violations.append(
                f"lemma 2 needs 0 < p < 1/(2r) = 1/{2 * r}, got p = {format_fraction(p)}"
            )

        if not 0 < q < Fraction(1, 13):
            violations.append(f"lemma 2 needs 0 < q < 1/13, got q = {format_fraction(q)}")

        return violations

    if not 0 < q < Fraction(1, 2):
        violations.append(f"lemma 3 needs 0 < q < 1/2, got q = {format_fraction(q)}")

    regime: Fraction = 128 * r**2 * n**3 * q**4

    if regime >= 1:
        violations.append(f"lemma 3 needs 128 r^2 n^3 q^4 < 1, got {format_fraction(regime)}")

    return violations


class LemmaSetting(ABC):
    """
    A formula together with a restriction family and its codec.

    Attributes:
        formula (Dnf): The DNF whose canonical trees are measured.
    """

    lemma: Lemma

    def __init__(
        self,
        formula: Dnf,
    ) -> None:
        self._formula: Final[Dnf] = formula

    @property
    def formula(self) -> Dnf:
        """
        Returns the DNF.

        :return: The DNF
        :rtype: Dnf
        """

        return self._formula

    @abstractmethod
    def outcome_count(self) -> int:
        """
        Returns an upper bound on the number of enumerated outcomes.
        """

    @abstractmethod
    def outcomes(
        self,
        start: int = 0,
        stop: Optional[int] = None,
    ) -> Iterator[Tuple[Outcome, Fraction]]:
        """
        Enumerates the outcomes at positions [start, stop) with their weights.
        """

    @abstractmethod
    def weight(
        self,
        outcome: Outcome,
    ) -> Fraction:
        """
        Returns the probability of an outcome.
        """

    @abstractmethod
    def sample(
        self,
        rng: np.random.Generator,
    ) -> Outcome:
        """
        Draws one outcome.
        """

    @abstractmethod
    def tree(
        self,
        outcome: Outcome,
        cache: Optional[ResultCache] = None,
    ) -> CanonicalTree:
        """
        Returns the canonical tree of the formula under an outcome.
        """

    @abstractmethod
    def encode(
        self,
        outcome: Outcome,
        s: int,
    ) -> Witness:
        """
        Encodes a failing outcome.
        """

    @abstractmethod
    def decode(
        self,
        witness: Witness,
        s: int,
    ) -> Outcome:
        """
        Decodes a witness.
        """

    @abstractmethod
    def violations(self) -> List[str]:
        """
        Returns the lemma preconditions that do not hold.
        """

    @abstractmethod
    def bounds(
        self,
        s: int,
    ) -> Tuple[PowerBound, PowerBound]:
        """
        Returns the (loose, tight) bounds.
        """

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """
        Returns the parameters for reports, rationals as "num/den".
        """

    @abstractmethod
    def check_size(
        self,
        unsafe: bool = False,
    ) -> None:
        """
        Raises SizeGuardError if exhaustive enumeration is too large.
        """

    @abstractmethod
    def identity_violations(
        self,
        outcome: Outcome,
        weight: Fraction,
        witness: Witness,
        s: int,
    ) -> List[str]:
        """
        Returns the weight-change properties that the encoding breaks.
        """

    def class_groups(
        self,
        witness: Witness,
        s: int,
    ) -> List[Tuple[Hashable, Fraction]]:
        """
        Returns the code classes of a witness with the weight bound of each class.
        """

        return []

    def trimmed(
        self,
        outcome: Outcome,
    ) -> bool:
        """
        Returns False for the outcomes set aside as exceptions.
        """

        return True

    def printed_weight(
        self,
        outcome: Outcome,
        weight: Fraction,
    ) -> Fraction:
        """
        Returns the weight under the convention quoted with the lemma.
        """

        return weight


class IndependentSetting(LemmaSetting):
    """
    Lemma 1: every variable is * with probability p, else 0 or 1.
    """

    lemma: Lemma = Lemma.INDEPENDENT

    def __init__(
        self,
        formula: Dnf,
        params: IndepParams,
    ) -> None:
        super().__init__(formula)

        if params.n != formula.n:
            raise InvalidParametersError(
                f"distribution over {params.n} variables, DNF over {formula.n}"
            )

        self._params: Final[IndepParams] = params

    @property
    def distribution(self) -> IndepParams:
        return self._params

    def outcome_count(self) -> int:
        return indep_outcome_count(self._params.n)

    def outcomes(
        self,
        start: int = 0,
        stop: Optional[int] = None,
    ) -> Iterator[Tuple[Restriction, Fraction]]:
        for rho in enumerate_indep(self._params.n, start, stop):
            yield rho, weight_indep(rho, self._params)

    def weight(
        self,
        outcome: Restriction,
    ) -> Fraction:
        return weight_indep(outcome, self._params)

    def sample(
        self,
        rng: np.random.Generator,
    ) -> Restriction:
        return sample_indep(self._params, rng)

    def tree(
        self,
        outcome: Restriction,
        cache: Optional[ResultCache] = None,
    ) -> IndependentTree:
        return IndependentTree(self._formula, outcome, cache=cache)

    def encode(
        self,
        outcome: Restriction,
        s: int,
    ) -> WitnessIndep:
        return encode_indep(self._formula, outcome, s)

    def decode(
        self,
        witness: WitnessIndep,
        s: int,
    ) -> Restriction:
        return decode_indep(self._formula, witness, s)

    def violations(self) -> List[str]:
        return lemma_violations(self.lemma, self._formula.r, p=self._params.p)

    def bounds(
        self,
        s: int,
    ) -> Tuple[PowerBound, PowerBound]:
        return bound_value(self.lemma, self._formula.r, s, p=self._params.p)

    def params(self) -> Dict[str, Any]:
        return {"n": self._formula.n, "r": self._formula.r, "p": format_fraction(self._params.p)}

    def check_size(
        self,
        unsafe: bool = False,
    ) -> None:
        if not unsafe and self._params.n > MAX_INDEPENDENT_VARIABLES:
            raise SizeGuardError(
                f"3^{self._params.n} restrictions exceed the guard 3^{MAX_INDEPENDENT_VARIABLES}"
            )

    def identity_violations(
        self,
        outcome: Restriction,
        weight: Fraction,
        witness: WitnessIndep,
        s: int,
    ) -> List[str]:
        p: Fraction = self._params.p
        encoded: Fraction = weight_indep(witness.rho_sigma, self._params)

        # weight(rho sigma) = ((1-p)/(2p))^s weight(rho), cross-multiplied
        if encoded * (2 * p) ** s != weight * (1 - p) ** s:
            return [
                f"weight ratio {format_fraction(encoded)}/{format_fraction(weight)} "
                f"is not ((1-p)/(2p))^{s}"
            ]

        return []

    def class_groups(
        self,
        witness: WitnessIndep,
        s: int,
    ) -> List[Tuple[Hashable, Fraction]]:
        p: Fraction = self._params.p

        if p == 1:
            return []

        return [(("beta-pi", witness.beta, witness.pi), (2 * p / (1 - p)) ** s)]


class BlockSetting(LemmaSetting):
    """
    Lemma 2: variables are * with probability p, then each block with a star
    becomes a 0-block with probability 1-q.
    """

    lemma: Lemma = Lemma.BLOCK

    def __init__(
        self,
        formula: Dnf,
        params: BlockParams,
    ) -> None:
        super().__init__(formula)

        if params.n != formula.n:
            raise InvalidParametersError(
                f"blocks over {params.n} variables, DNF over {formula.n}"
            )

        self._params: Final[BlockParams] = params

    @property
    def distribution(self) -> BlockParams:
        return self._params

    def outcome_count(self) -> int:
        return block_outcome_count(self._params.blocks)

    def outcomes(
        self,
        start: int = 0,
        stop: Optional[int] = None,
    ) -> Iterator[Tuple[BlockOutcome, Fraction]]:
        return enumerate_block(self._params, start, stop)

    def weight(
        self,
        outcome: BlockOutcome,
    ) -> Fraction:
        return weight_block(outcome.restriction, outcome.classes, self._params)

    def sample(
        self,
        rng: np.random.Generator,
    ) -> BlockOutcome:
        return sample_block(self._params, rng)

    def tree(
        self,
        outcome: BlockOutcome,
        cache: Optional[ResultCache] = None,
    ) -> BlockTree:
        return BlockTree(self._formula, outcome, self._params.blocks, cache=cache)

    def encode(
        self,
        outcome: BlockOutcome,
        s: int,
    ) -> WitnessBlock:
        return encode_block(
            self._formula, outcome.restriction, outcome.classes, self._params.blocks, s
        )

    def decode(
        self,
        witness: WitnessBlock,
        s: int,
    ) -> BlockOutcome:
        rho, classes = decode_block(self._formula, witness, self._params.blocks, s)

        return BlockOutcome(rho, classes)

    def violations(self) -> List[str]:
        return lemma_violations(
            self.lemma, self._formula.r, p=self._params.p, q=self._params.q
        )

    def bounds(
        self,
        s: int,
    ) -> Tuple[PowerBound, PowerBound]:
        return bound_value(self.lemma, self._formula.r, s, q=self._params.q)

    def params(self) -> Dict[str, Any]:
        return {
            "n": self._formula.n,
            "r": self._formula.r,
            "p": format_fraction(self._params.p),
            "q": format_fraction(self._params.q),
            "blocks": "|".join(
                " ".join(str(var) for var in block) for block in self._params.blocks.blocks
            ),
        }

    def check_size(
        self,
        unsafe: bool = False,
    ) -> None:
        count: int = self.outcome_count()

        if not unsafe and count > MAX_BLOCK_OUTCOMES:
            raise SizeGuardError(
                f"{count} block outcomes exceed the guard {MAX_BLOCK_OUTCOMES}"
            )

    def identity_violations(
        self,
        outcome: BlockOutcome,
        weight: Fraction,
        witness: WitnessBlock,
        s: int,
    ) -> List[str]:
        p: Fraction = self._params.p
        q: Fraction = self._params.q
        m: int = witness.ones
        encoded: Fraction = weight_block(witness.rho_sigma, witness.classes, self._params)

        # Exact factor of each queried block: (1-q)/q for a 0-block, 1/q for all-ones
        gained: Fraction = Fraction(1)
        paid: Fraction = Fraction(1)

        for before, after in zip(outcome.classes.tags, witness.classes.tags):
            if before is BlockTag.STAR_BLOCK and after is not BlockTag.STAR_BLOCK:
                gained *= (1 - q) if after is BlockTag.ZERO_BLOCK else 1
                paid *= q

        messages: List[str] = []

        if encoded * p**m * paid != weight * (1 - p) ** m * gained:
            messages.append(
                f"weight ratio {format_fraction(encoded)}/{format_fraction(weight)} "
                f"misses the per-block factors (m = {m})"
            )

        if encoded * p**m * q**s < weight * (1 - p) ** m * (1 - q) ** s:
            messages.append(f"weight ratio below ((1-p)/p)^{m} ((1-q)/q)^{s}")

        return messages

    def class_groups(
        self,
        witness: WitnessBlock,
        s: int,
    ) -> List[Tuple[Hashable, Fraction]]:
        p: Fraction = self._params.p
        q: Fraction = self._params.q
        r: int = self._formula.r

        if p == 1 or q == 1:
            return []

        return [
            (
                ("beta-pi-gamma", witness.beta, witness.pi, witness.gamma),
                (p / (1 - p)) ** witness.ones * (q / (1 - q)) ** s,
            ),
            # Summed over every gamma' with at most rs recorded variables
            (("beta-pi", witness.beta, witness.pi), (q / (1 - q)) ** s / (1 - p) ** (r * s)),
        ]


class PhpSetting(LemmaSetting):
    """
    Lemma 3: partial injections of n+1 pigeons into n holes, each hole left out with probability q.
    """

    lemma: Lemma = Lemma.PIGEONHOLE

    def __init__(
        self,
        formula: Dnf,
        params: PhpParams,
    ) -> None:
        super().__init__(formula)

        if formula.n != params.instance.universe:
            raise InvalidParametersError(
                f"a pigeonhole DNF with {params.n} holes has {params.instance.universe} "
                f"variables, got {formula.n}"
            )

        self._params: Final[PhpParams] = params
        self._fprime: Final[Dnf] = php_preprocess(formula, params.instance)

    @property
    def distribution(self) -> PhpParams:
        return self._params

    @property
    def fprime(self) -> Dnf:
        """
        Returns the preprocessed DNF the trees are built from.

        :return: The DNF with only positive literals
        :rtype: Dnf
        """

        return self._fprime

    def outcome_count(self) -> int:
        return php_outcome_count(self._params.n)

    def outcomes(
        self,
        start: int = 0,
        stop: Optional[int] = None,
    ) -> Iterator[Tuple[PartialInjection, Fraction]]:
        for rho in enumerate_php(self._params.n, start, stop):
            yield rho, weight_php(rho, self._params)

    def weight(
        self,
        outcome: PartialInjection,
    ) -> Fraction:
        return weight_php(outcome, self._params)

    def sample(
        self,
        rng: np.random.Generator,
    ) -> PartialInjection:
        return sample_php(self._params, rng)

    def tree(
        self,
        outcome: PartialInjection,
        cache: Optional[ResultCache] = None,
    ) -> PhpTree:
        return PhpTree(self._fprime, outcome, self._params.n)

    def encode(
        self,
        outcome: PartialInjection,
        s: int,
    ) -> WitnessPhp:
        return encode_php(self._fprime, outcome, self._params.n, self._params.q, s)

    def decode(
        self,
        witness: WitnessPhp,
        s: int,
    ) -> PartialInjection:
        return decode_php(self._fprime, witness, self._params.n, self._params.q, s)

    def violations(self) -> List[str]:
        return lemma_violations(
            self.lemma, self._formula.r, q=self._params.q, n=self._params.n
        )

    def bounds(
        self,
        s: int,
    ) -> Tuple[PowerBound, PowerBound]:
        return bound_value(self.lemma, self._formula.r, s, q=self._params.q, n=self._params.n)

    def params(self) -> Dict[str, Any]:
        return {
            "n": self._params.n,
            "r": self._formula.r,
            "q": format_fraction(self._params.q),
            "l": format_fraction(self._params.l),
        }

    def check_size(
        self,
        unsafe: bool = False,
    ) -> None:
        if not unsafe and self._params.n > MAX_PHP_HOLES:
            raise SizeGuardError(
                f"{self._params.n} holes exceed the guard of {MAX_PHP_HOLES}"
            )

    def trimmed(
        self,
        outcome: PartialInjection,
    ) -> bool:
        l: Fraction = self._params.l

        return len(outcome.unset_pigeons()) < l and len(outcome.unset_holes()) < l

    def printed_weight(
        self,
        outcome: PartialInjection,
        weight: Fraction,
    ) -> Fraction:
        return weight_php_printed(outcome, self._params)

    def identity_violations(
        self,
        outcome: PartialInjection,
        weight: Fraction,
        witness: WitnessPhp,
        s: int,
    ) -> List[str]:
        messages: List[str] = []
        added: Dict[int, int] = {
            pigeon: hole
            for pigeon, hole in witness.rho_sigma.as_dict().items()
            if outcome.mapping[pigeon] is None
        }

        if len(added) < math.ceil(s / 2):
            messages.append(f"sigma sets {len(added)} pigeons, fewer than ceil(s/2) = {math.ceil(s / 2)}")

        if self._params.q == 0:
            return messages

        # Every single-pigeon step changes the weight by exactly (1-q)/(q(n+1-m))
        current: PartialInjection = outcome
        current_weight: Fraction = weight

        for pigeon, hole in added.items():
            following: PartialInjection = current.union({pigeon: hole})
            following_weight: Fraction = weight_php(following, self._params)

            if following_weight != current_weight * extension_factor(current.size, self._params):
                messages.append(f"adding {pigeon}:{hole} to {current} breaks the extension factor")

            current, current_weight = following, following_weight

        return messages


@dataclass(frozen=True)
class FailureWeight:
    """
    The exact weight of the failure set S.

    Attributes:
        count (int): The number of outcomes in S.
        total (Fraction): The weight of S.
        exception (Fraction): The weight of the outcomes of S set aside as exceptions.
        printed (Fraction): The weight of S under the convention quoted with the lemma.
    """

    count: int
    total: Fraction
    exception: Fraction = Fraction(0)
    printed: Fraction = Fraction(0)

    @property
    def trimmed(self) -> Fraction:
        """
        Returns the weight of S without the exceptions.

        :return: The weight
        :rtype: Fraction
        """

        return self.total - self.exception


@dataclass(frozen=True)
class MonteCarloEstimate:
    """
    A sampled failure frequency with its Wilson interval.

    Attributes:
        hits (int): The number of sampled outcomes in S, exceptions left out.
        trials (int): The number of samples.
        low (float): The lower end of the interval.
        high (float): The upper end of the interval.
        confidence (float): The confidence level.
        exceptions (int): Lemma 3, the sampled outcomes in S set aside as exceptions.
    """

    hits: int
    trials: int
    low: float
    high: float
    confidence: float = DEFAULT_CONFIDENCE
    exceptions: int = 0

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def center(self) -> float:
        return (self.low + self.high) / 2.0

    @property
    def half_width(self) -> float:
        return (self.high - self.low) / 2.0

    def covers(
        self,
        value: Fraction,
    ) -> bool:
        """
        Returns True if the interval contains an exact value.

        :param value: The value
        :type value: Fraction

        :return: True if low <= value <= high
        :rtype: bool
        """

        return Fraction(self.low) <= value <= Fraction(self.high)


@dataclass(frozen=True)
class LemmaReport:
    """
    The outcome of checking one lemma on one instance.

    Attributes:
        lemma (Lemma): The lemma.
        params (Dict[str, Any]): The instance parameters, rationals as "num/den".
        bound_loose (PowerBound): The bound as the lemma states it.
        bound_tight (PowerBound): The bound the proof actually derives.
        passed (bool): True if the preconditions hold and the weight is within both bounds.
        violations (Tuple[str, ...]): The preconditions that do not hold.
        exact_weight (Optional[Fraction]): The exact weight compared, when enumerated.
        estimate (Optional[MonteCarloEstimate]): The sampled estimate, when sampled.
        exception_mass (Optional[Fraction]): Lemma 3, the weight of S set aside as exceptions.
        printed_weight (Optional[Fraction]): Lemma 3, the weight of S under the quoted convention.
    """

    lemma: Lemma
    params: Dict[str, Any]
    bound_loose: PowerBound
    bound_tight: PowerBound
    passed: bool
    violations: Tuple[str, ...] = ()
    exact_weight: Optional[Fraction] = None
    estimate: Optional[MonteCarloEstimate] = None
    exception_mass: Optional[Fraction] = None
    printed_weight: Optional[Fraction] = field(default=None, compare=False)

    def as_dict(self) -> Dict[str, Any]:
        """
        Returns the report as a JSON-ready dictionary with exact rationals as strings.

        :return: The dictionary, keys in report order
        :rtype: Dict[str, Any]
        """

        report: Dict[str, Any] = {"lemma": int(self.lemma), "params": dict(self.params)}

        if self.exact_weight is not None:
            report["exact_weight"] = format_fraction(self.exact_weight)

        if self.estimate is not None:
            report["estimate"] = self.estimate.estimate
            report["half_width"] = self.estimate.half_width

        report["bound_loose"] = self.bound_loose.to_string()
        report["bound_tight"] = self.bound_tight.to_string()

        if self.exception_mass is not None:
            report["exception_mass"] = format_fraction(self.exception_mass)

        report["pass"] = self.passed

        return report


@dataclass(frozen=True)
class Violation:
    """
    One failed property of a sweep.

    Attributes:
        kind (str): "roundtrip", "collision", "weight", "class-bound" or "code-space".
        outcome (str): The offending outcome.
        detail (str): The description, with the witness where there is one.
    """

    kind: str
    outcome: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.outcome}: {self.detail}"


@dataclass(frozen=True)
class InjectivityReport:
    """
    The result of encoding and decoding every outcome of S.

    Attributes:
        lemma (Lemma): The lemma.
        s (int): The number of queries.
        failures (FailureWeight): The size and weight of S.
        classes (int): The number of distinct code classes.
        code_space (CodeSpace): The code-space counts of the union bound.
        violations (Tuple[Violation, ...]): Every failed property.
        reply_width (Optional[int]): Lemma 3, the largest number of reply candidates used.
        unset_width (Optional[int]): Lemma 3, the largest number of pigeons or holes unset in rho sigma.
    """

    lemma: Lemma
    s: int
    failures: FailureWeight
    classes: int
    code_space: CodeSpace
    violations: Tuple[Violation, ...] = ()
    reply_width: Optional[int] = None
    unset_width: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CoverageReport:
    """
    How often the sampled interval covered the exact weight.

    Attributes:
        exact (Fraction): The exact weight.
        batches (int): The number of seeded batches.
        covered (int): The number of batches whose interval contains the exact weight.
        trials (int): The samples per batch.
    """

    exact: Fraction
    batches: int
    covered: int
    trials: int

    @property
    def rate(self) -> float:
        return self.covered / self.batches if self.batches else 1.0


@dataclass(frozen=True)
class _SweepItem:
    outcome: Outcome
    weight: Fraction
    witness: Optional[Witness]
    problems: Tuple[Violation, ...]


class LemmaVerifier:
    """
    A service that measures failure sets on a thread pool.

    Enumeration streams are cut into contiguous chunks and Monte Carlo runs
    into fixed-size seeded batches; partial results are combined in chunk
    order, so every result is independent of the number of threads.

    Attributes:
        cache (ResultCache): The shared memo of pruned depth results.
        executor (ThreadPoolExecutor): The worker pool.
        logger (Logger): The logger.
        threads (int): The number of workers.
        unsafe_sizes (bool): True to lift the enumeration size guards.
    """

    def __init__(
        self,
        threads: int = 4,
        cache_capacity: int = 1_000_000,
        unsafe_sizes: bool = False,
    ) -> None:
        """
        Initialize the verifier.

        :param threads: The number of workers. Defaults to 4.
        :type threads: int
        :param cache_capacity: The capacity of the depth memo. Defaults to 1000000.
        :type cache_capacity: int
        :param unsafe_sizes: Lift the enumeration size guards. Defaults to False.
        :type unsafe_sizes: bool

        :return: None
        :rtype: None
        """

        # Initialize the logger
        self._logger: Final[Logger] = Logger.get_logger(name=self.__class__.__name__)

        # Store the configuration
        self._threads: Final[int] = max(1, threads)
        self._unsafe_sizes: Final[bool] = unsafe_sizes

        # Initialize the depth memo
        self._cache: Final[ResultCache] = ResultCache(capacity=cache_capacity)

        # Initialize the worker pool
        self._executor: Final[ThreadPoolExecutor] = ThreadPoolExecutor(
            max_workers=self._threads,
            thread_name_prefix="switchlab",
        )

        # Log the verifier start
        self._logger.info(message=f"LemmaVerifier started with {self._threads} threads")

    @property
    def cache(self) -> ResultCache:
        """
        Returns the depth memo.

        :return: The cache
        :rtype: ResultCache
        """

        return self._cache

    @property
    def threads(self) -> int:
        """
        Returns the number of workers.

        :return: The number of workers
        :rtype: int
        """

        return self._threads

    def __enter__(self) -> "LemmaVerifier":
        return self

    def __exit__(self, *_: Any) -> None:
        self.shutdown()

    def _chunks(
        self,
        setting: LemmaSetting,
    ) -> List[Tuple[int, int]]:
        return list(chunk_ranges(setting.outcome_count(), self._threads * 4))

    def _weigh_chunk(
        self,
        setting: LemmaSetting,
        s: int,
        start: int,
        stop: int,
    ) -> FailureWeight:
        count: int = 0
        total: Fraction = Fraction(0)
        exception: Fraction = Fraction(0)
        printed: Fraction = Fraction(0)

        for outcome, weight in setting.outcomes(start, stop):
            if weight == 0 or not setting.tree(outcome, self._cache).depth_at_least(s):
                continue

            count += 1
            total += weight
            printed += setting.printed_weight(outcome, weight)

            if not setting.trimmed(outcome):
                exception += weight

        self._logger.debug(message=f"Weighed outcomes {start} to {stop}: {count} in S")

        return FailureWeight(count=count, total=total, exception=exception, printed=printed)

    def failure_weight(
        self,
        setting: LemmaSetting,
        s: int,
    ) -> FailureWeight:
        """
        Returns the exact weight of the outcomes whose canonical tree has height s or greater.

        :param setting: The instance
        :type setting: LemmaSetting
        :param s: The height threshold, at least 1
        :type s: int

        :return: The exact failure weight
        :rtype: FailureWeight
        """

        if s < 1:
            raise PreconditionError(f"s must be at least 1, got {s}")

        setting.check_size(self._unsafe_sizes)

        # Weigh every chunk in parallel
        partials: List[FailureWeight] = list(
            self._executor.map(
                lambda bounds: self._weigh_chunk(setting, s, *bounds),
                self._chunks(setting),
            )
        )

        return FailureWeight(
            count=sum(partial.count for partial in partials),
            total=sum((partial.total for partial in partials), Fraction(0)),
            exception=sum((partial.exception for partial in partials), Fraction(0)),
            printed=sum((partial.printed for partial in partials), Fraction(0)),
        )

    def _sample_batch(
        self,
        setting: LemmaSetting,
        s: int,
        rng: np.random.Generator,
        trials: int,
    ) -> Tuple[int, int]:
        hits: int = 0
        exceptions: int = 0

        for _ in range(trials):
            outcome: Outcome = setting.sample(rng)

            if not setting.tree(outcome, self._cache).depth_at_least(s):
                continue

            if setting.trimmed(outcome):
                hits += 1
            else:
                exceptions += 1

        return hits, exceptions

    def estimate(
        self,
        setting: LemmaSetting,
        s: int,
        trials: int,
        seed: int,
        confidence: float = DEFAULT_CONFIDENCE,
    ) -> MonteCarloEstimate:
        """
        Estimates the failure weight by sampling.

        The trials are cut into batches of MONTE_CARLO_BATCH, each with its
        own generator spawned from the seed. Sampled outcomes that lemma 3
        sets aside are counted apart and stay out of the interval.

        :param setting: The instance
        :type setting: LemmaSetting
        :param s: The height threshold, at least 1
        :type s: int
        :param trials: The number of samples, at least 1
        :type trials: int
        :param seed: The 64-bit seed
        :type seed: int
        :param confidence: The confidence level. Defaults to 0.99.
        :type confidence: float

        :return: The estimate with its Wilson interval
        :rtype: MonteCarloEstimate
        """

        if trials < 1:
            raise InvalidParametersError(f"need at least one trial, got {trials}")

        if s < 1:
            raise PreconditionError(f"s must be at least 1, got {s}")

        sizes: List[int] = [
            stop - start for start, stop in chunk_ranges(trials, math.ceil(trials / MONTE_CARLO_BATCH))
        ]
        rngs: List[np.random.Generator] = spawn_rngs(seed, len(sizes))

        counts: List[Tuple[int, int]] = list(
            self._executor.map(
                lambda job: self._sample_batch(setting, s, job[0], job[1]),
                zip(rngs, sizes),
            )
        )
        hits: int = sum(hit for hit, _ in counts)
        low, high = wilson_interval(hits, trials, confidence)

        return MonteCarloEstimate(
            hits=hits,
            trials=trials,
            low=low,
            high=high,
            confidence=confidence,
            exceptions=sum(exception for _, exception in counts),
        )

    def check(
        self,
        setting: LemmaSetting,
        s: int,
        mode: Mode = Mode.EXACT,
        trials: int = 10_000,
        seed: int = 0,
    ) -> LemmaReport:
        """
        Checks a lemma on an instance.

        In exact mode the exact failure weight (for lemma 3, without the
        exceptions) must be within both bounds; in sample mode the estimate
        plus its half-width must be, with lemma 3 exceptions sampled apart.
        Violated preconditions never pass.

        :param setting: The instance
        :type setting: LemmaSetting
        :param s: The height threshold, at least 1
        :type s: int
        :param mode: Exact enumeration or sampling. Defaults to Mode.EXACT.
        :type mode: Mode
        :param trials: The number of samples in sample mode. Defaults to 10000.
        :type trials: int
        :param seed: The seed in sample mode. Defaults to 0.
        :type seed: int

        :return: The report
        :rtype: LemmaReport
        """

        started_at: datetime = DateUtil.now()

        violations: List[str] = setting.violations()
        loose, tight = setting.bounds(s)
        params: Dict[str, Any] = {**setting.params(), "s": s}

        exact_weight: Optional[Fraction] = None
        estimate: Optional[MonteCarloEstimate] = None
        exception_mass: Optional[Fraction] = None
        printed_weight: Optional[Fraction] = None

        if mode is Mode.EXACT:
            weight: FailureWeight = self.failure_weight(setting, s)
            exact_weight = weight.trimmed
            compared: Fraction = exact_weight

            if setting.lemma is Lemma.PIGEONHOLE:
                exception_mass = weight.exception
                printed_weight = weight.printed
        else:
            params["trials"] = trials
            params["seed"] = seed
            estimate = self.estimate(setting, s, trials, seed)
            compared = Fraction(estimate.estimate) + Fraction(estimate.half_width)

            if setting.lemma is Lemma.PIGEONHOLE:
                exception_mass = Fraction(estimate.exceptions, trials)

        within: bool = loose.admits(compared) and tight.admits(compared)

        report: LemmaReport = LemmaReport(
            lemma=setting.lemma,
            params=params,
            bound_loose=loose,
            bound_tight=tight,
            passed=within and not violations,
            violations=tuple(violations),
            exact_weight=exact_weight,
            estimate=estimate,
            exception_mass=exception_mass,
            printed_weight=printed_weight,
        )

        elapsed: float = (DateUtil.now() - started_at).total_seconds()

        for violation in violations:
            self._logger.warning(message=f"Precondition violated: {violation}")

        if not within:
            self._logger.warning(
                message=f"Lemma {int(setting.lemma)} bound exceeded at s={s}: "
                f"{format_fraction(compared)} > {tight.to_string()} or {loose.to_string()}"
            )

        self._logger.info(
            message=f"Lemma {int(setting.lemma)} checked at s={s} in {mode.value} mode "
            f"({elapsed:.3f}s): {'pass' if report.passed else 'fail'}"
        )

        return report

    def _sweep_chunk(
        self,
        setting: LemmaSetting,
        s: int,
        start: int,
        stop: int,
    ) -> List[_SweepItem]:
        items: List[_SweepItem] = []

        for outcome, weight in setting.outcomes(start, stop):
            if weight == 0 or not setting.tree(outcome, self._cache).depth_at_least(s):
                continue

            label: str = str(outcome)

            try:
                witness: Witness = setting.encode(outcome, s)
            except SwitchLabError as error:
                items.append(
                    _SweepItem(outcome, weight, None, (Violation("roundtrip", label, f"encode failed: {error}"),))
                )
                continue

            problems: List[Violation] = []

            try:
                decoded: Outcome = setting.decode(witness, s)

                if decoded != outcome:
                    problems.append(
                        Violation("roundtrip", label, f"decoded to {decoded} from {witness}")
                    )
            except DecodeError as error:
                problems.append(Violation("roundtrip", label, f"{error} for {witness}"))

            for message in setting.identity_violations(outcome, weight, witness, s):
                problems.append(Violation("weight", label, message))

            items.append(_SweepItem(outcome, weight, witness, tuple(problems)))

        return items

    def sweep(
        self,
        setting: LemmaSetting,
        s: int,
    ) -> InjectivityReport:
        """
        Encodes and decodes every outcome of S and checks the counting argument.

        The sweep checks that decoding inverts encoding, that distinct
        outcomes get distinct witnesses, the weight change of every encoding
        and that no code class outweighs its bound. For lemma 3 it also
        checks that every reply index fits the effective code space.

        :param setting: The instance
        :type setting: LemmaSetting
        :param s: The height threshold, at least 1
        :type s: int

        :return: The report
        :rtype: InjectivityReport
        """

        if s < 1:
            raise PreconditionError(f"s must be at least 1, got {s}")

        setting.check_size(self._unsafe_sizes)

        chunks: List[List[_SweepItem]] = list(
            self._executor.map(
                lambda bounds: self._sweep_chunk(setting, s, *bounds),
                self._chunks(setting),
            )
        )

        violations: List[Violation] = []
        owners: Dict[Witness, Outcome] = {}
        sums: Dict[Hashable, Fraction] = {}
        limits: Dict[Hashable, Fraction] = {}
        count: int = 0
        total: Fraction = Fraction(0)
        reply_width: int = 0
        unset_width: int = 0

        for item in itertools.chain.from_iterable(chunks):
            count += 1
            total += item.weight
            violations.extend(item.problems)

            if item.witness is None:
                continue

            if item.witness in owners:
                violations.append(
                    Violation(
                        "collision",
                        str(item.outcome),
                        f"shares {item.witness} with {owners[item.witness]}",
                    )
                )
            else:
                owners[item.witness] = item.outcome

            for key, limit in setting.class_groups(item.witness, s):
                sums[key] = sums.get(key, Fraction(0)) + item.weight
                limits[key] = max(limits.get(key, limit), limit)

            if isinstance(item.witness, WitnessPhp):
                reply_width = max(reply_width, item.witness.width)
                unset_width = max(
                    unset_width,
                    len(item.witness.rho_sigma.unset_pigeons()),
                    len(item.witness.rho_sigma.unset_holes()),
                )

        for key, weight in sums.items():
            if weight > limits[key]:
                violations.append(
                    Violation(
                        "class-bound",
                        str(key),
                        f"class weighs {format_fraction(weight)} > {format_fraction(limits[key])}",
                    )
                )

        if setting.lemma is Lemma.PIGEONHOLE:
            space: CodeSpace = code_space(
                setting.lemma, setting.formula.r, s, l=Fraction(max(unset_width, 1))
            )
            codes: int = len({witness.pi for witness in owners})

            if reply_width > unset_width:
                violations.append(
                    Violation(
                        "code-space",
                        "-",
                        f"a reply index needs {reply_width} candidates, only {unset_width} are unset",
                    )
                )

            if codes > space.pi:
                violations.append(
                    Violation("code-space", "-", f"{codes} pi' strings exceed (2u)^s = {space.pi}")
                )
        else:
            space = code_space(setting.lemma, setting.formula.r, s)

        report: InjectivityReport = InjectivityReport(
            lemma=setting.lemma,
            s=s,
            failures=FailureWeight(count=count, total=total),
            classes=len(sums),
            code_space=space,
            violations=tuple(violations),
            reply_width=reply_width if setting.lemma is Lemma.PIGEONHOLE else None,
            unset_width=unset_width if setting.lemma is Lemma.PIGEONHOLE else None,
        )

        if violations:
            self._logger.warning(
                message=f"Lemma {int(setting.lemma)} sweep at s={s} found {len(violations)} violations; "
                f"first: {violations[0]}"
            )
        else:
            self._logger.info(
                message=f"Lemma {int(setting.lemma)} sweep at s={s}: {count} outcomes in S, no violations"
            )

        return report

    def coverage(
        self,
        setting: LemmaSetting,
        s: int,
        batches: int,
        trials: int,
        seed: int,
    ) -> CoverageReport:
        """
        Counts how many seeded batches produce an interval containing the exact weight.

        :param setting: The instance, small enough to enumerate
        :type setting: LemmaSetting
        :param s: The height threshold
        :type s: int
        :param batches: The number of batches
        :type batches: int
        :param trials: The samples per batch
        :type trials: int
        :param seed: The root seed
        :type seed: int

        :return: The coverage counts
        :rtype: CoverageReport
        """

        exact: Fraction = self.failure_weight(setting, s).trimmed
        seeds: List[int] = [
            int(child.generate_state(1, dtype=np.uint64)[0])
            for child in np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF).spawn(batches)
        ]

        covered: int = sum(
            1 for batch_seed in seeds if self.estimate(setting, s, trials, batch_seed).covers(exact)
        )

        return CoverageReport(exact=exact, batches=batches, covered=covered, trials=trials)

    def shutdown(self) -> None:
        """
        Stops the worker pool gracefully.

        :return: None
        :rtype: None
        """

        # Log the verifier shutdown initiation
        self._logger.info(message="LemmaVerifier shutdown initiated")

        # Wait for the workers to finish
        self._executor.shutdown(wait=True)

        # Log the verifier shutdown completion
        self._logger.info(
            message=f"LemmaVerifier shutdown complete ({self._cache.statistics()})"
        )


def exact_failure_weight(
    setting: LemmaSetting,
    s: int,
    threads: int = 1,
) -> Fraction:
    """
    Returns the exact weight |S| of the outcomes whose canonical tree has height s or greater.

    :param setting: The instance
    :type setting: LemmaSetting
    :param s: The height threshold, at least 1
    :type s: int
    :param threads: The number of workers. Defaults to 1.
    :type threads: int

    :return: The exact weight
    :rtype: Fraction
    """

    with LemmaVerifier(threads=threads) as verifier:
        return verifier.failure_weight(setting, s).total


def monte_carlo_failure(
    setting: LemmaSetting,
    s: int,
    trials: int,
    seed: int,
    threads: int = 1,
) -> MonteCarloEstimate:
    """
    Estimates |S| by sampling, with a 99% Wilson interval.

    :param setting: The instance
    :type setting: LemmaSetting
    :param s: The height threshold, at least 1
    :type s: int
    :param trials: The number of samples
    :type trials: int
    :param seed: The 64-bit seed
    :type seed: int
    :param threads: The number of workers. Defaults to 1.
    :type threads: int

    :return: The estimate
    :rtype: MonteCarloEstimate
    """

    with LemmaVerifier(threads=threads) as verifier:
        return verifier.estimate(setting, s, trials, seed)


def check_lemma(
    setting: LemmaSetting,
    s: int,
    mode: Mode = Mode.EXACT,
    trials: int = 10_000,
    seed: int = 0,
    threads: int = 1,
) -> LemmaReport:
    """
    Checks a lemma on an instance and returns the report.

    :param setting: The instance
    :type setting: LemmaSetting
    :param s: The height threshold, at least 1
    :type s: int
    :param mode: Exact enumeration or sampling. Defaults to Mode.EXACT.
    :type mode: Mode
    :param trials: The number of samples in sample mode. Defaults to 10000.
    :type trials: int
    :param seed: The seed in sample mode. Defaults to 0.
    :type seed: int
    :param threads: The number of workers. Defaults to 1.
    :type threads: int

    :return: The report
    :rtype: LemmaReport
    """

    with LemmaVerifier(threads=threads) as verifier:
        return verifier.check(setting, s, mode=mode, trials=trials, seed=seed)


def sweep_injectivity(
    setting: LemmaSetting,
    s: int,
    threads: int = 1,
) -> InjectivityReport:
    """
    Encodes and decodes every outcome of S; see LemmaVerifier.sweep.

    :param setting: The instance
    :type setting: LemmaSetting
    :param s: The height threshold, at least 1
    :type s: int
    :param threads: The number of workers. Defaults to 1.
    :type threads: int

    :return: The report
    :rtype: InjectivityReport
    """

    with LemmaVerifier(threads=threads) as verifier:
        return verifier.sweep(setting, s)


def monte_carlo_coverage(
    setting: LemmaSetting,
    s: int,
    batches: int,
    trials: int,
    seed: int,
    threads: int = 1,
) -> CoverageReport:
    """
    Counts how often the 99% interval of a batch covers the exact weight.

    :param setting: The instance
    :type setting: LemmaSetting
    :param s: The height threshold
    :type s: int
    :param batches: The number of batches
    :type batches: int
    :param trials: The samples per batch
    :type trials: int
    :param seed: The root seed
    :type seed: int
    :param threads: The number of workers. Defaults to 1.
    :type threads: int

    :return: The coverage counts
    :rtype: CoverageReport
    """

    with LemmaVerifier(threads=threads) as verifier:
        return verifier.coverage(setting, s, batches, trials, seed)
