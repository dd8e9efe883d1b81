"""
Literals, terms, r-DNFs, restrictions and the pigeonhole preprocessing.

Date: 2026-10-18
"""

import itertools

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, Final, Iterator, List, Mapping, Optional, Sequence, Tuple

from Logger import Logger

from .exceptions import CompositionError, FormulaError


__all__: Final[List[str]] = [
    "BlockStructure",
    "Dnf",
    "Literal",
    "PhpInstance",
    "RestrictedDnf",
    "Restriction",
    "Term",
    "TermKind",
    "TermStatus",
    "Value",
    "compose",
    "php_preprocess",
    "restrict_dnf",
    "restrict_term",
]


_logger: Final[Logger] = Logger.get_logger(name=__name__)


class Value(IntEnum):
    """
    The value a restriction gives a variable.
    """

    ZERO = 0
    ONE = 1
    STAR = 2

    @property
    def symbol(self) -> str:
        """
        Returns the one-character symbol of the value ("0", "1" or "*").

        :return: The symbol
        :rtype: str
        """

        return _SYMBOLS[self]


_SYMBOLS: Final[Dict[int, str]] = {0: "0", 1: "1", 2: "*"}
_FROM_SYMBOL: Final[Dict[str, Value]] = {"0": Value.ZERO, "1": Value.ONE, "*": Value.STAR}


@dataclass(frozen=True)
class Literal:
    """
    A possibly negated variable.

    Attributes:
        var (int): The 0-based variable index.
        positive (bool): False if the literal is negated.
    """

    var: int
    positive: bool = True

    def __post_init__(self) -> None:
        if self.var < 0:
            raise FormulaError(f"variable index {self.var} is negative")

    @classmethod
    def from_int(
        cls,
        value: int,
    ) -> "Literal":
        """
        Creates a literal from its signed 1-based integer form.

        :param value: k > 0 for variable k-1, k < 0 for the negation of variable -k-1
        :type value: int

        :return: The literal
        :rtype: Literal
        """

        if value == 0:
            raise FormulaError("0 is not a literal")

        return cls(var=abs(value) - 1, positive=value > 0)

    @property
    def satisfying_value(self) -> Value:
        """
        Returns the value that makes this literal true.

        :return: ONE for a positive literal, ZERO for a negated one
        :rtype: Value
        """

        return Value.ONE if self.positive else Value.ZERO

    def to_int(self) -> int:
        """
        Returns the signed 1-based integer form of the literal.

        :return: The integer form
        :rtype: int
        """

        return self.var + 1 if self.positive else -(self.var + 1)

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"-x{self.var}"


@dataclass(frozen=True)
class Term:
    """
    A conjunction of literals.

    The position of a literal in `literals` is its location, which the
    witness codecs record.

    Attributes:
        literals (Tuple[Literal, ...]): The literals in their written order.
    """

    literals: Tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        # Accept any sequence but store a tuple
        object.__setattr__(self, "literals", tuple(self.literals))

        seen: set = set()

        for literal in self.literals:
            if literal.var in seen:
                raise FormulaError(f"variable {literal.var} appears twice in a term")

            seen.add(literal.var)

    @classmethod
    def of(
        cls,
        *values: int,
    ) -> "Term":
        """
        Creates a term from signed 1-based integers.

        :param values: The literals in integer form
        :type values: int

        :return: The term
        :rtype: Term
        """

        return cls(tuple(Literal.from_int(value) for value in values))

    @property
    def variables(self) -> Tuple[int, ...]:
        """
        Returns the variables of the term in literal order.

        :return: The variables
        :rtype: Tuple[int, ...]
        """

        return tuple(literal.var for literal in self.literals)

    def location_of(
        self,
        var: int,
    ) -> int:
        """
        Returns the position of the literal on the given variable.

        :param var: The variable
        :type var: int

        :return: The 0-based location
        :rtype: int
        """

        for location, literal in enumerate(self.literals):
            if literal.var == var:
                return location

        raise FormulaError(f"variable {var} does not occur in the term")

    def __getitem__(
        self,
        location: int,
    ) -> Literal:
        return self.literals[location]

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "(true)"

        return "(" + " & ".join(str(literal) for literal in self.literals) + ")"


@dataclass(frozen=True)
class Dnf:
    """
    An r-DNF over n variables.

    Term order matters: the canonical trees scan for the first term that is
    not falsified.

    Attributes:
        n (int): The universe size.
        r (int): The width bound.
        terms (Tuple[Term, ...]): The terms in order.
    """

    n: int
    r: int
    terms: Tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))

        if self.n < 0 or self.r < 0:
            raise FormulaError(f"invalid universe size {self.n} or width {self.r}")

        for index, term in enumerate(self.terms):
            if len(term) > self.r:
                raise FormulaError(
                    f"term {index} has width {len(term)} > r={self.r}"
                )

            for literal in term:
                if literal.var >= self.n:
                    raise FormulaError(
                        f"term {index} mentions variable {literal.var} outside [0, {self.n})"
                    )

    def evaluate(
        self,
        assignment: "Restriction",
    ) -> bool:
        """
        Evaluates the formula under a total restriction.

        :param assignment: A restriction without stars
        :type assignment: Restriction

        :return: The truth value
        :rtype: bool
        """

        if not assignment.is_total():
            raise FormulaError("evaluate needs a restriction without stars")

        return restrict_dnf(self, assignment).is_constant_one

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "(false)"

        return " | ".join(str(term) for term in self.terms)


@dataclass(frozen=True)
class Restriction:
    """
    A total map from the variables [0, n) to {0, 1, *}.

    Attributes:
        values (Tuple[int, ...]): The value of each variable, as Value members.
    """

    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))

        for value in self.values:
            if value not in (0, 1, 2):
                raise FormulaError(f"{value!r} is not a restriction value")

    @classmethod
    def all_star(
        cls,
        n: int,
    ) -> "Restriction":
        """
        Returns the restriction that leaves every variable unset.

        :param n: The universe size
        :type n: int

        :return: The restriction
        :rtype: Restriction
        """

        return cls((Value.STAR,) * n)

    @classmethod
    def from_string(
        cls,
        text: str,
    ) -> "Restriction":
        """
        Parses a restriction written as a string over "0", "1" and "*".

        :param text: The string, variable 0 first
        :type text: str

        :return: The restriction
        :rtype: Restriction
        """

        try:
            return cls(tuple(_FROM_SYMBOL[symbol] for symbol in text.strip()))
        except KeyError as error:
            raise FormulaError(f"{text!r} is not a restriction string") from error

    @property
    def n(self) -> int:
        """
        Returns the universe size.

        :return: The number of variables
        :rtype: int
        """

        return len(self.values)

    def counts(self) -> Tuple[int, int, int]:
        """
        Returns the number of ones, zeros and stars (a, b, c).

        :return: The counts
        :rtype: Tuple[int, int, int]
        """

        ones: int = self.values.count(Value.ONE)
        zeros: int = self.values.count(Value.ZERO)

        return ones, zeros, len(self.values) - ones - zeros

    def stars(self) -> Tuple[int, ...]:
        """
        Returns the unset variables in ascending order.

        :return: The starred variables
        :rtype: Tuple[int, ...]
        """

        return tuple(var for var, value in enumerate(self.values) if value == Value.STAR)

    def is_total(self) -> bool:
        """
        Returns True if no variable is starred.

        :return: True for a total assignment
        :rtype: bool
        """

        return Value.STAR not in self.values

    def unset(
        self,
        variables: Sequence[int],
    ) -> "Restriction":
        """
        Returns a copy with the given variables starred again.

        :param variables: The variables to unset
        :type variables: Sequence[int]

        :return: The restriction
        :rtype: Restriction
        """

        values: List[int] = list(self.values)

        for var in variables:
            values[var] = Value.STAR

        return Restriction(tuple(values))

    def to_string(self) -> str:
        """
        Returns the restriction as a string over "0", "1" and "*".

        :return: The string, variable 0 first
        :rtype: str
        """

        return "".join(_SYMBOLS[value] for value in self.values)

    def __getitem__(
        self,
        var: int,
    ) -> int:
        return self.values[var]

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return self.to_string()


class TermKind(Enum):
    """
    The outcome of restricting a single term.
    """

    FALSIFIED = "falsified"
    SATISFIED = "satisfied"
    RESIDUAL = "residual"


@dataclass(frozen=True)
class TermStatus:
    """
    A restricted term.

    Attributes:
        kind (TermKind): Falsified, satisfied or residual.
        residual (Optional[Term]): The surviving starred literals for RESIDUAL.
    """

    kind: TermKind
    residual: Optional[Term] = None


_FALSIFIED: Final[TermStatus] = TermStatus(TermKind.FALSIFIED)
_SATISFIED: Final[TermStatus] = TermStatus(TermKind.SATISFIED, Term(()))


def restrict_term(
    term: Term,
    rho: Restriction,
) -> TermStatus:
    """
    Restricts a term.

    The term is falsified iff some literal is set against its polarity;
    otherwise its satisfied literals are deleted and an empty residue
    means it is satisfied.

    :param term: The term
    :type term: Term
    :param rho: The restriction
    :type rho: Restriction

    :return: The classification with the residual term
    :rtype: TermStatus
    """

    kept: List[Literal] = []
    values: Tuple[int, ...] = rho.values

    for literal in term.literals:
        value: int = values[literal.var]

        if value == Value.STAR:
            kept.append(literal)
        elif (value == Value.ONE) != literal.positive:
            return _FALSIFIED

    if not kept:
        return _SATISFIED

    return TermStatus(TermKind.RESIDUAL, Term(tuple(kept)))


@dataclass(frozen=True)
class RestrictedDnf:
    """
    The result of restricting a DNF.

    Falsified terms are dropped; a satisfied term stays as an empty term so
    that restricting again by the same restriction is a no-op.

    Attributes:
        formula (Dnf): The surviving residual terms in their original order.
        origins (Tuple[int, ...]): The index in the original DNF of each surviving term.
    """

    formula: Dnf
    origins: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def is_constant_one(self) -> bool:
        """
        Returns True if some term is satisfied.

        :return: True for the constant-1 formula
        :rtype: bool
        """

        return any(len(term) == 0 for term in self.formula.terms)

    @property
    def is_constant_zero(self) -> bool:
        """
        Returns True if every term is falsified.

        :return: True for the constant-0 formula
        :rtype: bool
        """

        return len(self.formula.terms) == 0


def restrict_dnf(
    formula: Dnf,
    rho: Restriction,
) -> RestrictedDnf:
    """
    Restricts every term of a DNF.

    :param formula: The DNF
    :type formula: Dnf
    :param rho: The restriction, over the same universe
    :type rho: Restriction

    :return: The restricted formula with its constant flags
    :rtype: RestrictedDnf
    """

    if rho.n != formula.n:
        raise FormulaError(
            f"restriction over {rho.n} variables applied to a DNF over {formula.n}"
        )

    terms: List[Term] = []
    origins: List[int] = []

    for index, term in enumerate(formula.terms):
        status: TermStatus = restrict_term(term, rho)

        if status.kind is TermKind.FALSIFIED:
            continue

        terms.append(status.residual)
        origins.append(index)

    return RestrictedDnf(
        formula=Dnf(n=formula.n, r=formula.r, terms=tuple(terms)),
        origins=tuple(origins),
    )


def compose(
    rho: Restriction,
    pi: Mapping[int, int],
) -> Restriction:
    """
    Extends a restriction by a fragment that only sets starred variables.

    :param rho: The restriction
    :type rho: Restriction
    :param pi: The fragment, variable to ZERO or ONE
    :type pi: Mapping[int, int]

    :return: The composed restriction
    :rtype: Restriction
    """

    values: List[int] = list(rho.values)

    for var, value in pi.items():
        if not 0 <= var < len(values):
            raise CompositionError(f"variable {var} is outside the universe")

        if value not in (Value.ZERO, Value.ONE):
            raise CompositionError(f"fragment sets variable {var} to {value!r}")

        if values[var] != Value.STAR:
            raise CompositionError(
                f"variable {var} is already set to {_SYMBOLS[values[var]]}"
            )

        values[var] = Value(value)

    return Restriction(tuple(values))


@dataclass(frozen=True)
class BlockStructure:
    """
    An ordered partition of [0, n) into nonempty blocks.

    The order of the variables inside a block is the fixed order used to find
    a block's first starred variable.

    Attributes:
        n (int): The universe size.
        blocks (Tuple[Tuple[int, ...], ...]): The blocks.
    """

    n: int
    blocks: Tuple[Tuple[int, ...], ...]
    block_of: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        blocks: Tuple[Tuple[int, ...], ...] = tuple(tuple(block) for block in self.blocks)
        object.__setattr__(self, "blocks", blocks)

        owner: List[int] = [-1] * self.n

        for index, block in enumerate(blocks):
            if not block:
                raise FormulaError(f"block {index} is empty")

            for var in block:
                if not 0 <= var < self.n:
                    raise FormulaError(
                        f"block {index} mentions variable {var} outside [0, {self.n})"
                    )

                if owner[var] != -1:
                    raise FormulaError(f"variable {var} belongs to two blocks")

                owner[var] = index

        missing: List[int] = [var for var, index in enumerate(owner) if index == -1]

        if missing:
            raise FormulaError(f"variables {missing} are not covered by any block")

        object.__setattr__(self, "block_of", tuple(owner))

    @classmethod
    def singletons(
        cls,
        n: int,
    ) -> "BlockStructure":
        """
        Returns the partition into one block per variable.

        :param n: The universe size
        :type n: int

        :return: The block structure
        :rtype: BlockStructure
        """

        return cls(n=n, blocks=tuple((var,) for var in range(n)))

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class PhpInstance:
    """
    The variables p_xy of the pigeonhole principle with n holes.

    Pigeon x in [0, n+1) and hole y in [0, n) are paired with the variable
    x * n + y.

    Attributes:
        n (int): The number of holes.
    """

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise FormulaError(f"a pigeonhole instance needs at least one hole, got {self.n}")

    @property
    def pigeons(self) -> int:
        """
        Returns the number of pigeons (n + 1).

        :return: The number of pigeons
        :rtype: int
        """

        return self.n + 1

    @property
    def universe(self) -> int:
        """
        Returns the number of variables, (n + 1) * n.

        :return: The universe size
        :rtype: int
        """

        return (self.n + 1) * self.n

    def variable(
        self,
        pigeon: int,
        hole: int,
    ) -> int:
        """
        Returns the variable p_xy.

        :param pigeon: The pigeon x
        :type pigeon: int
        :param hole: The hole y
        :type hole: int

        :return: The variable index
        :rtype: int
        """

        if not (0 <= pigeon <= self.n and 0 <= hole < self.n):
            raise FormulaError(f"no variable for pigeon {pigeon} and hole {hole}")

        return pigeon * self.n + hole

    def pigeon_hole(
        self,
        var: int,
    ) -> Tuple[int, int]:
        """
        Returns the (pigeon, hole) pair of a variable.

        :param var: The variable index
        :type var: int

        :return: The pair
        :rtype: Tuple[int, int]
        """

        if not 0 <= var < self.universe:
            raise FormulaError(f"variable {var} is outside the pigeonhole universe")

        return divmod(var, self.n)


def php_preprocess(
    formula: Dnf,
    instance: PhpInstance,
) -> Dnf:
    """
    Rewrites a DNF over pigeonhole variables into one with positive literals.

    Each negated literal -p_xy becomes the disjunction of p_xy' over the
    other holes y', the result is distributed back into an r-DNF and terms
    that send one pigeon to two holes or two pigeons to one hole are removed.
    Expansions of earlier terms come first; within a term the choices
    enumerate in ascending hole order, lexicographically across literals.

    :param formula: The DNF over (n+1)*n variables
    :type formula: Dnf
    :param instance: The pigeonhole instance
    :type instance: PhpInstance

    :return: The preprocessed DNF
    :rtype: Dnf
    """

    if formula.n != instance.universe:
        raise FormulaError(
            f"DNF over {formula.n} variables is not over the {instance.universe} "
            f"variables of a pigeonhole instance with {instance.n} holes"
        )

    terms: List[Term] = []

    for term in formula.terms:
        # The positive alternatives of every literal
        options: List[List[int]] = []

        for literal in term.literals:
            pigeon, hole = instance.pigeon_hole(literal.var)

            if literal.positive:
                options.append([literal.var])
            else:
                options.append(
                    [instance.variable(pigeon, other) for other in range(instance.n) if other != hole]
                )

        for choice in itertools.product(*options):
            # Drop repeated variables, keeping the first occurrence
            variables: List[int] = list(dict.fromkeys(choice))

            if _asserts_collision(variables, instance):
                continue

            terms.append(Term(tuple(Literal(var) for var in variables)))

    _logger.debug(
        message=f"Preprocessed {len(formula.terms)} terms into {len(terms)} positive terms"
    )

    return Dnf(n=formula.n, r=formula.r, terms=tuple(terms))


def _asserts_collision(
    variables: Sequence[int],
    instance: PhpInstance,
) -> bool:
    """
    Returns True if the positive literals send a pigeon to two holes or two pigeons to a hole.

    :param variables: The distinct positive variables
    :type variables: Sequence[int]
    :param instance: The pigeonhole instance
    :type instance: PhpInstance

    :return: True if the conjunction is inconsistent with injectivity
    :rtype: bool
    """

    pigeons: set = set()
    holes: set = set()

    for var in variables:
        pigeon, hole = instance.pigeon_hole(var)

        if pigeon in pigeons or hole in holes:
            return True

        pigeons.add(pigeon)
        holes.add(hole)

    return False
