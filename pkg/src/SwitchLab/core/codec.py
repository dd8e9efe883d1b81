"""
Witness codecs: a failing restriction is encoded as (rho sigma, beta', pi'[, gamma']) and decoded back.

Every encoder walks the trimmed trace of the first long branch; every
decoder replays the decision procedure on rho sigma, undoing one round at a
time. Decoders are total: a witness that is not the encoding of a failing
restriction raises DecodeError, which is checked by encoding the candidate
again and comparing.

Date: 2026-10-18
"""

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Final, List, Optional, Sequence, Set, Tuple, Union

from .block import BlockClass, BlockOutcome, BlockTag
from .exceptions import DecodeError, FormulaError, PreconditionError, SwitchLabError
from .formula import BlockStructure, Dnf, Restriction, Term, Value
from .php import PartialInjection, PhpParams
from .tree import BlockTree, IndependentTree, PhpTree, QueryKind, Trace
from ..utils.utils import as_fraction


__all__: Final[List[str]] = [
    "CodeSpace",
    "Lemma",
    "WitnessBlock",
    "WitnessIndep",
    "WitnessPhp",
    "code_space",
    "decode_block",
    "decode_indep",
    "decode_php",
    "dump_witness",
    "encode_block",
    "encode_indep",
    "encode_php",
    "load_witness",
]


class Lemma(IntEnum):
    """
    The three switching lemmas, one per restriction family.
    """

    INDEPENDENT = 1
    BLOCK = 2
    PIGEONHOLE = 3


# A beta' entry: (location of the literal in its term, last entry of the round)
BetaCode = Tuple[int, bool]

# A pigeonhole pi' entry: (reply is the literal's own partner, index among the other candidates)
ReplyCode = Tuple[bool, int]


@dataclass(frozen=True)
class WitnessIndep:
    """
    The encoding of a restriction that fails in the independent setting.

    Attributes:
        rho_sigma (Restriction): rho extended by the assignments that satisfy each round's literals.
        beta (Tuple[BetaCode, ...]): One (location, last) pair per query.
        pi (Tuple[int, ...]): The answer of every query.
        terms (Tuple[int, ...]): The term index of every round; not part of the code.
    """

    rho_sigma: Restriction
    beta: Tuple[BetaCode, ...]
    pi: Tuple[int, ...]
    terms: Tuple[int, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class WitnessBlock:
    """
    The encoding of an outcome that fails in the block setting.

    Attributes:
        rho_sigma (Restriction): rho with every queried block fixed by sigma.
        classes (BlockClass): The block tags of rho sigma.
        beta (Tuple[BetaCode, ...]): One (location, last) pair per queried block.
        pi (Tuple[int, ...]): The answer of every query.
        gamma (Tuple[Tuple[bool, ...], ...]): One r-bit string per round marking the literals set to 1.
        terms (Tuple[int, ...]): The term index of every round; not part of the code.
    """

    rho_sigma: Restriction
    classes: BlockClass
    beta: Tuple[BetaCode, ...]
    pi: Tuple[int, ...]
    gamma: Tuple[Tuple[bool, ...], ...]
    terms: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def ones(self) -> int:
        """
        Returns m, the number of variables gamma' records.

        :return: The number of set gamma' bits
        :rtype: int
        """

        return sum(bit for bits in self.gamma for bit in bits)


@dataclass(frozen=True)
class WitnessPhp:
    """
    The encoding of a partial injection that fails in the pigeonhole setting.

    Attributes:
        rho_sigma (PartialInjection): rho extended by the pairs of every round's literals.
        beta (Tuple[BetaCode, ...]): One (location, last) pair per literal.
        pi (Tuple[ReplyCode, ...]): One (matches, index) pair per query.
        terms (Tuple[int, ...]): The term index of every round; not part of the code.
    """

    rho_sigma: PartialInjection
    beta: Tuple[BetaCode, ...]
    pi: Tuple[ReplyCode, ...]
    terms: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def width(self) -> int:
        """
        Returns one more than the largest reply index.

        :return: The number of candidates the code needs
        :rtype: int
        """

        return 1 + max((index for _, index in self.pi), default=-1)


Witness = Union[WitnessIndep, WitnessBlock, WitnessPhp]


def _beta_codes(locations: Sequence[int]) -> List[BetaCode]:
    return [(location, position == len(locations) - 1) for position, location in enumerate(locations)]


def _split_rounds(
    beta: Sequence[BetaCode],
) -> List[List[int]]:
    """
    Cuts beta' into rounds at the last-bits.
    """

    rounds: List[List[int]] = []
    current: List[int] = []

    for location, last in beta:
        current.append(location)

        if last:
            rounds.append(current)
            current = []

    if current:
        raise DecodeError("beta' does not end a round")

    return rounds


def _require_trace(
    trace: Optional[Trace],
    s: int,
) -> Trace:
    if trace is None:
        raise PreconditionError(f"the canonical tree has height below {s}")

    return trace


def encode_indep(
    formula: Dnf,
    rho: Restriction,
    s: int,
) -> WitnessIndep:
    """
    Encodes a restriction whose canonical tree has height s or greater.

    Each round's variables are set to the values that satisfy their literals
    in the round's term; beta' records their locations and pi' the answers
    along the first long branch.

    :param formula: The DNF
    :type formula: Dnf
    :param rho: The restriction
    :type rho: Restriction
    :param s: The number of queries
    :type s: int

    :return: The witness
    :rtype: WitnessIndep
    """

    trace: Trace = _require_trace(IndependentTree(formula, rho).trace(s), s)
    values: List[int] = list(rho.values)
    beta: List[BetaCode] = []

    for round_ in trace.rounds:
        term: Term = formula.terms[round_.term_index]

        for var in round_.beta:
            values[var] = term.literals[term.location_of(var)].satisfying_value

        beta.extend(_beta_codes([term.location_of(var) for var in round_.beta]))

    return WitnessIndep(
        rho_sigma=Restriction(tuple(values)),
        beta=tuple(beta),
        pi=tuple(answer for round_ in trace.rounds for answer in round_.pi),
        terms=tuple(round_.term_index for round_ in trace.rounds),
    )


def decode_indep(
    formula: Dnf,
    witness: WitnessIndep,
    s: int,
) -> Restriction:
    """
    Recovers the restriction a witness was encoded from.

    :param formula: The DNF
    :type formula: Dnf
    :param witness: The witness
    :type witness: WitnessIndep
    :param s: The number of queries
    :type s: int

    :return: The restriction
    :rtype: Restriction
    """

    if len(witness.beta) != s or len(witness.pi) != s:
        raise DecodeError(f"a witness for s={s} has {s} beta' and pi' entries")

    try:
        tree: IndependentTree = IndependentTree(formula, witness.rho_sigma)
        working: List[int] = list(witness.rho_sigma.values)
        recovered: List[int] = list(witness.rho_sigma.values)
        answers: List[int] = list(witness.pi)

        for locations in _split_rounds(witness.beta):
            index: Optional[int] = tree.first_alive(Restriction(tuple(working)))

            if index is None:
                raise DecodeError("no term survives the partially decoded restriction")

            term: Term = formula.terms[index]

            for location in locations:
                if not 0 <= location < len(term):
                    raise DecodeError(f"location {location} is outside term {index}")

                literal = term.literals[location]

                if working[literal.var] != literal.satisfying_value:
                    raise DecodeError(f"variable {literal.var} was not set by sigma")

                # Swap sigma for the recorded answer
                working[literal.var] = Value(answers.pop(0))
                recovered[literal.var] = Value.STAR

        rho: Restriction = Restriction(tuple(recovered))
        reencoded: WitnessIndep = encode_indep(formula, rho, s)
    except DecodeError:
        raise
    except (SwitchLabError, ValueError) as error:
        raise DecodeError(f"witness is malformed: {error}") from error

    if reencoded != witness:
        raise DecodeError("witness is not the encoding of any failing restriction")

    return rho


def _first_star_location(
    term: Term,
    block: Sequence[int],
    values: Sequence[int],
) -> int:
    members: Set[int] = set(block)

    for location, literal in enumerate(term.literals):
        if literal.var in members and values[literal.var] == Value.STAR:
            return location

    raise PreconditionError("block has no starred literal in its term")


def encode_block(
    formula: Dnf,
    rho: Restriction,
    classes: BlockClass,
    blocks: BlockStructure,
    s: int,
) -> WitnessBlock:
    """
    Encodes a block outcome whose canonical tree has height s or greater.

    For every queried block, the starred variables that appear positively in
    the round's term become 1 and every other starred variable becomes 0; a
    block left without zeros is retagged all-ones, any other becomes a
    0-block. gamma' records the literals set to 1, r bits per round.

    :param formula: The DNF
    :type formula: Dnf
    :param rho: The restriction
    :type rho: Restriction
    :param classes: The block tags
    :type classes: BlockClass
    :param blocks: The block structure
    :type blocks: BlockStructure
    :param s: The number of queries
    :type s: int

    :return: The witness
    :rtype: WitnessBlock
    """

    tree: BlockTree = BlockTree(formula, BlockOutcome(rho, classes), blocks)
    trace: Trace = _require_trace(tree.trace(s), s)

    values: List[int] = list(rho.values)
    tags: List[BlockTag] = list(classes.tags)
    beta: List[BetaCode] = []
    gamma: List[Tuple[bool, ...]] = []

    for round_ in trace.rounds:
        term: Term = formula.terms[round_.term_index]
        chosen: Set[int] = set(round_.beta)

        bits: List[bool] = [False] * formula.r

        for location, literal in enumerate(term.literals):
            bits[location] = (
                literal.positive
                and blocks.block_of[literal.var] in chosen
                and rho.values[literal.var] == Value.STAR
            )

        ones: Set[int] = {term.literals[location].var for location, bit in enumerate(bits) if bit}

        for block in round_.beta:
            members: Tuple[int, ...] = blocks.blocks[block]

            for var in members:
                if rho.values[var] == Value.STAR:
                    values[var] = Value.ONE if var in ones else Value.ZERO

            tags[block] = (
                BlockTag.ZERO_BLOCK
                if any(values[var] == Value.ZERO for var in members)
                else BlockTag.ALL_ONES
            )

        beta.extend(
            _beta_codes(
                [_first_star_location(term, blocks.blocks[block], rho.values) for block in round_.beta]
            )
        )
        gamma.append(tuple(bits))

    return WitnessBlock(
        rho_sigma=Restriction(tuple(values)),
        classes=BlockClass(tuple(tags)),
        beta=tuple(beta),
        pi=tuple(answer for round_ in trace.rounds for answer in round_.pi),
        gamma=tuple(gamma),
        terms=tuple(round_.term_index for round_ in trace.rounds),
    )


def decode_block(
    formula: Dnf,
    witness: WitnessBlock,
    blocks: BlockStructure,
    s: int,
) -> Tuple[Restriction, BlockClass]:
    """
    Recovers the block outcome a witness was encoded from.

    Each round undoes its blocks by restarring the variables gamma' names and
    every 0 of the block, then replays the query: the first star takes the
    pi' bit and the other stars become 1.

    :param formula: The DNF
    :type formula: Dnf
    :param witness: The witness
    :type witness: WitnessBlock
    :param blocks: The block structure
    :type blocks: BlockStructure
    :param s: The number of queries
    :type s: int

    :return: The restriction and its block tags
    :rtype: Tuple[Restriction, BlockClass]
    """

    if len(witness.beta) != s or len(witness.pi) != s:
        raise DecodeError(f"a witness for s={s} has {s} beta' and pi' entries")

    try:
        tree: BlockTree = BlockTree(formula, BlockOutcome(witness.rho_sigma, witness.classes), blocks)
        working: List[int] = list(witness.rho_sigma.values)
        recovered: List[int] = list(witness.rho_sigma.values)
        tags: List[BlockTag] = list(witness.classes.tags)
        answers: List[int] = list(witness.pi)
        rounds: List[List[int]] = _split_rounds(witness.beta)

        if len(rounds) != len(witness.gamma):
            raise DecodeError("gamma' needs one bit string per round")

        for locations, bits in zip(rounds, witness.gamma):
            index: Optional[int] = tree.first_alive(Restriction(tuple(working)))

            if index is None:
                raise DecodeError("no term survives the partially decoded restriction")

            term: Term = formula.terms[index]

            if len(bits) != formula.r:
                raise DecodeError(f"gamma' strings have {formula.r} bits")

            marked: Set[int] = {
                term.literals[location].var
                for location, bit in enumerate(bits)
                if bit and location < len(term)
            }

            if any(bit for bit in bits[len(term):]):
                raise DecodeError("gamma' marks a literal past the end of the term")

            for location in locations:
                if not 0 <= location < len(term):
                    raise DecodeError(f"location {location} is outside term {index}")

                block: int = blocks.block_of[term.literals[location].var]

                if tags[block] is BlockTag.STAR_BLOCK:
                    raise DecodeError(f"block {block} is decoded twice")

                members: Tuple[int, ...] = blocks.blocks[block]

                # Undo sigma on the block
                for var in members:
                    if var in marked or working[var] == Value.ZERO:
                        recovered[var] = Value.STAR

                stars: List[int] = [var for var in members if recovered[var] == Value.STAR]

                if not stars:
                    raise DecodeError(f"block {block} has nothing to undo")

                tags[block] = BlockTag.STAR_BLOCK

                # Replay the query on the block
                answer: Value = Value(answers.pop(0))

                for var in stars:
                    working[var] = answer if var == stars[0] else Value.ONE

        outcome: Tuple[Restriction, BlockClass] = (
            Restriction(tuple(recovered)),
            BlockClass(tuple(tags)),
        )
        reencoded: WitnessBlock = encode_block(formula, outcome[0], outcome[1], blocks, s)
    except DecodeError:
        raise
    except (SwitchLabError, ValueError) as error:
        raise DecodeError(f"witness is malformed: {error}") from error

    if reencoded != witness:
        raise DecodeError("witness is not the encoding of any failing outcome")

    return outcome


def _php_literals(
    term: Term,
    n: int,
) -> List[Tuple[int, int]]:
    return [divmod(literal.var, n) for literal in term.literals]


def _check_trimmed(
    rho: PartialInjection,
    params: PhpParams,
) -> None:
    l: Fraction = params.l

    if l < 1:
        raise PreconditionError(f"l = 2qn = {l} is below 1, outside the lemma's regime")

    if len(rho.unset_pigeons()) >= l or len(rho.unset_holes()) >= l:
        raise PreconditionError(
            f"{rho} leaves {len(rho.unset_pigeons())} pigeons and "
            f"{len(rho.unset_holes())} holes unset, not fewer than l = {l}"
        )


def encode_php(
    fprime: Dnf,
    rho: PartialInjection,
    n: int,
    q: Fraction,
    s: int,
    strict: bool = False,
) -> WitnessPhp:
    """
    Encodes a partial injection whose canonical tree has height s or greater.

    sigma sends every round's literal p_xy to x -> y. A reply to the pigeon
    query of p_xy is coded as "hole y" or as an index among the other holes
    that are unset in rho sigma or taken by the round's own sigma; a reply to
    the hole query is coded the same way over pigeons.

    :param fprime: The preprocessed DNF
    :type fprime: Dnf
    :param rho: The partial injection
    :type rho: PartialInjection
    :param n: The number of holes
    :type n: int
    :param q: The distribution parameter, for l = 2qn
    :type q: Fraction
    :param s: The number of queries
    :type s: int
    :param strict: Require l >= 1 and fewer than l unset pigeons and holes. Defaults to False.
    :type strict: bool

    :return: The witness
    :rtype: WitnessPhp
    """

    if strict:
        _check_trimmed(rho, PhpParams(n=n, q=as_fraction(q)))

    trace: Trace = _require_trace(PhpTree(fprime, rho, n).trace(s), s)

    # sigma, one round at a time
    sigmas: List[Dict[int, int]] = []

    for round_ in trace.rounds:
        pairs: List[Tuple[int, int]] = _php_literals(fprime.terms[round_.term_index], n)
        sigmas.append({pairs[location][0]: pairs[location][1] for location in round_.beta})

    rho_sigma: PartialInjection = rho

    for sigma in sigmas:
        rho_sigma = rho_sigma.union(sigma)

    unset_pigeons: Tuple[int, ...] = rho_sigma.unset_pigeons()
    unset_holes: Tuple[int, ...] = rho_sigma.unset_holes()

    beta: List[BetaCode] = []
    pi: List[ReplyCode] = []

    for round_, sigma in zip(trace.rounds, sigmas):
        term: Term = fprime.terms[round_.term_index]
        pairs = _php_literals(term, n)
        beta.extend(_beta_codes(list(round_.beta)))

        for reply in round_.replies:
            pigeon, hole = pairs[reply.item]

            if reply.query.kind is QueryKind.PIGEON:
                own: int = hole
                others: List[int] = sorted((set(unset_holes) | set(sigma.values())) - {hole})
            else:
                own = pigeon
                others = sorted((set(unset_pigeons) | set(sigma)) - {pigeon})

            if reply.answer == own:
                pi.append((True, 0))
            else:
                pi.append((False, others.index(reply.answer)))

    return WitnessPhp(
        rho_sigma=rho_sigma,
        beta=tuple(beta),
        pi=tuple(pi),
        terms=tuple(round_.term_index for round_ in trace.rounds),
    )


def decode_php(
    fprime: Dnf,
    witness: WitnessPhp,
    n: int,
    q: Fraction,
    s: int,
    strict: bool = False,
) -> PartialInjection:
    """
    Recovers the partial injection a witness was encoded from.

    :param fprime: The preprocessed DNF
    :type fprime: Dnf
    :param witness: The witness
    :type witness: WitnessPhp
    :param n: The number of holes
    :type n: int
    :param q: The distribution parameter, for l = 2qn
    :type q: Fraction
    :param s: The number of queries
    :type s: int
    :param strict: Apply the trimmed-set conditions of the encoder. Defaults to False.
    :type strict: bool

    :return: The partial injection
    :rtype: PartialInjection
    """

    if len(witness.pi) != s:
        raise DecodeError(f"a witness for s={s} has {s} pi' entries")

    try:
        rho_sigma: PartialInjection = witness.rho_sigma
        tree: PhpTree = PhpTree(fprime, rho_sigma, n)
        unset_pigeons: Set[int] = set(rho_sigma.unset_pigeons())
        unset_holes: Set[int] = set(rho_sigma.unset_holes())
        working: PartialInjection = rho_sigma
        replies: List[ReplyCode] = list(witness.pi)
        added: List[int] = []

        for locations in _split_rounds(witness.beta):
            index: Optional[int] = tree.first_alive(working)

            if index is None:
                raise DecodeError("no term survives the partially decoded injection")

            pairs: List[Tuple[int, int]] = _php_literals(fprime.terms[index], n)

            if any(not 0 <= location < len(pairs) for location in locations):
                raise DecodeError(f"a location is outside term {index}")

            sigma: Dict[int, int] = {pairs[location][0]: pairs[location][1] for location in locations}

            if any(working.mapping[pigeon] != hole for pigeon, hole in sigma.items()):
                raise DecodeError(f"round on term {index} was not set by sigma")

            added.extend(sigma)
            mapping: List[Optional[int]] = list(working.without(tuple(sigma)).mapping)
            taken: Set[int] = {hole for hole in mapping if hole is not None}

            # Replay the round's queries
            for location in locations:
                pigeon, hole = pairs[location]

                if mapping[pigeon] is None and replies:
                    matches, position = replies.pop(0)
                    others: List[int] = sorted((unset_holes | set(sigma.values())) - {hole})
                    target: int = hole if matches else others[position]

                    if target in taken:
                        raise DecodeError(f"hole {target} is already taken")

                    mapping[pigeon] = target
                    taken.add(target)

                if hole not in taken and replies:
                    matches, position = replies.pop(0)
                    others = sorted((unset_pigeons | set(sigma)) - {pigeon})
                    source: int = pigeon if matches else others[position]

                    if mapping[source] is not None:
                        raise DecodeError(f"pigeon {source} is already placed")

                    mapping[source] = hole
                    taken.add(hole)

            working = PartialInjection(n=n, mapping=tuple(mapping))

        if replies:
            raise DecodeError(f"{len(replies)} pi' entries were not consumed")

        rho: PartialInjection = rho_sigma.without(tuple(added))
        reencoded: WitnessPhp = encode_php(fprime, rho, n, q, s, strict=strict)
    except DecodeError:
        raise
    except (SwitchLabError, ValueError, IndexError) as error:
        raise DecodeError(f"witness is malformed: {error}") from error

    if reencoded != witness:
        raise DecodeError("witness is not the encoding of any failing injection")

    return rho


@dataclass(frozen=True)
class CodeSpace:
    """
    The number of possible values of each witness component.

    Attributes:
        beta (Fraction): The count of beta' strings, (2r)^s.
        pi (Fraction): The count of pi' strings.
        gamma (Fraction): The count of gamma' strings, 1 when there is none.
    """

    beta: Fraction
    pi: Fraction
    gamma: Fraction = Fraction(1)

    @property
    def total(self) -> Fraction:
        """
        Returns the product of the three counts.

        :return: The number of codes
        :rtype: Fraction
        """

        return self.beta * self.pi * self.gamma


def code_space(
    lemma: Lemma,
    r: int,
    s: int,
    l: Optional[Fraction] = None,
) -> CodeSpace:
    """
    Returns the code-space sizes used in the union bound of a lemma.

    The pigeonhole count (2l)^s takes l = 2qn; passing the largest
    candidate count actually seen instead gives the effective (2u)^s.

    :param lemma: The lemma
    :type lemma: Lemma
    :param r: The term width
    :type r: int
    :param s: The number of queries
    :type s: int
    :param l: The reply bound, required for the pigeonhole lemma. Defaults to None.
    :type l: Optional[Fraction]

    :return: The counts
    :rtype: CodeSpace
    """

    lemma = Lemma(lemma)
    beta: Fraction = Fraction(2 * r) ** s

    if lemma is Lemma.INDEPENDENT:
        return CodeSpace(beta=beta, pi=Fraction(2) ** s)

    if lemma is Lemma.BLOCK:
        return CodeSpace(beta=beta, pi=Fraction(2) ** s, gamma=Fraction(2) ** (r * s))

    if l is None:
        raise FormulaError("the pigeonhole code space needs l")

    return CodeSpace(beta=beta, pi=(2 * as_fraction(l)) ** s)


def _bits(values: Sequence[bool]) -> str:
    return "".join("1" if value else "0" for value in values)


def _injection_to_string(rho: PartialInjection) -> str:
    pairs: Dict[int, int] = rho.as_dict()

    return " ".join(f"{pigeon}:{hole}" for pigeon, hole in pairs.items()) if pairs else "-"


def dump_witness(witness: Witness) -> str:
    """
    Writes a witness as text, one field per line.

    Lines are "kind", "rho_sigma", "classes" (block only), "beta" as
    location/last pairs, "pi" as answers or bit/index pairs, "gamma" as one
    bit string per round (block only) and "terms".

    :param witness: The witness
    :type witness: Witness

    :return: The text
    :rtype: str
    """

    lines: List[str] = []

    if isinstance(witness, WitnessPhp):
        lines.append(f"kind php {witness.rho_sigma.n}")
        lines.append(f"rho_sigma {_injection_to_string(witness.rho_sigma)}")
    else:
        lines.append("kind " + ("block" if isinstance(witness, WitnessBlock) else "indep"))
        lines.append(f"rho_sigma {witness.rho_sigma.to_string()}")

    if isinstance(witness, WitnessBlock):
        lines.append(f"classes {witness.classes.to_string()}")

    lines.append("beta " + " ".join(f"{location}/{int(last)}" for location, last in witness.beta))

    if isinstance(witness, WitnessPhp):
        lines.append("pi " + " ".join(f"{int(matches)}/{index}" for matches, index in witness.pi))
    else:
        lines.append("pi " + " ".join(str(answer) for answer in witness.pi))

    if isinstance(witness, WitnessBlock):
        lines.append("gamma " + " ".join(_bits(bits) for bits in witness.gamma))

    lines.append("terms " + " ".join(str(index) for index in witness.terms))

    return "\n".join(line.rstrip() for line in lines) + "\n"


def _pair(token: str) -> Tuple[int, int]:
    left, _, right = token.partition("/")

    return int(left), int(right)


def load_witness(text: str) -> Witness:
    """
    Reads a witness written by dump_witness.

    :param text: The text
    :type text: str

    :return: The witness
    :rtype: Witness
    """

    fields: Dict[str, List[str]] = {}

    for line in text.splitlines():
        if not line.strip():
            continue

        name, *tokens = line.split()
        fields[name] = tokens

    try:
        kind: List[str] = fields["kind"]
        beta: Tuple[BetaCode, ...] = tuple(
            (location, bool(last)) for location, last in map(_pair, fields["beta"])
        )
        terms: Tuple[int, ...] = tuple(int(token) for token in fields.get("terms", []))

        if kind[0] == "php":
            n: int = int(kind[1])
            pairs: Dict[int, int] = {}

            for token in fields["rho_sigma"]:
                if token != "-":
                    pigeon, _, hole = token.partition(":")
                    pairs[int(pigeon)] = int(hole)

            return WitnessPhp(
                rho_sigma=PartialInjection.from_dict(n, pairs),
                beta=beta,
                pi=tuple((bool(matches), index) for matches, index in map(_pair, fields["pi"])),
                terms=terms,
            )

        rho_sigma: Restriction = Restriction.from_string(fields["rho_sigma"][0])
        pi: Tuple[int, ...] = tuple(int(token) for token in fields["pi"])

        if kind[0] == "block":
            return WitnessBlock(
                rho_sigma=rho_sigma,
                classes=BlockClass(tuple("0*1".index(symbol) for symbol in fields["classes"][0])),
                beta=beta,
                pi=pi,
                gamma=tuple(tuple(bit == "1" for bit in bits) for bits in fields["gamma"]),
                terms=terms,
            )

        if kind[0] == "indep":
            return WitnessIndep(rho_sigma=rho_sigma, beta=beta, pi=pi, terms=terms)
    except (KeyError, IndexError, ValueError) as error:
        raise DecodeError(f"witness text is malformed: {error}") from error

    raise DecodeError(f"unknown witness kind {kind[0]!r}")
