"""
On-disk text formats for DNFs, block structures and pigeonhole formulas.

A DNF file starts with "dnf <n> <r>"; every following nonempty line is one
term written as signed 1-based literals. A blocks file starts with
"blocks <n>" and lists one block per line in its internal order. A
pigeonhole file puts "php <holes>" on the line before the DNF header.

Date: 2026-10-18
"""

from pathlib import Path
from typing import Final, List, Optional, Tuple, Union

from .exceptions import FormulaError, ParseError
from .formula import BlockStructure, Dnf, Literal, PhpInstance, Term


__all__: Final[List[str]] = [
    "is_php_text",
    "load_blocks",
    "load_dnf",
    "load_php",
    "parse_blocks",
    "parse_dnf",
    "parse_php",
    "serialize_blocks",
    "serialize_dnf",
    "serialize_php",
]


def _tokens(line: str) -> List[Tuple[int, str]]:
    """
    Splits a line into (1-based column, token) pairs.
    """

    tokens: List[Tuple[int, str]] = []
    column: int = 0

    for token in line.split():
        column = line.index(token, column)
        tokens.append((column + 1, token))
        column += len(token)

    return tokens


def _integer(
    token: str,
    line: int,
    column: int,
) -> int:
    """
    Parses an integer token, raising a positioned error.
    """

    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{token!r} is not an integer", line, column) from None


def _lines(text: str) -> List[Tuple[int, str]]:
    """
    Returns the nonempty lines with their 1-based numbers.
    """

    return [
        (number, line)
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]


def _header(
    line: Tuple[int, str],
    keyword: str,
    arity: int,
) -> List[int]:
    """
    Parses a header line of the form "<keyword> <int> ... <int>".
    """

    number, text = line
    tokens: List[Tuple[int, str]] = _tokens(text)

    if not tokens or tokens[0][1] != keyword:
        raise ParseError(f"expected a '{keyword}' header", number, tokens[0][0] if tokens else 1)

    if len(tokens) != arity + 1:
        raise ParseError(
            f"the '{keyword}' header takes {arity} integer(s)", number, tokens[0][0]
        )

    values: List[int] = [_integer(token, number, column) for column, token in tokens[1:]]

    for (column, _), value in zip(tokens[1:], values):
        if value < 0:
            raise ParseError(f"header value {value} is negative", number, column)

    return values


def _parse_dnf_lines(lines: List[Tuple[int, str]]) -> Dnf:
    """
    Parses a DNF from its nonempty lines, header first.
    """

    if not lines:
        raise ParseError("empty DNF file", 1)

    n, r = _header(lines[0], "dnf", 2)
    terms: List[Term] = []

    for number, text in lines[1:]:
        literals: List[Literal] = []
        seen: dict = {}

        for column, token in _tokens(text):
            value: int = _integer(token, number, column)

            if value == 0 or abs(value) > n:
                raise ParseError(f"literal {value} is outside [1, {n}]", number, column)

            literal: Literal = Literal.from_int(value)

            if literal.var in seen:
                raise ParseError(
                    f"variable {literal.var + 1} appears twice in the term", number, column
                )

            seen[literal.var] = column
            literals.append(literal)

            if len(literals) > r:
                raise ParseError(f"term width {len(text.split())} > r={r}", number, column)

        terms.append(Term(tuple(literals)))

    return Dnf(n=n, r=r, terms=tuple(terms))


def parse_dnf(text: str) -> Dnf:
    """
    Parses a DNF from its text form.

    :param text: The text, starting with "dnf <n> <r>"
    :type text: str

    :return: The DNF
    :rtype: Dnf
    """

    return _parse_dnf_lines(_lines(text))


def serialize_dnf(formula: Dnf) -> str:
    """
    Writes a DNF in its canonical text form.

    :param formula: The DNF
    :type formula: Dnf

    :return: The text, one term per line
    :rtype: str
    """

    lines: List[str] = [f"dnf {formula.n} {formula.r}"]

    for index, term in enumerate(formula.terms):
        if not term.literals:
            raise FormulaError(f"term {index} is empty and has no text form")

        lines.append(" ".join(str(literal.to_int()) for literal in term.literals))

    return "\n".join(lines) + "\n"


def parse_blocks(text: str) -> BlockStructure:
    """
    Parses a block structure from its text form.

    :param text: The text, starting with "blocks <n>"
    :type text: str

    :return: The block structure
    :rtype: BlockStructure
    """

    lines: List[Tuple[int, str]] = _lines(text)

    if not lines:
        raise ParseError("empty blocks file", 1)

    (n,) = _header(lines[0], "blocks", 1)
    blocks: List[Tuple[int, ...]] = []
    seen: set = set()

    for number, line in lines[1:]:
        block: List[int] = []

        for column, token in _tokens(line):
            value: int = _integer(token, number, column)

            if not 1 <= value <= n:
                raise ParseError(f"variable {value} is outside [1, {n}]", number, column)

            if value in seen:
                raise ParseError(f"variable {value} appears in two blocks", number, column)

            seen.add(value)
            block.append(value - 1)

        blocks.append(tuple(block))

    try:
        return BlockStructure(n=n, blocks=tuple(blocks))
    except FormulaError as error:
        raise ParseError(str(error), lines[-1][0]) from error


def serialize_blocks(blocks: BlockStructure) -> str:
    """
    Writes a block structure in its text form.

    :param blocks: The block structure
    :type blocks: BlockStructure

    :return: The text
    :rtype: str
    """

    lines: List[str] = [f"blocks {blocks.n}"]
    lines.extend(" ".join(str(var + 1) for var in block) for block in blocks.blocks)

    return "\n".join(lines) + "\n"


def parse_php(text: str) -> Tuple[PhpInstance, Dnf]:
    """
    Parses a pigeonhole formula: a "php <n>" line followed by a DNF over (n+1)*n variables.

    :param text: The text
    :type text: str

    :return: The instance and the DNF
    :rtype: Tuple[PhpInstance, Dnf]
    """

    lines: List[Tuple[int, str]] = _lines(text)

    if not lines:
        raise ParseError("empty pigeonhole file", 1)

    (holes,) = _header(lines[0], "php", 1)

    if holes < 1:
        raise ParseError("a pigeonhole instance needs at least one hole", lines[0][0])

    instance: PhpInstance = PhpInstance(n=holes)
    formula: Dnf = _parse_dnf_lines(lines[1:])

    if formula.n != instance.universe:
        raise ParseError(
            f"php {holes} needs {instance.universe} variables, the DNF header says {formula.n}",
            lines[1][0] if len(lines) > 1 else lines[0][0],
        )

    return instance, formula


def serialize_php(
    instance: PhpInstance,
    formula: Dnf,
) -> str:
    """
    Writes a pigeonhole formula in its text form.

    :param instance: The pigeonhole instance
    :type instance: PhpInstance
    :param formula: The DNF over its variables
    :type formula: Dnf

    :return: The text
    :rtype: str
    """

    return f"php {instance.n}\n" + serialize_dnf(formula)


def load_dnf(path: Union[str, Path]) -> Dnf:
    """
    Reads a DNF file.

    :param path: The file path
    :type path: Union[str, Path]

    :return: The DNF
    :rtype: Dnf
    """

    return parse_dnf(Path(path).read_text(encoding="utf-8"))


def load_blocks(path: Union[str, Path]) -> BlockStructure:
    """
    Reads a blocks file.

    :param path: The file path
    :type path: Union[str, Path]

    :return: The block structure
    :rtype: BlockStructure
    """

    return parse_blocks(Path(path).read_text(encoding="utf-8"))


def load_php(path: Union[str, Path]) -> Tuple[PhpInstance, Dnf]:
    """
    Reads a pigeonhole formula file.

    :param path: The file path
    :type path: Union[str, Path]

    :return: The instance and the DNF
    :rtype: Tuple[PhpInstance, Dnf]
    """

    return parse_php(Path(path).read_text(encoding="utf-8"))


def is_php_text(text: str) -> Optional[int]:
    """
    Returns the hole count if the text starts with a "php <n>" header.

    :param text: The text
    :type text: str

    :return: The number of holes, or None
    :rtype: Optional[int]
    """

    lines: List[Tuple[int, str]] = _lines(text)

    if not lines:
        return None

    tokens: List[str] = lines[0][1].split()

    if len(tokens) == 2 and tokens[0] == "php" and tokens[1].isdigit():
        return int(tokens[1])

    return None
