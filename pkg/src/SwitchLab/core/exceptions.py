"""
Exception hierarchy shared by every SwitchLab module.

Date: 2026-10-18
"""

from typing import Final, List, Optional


__all__: Final[List[str]] = [
    "CompositionError",
    "DecodeError",
    "FormulaError",
    "InconsistentOutcomeError",
    "InvalidParametersError",
    "ParseError",
    "PreconditionError",
    "SizeGuardError",
    "SwitchLabError",
    "TreeTooDeepError",
]


class SwitchLabError(Exception):
    """
    Base class of every error raised by SwitchLab.
    """


class FormulaError(SwitchLabError):
    """
    Raised when a literal, term, DNF, restriction or block structure is malformed.
    """


class ParseError(FormulaError):
    """
    Raised when a text artifact cannot be parsed.

    Attributes:
        column (Optional[int]): The 1-based column of the offending token.
        line (int): The 1-based line of the offending token.
    """

    def __init__(
        self,
        message: str,
        line: int,
        column: Optional[int] = None,
    ) -> None:
        """
        Initialize the parse error.

        :param message: The description of the problem
        :type message: str
        :param line: The 1-based line number
        :type line: int
        :param column: The 1-based column number, if known
        :type column: Optional[int]

        :return: None
        :rtype: None
        """

        # Store the position
        self.line: Final[int] = line
        self.column: Final[Optional[int]] = column

        # Prefix the message with the position
        position: str = f"line {line}" if column is None else f"line {line}, column {column}"

        super().__init__(f"{position}: {message}")


class CompositionError(SwitchLabError):
    """
    Raised when a restriction fragment or partial injection cannot be composed.
    """


class InvalidParametersError(SwitchLabError):
    """
    Raised when distribution parameters are out of range or malformed.
    """


class InconsistentOutcomeError(SwitchLabError):
    """
    Raised when a block restriction does not match its block classification.
    """


class PreconditionError(SwitchLabError):
    """
    Raised when an operation is called outside of its precondition.
    """


class DecodeError(SwitchLabError):
    """
    Raised when a witness is not in the image of the corresponding encoder.
    """


class SizeGuardError(SwitchLabError):
    """
    Raised when an enumeration would exceed its configured size guard.
    """


class TreeTooDeepError(SwitchLabError):
    """
    Raised when a full decision tree would exceed the materialisation limit.
    """
