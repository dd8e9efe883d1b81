"""
Date: 2026-10-18
"""

from typing import Final, List

from .block import BlockClass, BlockOutcome, BlockParams, BlockTag
from .cache import ResultCache
from .codec import Lemma, WitnessBlock, WitnessIndep, WitnessPhp, dump_witness, load_witness
from .exceptions import SwitchLabError
from .formula import BlockStructure, Dnf, Literal, PhpInstance, Restriction, Term
from .independent import IndepParams
from .php import PartialInjection, PhpParams
from .tree import BlockTree, IndependentTree, PhpTree
from .verify import (
    BlockSetting,
    IndependentSetting,
    LemmaReport,
    LemmaVerifier,
    Mode,
    PhpSetting,
    PowerBound,
    check_lemma,
    exact_failure_weight,
    monte_carlo_failure,
    sweep_injectivity,
)


__all__: Final[List[str]] = [
    "BlockClass",
    "BlockOutcome",
    "BlockParams",
    "BlockSetting",
    "BlockStructure",
    "BlockTag",
    "BlockTree",
    "Dnf",
    "IndepParams",
    "IndependentSetting",
    "IndependentTree",
    "Lemma",
    "LemmaReport",
    "LemmaVerifier",
    "Literal",
    "Mode",
    "PartialInjection",
    "PhpInstance",
    "PhpParams",
    "PhpSetting",
    "PhpTree",
    "PowerBound",
    "Restriction",
    "ResultCache",
    "SwitchLabError",
    "Term",
    "WitnessBlock",
    "WitnessIndep",
    "WitnessPhp",
    "check_lemma",
    "dump_witness",
    "exact_failure_weight",
    "load_witness",
    "monte_carlo_failure",
    "sweep_injectivity",
]
