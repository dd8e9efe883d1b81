"""
Date: 2026-10-18
"""

from typing import Final, List

from .utils import (
    as_fraction,
    chunk_ranges,
    format_fraction,
    make_rng,
    parse_fraction,
    spawn_rngs,
    wilson_interval,
)


__all__: Final[List[str]] = [
    "as_fraction",
    "chunk_ranges",
    "format_fraction",
    "make_rng",
    "parse_fraction",
    "spawn_rngs",
    "wilson_interval",
]
