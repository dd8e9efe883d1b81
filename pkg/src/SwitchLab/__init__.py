"""
Exact and sampled verification of the switching lemmas for r-DNFs.

Date: 2026-10-18
"""

from typing import Final, List

__version__: Final[str] = "0.1.0"

__all__: Final[List[str]] = [
    "__version__",
]
