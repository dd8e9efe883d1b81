"""
Shared fixtures for the SwitchLab tests.

Date: 2026-10-18
"""

from typing import Callable, Iterator, Sequence

import pytest

from hypothesis import HealthCheck, settings

from SwitchLab.core.formula import Dnf, Term
from SwitchLab.core.verify import LemmaVerifier
from SwitchLab.utils.utils import make_rng


settings.register_profile(
    "switchlab",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
)
settings.load_profile("switchlab")


def dnf(
    n: int,
    r: int,
    *terms: Sequence[int],
) -> Dnf:
    """
    Builds a DNF from terms written as signed 1-based integers.
    """

    return Dnf(n=n, r=r, terms=tuple(Term.of(*term) for term in terms))


@pytest.fixture
def make_dnf() -> Callable[..., Dnf]:
    return dnf


@pytest.fixture
def rng():
    return make_rng(20261018)


@pytest.fixture
def verifier() -> Iterator[LemmaVerifier]:
    service: LemmaVerifier = LemmaVerifier(threads=2, cache_capacity=10_000)

    yield service

    service.shutdown()
