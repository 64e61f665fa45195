from __future__ import annotations

from fractions import Fraction

import pytest

from corkcalc.catalog import catalog_complexes
from corkcalc.core import InvolutiveComplex

F = Fraction


@pytest.fixture(scope="session")
def catalog():
    return catalog_complexes()


@pytest.fixture(scope="session")
def involutive_catalog(catalog):
    return {k: (c if isinstance(c, InvolutiveComplex) else InvolutiveComplex.trivial_tau(c)) for k, c in catalog.items()}


ACCEPTANCE: dict[int, tuple[bool, str]] = {}
ACCEPTANCE_COUNT = 12


@pytest.fixture
def record():
    """Store one pass/fail line for an acceptance criterion."""

    def _record(n: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE[n] = (ok, detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, ACCEPTANCE_COUNT + 1):
        ok, detail = ACCEPTANCE.get(n, (False, "not reached"))
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
