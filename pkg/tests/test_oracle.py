from __future__ import annotations

from fractions import Fraction

import pytest

from corkcalc.catalog import build_fig31, build_fig41
from corkcalc.oracle import OracleTooLarge, brute_theta_cycle, window_points

F = Fraction


def test_fig31b():
    c = build_fig31("b")
    assert brute_theta_cycle(c, F(-3, 4), 0) is None
    assert brute_theta_cycle(c, F(-1, 2), 0) == {(0, 0)}


def test_fig41b_equivariant():
    c = build_fig41("b")
    assert brute_theta_cycle(c, -1, 0) is not None
    assert brute_theta_cycle(c, -1, 0, equivariant=True) is None
    assert brute_theta_cycle(c, F(-3, 4), 0, equivariant=True) == {(0, 0)}


def test_refuses_large_windows():
    c = build_fig41("b")
    assert len(window_points(c, -6, 1)) > 20
    with pytest.raises(OracleTooLarge):
        brute_theta_cycle(c, -6, 1)
