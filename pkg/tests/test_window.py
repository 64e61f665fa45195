from __future__ import annotations

from fractions import Fraction

import pytest

from corkcalc.catalog import build_fig31, build_fig41, random_complex
from corkcalc.core import LinearMap, trivial_complex
from corkcalc.filt import INF, NEG_INF
from corkcalc.window import WindowError, induced_window_map, lattice_points, truncate, window_homology

F = Fraction


def test_trivial_window():
    w = truncate(trivial_complex(), -1, 0)
    assert w.points == ((0, 0),)
    assert w.diff == (0,)
    h = window_homology(w, -3)
    assert h.rank == 1
    assert h.cycle_basis == (1,)


def test_fig31b_window_keeps_x():
    # [PAPER] d theta = x survives while r < beta.
    w = truncate(build_fig31("b"), -1, 0)
    assert set(w.points) == {(0, 0), (1, 0)}
    assert w.chain(w.apply_diff(w.mask([(0, 0)]))) == {(1, 0)}


def test_fig31b_window_drops_x_at_boundary():
    # Half-open: x at level -1/2 is not above r = -1/2.
    w = truncate(build_fig31("b"), F(-1, 2), 0)
    assert w.points == ((0, 0),)
    assert w.diff == (0,)


def test_window_rejects_bad_endpoints():
    with pytest.raises(WindowError, match="slice solver"):
        truncate(trivial_complex(), NEG_INF, 0)
    with pytest.raises(WindowError, match="slice solver"):
        truncate(trivial_complex(), -1, INF)
    with pytest.raises(WindowError):
        truncate(trivial_complex(), 0, 0)


def test_identity_induces_identity():
    c = build_fig41("c")
    src, dst, cols = induced_window_map(LinearMap.identity(c.generators), c, c, -2, 2)
    assert cols == tuple(1 << i for i in range(len(src.points)))


def test_projection_to_trivial():
    # [PAPER] the quotient-to-theta projection is a filtered local map.
    b = build_fig31("b")
    t = trivial_complex()
    pi = LinearMap.from_entries(b.generators, t.generators, [("theta", "theta")])
    src, dst, cols = induced_window_map(pi, b, t, -1, 0)
    theta, x = src.index[(0, 0)], src.index[(1, 0)]
    assert dst.chain(cols[theta]) == {(0, 0)}
    assert cols[x] == 0


def test_level_violation_names_entry():
    d = build_fig31("d", alpha=F(1, 3))
    up = LinearMap.from_entries(d.generators, d.generators, [("theta", "w")], 0)
    with pytest.raises(WindowError, match="theta --y\\^0--> w"):
        induced_window_map(up, d, d, -1, 0)


def test_fig41a_tau_on_windows():
    # [PAPER] tau theta = theta + a until a is quotiented away at r >= beta.
    c = build_fig41("a", beta=F(-3, 4))
    w = truncate(c, -1, 0)
    assert w.chain(w.apply_tau(w.mask([(0, 0)]))) == {(0, 0), (1, 0)}
    w = truncate(c, F(-3, 4), 0)
    assert w.chain(w.apply_tau(w.mask([(0, 0)]))) == {(0, 0)}


@pytest.mark.parametrize("seed", range(30))
def test_windows_are_complexes_and_nest(seed):
    c = random_complex(seed, 7, involutive=True)
    w = truncate(c, -2, 1)
    assert w.is_complex()
    inner = truncate(c, -1, 1)
    # the quotient C^(-2,1] -> C^(-1,1] commutes with d
    for i, p in enumerate(w.points):
        image = inner.mask(w.chain(w.diff[i]))
        proj = inner.mask([p])
        assert image == inner.apply_diff(proj)


def test_lattice_points_half_open():
    c = build_fig31("b", beta=F(-1, 2))
    pts = lattice_points(c, F(-3, 2), F(1, 2))
    assert sorted(pts) == [(0, -1), (0, 0), (1, 0), (1, 1)]
