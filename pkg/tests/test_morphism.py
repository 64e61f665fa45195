from __future__ import annotations

import random
from fractions import Fraction

import pytest

from corkcalc.catalog import build_akbulut, build_fig31, build_fig41, random_complex
from corkcalc.core import Flavor, InstantonComplex, InvolutiveComplex, LinearMap, trivial_complex, trivial_involutive
from corkcalc.morphism import (
    MorphismWitness,
    ObstructionInputError,
    check_homotopy_equivalence,
    check_morphism,
    find_local_map,
    minimal_local_level,
    push_obstruction,
    random_local_map,
)

F = Fraction


def test_identity_is_local():
    c = build_fig41("c")
    rep = check_morphism(LinearMap.identity(c.generators), c, c)
    assert rep.ok and rep.local and rep.level <= 0


def test_projection_to_trivial_is_local():
    # [PAPER] the projection onto theta is always a filtered local map.
    b, t = build_fig31("b"), trivial_complex()
    pi = LinearMap.from_entries(b.generators, t.generators, [("theta", "theta")])
    rep = check_morphism(pi, b, t)
    assert rep.ok and rep.local and rep.level == 0


def test_inclusion_into_fig31b_not_chain_map():
    b, t = build_fig31("b"), trivial_complex()
    inc = LinearMap.from_entries(t.generators, b.generators, [("theta", "theta")])
    rep = check_morphism(inc, t, b)
    assert not rep.chain_map
    assert any("theta -> x" in p for p in rep.problems)


def test_find_identity():
    c = build_fig41("b")
    w = find_local_map(c, c, 0, equivariant=True)
    assert w is not None
    assert w.f == LinearMap.identity(c.generators)
    assert w.h.is_zero()


@pytest.mark.parametrize("level", [0, F(1, 2), 1, 3])
def test_trivial_to_fig31b_never(level):
    # [PAPER] no local map from the trivial complex when r_0 < inf; the
    # only candidate theta -> theta is never a chain map.
    assert find_local_map(trivial_complex(), build_fig31("b"), level) is None


def test_found_maps_check_out():
    rng = random.Random(3)
    pool = [random_complex(i, 6, involutive=True) for i in range(25)]
    seen = 0
    for _ in range(80):
        a, b = rng.choice(pool), rng.choice(pool)
        w = find_local_map(a, b, F(1, 2), equivariant=True)
        if w is None:
            continue
        seen += 1
        rep = check_morphism(w.f, a, b, w.h)
        assert rep.ok and rep.local and rep.level <= F(1, 2)
    assert seen > 10


def test_random_local_map_is_valid():
    rng = random.Random(5)
    c = build_akbulut("A")
    for _ in range(10):
        w = random_local_map(c, c, 0, True, rng)
        rep = check_morphism(w.f, c, c, w.h)
        assert rep.ok and rep.local


def test_minimal_local_level():
    a = build_fig41("a", beta=F(-3, 4))
    t = trivial_involutive()
    w, level = minimal_local_level(a, t, equivariant=True)
    assert level == 0
    assert check_morphism(w.f, a, t, w.h).ok


def test_akbulut_variant_equivalence():
    # [PAPER] tau theta = theta + beta1 and theta + beta2 are equivalent
    # through identities with equivariance homotopy theta -> alpha1.
    y = build_akbulut("B")
    cx = y.complex
    swap = [("beta1", "beta1"), ("beta1", "beta2"), ("beta2", "beta2"), ("beta2", "beta1")]
    y2 = InvolutiveComplex.build(cx, swap + [("theta", "beta2")], 0, None)
    ident = LinearMap.identity(cx.generators)
    zero = LinearMap.zero(cx.generators, cx.generators, 1)
    eq = LinearMap.from_entries(cx.generators, cx.generators, [("theta", "alpha1")], 1)
    rep = check_homotopy_equivalence(ident, ident, zero, zero, 0, y, y2, (eq, eq))
    assert rep.ok, rep.problems
    lv = {"beta1": F(-1, 2), "beta2": F(-1, 2), "alpha1": F(1, 4)}
    hi = build_akbulut("B", lv, check_levels=False)
    hi2 = InvolutiveComplex.build(hi.complex, swap + [("theta", "beta2")], 0, None)
    g = hi.generators
    eq = LinearMap.from_entries(g, g, [("theta", "alpha1")], 1)
    ident, zero = LinearMap.identity(g), LinearMap.zero(g, g, 1)
    rep = check_homotopy_equivalence(ident, ident, zero, zero, 0, hi, hi2, (eq, eq))
    assert not rep.ok
    assert any("level 1/4" in p for p in rep.problems)


def test_two_step_violation_reported():
    c = build_fig41("a")
    g = c.generators
    ident, zero = LinearMap.identity(g), LinearMap.zero(g, g, 1)
    bad = LinearMap.from_entries(g, g, [("a", "theta")], 0)
    rep = check_homotopy_equivalence(ident + bad, ident, zero, zero, 0, c, c)
    assert not rep.ok
    assert any("two-step" in p for p in rep.problems)


def test_push_trivial():
    t = trivial_involutive()
    g = t.generators
    w = MorphismWitness(LinearMap.identity(g), LinearMap.zero(g, g, 1))
    res = push_obstruction({(0, 0)}, (), (), w, t, t)
    assert res.ok and res.z == {(0, 0)} and not res.xi


def test_push_fig41a():
    # [PAPER] z = theta, xi = a with h = 0.
    c = build_fig41("a", beta=F(-3, 4))
    g = c.generators
    w = MorphismWitness(LinearMap.identity(g), LinearMap.zero(g, g, 1))
    res = push_obstruction({(0, 0)}, (), {(1, 0)}, w, c, c)
    assert res.ok
    assert res.xi == {(1, 0)}
    assert res.deg_xi == F(-3, 4)


def test_push_through_homotopy():
    # [PAPER] cycles related by H rather than by lambda: xi' = H dz.
    src = InstantonComplex.build([("theta", -3, 0, True), ("x", -4, F(-1, 2))], [("theta", "x")], Flavor.D2)
    src = InvolutiveComplex.trivial_tau(src)
    dst = InstantonComplex.build([("theta", -3, 0, True), ("y", -3, F(-1, 2))], (), Flavor.D2)
    dst = InvolutiveComplex.build(dst, [("theta", "y")], 0, [])
    lam = LinearMap.from_entries(src.generators, dst.generators, [("theta", "theta")])
    big_h = LinearMap.from_entries(src.generators, dst.generators, [("x", "y")], 1)
    w = MorphismWitness(lam, big_h)
    assert check_morphism(lam, src, dst, big_h).ok
    res = push_obstruction({(0, 0)}, (), (), w, src, dst)
    assert res.ok
    assert res.xi == {(1, 0)}


def test_push_rejects_bad_input():
    c = build_fig41("a")
    g = c.generators
    w = MorphismWitness(LinearMap.identity(g), LinearMap.zero(g, g, 1))
    with pytest.raises(ObstructionInputError, match="approximate equivariant cycle"):
        push_obstruction({(0, 0)}, (), (), w, c, c)
