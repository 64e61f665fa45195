from __future__ import annotations

import logging
import random
from fractions import Fraction

import pytest

from corkcalc.algebra import (
    Member,
    check_connected_sum_inequality,
    dualize,
    family_hypotheses,
    linear_combination_witness,
    relabel,
    same_data,
    tensor,
    tensor_window_direct,
)
from corkcalc.catalog import build_akbulut, build_akbulut_reversed, build_fig31, build_fig41, random_complex, synthetic_family
from corkcalc.core import Flavor, InvolutiveComplex, trivial_involutive, validate
from corkcalc.rs import rs_value
from corkcalc.window import truncate

F = Fraction


def test_unit():
    a = build_fig41("c")
    p = tensor(trivial_involutive(), a)
    assert [g.deg_z for g in p.generators] == [g.deg_z for g in a.generators]
    assert [g.deg_i for g in p.generators] == [g.deg_i for g in a.generators]
    assert same_data(relabel(p, range(len(p.generators)), [g.name for g in a.generators]), a)


def test_fig41a_square_tau():
    c = build_fig41("a", beta=F(-3, 4))
    p = tensor(c, c)
    images = sorted(e[1] for e in p.tau.named_entries() if e[0] == "theta|theta")
    assert images == ["a|a", "a|theta", "theta|a", "theta|theta"]
    assert rs_value(p, 0, True) == F(3, 4)


def test_fig31b_square_diff():
    b = build_fig31("b")
    p = tensor(b, b)
    assert sorted(e[1] for e in p.diff.named_entries() if e[0] == "theta|theta") == ["theta|x", "x|theta"]


def test_tensor_rejects_d1():
    with pytest.raises(ValueError, match="D2"):
        tensor(dualize(build_fig31("b")), build_fig31("b"))


def test_dual_of_akbulut():
    # [PAPER] the dual reads d beta_i* = alpha1*.
    d = dualize(build_akbulut("A"))
    assert d.complex.flavor is Flavor.D1
    entries = sorted((s, t) for s, t, _ in d.diff.named_entries())
    assert entries == [("beta1*", "alpha1*"), ("beta2*", "alpha1*")]
    assert validate(d).ok


@pytest.mark.parametrize("seed", range(15))
def test_double_dual(seed):
    c = random_complex(seed, 6, involutive=True)
    assert same_data(dualize(dualize(c)), c)


@pytest.mark.parametrize("seed", range(10))
def test_tensor_valid(seed):
    a = random_complex(seed, 4, involutive=True)
    b = random_complex(seed + 100, 4, involutive=True)
    assert validate(tensor(a, b)).ok


def test_window_of_tensor():
    rng = random.Random(11)
    for seed in range(20):
        a = random_complex(seed, 4, involutive=True)
        b = random_complex(seed + 50, 4, involutive=True)
        r = F(rng.randint(-8, -1), 4)
        s = F(rng.randint(0, 4), 4)
        direct = tensor_window_direct(a, b, r, s)
        via = truncate(tensor(a, b), r, s)
        assert direct.points == via.points
        assert direct.diff == via.diff
        assert direct.tau == via.tau


def test_csineq_examples():
    t = trivial_involutive()
    assert check_connected_sum_inequality(t, t, 0, 0).holds
    a = build_fig41("a", beta=F(-3, 4))
    rep = check_connected_sum_inequality(a, a, 0, 0)
    assert rep.lhs == F(3, 4) and rep.bound == F(3, 4)
    d = InvolutiveComplex.trivial_tau(build_fig31("d", alpha=F(1, 3)))
    rep = check_connected_sum_inequality(a, d, 0, F(-1, 3))
    assert rep.holds and rep.lhs == F(1, 2) and rep.bound == F(5, 12)


def test_trivial_family():
    fam = [Member("T", trivial_involutive(), trivial_involutive())]
    v = linear_combination_witness(fam, (1,))
    assert not v.obstruction
    assert v.locally_trivial


def test_synthetic_family(caplog):
    fam = synthetic_family()
    assert family_hypotheses(fam) == []
    with caplog.at_level(logging.INFO, logger="corkcalc.algebra"):
        v = linear_combination_witness(fam, (1, -2, 1))
    assert v.obstruction
    assert v.r0_top == F(1, 4) and v.bound == F(1, 2)
    assert v.r0_combination == F(1, 4)
    assert any("r_0(rearranged side) >= 1/2" in line for line in v.chain)
    assert "contradiction" in caplog.text


def test_akbulut_style_family():
    fam = [
        Member("Y", build_akbulut("A", {"alpha2": F(-3, 4)}), build_akbulut_reversed("corrected")),
        Member("Z", build_fig41("a", beta=F(-1, 2)), build_akbulut_reversed("fixed")),
    ]
    assert family_hypotheses(fam) == []
    for co in [(1, 1), (1, -1), (2, 1), (0, 1)]:
        assert linear_combination_witness(fam, co).obstruction


def test_hypotheses_reported():
    fam = [Member("A", build_fig41("a", beta=F(-1, 4)), build_fig41("a")), Member("B", build_fig41("a", beta=F(-1, 2)), trivial_involutive())]
    problems = family_hypotheses(fam)
    assert any("strictly decreasing" in p for p in problems)
    assert any("r_0(-A) is not inf" in p for p in problems)
