from __future__ import annotations

import json
from fractions import Fraction

import pytest

from corkcalc.catalog import build_akbulut, build_fig31, build_fig41, random_complex
from corkcalc.core import (
    Flavor,
    Generator,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    StructuralError,
    chain_degree,
    shift_by_y,
    trivial_involutive,
    validate,
)
from corkcalc.filt import NEG_INF
from corkcalc.io import ComplexFormatError, complex_from_dict, complex_to_dict, loads_complex

F = Fraction


def test_trivial_validates():
    rep = validate(trivial_involutive())
    assert rep.ok
    assert rep.witness_level == NEG_INF


def test_fig41a_tau_is_involution():
    c = build_fig41("a")
    assert validate(c).ok
    ident = LinearMap.identity(c.generators)
    assert c.tau @ c.tau == ident


def test_unfiltered_differential_fails():
    cx = InstantonComplex.build([("theta", -3, 0, True), ("x", -4, 1)], [("theta", "x")], Flavor.D2)
    rep = validate(cx)
    assert not rep.ok
    assert "differential filtered" in [c.name for c in rep.failures()]


def test_akbulut_b_needs_homotopy():
    c = build_akbulut("B")
    assert c.tau @ c.tau != LinearMap.identity(c.generators)
    rep = validate(c)
    assert rep.ok
    assert rep.witness_level <= 0
    assert [e[:2] for e in rep.h_witness.named_entries()] == [("theta", "alpha1")]


def test_akbulut_b_positive_alpha1_fails():
    lv = {"beta1": F(-1, 2), "beta2": F(-1, 2), "alpha1": F(1, 4)}
    c = build_akbulut("B", lv, check_levels=False)
    rep = validate(c)
    assert not rep.ok
    assert rep.witness_level == F(1, 4)


def test_grading_incoherent_entry_is_structural():
    gens = [Generator("theta", -3, F(0), True), Generator("x", -3, F(-1))]
    with pytest.raises(StructuralError, match="theta -> x"):
        LinearMap.from_entries(gens, gens, [("theta", "x")], -1)


def test_wrong_ypow_rejected():
    gens = [Generator("theta", -3, F(0), True), Generator("x", -4, F(-1))]
    with pytest.raises(StructuralError, match="grading coherence"):
        LinearMap.from_entries(gens, gens, [("theta", "x", 1)], -1)


def test_duplicate_names_rejected():
    with pytest.raises(StructuralError):
        InstantonComplex.build([("theta", -3, 0, True), ("x", -4, 0), ("x", -4, 0)], (), Flavor.D2)


def test_y_power_entry():
    # x in grading 4 sits one y-power up: d theta = y^-1 x.
    cx = InstantonComplex.build([("theta", -3, 0, True), ("x", 4, F(1, 2))], [("theta", "x")], Flavor.D2)
    (entry,) = cx.diff.named_entries()
    assert entry == ("theta", "x", -1)
    assert validate(cx).ok


def test_chain_degree():
    c = build_fig31("b")
    assert chain_degree(c, [(0, 0)]).deg_z == -3
    d = chain_degree(c, [(1, 0), (1, -1)])
    assert d.deg_i == F(-1, 2)
    assert not d.homogeneous
    assert chain_degree(c, []).deg_i == NEG_INF


def test_shift_by_y_breaks_theta_position():
    rep = validate(shift_by_y(build_fig31("b"), 1))
    assert "theta position" in [c.name for c in rep.failures()]


@pytest.mark.parametrize("seed", range(10))
def test_roundtrip(seed):
    c = random_complex(seed, 6, involutive=True)
    again = complex_from_dict(json.loads(json.dumps(complex_to_dict(c))))
    assert again.generators == c.generators
    assert again.diff == c.diff
    assert isinstance(again, InvolutiveComplex)
    assert again.tau == c.tau


def test_format_errors_name_fields():
    with pytest.raises(ComplexFormatError, match=r"generators\[0\]"):
        complex_from_dict({"flavor": "D2", "generators": [{"name": "theta"}], "diff": []})
    with pytest.raises(ComplexFormatError, match="line 1"):
        loads_complex("{not json")
