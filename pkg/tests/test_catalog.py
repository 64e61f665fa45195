from __future__ import annotations

from fractions import Fraction

import pytest

from corkcalc.algebra import tensor
from corkcalc.catalog import (
    CATALOG,
    CatalogError,
    build_akbulut,
    build_akbulut_reversed,
    build_brieskorn_like,
    build_fig41,
    emit,
    theta_class_witness,
    random_complex,
)
from corkcalc.core import Flavor, InvolutiveComplex, validate
from corkcalc.filt import INF
from corkcalc.io import complex_to_dict
from corkcalc.rs import local_triviality, rs_function, rs_value

F = Fraction


def test_catalog_all_valid(catalog):
    for name, c in catalog.items():
        assert validate(c).ok, name


def test_akbulut_values():
    assert rs_value(build_akbulut("A", {"alpha2": F(-2, 3)}), 0, True) == F(2, 3)
    assert rs_value(build_akbulut("B", {"beta1": F(-1, 2), "beta2": F(-1, 2)}), 0, True) == F(1, 2)
    for v in ("A", "B"):
        assert rs_function(build_akbulut(v)).values() == [INF]


@pytest.mark.parametrize("idx", [2, 3, 4])
def test_akbulut_alpha_index(idx):
    c = build_akbulut("A", alpha_index=idx)
    assert rs_value(c, 0, True) == -c.generators[c.complex.index(f"alpha{idx}")].deg_i


def test_akbulut_level_errors():
    with pytest.raises(CatalogError, match="<= 0"):
        build_akbulut("A", {"alpha3": F(1, 2)})
    with pytest.raises(CatalogError, match="agree"):
        build_akbulut("A", {"beta1": F(-1, 3)})
    with pytest.raises(CatalogError):
        build_akbulut("C")


def test_reversed_variants():
    assert local_triviality(build_akbulut_reversed("fixed")).trivial
    res = local_triviality(build_akbulut_reversed("corrected", {"beta1v": F(-1, 4), "beta2v": F(-1, 4)}))
    assert res.trivial
    names = lambda ch: {res.local_map.target[g].name for g, _ in ch}  # noqa: E731
    assert names(res.certificate.z) == {"theta"}
    assert names(res.certificate.b) <= {"beta1v", "beta2v"}
    with pytest.raises(CatalogError, match="beta_i"):
        build_akbulut_reversed("corrected", {"beta1v": 1, "beta2v": 1})


def test_theta_class_witness():
    for v in ("A", "B"):
        z, diff, boundary = theta_class_witness(build_akbulut(v))
        assert z == {(0, 0)} and diff and not boundary
    _, _, boundary = theta_class_witness(build_akbulut_reversed("corrected"))
    assert boundary


def test_brieskorn():
    assert len(build_brieskorn_like(0).generators) == 1
    b = build_brieskorn_like(2, [F(-1, 2), F(-5, 3)])
    assert all(g.deg_z % 2 == 0 for g in b.generators[1:])
    assert rs_value(b, 0, True) == INF
    assert rs_value(tensor(b, build_fig41("a")), 0, True) == F(3, 4)


def test_random_reproducible():
    a = complex_to_dict(random_complex(1, 6))
    b = complex_to_dict(random_complex(1, 6))
    assert a == b
    assert len(random_complex(7, 1).generators) == 1


@pytest.mark.parametrize("seed", range(40))
def test_random_valid(seed):
    c = random_complex(seed, 8, involutive=True)
    rep = validate(c)
    assert rep.ok, rep.lines()
    assert isinstance(c, InvolutiveComplex)
    d = random_complex(seed, 5, flavor="D1")
    assert d.flavor is Flavor.D1 and validate(d).ok


def test_registry():
    assert {"trivial", "fig31b", "fig41c", "akbulut-A", "akbulut-rev-corrected", "random"} <= set(CATALOG)
    c = emit("fig41a", {"beta": "-1/3"})
    assert rs_value(c, 0, True) == F(1, 3)
    c = emit("akbulut-A", {"alpha2": "-1/5", "alpha_index": "2"})
    assert rs_value(c, 0, True) == F(1, 5)
    with pytest.raises(CatalogError):
        emit("fig41a", {"gamma": "1"})
    with pytest.raises(CatalogError):
        emit("nope")
