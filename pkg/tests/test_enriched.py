from __future__ import annotations

import json
from fractions import Fraction

import pytest

from corkcalc.catalog import build_fig41, random_complex
from corkcalc.core import Flavor, InstantonComplex, InvolutiveComplex, LinearMap, trivial_involutive
from corkcalc.enriched import (
    CriticalEndpointError,
    EnrichedComplex,
    InsufficientTailError,
    Psi,
    enriched_local_map,
    enriched_rs,
    load_manifest,
    stable_truncation,
    validate_enriched,
)
from corkcalc.filt import INF
from corkcalc.io import save_complex
from corkcalc.rs import rs_value

F = Fraction


def test_constant_trivial_passes():
    e = EnrichedComplex.constant(trivial_involutive(), 3)
    assert validate_enriched(e).ok
    w = stable_truncation(e, -1, 0).window
    assert w.points == ((0, 0),)


def test_constant_fig41a_passes():
    e = EnrichedComplex.constant(build_fig41("a"), 3, cluster_set=[0, F(-3, 4)])
    assert validate_enriched(e).ok


def _with_extra(c: InvolutiveComplex) -> InvolutiveComplex:
    gens = list(c.generators) + [("g", -2, F(-1, 3))]
    cx = InstantonComplex.build(gens, (), Flavor.D2)
    return InvolutiveComplex.build(cx, [("theta", "a")], 0, [])


def test_clustering_failure_pinpointed():
    base = build_fig41("a")
    last = _with_extra(base)
    terms = (base, base, base, last)
    ident = LinearMap.identity(base.generators)
    zero = LinearMap.zero(base.generators, base.generators, 1)
    inc = LinearMap.from_entries(base.generators, last.generators, [("theta", "theta"), ("a", "a")])
    psi = {(0, 1): Psi(ident, zero, F(0)), (1, 2): Psi(ident, zero, F(0))}
    psi[(2, 3)] = Psi(inc, LinearMap.zero(base.generators, last.generators, 1), F(0))
    e = EnrichedComplex(terms, psi, (F(0), F(1, 4)), (F(1, 8),) * 4)
    problems = validate_enriched(e).problems
    assert any(p.startswith("index 3: clustering fails for g") for p in problems)
    assert not any(p.startswith("index 2") for p in problems)


def test_truncation_quotients_a():
    e = EnrichedComplex.constant(build_fig41("a"))
    w = stable_truncation(e, F(-1, 2), 0).window
    assert w.points == ((0, 0),)
    assert w.tau == (1,)


def test_forbidden_band():
    c = build_fig41("a")
    e = EnrichedComplex.constant(c, 2, cluster_set=[0, F(-3, 4)])
    e = EnrichedComplex(
        tuple(InvolutiveComplex(c.complex, c.tau.with_level(F(1, 4)), F(1, 4), c.h_witness) for c in e.terms),
        {k: Psi(p.f, p.h, F(1, 4)) for k, p in e.psi.items()},
        e.cluster_set,
        e.radii,
    )
    with pytest.raises(InsufficientTailError, match="index"):
        stable_truncation(e, F(-3, 4) + F(1, 8), F(1, 2))
    with pytest.raises(CriticalEndpointError):
        stable_truncation(e, F(-3, 4), F(1, 2))


def test_single_term_is_insufficient():
    e = EnrichedComplex.constant(build_fig41("a"), 1)
    with pytest.raises(InsufficientTailError):
        stable_truncation(e, F(-1, 8), F(1, 8))


def test_constant_fig41b_value():
    e = EnrichedComplex.constant(build_fig41("b"))
    for s in (F(-1, 7), F(-5, 7), F(-11, 7)):
        assert enriched_rs(e, s).value == F(3, 4)


def test_critical_left_limit():
    # fig41c with alpha = 3/4: inf for s <= -3/4, else 3/4; s = -3/4 is critical.
    c = build_fig41("c", beta=F(-3, 4), alpha=F(3, 4))
    e = EnrichedComplex.constant(c)
    v = enriched_rs(e, F(-3, 4))
    assert v.critical
    assert v.left == INF and v.right == F(3, 4)
    assert v.value == v.left == rs_value(c, F(-3, 4), True)


@pytest.mark.parametrize("seed", range(8))
def test_constant_sequence_matches_single(seed):
    c = random_complex(seed, 5, involutive=True)
    e = EnrichedComplex.constant(c)
    for s in (F(-1, 97), F(-13, 29), F(-31, 19)):
        assert enriched_rs(e, s).value == rs_value(c, s, True)


def test_enriched_monotonicity_and_unit():
    t = EnrichedComplex.constant(trivial_involutive())
    for c in (build_fig41("a"), build_fig41("b"), InvolutiveComplex.trivial_tau(random_complex(3, 4))):
        e = EnrichedComplex.constant(c)
        maps = enriched_local_map(t, e)
        assert (maps is not None) == (enriched_rs(e, 0).value == INF)
        down = enriched_local_map(e, t)
        assert down is not None
        for s in (F(-1, 97), F(-13, 29)):
            assert enriched_rs(e, s).value <= enriched_rs(t, s).value


def test_manifest(tmp_path):
    save_complex(build_fig41("a"), tmp_path / "a.json")
    (tmp_path / "m.json").write_text(
        json.dumps(
            {
                "cluster_set": ["0", "-3/4"],
                "radius": "0",
                "terms": [{"complex": "a.json", "level": "0"}, {"complex": "a.json", "level": "0"}],
                "psi": [{"from": 0, "to": 1, "level": "0", "identity": True}],
            }
        )
    )
    e = load_manifest(tmp_path / "m.json")
    assert validate_enriched(e).ok
    assert enriched_rs(e, F(-1, 3)).value == F(3, 4)
