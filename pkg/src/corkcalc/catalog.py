"""Builders for the explicit small complexes, plus seeded random complexes.

Every builder takes its filtration levels as parameters; nothing in here
is a claim about genuine Chern-Simons values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from . import gf2
from .core import (
    Flavor,
    Generator,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    trivial_involutive,
    ypow,
)
from .filt import parse_filt
from .morphism import _MapSystem, minimal_homotopy

F = Fraction


class CatalogError(ValueError):
    pass


def _q(x: Any) -> Fraction:
    return parse_filt(x)


def build_fig31(variant: str, beta=F(-1, 2), alpha=F(1, 3), extra_level=F(-1, 4)) -> InstantonComplex:
    """(a) theta alone; (b) d theta = x; (c) adds w with dw = x below 0; (d) the same w above 0."""
    beta, alpha, extra_level = _q(beta), _q(alpha), _q(extra_level)
    if not beta < 0:
        raise CatalogError("beta must be negative")
    theta = Generator("theta", -3, F(0), True)
    x = Generator("x", -4, beta)
    name = f"fig31{variant}"
    if variant == "a":
        return InstantonComplex.build([theta], (), Flavor.D2, name)
    if variant == "b":
        return InstantonComplex.build([theta, x], [("theta", "x")], Flavor.D2, name)
    if variant == "c":
        if not beta < extra_level <= 0:
            raise CatalogError("extra_level must lie in (beta, 0]")
        w = Generator("w", -3, extra_level)
    elif variant == "d":
        if not alpha > 0:
            raise CatalogError("alpha must be positive")
        w = Generator("w", -3, alpha)
    else:
        raise CatalogError(f"unknown variant {variant!r}")
    return InstantonComplex.build([theta, x, w], [("theta", "x"), ("w", "x")], Flavor.D2, name)


def build_fig41(variant: str, beta=F(-3, 4), alpha=F(1, 2), mid_level=F(-1, 4)) -> InvolutiveComplex:
    """(a) tau theta = theta + a; (b) tau swaps two cycles over theta; (c) tau theta = theta + x with x = dw."""
    beta, alpha, mid_level = _q(beta), _q(alpha), _q(mid_level)
    if not beta < 0:
        raise CatalogError("beta must be negative")
    name = f"fig41{variant}"
    theta = Generator("theta", -3, F(0), True)
    if variant == "a":
        cx = InstantonComplex.build([theta, Generator("a", -3, beta)], (), Flavor.D2, name)
        return InvolutiveComplex.build(cx, [("theta", "a")], 0, [])
    if variant == "b":
        if not beta < mid_level <= 0:
            raise CatalogError("mid_level must lie in (beta, 0]")
        gens = [theta, Generator("u", -3, mid_level), Generator("v", -3, mid_level), Generator("x", -4, beta)]
        cx = InstantonComplex.build(gens, [("theta", "x"), ("u", "x"), ("v", "x")], Flavor.D2, name)
        return InvolutiveComplex.build(cx, [("u", "u"), ("u", "v"), ("v", "v"), ("v", "u")], 0, [])
    if variant == "c":
        if not alpha > 0:
            raise CatalogError("alpha must be positive")
        gens = [theta, Generator("x", -3, beta), Generator("w", -2, alpha)]
        cx = InstantonComplex.build(gens, [("w", "x")], Flavor.D2, name)
        return InvolutiveComplex.build(cx, [("theta", "x")], 0, [])
    raise CatalogError(f"unknown variant {variant!r}")


AKBULUT_NAMES = ("beta1", "beta2", "alpha1", "alpha2", "alpha3", "alpha4")


def default_akbulut_levels() -> dict[str, Fraction]:
    return {"beta1": F(-1, 2), "beta2": F(-1, 2), "alpha1": F(-1, 4), "alpha2": F(-2, 3), "alpha3": F(-1, 3), "alpha4": F(-1, 6)}


def _levels(levels: dict | None, names: tuple[str, ...], defaults: dict) -> dict[str, Fraction]:
    out = dict(defaults)
    for k, v in (levels or {}).items():
        if k not in names:
            raise CatalogError(f"unknown generator {k!r}; expected one of {', '.join(names)}")
        out[k] = _q(v)
    return out


def build_akbulut(variant: str = "A", levels: dict | None = None, alpha_index: int = 2, check_levels: bool = True) -> InvolutiveComplex:
    """Seven generators, ``d alpha1 = beta1 + beta2``, tau swapping the betas.

    Variant ``A``: ``tau theta = theta + alpha_i`` (``i`` in 2..4).  Variant
    ``B``: ``tau theta = theta + beta1``, which is only a homotopy involution,
    witnessed by ``H theta = alpha1``.
    """
    lv = _levels(levels, AKBULUT_NAMES, default_akbulut_levels())
    if check_levels:
        bad = [k for k, v in lv.items() if v > 0]
        if bad:
            raise CatalogError(f"levels must be <= 0: {', '.join(bad)}")
    if lv["beta1"] != lv["beta2"]:
        raise CatalogError("tau swaps beta1 and beta2, so their levels must agree")
    if lv["beta1"] > lv["alpha1"]:
        raise CatalogError("d alpha1 = beta1 + beta2 must not raise the filtration")
    gens = [Generator("theta", -3, F(0), True)]
    gens += [Generator(n, -2 if n == "alpha1" else -3, lv[n]) for n in AKBULUT_NAMES]
    variant = variant.upper()
    cx = InstantonComplex.build(gens, [("alpha1", "beta1"), ("alpha1", "beta2")], Flavor.D2, f"akbulut{variant}")
    swap = [("beta1", "beta1"), ("beta1", "beta2"), ("beta2", "beta2"), ("beta2", "beta1")]
    if variant == "A":
        if alpha_index not in (2, 3, 4):
            raise CatalogError("alpha_index must be 2, 3 or 4")
        return InvolutiveComplex.build(cx, swap + [("theta", f"alpha{alpha_index}")], 0, [])
    if variant == "B":
        return InvolutiveComplex.build(cx, swap + [("theta", "beta1")], 0, None)
    raise CatalogError(f"unknown variant {variant!r}")


REVERSED_NAMES = ("beta1v", "beta2v", "alpha1v", "alpha2v", "alpha3v", "alpha4v")


def default_reversed_levels() -> dict[str, Fraction]:
    return {"beta1v": F(-1, 4), "beta2v": F(-1, 4), "alpha1v": F(-1, 2), "alpha2v": F(-1, 3), "alpha3v": F(1, 5), "alpha4v": F(-3, 5)}


def build_akbulut_reversed(variant: str = "fixed", levels: dict | None = None) -> InvolutiveComplex:
    """Reversed orientation: ``d beta_i^v = alpha1^v`` with alpha1^v beside theta in grading -3.

    ``fixed``: tau theta = theta.  ``corrected``: tau theta = theta + alpha1^v,
    which needs ``deg_i(beta_i^v) <= 0``.
    """
    lv = _levels(levels, REVERSED_NAMES, default_reversed_levels())
    if lv["beta1v"] != lv["beta2v"]:
        raise CatalogError("tau swaps beta1v and beta2v, so their levels must agree")
    if lv["alpha1v"] > lv["beta1v"]:
        raise CatalogError("d beta_i^v = alpha1^v must not raise the filtration")
    if variant == "corrected":
        if lv["beta1v"] > 0:
            raise CatalogError("the corrected tau needs deg_i(beta_i^v) <= 0")
    elif variant != "fixed":
        raise CatalogError(f"unknown variant {variant!r}")
    gens = [Generator("theta", -3, F(0), True)]
    gens += [Generator(n, -3 if n == "alpha1v" else -2, lv[n]) for n in REVERSED_NAMES]
    cx = InstantonComplex.build(gens, [("beta1v", "alpha1v"), ("beta2v", "alpha1v")], Flavor.D2, f"akbulut-rev-{variant}")
    swap = [("beta1v", "beta1v"), ("beta1v", "beta2v"), ("beta2v", "beta2v"), ("beta2v", "beta1v")]
    extra = [("theta", "alpha1v")] if variant == "corrected" else []
    return InvolutiveComplex.build(cx, swap + extra, 0, [])


def theta_class_witness(c: InvolutiveComplex) -> tuple[frozenset, frozenset, bool]:
    """``theta`` as a theta-supported cycle with ``z + tau z`` and whether that is a boundary.

    Uses the whole complex (no truncation): the class of ``z`` is fixed by
    ``tau_*`` exactly when ``z + tau z`` lies in the image of ``d``.
    """
    cx = c.complex
    th = cx.theta
    z = frozenset({(th, 0)})
    if cx.diff.apply(z):
        raise CatalogError("theta is not a cycle here")
    diff = frozenset(c.tau.apply(z) ^ z)
    pts3 = cx.slice_points(-3)
    idx = {p: i for i, p in enumerate(pts3)}
    basis = gf2.XorBasis()
    for p in cx.slice_points(-2):
        basis.add(sum(1 << idx[q] for q in cx.diff.apply({p})))
    target = sum(1 << idx[q] for q in diff)
    return z, diff, target in basis


def build_brieskorn_like(n_even_generators: int = 0, levels: list | None = None) -> InvolutiveComplex:
    """Generators in even gradings only: no differential and tau the identity."""
    if n_even_generators < 0:
        raise CatalogError("generator count must be nonnegative")
    levels = [_q(v) for v in (levels or [])]
    if levels and len(levels) != n_even_generators:
        raise CatalogError("one level per generator")
    if not levels:
        levels = [F(-(i + 1), 3) for i in range(n_even_generators)]
    gens = [Generator("theta", -3, F(0), True)]
    gens += [Generator(f"e{i + 1}", -2 - 2 * (i % 2), levels[i]) for i in range(n_even_generators)]
    cx = InstantonComplex.build(gens, (), Flavor.D2, f"brieskorn{n_even_generators}")
    return InvolutiveComplex.trivial_tau(cx)


def build_reversed_member(beta=F(-3, 4), beta_prime=F(-1, 4)) -> InvolutiveComplex:
    """Reversed-orientation partner of ``fig41a``: ``db = a`` kills ``tau theta + theta``.

    ``b`` sits in grading -2 at level ``beta_prime <= 0``, so ``r_0 = inf``.
    """
    beta, beta_prime = _q(beta), _q(beta_prime)
    if not beta <= beta_prime <= 0:
        raise CatalogError("need beta <= beta_prime <= 0")
    gens = [Generator("theta", -3, F(0), True), Generator("a", -3, beta), Generator("b", -2, beta_prime)]
    cx = InstantonComplex.build(gens, [("b", "a")], Flavor.D2, "fig41a-rev")
    return InvolutiveComplex.build(cx, [("theta", "a")], 0, [])


def synthetic_family(betas=(F(-3, 4), F(-1, 2), F(-1, 4))):
    """Members ``fig41a(beta_i)`` with ``r_0 = -beta_i`` and reversed partners with ``r_0 = inf``."""
    from .algebra import Member

    return [Member(f"Y{i + 1}", build_fig41("a", beta=b), build_reversed_member(b, b)) for i, b in enumerate(betas)]


# --------------------------------------------------------------------------
# random complexes

_DEG_Z = (-5, -4, -4, -4, -3, -3, -3, -2, -2, -2, -1, 4, 5, -11, -12)
_DEG_I = tuple(sorted({F(p, q) for q in (1, 2, 3, 4) for p in range(-2 * q, q + 1)}))


def random_complex(
    seed: int,
    max_generators: int = 6,
    flavor: Flavor | str = Flavor.D2,
    involutive: bool = False,
    deg_z_choices: tuple[int, ...] = _DEG_Z,
) -> InstantonComplex | InvolutiveComplex:
    """A valid complex drawn deterministically from ``seed``.

    Differential entries are offered in random order and kept when ``d^2``
    stays zero.  For ``involutive``, ``tau = id + phi`` with ``phi`` a random
    filtered chain map; candidates are rejected until ``phi^2`` is
    null-homotopic at level 0, falling back to ``tau = id``.
    """
    flavor = Flavor(flavor)
    rng = random.Random(seed)
    n = rng.randint(1, max(1, max_generators))
    if flavor is Flavor.D1:
        c = random_complex(seed, max_generators, Flavor.D2, involutive, deg_z_choices)
        from .algebra import dualize

        return dualize(c)
    gens = [Generator("theta", -3, F(0), True)]
    for i in range(1, n):
        gens.append(Generator(f"g{i}", rng.choice(deg_z_choices), rng.choice(_DEG_I)))
    gens = tuple(gens)
    cands = []
    for g, sg in enumerate(gens):
        for h, tg in enumerate(gens):
            if h == 0 or g == h:
                continue
            k = ypow(sg, tg, -1)
            if k is not None and tg.deg_i + k <= sg.deg_i:
                cands.append((g, h))
    rng.shuffle(cands)
    cols = [0] * n
    for g, h in cands:
        if rng.random() < 0.5:
            continue
        cols[g] ^= 1 << h
        d = LinearMap(gens, gens, tuple(cols), -1)
        if not (d @ d).is_zero():
            cols[g] ^= 1 << h
    cx = InstantonComplex(gens, LinearMap(gens, gens, tuple(cols), -1, F(0)), Flavor.D2, f"random{seed}")
    if not involutive:
        return cx
    ident = LinearMap.identity(gens)
    sys = _MapSystem(cx, cx)
    sys.add_map("phi", 0, F(0))
    sys.left("chain", cx.diff, "phi")
    sys.right("chain", "phi", cx.diff)
    sys.fix("phi", cx.theta, cx.theta, 0)
    sol = sys.solve()
    assert sol is not None
    for _ in range(12):
        choice = rng.getrandbits(len(sol.kernel)) if sol.kernel else 0
        phi = sys.extract(sol.element(choice), "phi")
        tau = ident + phi
        found = minimal_homotopy(cx, cx, tau @ tau + ident)
        if found is not None and found[1] == 0:
            return InvolutiveComplex(cx, tau.with_level(F(0)), F(0), found[0])
    return InvolutiveComplex(cx, ident, F(0), LinearMap.zero(gens, gens, 1))


# --------------------------------------------------------------------------
# registry for the command line


@dataclass(frozen=True)
class Entry:
    name: str
    summary: str
    build: Callable[..., Any]
    params: tuple[str, ...]


def _akbulut_entry(variant: str):
    def build(**kw):
        idx = int(kw.pop("alpha_index", 2))
        return build_akbulut(variant, kw or None, idx)

    return build


def _reversed_entry(variant: str):
    return lambda **kw: build_akbulut_reversed(variant, kw or None)


def _brieskorn(**kw):
    n = int(kw.pop("n", 2))
    levels = [kw[f"e{i + 1}"] for i in range(n)] if all(f"e{i + 1}" in kw for i in range(n)) else None
    return build_brieskorn_like(n, levels)


def _random(**kw):
    return random_complex(
        int(kw.get("seed", 1)),
        int(kw.get("max_generators", 6)),
        kw.get("flavor", "D2"),
        str(kw.get("involutive", "false")).lower() in ("1", "true", "yes"),
    )


FIG31_SUMMARY = {
    "a": "theta alone",
    "b": "d theta = x",
    "c": "d theta = d w = x, w below 0",
    "d": "d theta = d w = x, w above 0",
}
FIG41_SUMMARY = {
    "a": "tau theta = theta + a",
    "b": "tau swaps two cycles over theta",
    "c": "tau theta = theta + x with x = d w",
}

CATALOG: dict[str, Entry] = {
    "trivial": Entry("trivial", "theta only, tau = id", lambda **kw: trivial_involutive(), ()),
    **{
        f"fig31{v}": Entry(f"fig31{v}", FIG31_SUMMARY[v], (lambda v=v, **kw: build_fig31(v, **kw)), ("beta", "alpha", "extra_level"))
        for v in "abcd"
    },
    **{
        f"fig41{v}": Entry(f"fig41{v}", FIG41_SUMMARY[v], (lambda v=v, **kw: build_fig41(v, **kw)), ("beta", "alpha", "mid_level"))
        for v in "abc"
    },
    "akbulut-A": Entry("akbulut-A", "seven generators, tau theta = theta + alpha_i", _akbulut_entry("A"), AKBULUT_NAMES + ("alpha_index",)),
    "akbulut-B": Entry("akbulut-B", "seven generators, tau theta = theta + beta1", _akbulut_entry("B"), AKBULUT_NAMES),
    "akbulut-rev-fixed": Entry("akbulut-rev-fixed", "reversed orientation, tau theta = theta", _reversed_entry("fixed"), REVERSED_NAMES),
    "akbulut-rev-corrected": Entry(
        "akbulut-rev-corrected", "reversed orientation, tau theta = theta + alpha1v", _reversed_entry("corrected"), REVERSED_NAMES
    ),
    "brieskorn": Entry("brieskorn", "even gradings only, tau = id", _brieskorn, ("n", "e1", "e2", "...")),
    "random": Entry("random", "seeded random valid complex", _random, ("seed", "max_generators", "flavor", "involutive")),
}


def catalog_complexes() -> dict[str, InstantonComplex | InvolutiveComplex]:
    """Every named build at default parameters (random excluded)."""
    return {name: e.build() for name, e in CATALOG.items() if name != "random"}


def emit(name: str, params: dict[str, str] | None = None):
    if name not in CATALOG:
        raise CatalogError(f"unknown catalog entry {name!r}")
    try:
        return CATALOG[name].build(**(params or {}))
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name}: {exc}") from None
