"""Theta-supported cycles and the invariants ``r_s(C)`` and ``r_s(C, tau)``.

Only three homological gradings matter: cycles live in grading -3, their
boundaries in -4, and equivariance witnesses ``b`` (with ``db = z + tau z``)
in -2.  Each grading slice holds at most one y-multiple of every generator,
so the slice truncated to ``(lo, hi]`` is a finite GF(2) space even when
``lo = -inf`` or ``hi = inf``.  An infinite endpoint therefore needs no
limiting argument: the windows stop changing once they contain every
lattice point of the three slices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import gf2
from .core import (
    AnyComplex,
    Flavor,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    Point,
    underlying,
    ypow,
)
from .filt import INF, NEG_INF, FiltValue, fmt_filt, parse_filt

SLICES = (-4, -3, -2)


class FlavorError(ValueError):
    pass


@dataclass(frozen=True)
class ThetaCycleCertificate:
    z: frozenset
    r: FiltValue
    s: FiltValue
    equivariant: bool = False
    b: frozenset | None = None

    def describe(self, c: AnyComplex) -> str:
        cx = underlying(c)
        text = f"z = {cx.format_chain(self.z)} in ({fmt_filt(self.r)}, {fmt_filt(self.s)}]"
        if self.equivariant:
            text += f", z + tau z = d({cx.format_chain(self.b or ())})"
        return text


def _image(m: LinearMap, p: Point) -> Iterable[Point]:
    g, k = p
    for h in gf2.bits(m.cols[g]):
        yield (h, k + ypow(m.source[g], m.target[h], m.shift))


def _resolve_tau(c: AnyComplex, equivariant: bool, tau: LinearMap | None) -> LinearMap | None:
    if not equivariant:
        return None
    if tau is not None:
        return tau
    if isinstance(c, InvolutiveComplex):
        return c.tau
    raise ValueError("equivariant search needs tau")


def _require_d2(cx: InstantonComplex) -> None:
    if cx.flavor is not Flavor.D2:
        raise FlavorError("theta-supported cycles are defined for D2 complexes; dualize a D1 complex first")


def solve_theta_cycle(cx: InstantonComplex, lo: FiltValue, hi: FiltValue, tau: LinearMap | None = None):
    """Lex-least ``(z, b)`` solving the window equations, or ``None``.

    Unknowns are the lattice points of slice -3 (for ``z``) and slice -2
    (for ``b``) inside ``(lo, hi]``.  Images falling to ``lo`` or below are
    quotiented away; images above ``hi`` cannot occur for a filtered map
    and raise for a tau that does not descend.
    """
    th = cx.theta
    if not (lo < 0 <= hi):
        return None
    zs = cx.slice_points(-3, lo, hi)
    bs = cx.slice_points(-2, lo, hi) if tau is not None else []
    nz = len(zs)
    eqs: dict[tuple, int] = {}

    def hit(kind: str, q: Point, var: int) -> None:
        lvl = cx.point_level(q)
        if lvl <= lo:
            return
        if lvl > hi:
            raise ValueError(f"map leaves the window ({fmt_filt(lo)}, {fmt_filt(hi)}] from above at {cx.format_chain([q])}")
        eqs[(kind, q)] = eqs.get((kind, q), 0) ^ (1 << (var + 1))

    for i, p in enumerate(zs):
        for q in _image(cx.diff, p):
            hit("d", q, i)
    theta_var = zs.index((th, 0))
    rows = list(eqs.values()) + [(1 << (theta_var + 1)) | 1]
    if tau is not None:
        eqs = {}
        for i, p in enumerate(zs):
            for q in _image(tau, p):
                hit("t", q, i)
            hit("t", p, i)
        for j, p in enumerate(bs):
            for q in _image(cx.diff, p):
                hit("t", q, nz + j)
        rows += list(eqs.values())
    sol = gf2.solve_affine(rows, nz + len(bs))
    if sol is None:
        return None
    x = sol.particular
    z = frozenset(zs[i] for i in range(nz) if (x >> i) & 1)
    b = frozenset(bs[j] for j in range(len(bs)) if (x >> (nz + j)) & 1)
    return z, b


def find_theta_cycle(
    c: AnyComplex,
    r: FiltValue,
    s: FiltValue,
    equivariant: bool = False,
    tau: LinearMap | None = None,
) -> ThetaCycleCertificate | None:
    """A (tau-equivariant) theta-supported cycle in ``C^(r, s]`` or ``None``."""
    cx = underlying(c)
    _require_d2(cx)
    t = _resolve_tau(c, equivariant, tau)
    r, s = parse_filt(r), parse_filt(s)
    found = solve_theta_cycle(cx, r, s, t)
    if found is None:
        return None
    z, b = found
    return ThetaCycleCertificate(z, r, s, equivariant, b if equivariant else None)


def relevant_levels(cx: InstantonComplex) -> list[Fraction]:
    """Distinct lattice levels in the three gradings that decide theta cycles."""
    out = set()
    for grading in SLICES:
        out.update(cx.point_level(p) for p in cx.slice_points(grading))
    return sorted(out)


def rs_value(
    c: AnyComplex,
    s: FiltValue = Fraction(0),
    equivariant: bool = False,
    tau: LinearMap | None = None,
) -> FiltValue:
    """``r_s``: minus the infimum of ``r < 0`` admitting a theta-supported ``(r, -s]`` cycle.

    Existence is monotone in ``r`` (quotient maps carry cycles to cycles), and
    the window only changes when ``r`` crosses a relevant lattice level, so a
    descending scan over those levels that stops at the first failure finds
    the infimum.
    """
    cx = underlying(c)
    _require_d2(cx)
    t = _resolve_tau(c, equivariant, tau)
    s = parse_filt(s)
    if s > 0:
        raise ValueError("r_s is defined for s <= 0")
    hi = -s
    if solve_theta_cycle(cx, NEG_INF, hi, t) is not None:
        return INF
    best: FiltValue = NEG_INF
    for lvl in reversed([x for x in relevant_levels(cx) if x < 0]):
        if solve_theta_cycle(cx, lvl, hi, t) is None:
            break
        best = -lvl
    return best


@dataclass(frozen=True)
class StepFunction:
    """``s -> r_s`` on ``[-inf, 0]`` as pieces ``(s_lo, s_hi, value)``.

    The first piece is ``[-inf, s_hi]``; every later piece is ``(s_lo, s_hi]``.
    Values therefore extend to the left end of each breakpoint, matching
    the windows ``(r, -s]`` that are closed on the ``-s`` side.
    """

    pieces: tuple[tuple[FiltValue, FiltValue, FiltValue], ...]

    def __call__(self, s: FiltValue) -> FiltValue:
        s = parse_filt(s)
        for lo, hi, v in self.pieces:
            if s <= hi and (s > lo or lo == NEG_INF):
                return v
        raise ValueError(f"s = {fmt_filt(s)} outside [-inf, 0]")

    def right_limit(self, s: FiltValue) -> FiltValue:
        s = parse_filt(s)
        if s >= 0:
            return self(Fraction(0))
        for lo, hi, v in self.pieces:
            if lo <= s < hi:
                return v
        return self.pieces[-1][2]

    @property
    def breakpoints(self) -> list[FiltValue]:
        return [hi for _, hi, _ in self.pieces[:-1]]

    def values(self) -> list[FiltValue]:
        return [v for _, _, v in self.pieces]

    def is_nonincreasing(self) -> bool:
        vals = self.values()
        return all(a >= b for a, b in zip(vals, vals[1:]))

    def is_constant(self) -> bool:
        return len(self.pieces) == 1

    def to_tsv(self) -> str:
        return "".join(f"{fmt_filt(lo)}\t{fmt_filt(hi)}\t{fmt_filt(v)}\n" for lo, hi, v in self.pieces)

    def to_rows(self) -> list[dict]:
        return [{"s_lo": fmt_filt(lo), "s_hi": fmt_filt(hi), "value": fmt_filt(v)} for lo, hi, v in self.pieces]


def sample_points(levels: Iterable[Fraction]) -> list[Fraction]:
    """Thresholds ``u >= 0`` at which ``(r, u]`` windows can change, 0 included."""
    return sorted({Fraction(0)} | {x for x in levels if x > 0})


def rs_function(c: AnyComplex, equivariant: bool = False, tau: LinearMap | None = None) -> StepFunction:
    """The whole step function ``s -> r_s`` from one evaluation per threshold."""
    cx = underlying(c)
    us = sample_points(relevant_levels(cx))
    raw = []
    for i, u in enumerate(us):
        v = rs_value(c, -u, equivariant, tau)
        nxt = us[i + 1] if i + 1 < len(us) else INF
        raw.append((-nxt, -u, v))
    raw.reverse()
    merged: list[list] = []
    for lo, hi, v in raw:
        if merged and merged[-1][2] == v:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, v])
    f = StepFunction(tuple(tuple(p) for p in merged))
    if not f.is_nonincreasing():
        raise AssertionError(f"r_s is not nonincreasing: {f.to_rows()}")
    if strict_drop(c, equivariant, tau):
        if any(v <= 0 for v in f.values()):
            raise AssertionError("strict filtration drop at theta must force r_s > 0")
    return f


def strict_drop(c: AnyComplex, equivariant: bool = False, tau: LinearMap | None = None) -> bool:
    """Every entry leaving theta (in d, and in tau when equivariant) lands strictly below 0."""
    cx = underlying(c)
    th = cx.theta
    maps = [cx.diff]
    t = _resolve_tau(c, equivariant, tau) if equivariant else None
    if t is not None:
        maps.append(t + LinearMap.identity(cx.generators))
    for m in maps:
        for q in _image(m, (th, 0)):
            if cx.point_level(q) >= 0:
                return False
    return True


@dataclass(frozen=True)
class LocalTriviality:
    trivial: bool
    r0: FiltValue
    certificate: ThetaCycleCertificate | None = None
    local_map: LinearMap | None = None
    homotopy: LinearMap | None = None
    notes: list[str] = field(default_factory=list)


def local_triviality(c: InvolutiveComplex) -> LocalTriviality:
    """Decide local triviality via ``r_0(C, tau) = inf``.

    When trivial, the certificate cycle ``z`` and its witness ``b`` give the
    equivariant local map from the trivial complex: ``theta -> z`` with
    homotopy ``theta -> b``.
    """
    from .core import trivial_complex

    cx = underlying(c)
    _require_d2(cx)
    tau = c.tau if isinstance(c, InvolutiveComplex) else LinearMap.identity(cx.generators)
    r0 = rs_value(cx, 0, True, tau)
    if r0 != INF:
        return LocalTriviality(False, r0)
    cert = find_theta_cycle(cx, NEG_INF, 0, True, tau)
    assert cert is not None
    triv = trivial_complex(Flavor.D2).generators
    name = triv[0].name
    f = LinearMap.from_entries(triv, cx.generators, [(name, cx.generators[g].name, k) for g, k in cert.z], 0)
    h = LinearMap.from_entries(triv, cx.generators, [(name, cx.generators[g].name, k) for g, k in cert.b], 1)
    return LocalTriviality(True, r0, cert, f, h)


def window_theta_cycle(w, equivariant: bool = False) -> tuple[int, int] | None:
    """Lex-least ``(z, b)`` point masks for a theta-supported cycle in a materialized window."""
    th = w.complex.theta
    if (th, 0) not in w.index:
        return None
    zs = [i for i in range(len(w.points)) if w.grading(i) == -3]
    bs = [i for i in range(len(w.points)) if w.grading(i) == -2] if equivariant else []
    if equivariant and w.tau is None:
        raise ValueError("window carries no tau")
    n = len(zs)
    eqs: dict[tuple, int] = {}
    for v, i in enumerate(zs):
        for q in gf2.bits(w.diff[i]):
            eqs[("d", q)] = eqs.get(("d", q), 0) ^ (1 << (v + 1))
        if equivariant:
            for q in gf2.bits(w.tau[i] ^ (1 << i)):
                eqs[("t", q)] = eqs.get(("t", q), 0) ^ (1 << (v + 1))
    for v, i in enumerate(bs):
        for q in gf2.bits(w.diff[i]):
            eqs[("t", q)] = eqs.get(("t", q), 0) ^ (1 << (n + v + 1))
    rows = list(eqs.values()) + [(1 << (zs.index(w.index[(th, 0)]) + 1)) | 1]
    sol = gf2.solve_affine(rows, n + len(bs))
    if sol is None:
        return None
    x = sol.particular
    z = sum(1 << zs[v] for v in range(n) if (x >> v) & 1)
    b = sum(1 << bs[v] for v in range(len(bs)) if (x >> (n + v)) & 1)
    return z, b
