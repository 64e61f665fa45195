"""Finite truncations ``C^(r, s]`` as GF(2) complexes on lattice points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import gf2
from .core import AnyComplex, InstantonComplex, InvolutiveComplex, LinearMap, Point, underlying, ypow
from .filt import FiltValue, fmt_filt, is_finite, parse_filt


class WindowError(ValueError):
    pass


def lattice_points(cx: InstantonComplex, r: FiltValue, s: FiltValue) -> list[Point]:
    """Points ``(g, k)`` with ``r < deg_i(g) + k <= s``, in canonical order."""
    pts = []
    for g, gen in enumerate(cx.generators):
        k = math.floor(r - gen.deg_i) + 1
        while gen.deg_i + k <= s:
            pts.append((g, k))
            k += 1
    pts.sort(key=lambda p: (cx.generators[p[0]].deg_i + p[1], p[0], p[1]))
    return pts


@dataclass(frozen=True)
class WindowComplex:
    complex: InstantonComplex
    r: Fraction
    s: Fraction
    points: tuple[Point, ...]
    diff: tuple[int, ...]
    tau: tuple[int, ...] | None = None
    index: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def theta_points(self) -> list[Point]:
        th = self.complex.theta
        return [p for p in self.points if p[0] == th]

    def level(self, i: int) -> Fraction:
        return self.complex.point_level(self.points[i])

    def grading(self, i: int) -> int:
        return self.complex.point_grading(self.points[i])

    def mask(self, chain: Iterable[Point]) -> int:
        """Bitmask of a chain; terms outside the window are quotiented away."""
        m = 0
        for p in chain:
            i = self.index.get(p)
            if i is not None:
                m ^= 1 << i
        return m

    def chain(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in gf2.bits(mask))

    def grading_mask(self, grading: int) -> int:
        m = 0
        for i in range(len(self.points)):
            if self.grading(i) == grading:
                m |= 1 << i
        return m

    def apply_diff(self, mask: int) -> int:
        return gf2.apply_columns(self.diff, mask)

    def apply_tau(self, mask: int) -> int:
        if self.tau is None:
            raise WindowError("window carries no tau")
        return gf2.apply_columns(self.tau, mask)

    def format(self, mask: int) -> str:
        return self.complex.format_chain(self.chain(mask))

    def is_complex(self) -> bool:
        return all(self.apply_diff(c) == 0 for c in self.diff)

    def to_dict(self) -> dict:
        from .io import complex_to_dict

        cx = self.complex
        pts = [{"id": cx.generators[g].name, "ypow": k} for g, k in self.points]
        return complex_to_dict(cx, {"window": {"r": fmt_filt(self.r), "s": fmt_filt(self.s), "points": pts}})


def _check_window(r: FiltValue, s: FiltValue) -> tuple[Fraction, Fraction]:
    r, s = parse_filt(r), parse_filt(s)
    if not (is_finite(r) and is_finite(s)):
        raise WindowError("infinite window endpoint: use the slice solver in corkcalc.rs instead")
    if not r < s:
        raise WindowError(f"empty window: need r < s, got ({fmt_filt(r)}, {fmt_filt(s)}]")
    return r, s


def _window_columns(
    m: LinearMap, points: list[Point], target_index: dict, target: InstantonComplex, top: Fraction
) -> tuple[int, ...]:
    """Columns of ``m`` on window points; images below the window are dropped.

    An image above ``top`` means the map does not descend to these windows.
    """
    cols = []
    for g, k in points:
        col = 0
        for h in gf2.bits(m.cols[g]):
            q = (h, k + ypow(m.source[g], m.target[h], m.shift))
            j = target_index.get(q)
            if j is not None:
                col ^= 1 << j
            elif target.point_level(q) > top:
                raise WindowError(
                    f"{m.source[g].name} -> {m.target[h].name} leaves the window from above; "
                    "the map does not descend to these truncations"
                )
        cols.append(col)
    return tuple(cols)


def truncate(c: AnyComplex, r: FiltValue, s: FiltValue) -> WindowComplex:
    """The quotient of ``{deg_i <= s}`` by ``{deg_i <= r}``, with tau when present."""
    r, s = _check_window(r, s)
    cx = underlying(c)
    points = lattice_points(cx, r, s)
    index = {p: i for i, p in enumerate(points)}
    diff = _window_columns(cx.diff, points, index, cx, s)
    tau = None
    if isinstance(c, InvolutiveComplex):
        # A positive-level tau still descends when no lattice point sits in
        # the band it could push across; anything else is reported above.
        tau = _window_columns(c.tau, points, index, cx, s)
    return WindowComplex(cx, r, s, tuple(points), diff, tau, index)


def induced_window_map(
    f: LinearMap,
    source: AnyComplex,
    target: AnyComplex,
    r: FiltValue,
    s: FiltValue,
    delta: FiltValue = Fraction(0),
) -> tuple[WindowComplex, WindowComplex, tuple[int, ...]]:
    """Columns of ``f: C^(r,s] -> C'^(r+delta, s+delta]`` on lattice bases."""
    r, s = _check_window(r, s)
    delta = parse_filt(delta)
    for g, h, k in f.entries():
        if f.entry_rise(g, h) > delta:
            raise WindowError(
                f"level violation: {f.source[g].name} --y^{k}--> {f.target[h].name} "
                f"raises deg_i by {fmt_filt(f.entry_rise(g, h))} > {fmt_filt(delta)}"
            )
    src = truncate(underlying(source), r, s)
    dst = truncate(underlying(target), r + delta, s + delta)
    return src, dst, _window_columns(f, list(src.points), dst.index, dst.complex, dst.s)


@dataclass(frozen=True)
class WindowHomology:
    rank: int
    cycle_basis: tuple[int, ...]
    boundary_basis: tuple[int, ...]


def window_homology(w: WindowComplex, grading: int) -> WindowHomology:
    """Reduced bases of cycles and boundaries in one grading, as point masks."""
    idx = [i for i in range(len(w.points)) if w.grading(i) == grading]
    cols = [w.diff[i] for i in idx]
    kernel = gf2.kernel_basis(cols, len(w.points))
    cycles = gf2.XorBasis()
    for v in kernel:
        m = 0
        for j in gf2.bits(v):
            m |= 1 << idx[j]
        cycles.add(m)
    bounds = gf2.XorBasis(w.diff[i] for i in range(len(w.points)) if w.grading(i) == grading + 1)
    cyc = tuple(cycles.reduced())
    bnd = tuple(bounds.reduced())
    return WindowHomology(len(cyc) - len(bnd), cyc, bnd)
