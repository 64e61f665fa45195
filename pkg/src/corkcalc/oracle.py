"""Exhaustive cross-check for small windows.

Deliberately naive: lattice points are found by scanning y-powers, chains
are Python sets, and every chain in grading -3 is tried.  Nothing here
shares code with the linear-algebra solver beyond reading map entries.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .core import AnyComplex, InvolutiveComplex, underlying
from .filt import FiltValue, parse_filt

MAX_POINTS = 20


class OracleTooLarge(ValueError):
    pass


def _points(c: AnyComplex, r: Fraction, s: Fraction) -> list[tuple[int, int]]:
    cx = underlying(c)
    out = []
    for g, gen in enumerate(cx.generators):
        lo = math.floor(r - gen.deg_i) - 1
        hi = math.ceil(s - gen.deg_i) + 1
        for k in range(lo, hi + 1):
            if r < gen.deg_i + k <= s:
                out.append((g, k))
    return out


def _image(entries, pts: set, chain) -> frozenset:
    """Image of a chain, keeping only terms inside the window."""
    out: set = set()
    for g, k in chain:
        for src, dst, m in entries:
            if src == g:
                out ^= {(dst, k + m)}
    return frozenset(out & pts)


def _grading(cx, p) -> int:
    return cx.generators[p[0]].deg_z + 8 * p[1]


def window_points(c: AnyComplex, r: FiltValue, s: FiltValue) -> list[tuple[int, int]]:
    return _points(c, parse_filt(r), parse_filt(s))


def brute_theta_cycle(c: AnyComplex, r: FiltValue, s: FiltValue, equivariant: bool = False) -> frozenset | None:
    """First theta-supported (equivariant) window cycle found by enumeration, or ``None``."""
    r, s = parse_filt(r), parse_filt(s)
    cx = underlying(c)
    pts = _points(c, r, s)
    if len(pts) > MAX_POINTS:
        raise OracleTooLarge(f"window has {len(pts)} lattice points; the oracle stops at {MAX_POINTS}")
    ptset = set(pts)
    theta = (cx.theta, 0)
    if theta not in ptset:
        return None
    dent = list(cx.diff.entries())
    top = [p for p in pts if _grading(cx, p) == -3 and p != theta]
    boundaries = None
    if equivariant:
        if not isinstance(c, InvolutiveComplex):
            raise ValueError("equivariant search needs an involutive complex")
        tent = list(c.tau.entries())
        below = [p for p in pts if _grading(cx, p) == -2]
        boundaries = set()
        for n in range(len(below) + 1):
            for combo in itertools.combinations(below, n):
                boundaries.add(_image(dent, ptset, combo))
    for n in range(len(top) + 1):
        for combo in itertools.combinations(top, n):
            z = frozenset((theta,) + combo)
            if _image(dent, ptset, z):
                continue
            if equivariant and (_image(tent, ptset, z) ^ z) not in boundaries:
                continue
            return z
    return None


def brute_rs(c: AnyComplex, s: FiltValue = 0, equivariant: bool = False, depth: int = 3) -> FiltValue:
    """r_s by scanning candidate r values; only for tiny complexes.

    Candidate ``r`` are the lattice levels below zero down to ``depth`` below
    the lowest generator level; a cycle at the deepest one is read as infinity.
    """
    from .filt import INF, NEG_INF

    s = parse_filt(s)
    cx = underlying(c)
    lo = min([Fraction(0)] + [g.deg_i for g in cx.generators]) - depth
    levels = sorted({p_lv for p_lv in (cx.generators[g].deg_i + k for g, k in _points(c, lo, Fraction(0))) if p_lv < 0}, reverse=True)
    if brute_theta_cycle(c, lo, -s, equivariant) is not None:
        return INF
    best: FiltValue = NEG_INF
    for lv in levels:
        if brute_theta_cycle(c, lv, -s, equivariant) is None:
            break
        best = -lv
    return best
