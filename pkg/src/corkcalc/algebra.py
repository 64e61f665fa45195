"""Tensor products, duals, the connected-sum inequality, and linear combinations."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import gf2
from .core import (
    AnyComplex,
    Flavor,
    Generator,
    InstantonComplex,
    InvolutiveComplex,
    LinearMap,
    dual_name,
    trivial_involutive,
    underlying,
    ypow,
)
from .filt import INF, FiltValue, add, fmt_filt, parse_filt
from .rs import rs_value
from .window import WindowComplex, truncate

log = logging.getLogger(__name__)


def pair_name(a: str, b: str) -> str:
    return f"{a}|{b}"


def _tensor_gens(a: InstantonComplex, b: InstantonComplex) -> tuple[Generator, ...]:
    return tuple(
        Generator(pair_name(ga.name, gb.name), ga.deg_z + gb.deg_z + 3, ga.deg_i + gb.deg_i, ga.is_theta and gb.is_theta)
        for ga in a.generators
        for gb in b.generators
    )


def _kron(
    ma: LinearMap, mb: LinearMap, gens: tuple[Generator, ...], src_gens: tuple[Generator, ...], nb: int
) -> LinearMap:
    """``ma (x) mb`` on the pair basis (index ``i * nb + j``); no signs over GF(2)."""
    cols = []
    for i, ca in enumerate(ma.cols):
        for j, cb in enumerate(mb.cols):
            col = 0
            for i2 in gf2.bits(ca):
                for j2 in gf2.bits(cb):
                    col |= 1 << (i2 * nb + j2)
            cols.append(col)
    return LinearMap(src_gens, gens, tuple(cols), ma.shift + mb.shift)


def tensor(a: AnyComplex, b: AnyComplex) -> AnyComplex:
    """``(C (x) C')[3]`` with ``d (x) 1 + 1 (x) d'`` and ``tau (x) tau'``.

    The theta generator is ``theta|theta'``; every other pair lies in the
    subcomplex.  When both inputs carry witnesses the tensor gets
    ``H (x) tau'^2 + 1 (x) H'``.
    """
    ca, cb = underlying(a), underlying(b)
    if ca.flavor is not Flavor.D2 or cb.flavor is not Flavor.D2:
        raise ValueError("tensor products are defined for D2 complexes; mixed or D1 flavors are rejected")
    gens = _tensor_gens(ca, cb)
    nb = cb.rank
    ida, idb = LinearMap.identity(ca.generators), LinearMap.identity(cb.generators)
    d = _kron(ca.diff, idb, gens, gens, nb) + _kron(ida, cb.diff, gens, gens, nb)
    name = f"({ca.name or 'A'})#({cb.name or 'B'})"
    cx = InstantonComplex(gens, d, Flavor.D2, name)
    if not isinstance(a, InvolutiveComplex) and not isinstance(b, InvolutiveComplex):
        return cx
    ia = a if isinstance(a, InvolutiveComplex) else InvolutiveComplex.trivial_tau(ca)
    ib = b if isinstance(b, InvolutiveComplex) else InvolutiveComplex.trivial_tau(cb)
    tau = _kron(ia.tau, ib.tau, gens, gens, nb)
    level = ia.level + ib.level
    h = None
    if ia.h_witness is not None and ib.h_witness is not None:
        h = _kron(ia.h_witness, ib.tau @ ib.tau, gens, gens, nb) + _kron(ida, ib.h_witness, gens, gens, nb)
        if h.level() > level:
            h = None
    return InvolutiveComplex(cx, tau.with_level(level), level, h)


def tensor_power(items: Sequence[AnyComplex]) -> AnyComplex:
    """Left-nested tensor of a sequence; the empty product is the trivial complex."""
    out: AnyComplex = trivial_involutive()
    for i, c in enumerate(items):
        out = c if i == 0 else tensor(out, c)
    return out


def dualize(c: AnyComplex) -> AnyComplex:
    """Dual complex: transposed maps, ``deg_z -> -deg_z - 3``, ``deg_i -> -deg_i``, flavor flipped."""
    cx = underlying(c)
    d = cx.diff.transpose()
    flavor = Flavor.D1 if cx.flavor is Flavor.D2 else Flavor.D2
    name = dual_name(cx.name) if cx.name else ""
    dual = InstantonComplex(d.source, d, flavor, name)
    if not isinstance(c, InvolutiveComplex):
        return dual
    h = c.h_witness.transpose() if c.h_witness is not None else None
    return InvolutiveComplex(dual, c.tau.transpose().with_level(c.level), c.level, h)


def relabel(c: AnyComplex, perm: Sequence[int], names: Sequence[str] | None = None) -> AnyComplex:
    """The same complex with generator ``perm[i]`` moved to position ``i``."""
    cx = underlying(c)
    old = cx.generators
    gens = tuple(
        Generator(names[i] if names else old[p].name, old[p].deg_z, old[p].deg_i, old[p].is_theta)
        for i, p in enumerate(perm)
    )
    inv = {p: i for i, p in enumerate(perm)}

    def move(m: LinearMap) -> LinearMap:
        cols = [0] * len(perm)
        for i, p in enumerate(perm):
            col = 0
            for h in gf2.bits(m.cols[p]):
                col |= 1 << inv[h]
            cols[i] = col
        return LinearMap(gens, gens, tuple(cols), m.shift, m.declared_level)

    new = InstantonComplex(gens, move(cx.diff), cx.flavor, cx.name)
    if not isinstance(c, InvolutiveComplex):
        return new
    return InvolutiveComplex(new, move(c.tau), c.level, move(c.h_witness) if c.h_witness is not None else None)


def same_data(a: AnyComplex, b: AnyComplex) -> bool:
    """Equal gradings, differentials and (if present) tau, ignoring names."""
    ca, cb = underlying(a), underlying(b)
    key = lambda cx: [(g.deg_z, g.deg_i, g.is_theta) for g in cx.generators]
    if key(ca) != key(cb) or ca.flavor is not cb.flavor or ca.diff.cols != cb.diff.cols:
        return False
    ta = a.tau.cols if isinstance(a, InvolutiveComplex) else None
    tb = b.tau.cols if isinstance(b, InvolutiveComplex) else None
    return ta == tb


# --------------------------------------------------------------------------
# windows of a tensor product, assembled factor by factor


def tensor_window_direct(a: AnyComplex, b: AnyComplex, r: Fraction, s: Fraction) -> WindowComplex:
    """``(A (x) B)^(r, s]`` assembled from windows of ``A`` and the generators of ``B``.

    A lattice point of the tensor is written ``p (x) g`` with ``p`` a lattice
    point of ``A`` and ``g`` a generator of ``B``; ``y`` is moved onto the
    first factor.  The ``A`` side differential comes from ``truncate`` of
    ``A``, so this is an independent route to the window of ``tensor(a, b)``.
    """
    ca, cb = underlying(a), underlying(b)
    nb = cb.rank
    tens = tensor(a, b)
    tcx = underlying(tens)
    points = []
    parts = []
    for j, gb in enumerate(cb.generators):
        w = truncate(a, r - gb.deg_i, s - gb.deg_i)
        parts.append(w)
        points += [((i, k), j) for i, k in w.points]
    order = sorted(range(len(points)), key=lambda n: _tensor_point_key(tcx, points[n], nb))
    points = [points[n] for n in order]
    index = {p: n for n, p in enumerate(points)}

    def image_b(m_b: LinearMap, j: int):
        for j2 in gf2.bits(m_b.cols[j]):
            yield j2, _yp(m_b, j, j2)

    def build(m_a_cols_of, m_b: LinearMap) -> tuple[int, ...]:
        cols = []
        for (i, k), j in points:
            col = 0
            for (i2, k2), j2 in m_a_cols_of((i, k), j, m_b):
                q = index.get(((i2, k2), j2))
                if q is not None:
                    col ^= 1 << q
            cols.append(col)
        return tuple(cols)

    def diff_terms(p, j, m_b):
        w = parts[j]
        for q in gf2.bits(w.diff[w.index[p]]):
            yield w.points[q], j
        for j2, l in image_b(cb.diff, j):
            yield (p[0], p[1] + l), j2

    diff = build(diff_terms, cb.diff)
    tau = None
    if isinstance(tens, InvolutiveComplex):
        ta = a.tau if isinstance(a, InvolutiveComplex) else LinearMap.identity(ca.generators)
        tb = b.tau if isinstance(b, InvolutiveComplex) else LinearMap.identity(cb.generators)

        def tau_terms(p, j, m_b):
            i, k = p
            for i2 in gf2.bits(ta.cols[i]):
                k2 = k + _yp(ta, i, i2)
                for j2, l in image_b(tb, j):
                    yield (i2, k2 + l), j2

        tau = build(tau_terms, tb)
    # relabel into the tensor complex's lattice points
    tpoints = tuple((i * nb + j, k) for (i, k), j in points)
    return WindowComplex(tcx, Fraction(r), Fraction(s), tpoints, diff, tau, {p: n for n, p in enumerate(tpoints)})


def _yp(m: LinearMap, g: int, h: int) -> int:
    return ypow(m.source[g], m.target[h], m.shift)


def _tensor_point_key(tcx: InstantonComplex, pt, nb: int):
    (i, k), j = pt
    g = i * nb + j
    return (tcx.generators[g].deg_i + k, g, k)


# --------------------------------------------------------------------------
# connected-sum inequality


@dataclass(frozen=True)
class ConnectedSumReport:
    s: Fraction
    s2: Fraction
    lhs: FiltValue
    r_a: FiltValue
    r_b: FiltValue
    bound: FiltValue

    @property
    def holds(self) -> bool:
        return self.lhs >= self.bound

    def lines(self) -> list[str]:
        return [
            f"r_{fmt_filt(self.s + self.s2)}(A#B) = {fmt_filt(self.lhs)}",
            f"r_{fmt_filt(self.s)}(A) + {fmt_filt(self.s2)} = {fmt_filt(add(self.r_a, self.s2))}",
            f"r_{fmt_filt(self.s2)}(B) + {fmt_filt(self.s)} = {fmt_filt(add(self.r_b, self.s))}",
            f"{fmt_filt(self.lhs)} >= {fmt_filt(self.bound)}: {'holds' if self.holds else 'VIOLATED'}",
        ]


def check_connected_sum_inequality(
    a: AnyComplex, b: AnyComplex, s: FiltValue, s2: FiltValue, equivariant: bool = True, product: AnyComplex | None = None
) -> ConnectedSumReport:
    """``r_{s+s'}(A (x) B) >= min(r_s(A) + s', r_{s'}(B) + s)``, all values computed exactly."""
    s, s2 = parse_filt(s), parse_filt(s2)
    prod = product if product is not None else tensor(a, b)
    lhs = rs_value(prod, add(s, s2), equivariant)
    ra = rs_value(a, s, equivariant)
    rb = rs_value(b, s2, equivariant)
    bound = min(add(ra, s2), add(rb, s))
    return ConnectedSumReport(s, s2, lhs, ra, rb, bound)


# --------------------------------------------------------------------------
# linear combinations of a family


@dataclass(frozen=True)
class Member:
    """One family member with independently supplied data for both orientations."""

    name: str
    pos: InvolutiveComplex
    neg: InvolutiveComplex


@dataclass
class CombinationVerdict:
    coeffs: tuple[int, ...]
    top: int
    obstruction: bool
    r0_top: FiltValue
    bound: FiltValue
    r0_rearranged: FiltValue | None
    r0_combination: FiltValue | None
    chain: list[str] = field(default_factory=list)

    @property
    def locally_trivial(self) -> bool | None:
        if self.r0_combination is None:
            return None
        return self.r0_combination == INF


def family_hypotheses(members: Sequence[Member]) -> list[str]:
    """Violated hypotheses: strictly decreasing finite ``r_0`` and ``r_0(-Y_i) = inf``."""
    problems = []
    r0 = [rs_value(m.pos, 0, True) for m in members]
    if members and r0[0] == INF:
        problems.append(f"r_0({members[0].name}) is not finite")
    for i in range(1, len(members)):
        if not r0[i - 1] > r0[i]:
            problems.append(f"r_0 not strictly decreasing at {members[i].name}")
    for m in members:
        if rs_value(m.neg, 0, True) != INF:
            problems.append(f"r_0(-{m.name}) is not inf")
    return problems


def linear_combination_witness(
    members: Sequence[Member],
    coeffs: Sequence[int],
    compute_rearranged: bool = True,
    compute_combination: bool = True,
) -> CombinationVerdict:
    """Replay the descending-``r_0`` argument against ``sum n_i Y_i = 0``.

    With ``k`` the top index (``n_k > 0`` after an overall sign flip), a
    relation would make ``Y_k`` locally equivalent to the rearranged side
    made of copies of ``-Y_i`` (``n_i > 0``), ``Y_i`` (``n_i < 0``) and
    ``n_k - 1`` copies of ``-Y_k``.  Iterating the connected-sum inequality
    at ``s = s' = 0`` bounds ``r_0`` of that side below by the minimum over
    its factors; an obstruction is a bound strictly above ``r_0(Y_k)``.
    """
    if len(coeffs) != len(members):
        raise ValueError("one coefficient per member")
    for m in members:
        if m.pos is None or m.neg is None:
            raise ValueError(f"member {m.name} is missing orientation data")
    coeffs = tuple(int(n) for n in coeffs)
    nz = [i for i, n in enumerate(coeffs) if n]
    if not nz:
        return CombinationVerdict(coeffs, -1, False, INF, INF, INF, INF, ["trivial combination"])
    k = nz[-1]
    sign = 1 if coeffs[k] > 0 else -1
    n = [sign * c for c in coeffs]
    chain: list[str] = []
    if sign < 0:
        chain.append("negated the relation so the top coefficient is positive")
    factors: list[tuple[str, InvolutiveComplex]] = []
    for i in range(k):
        if n[i] > 0:
            factors += [(f"-{members[i].name}", members[i].neg)] * n[i]
        elif n[i] < 0:
            factors += [(members[i].name, members[i].pos)] * (-n[i])
    factors += [(f"-{members[k].name}", members[k].neg)] * (n[k] - 1)
    top = members[k]
    r0_top = rs_value(top.pos, 0, True)
    chain.append(f"relation would give {top.name} ~ " + (" # ".join(nm for nm, _ in factors) or "trivial"))
    bound: FiltValue = INF
    cache: dict[str, FiltValue] = {}
    for nm, c in factors:
        if nm not in cache:
            cache[nm] = rs_value(c, 0, True)
        new = min(bound, cache[nm])
        chain.append(
            f"connected sum at s = s' = 0: r_0(... # {nm}) >= min({fmt_filt(bound)}, r_0({nm}) = {fmt_filt(cache[nm])}) = {fmt_filt(new)}"
        )
        bound = new
    chain.append(f"so r_0(rearranged side) >= {fmt_filt(bound)}, while r_0({top.name}) = {fmt_filt(r0_top)}")
    obstruction = r0_top < bound
    chain.append(
        "contradiction: the combination is not locally trivial"
        if obstruction
        else "no contradiction from this bound"
    )
    rearranged = None
    if compute_rearranged:
        rearranged = rs_value(tensor_power([c for _, c in factors]), 0, True) if factors else INF
        chain.append(f"direct check: r_0(rearranged side) = {fmt_filt(rearranged)}")
    combination = None
    if compute_combination:
        parts = []
        for i, c in enumerate(coeffs):
            parts += [members[i].pos] * c if c > 0 else [members[i].neg] * (-c)
        combination = rs_value(tensor_power(parts), 0, True)
        chain.append(f"direct check: r_0(combination) = {fmt_filt(combination)}")
    for line in chain:
        log.info("%s: %s", coeffs, line)
    return CombinationVerdict(coeffs, k, obstruction, r0_top, bound, rearranged, combination, chain)


def nontrivial_combinations(size: int, lo: int = -2, hi: int = 2) -> list[tuple[int, ...]]:
    """Coefficient vectors in ``[lo, hi]`` whose top nonzero entry is positive."""
    out = []
    for v in itertools.product(range(lo, hi + 1), repeat=size):
        nz = [c for c in v if c]
        if nz and nz[-1] > 0:
            out.append(v)
    return out
