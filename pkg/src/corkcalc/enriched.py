"""Finite stand-ins for enriched involutive complexes.

An enriched complex here is a finite list of involutive complexes of
levels ``delta_i`` joined by equivariant local maps ``psi``, together with
a cluster set ``K`` and per-index radii.  Lattice points ``y^m g`` shift
levels by integers, so clustering and critical endpoints are measured
against ``K + Z``.

Limits are replaced by an explicit certificate on the last two terms: away
from ``K + Z`` by more than radius plus level, ``psi`` induces a window map
that is a quasi-isomorphism commuting with tau up to a solved homotopy.
When that cannot be certified the code raises instead of guessing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import gf2
from .core import InvolutiveComplex, LinearMap, validate
from .filt import INF, NEG_INF, FiltValue, fmt_filt, parse_filt
from .morphism import check_morphism, minimal_homotopy
from .rs import relevant_levels, window_theta_cycle
from .window import WindowComplex, _window_columns, truncate


class EnrichedError(ValueError):
    pass


class CriticalEndpointError(EnrichedError):
    pass


class InsufficientTailError(EnrichedError):
    pass


@dataclass(frozen=True)
class Psi:
    f: LinearMap
    h: LinearMap | None
    level: Fraction


@dataclass(frozen=True)
class EnrichedComplex:
    terms: tuple[InvolutiveComplex, ...]
    psi: dict
    cluster_set: tuple[Fraction, ...]
    radii: tuple[Fraction, ...]

    @classmethod
    def constant(
        cls, c: InvolutiveComplex, length: int = 2, cluster_set: Sequence | None = None, radius: FiltValue = 0
    ) -> EnrichedComplex:
        """``length`` copies of ``c`` joined by identities; ``K`` defaults to all lattice levels."""
        k = cluster_set if cluster_set is not None else [Fraction(0)] + [g.deg_i for g in c.generators]
        ident = LinearMap.identity(c.generators)
        zero = LinearMap.zero(c.generators, c.generators, 1)
        psi = {(i, i + 1): Psi(ident, zero, Fraction(0)) for i in range(length - 1)}
        return cls(tuple([c] * length), psi, normalize_cluster(k), tuple([parse_filt(radius)] * length))

    @property
    def levels(self) -> tuple[Fraction, ...]:
        return tuple(t.level for t in self.terms)

    def band(self, i: int) -> Fraction:
        """How far window endpoints must stay from ``K + Z`` at index ``i``."""
        lv = self.terms[i].level
        if (i - 1, i) in self.psi:
            lv = max(lv, self.psi[(i - 1, i)].level)
        return self.radii[i] + lv


def normalize_cluster(values: Sequence) -> tuple[Fraction, ...]:
    """Representatives of ``K + Z`` in ``[0, 1)``, sorted, with 0 included."""
    reps = {Fraction(0)}
    for v in values:
        x = parse_filt(v)
        reps.add(x - math.floor(x))
    return tuple(sorted(reps))


def distance_to_cluster(x: Fraction, reps: Sequence[Fraction]) -> Fraction:
    frac = x - math.floor(x)
    return min(min(abs(frac - c), 1 - abs(frac - c)) for c in reps)


def cluster_points_between(reps: Sequence[Fraction], lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Points of ``K + Z`` in ``[lo, hi]``, ascending."""
    out = []
    for n in range(math.floor(lo) - 1, math.ceil(hi) + 1):
        for c in reps:
            if lo <= n + c <= hi:
                out.append(n + c)
    return sorted(out)


@dataclass
class EnrichedReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_enriched(e: EnrichedComplex) -> EnrichedReport:
    """Clustering, per-term validity, psi as equivariant local maps, compositions and schedules."""
    rep = EnrichedReport()
    n = len(e.terms)
    if len(e.radii) != n:
        rep.problems.append(f"radius schedule has {len(e.radii)} entries for {n} terms")
        return rep
    for i, t in enumerate(e.terms):
        for g in t.generators:
            dist = distance_to_cluster(g.deg_i, e.cluster_set)
            if dist > e.radii[i]:
                rep.problems.append(
                    f"index {i}: clustering fails for {g.name} at deg_i {fmt_filt(g.deg_i)} "
                    f"(distance {fmt_filt(dist)} > radius {fmt_filt(e.radii[i])})"
                )
        vr = validate(t)
        for chk in vr.failures():
            rep.problems.append(f"index {i}: {chk.name} ({chk.detail})")
    for i in range(1, n):
        if e.terms[i].level > e.terms[i - 1].level:
            rep.problems.append(f"index {i}: level increases along the sequence")
        if e.radii[i] > e.radii[i - 1]:
            rep.problems.append(f"index {i}: radius increases along the sequence")
    for (i, j), p in sorted(e.psi.items()):
        if not (0 <= i <= j < n):
            rep.problems.append(f"psi {i}->{j}: index out of range")
            continue
        mr = check_morphism(p.f, e.terms[i], e.terms[j], p.h if p.h is not None else None)
        if p.h is None:
            mr.problems.append("missing equivariance homotopy")
        if not mr.local:
            mr.problems.append("not local")
        if mr.level > p.level:
            mr.problems.append(f"level {fmt_filt(mr.level)} exceeds declared {fmt_filt(p.level)}")
        if i == j and p.f != LinearMap.identity(e.terms[i].generators):
            mr.problems.append("psi_i^i must be the identity")
        rep.problems += [f"psi {i}->{j}: {x}" for x in mr.problems]
    for i in range(n - 1):
        if (i, i + 1) not in e.psi:
            rep.problems.append(f"psi {i}->{i + 1} missing")
    for (i, j) in list(e.psi):
        for (j2, k) in list(e.psi):
            if j2 == j and (i, k) in e.psi and i < j < k:
                comp = e.psi[(j, k)].f @ e.psi[(i, j)].f + e.psi[(i, k)].f
                cx_i, cx_k = e.terms[i].complex, e.terms[k].complex
                if minimal_homotopy(cx_i, cx_k, comp) is None:
                    rep.problems.append(f"psi {j}->{k} after psi {i}->{j} is not homotopic to psi {i}->{k}")
    return rep


# --------------------------------------------------------------------------
# stable truncations


@dataclass(frozen=True)
class StableWindow:
    window: WindowComplex
    certificate: list[str]


def _check_endpoint(e: EnrichedComplex, x: Fraction, which: str, indices: Sequence[int]) -> None:
    dist = distance_to_cluster(x, e.cluster_set)
    bands = [e.band(i) for i in indices]
    # With zero bands every generator sits exactly on K + Z, so the half-open
    # window is unambiguous even at a cluster point.
    if dist == 0 and any(b > 0 for b in bands):
        raise CriticalEndpointError(f"{which} = {fmt_filt(x)} lies in K + Z")
    for i in indices:
        if 0 < dist <= e.band(i):
            raise InsufficientTailError(
                f"{which} = {fmt_filt(x)} is within {fmt_filt(e.band(i))} of K + Z at index {i}; "
                "the supplied tail does not certify this window"
            )


def _homology_iso(w1: WindowComplex, w2: WindowComplex, cols: tuple[int, ...]) -> list[str]:
    problems = []
    gradings = sorted({w1.grading(i) for i in range(len(w1.points))} | {w2.grading(i) for i in range(len(w2.points))})
    for gr in gradings:
        z1 = _cycles(w1, gr)
        b1 = gf2.XorBasis(w1.diff[i] for i in range(len(w1.points)) if w1.grading(i) == gr + 1)
        z2 = _cycles(w2, gr)
        b2 = gf2.XorBasis(w2.diff[i] for i in range(len(w2.points)) if w2.grading(i) == gr + 1)
        h1, h2 = len(z1) - len(b1), len(z2) - len(b2)
        img = gf2.XorBasis(b2.rows.values())
        for v in z1:
            img.add(gf2.apply_columns(cols, v))
        rank = len(img) - len(b2)
        if not (h1 == h2 == rank):
            problems.append(f"grading {gr}: homology ranks {h1}, {h2}, induced rank {rank}")
    return problems


def _cycles(w: WindowComplex, grading: int) -> list[int]:
    idx = [i for i in range(len(w.points)) if w.grading(i) == grading]
    out = []
    for v in gf2.kernel_basis([w.diff[i] for i in idx], len(w.points)):
        out.append(sum(1 << idx[j] for j in gf2.bits(v)))
    return out


def _window_homotopy(w1: WindowComplex, w2: WindowComplex, rhs: tuple[int, ...]) -> bool:
    """Whether some degree +1 map ``K`` has ``d2 K + K d1 = rhs`` on windows."""
    slots = {}
    for p in range(len(w1.points)):
        for q in range(len(w2.points)):
            if w2.grading(q) == w1.grading(p) + 1:
                slots[(p, q)] = len(slots)
    eqs: dict[tuple[int, int], int] = {}
    for (p, q), v in slots.items():
        bit = 1 << (v + 1)
        for q2 in gf2.bits(w2.diff[q]):
            eqs[(p, q2)] = eqs.get((p, q2), 0) ^ bit
        for p1 in range(len(w1.points)):
            if (w1.diff[p1] >> p) & 1:
                eqs[(p1, q)] = eqs.get((p1, q), 0) ^ bit
    for p, col in enumerate(rhs):
        for q in gf2.bits(col):
            eqs[(p, q)] = eqs.get((p, q), 0) ^ 1
    return gf2.solve_affine(list(eqs.values()), len(slots)) is not None


def stable_truncation(e: EnrichedComplex, r: FiltValue, s: FiltValue) -> StableWindow:
    """Window of the last term, certified stable against the previous one."""
    r, s = parse_filt(r), parse_filt(s)
    n = len(e.terms)
    if n < 2:
        raise InsufficientTailError("need at least two terms to certify stabilization")
    tail = (n - 2, n - 1)
    _check_endpoint(e, r, "r", tail)
    _check_endpoint(e, s, "s", tail)
    if (n - 2, n - 1) not in e.psi:
        raise InsufficientTailError("no psi between the last two terms")
    psi = e.psi[(n - 2, n - 1)]
    try:
        w1 = truncate(e.terms[n - 2], r, s)
        w2 = truncate(e.terms[n - 1], r, s)
        cols = _window_columns(psi.f, list(w1.points), w2.index, w2.complex, s)
    except ValueError as exc:
        raise InsufficientTailError(f"window does not descend: {exc}") from None
    cert = [f"window ({fmt_filt(r)}, {fmt_filt(s)}] clear of K + Z by more than the tail bands"]
    chain = all(
        gf2.apply_columns(w2.diff, cols[i]) == gf2.apply_columns(cols, w1.diff[i]) for i in range(len(w1.points))
    )
    if not chain:
        raise InsufficientTailError("induced window map of psi is not a chain map")
    iso = _homology_iso(w1, w2, cols)
    if iso:
        raise InsufficientTailError("psi is not a window quasi-isomorphism: " + "; ".join(iso))
    cert.append("psi induces a quasi-isomorphism of windows")
    rhs = tuple(
        gf2.apply_columns(w2.tau, cols[i]) ^ gf2.apply_columns(cols, w1.tau[i]) for i in range(len(w1.points))
    )
    if not _window_homotopy(w1, w2, rhs):
        raise InsufficientTailError("psi does not commute with tau up to homotopy on the window")
    cert.append("psi commutes with tau up to a window homotopy")
    return StableWindow(w2, cert)


# --------------------------------------------------------------------------
# enriched r_s


@dataclass(frozen=True)
class EnrichedValue:
    s: Fraction
    value: FiltValue
    critical: bool
    left: FiltValue | None = None
    right: FiltValue | None = None
    notes: tuple[str, ...] = ()


def _value_at_top(e: EnrichedComplex, u: Fraction) -> FiltValue:
    """``r`` scan with window top ``u`` (off ``K + Z``): one representative per gap."""
    last = e.terms[-1]
    levels = relevant_levels(last.complex)
    bottom = min([Fraction(-1)] + [x - 1 for x in levels])
    cuts = [c for c in cluster_points_between(e.cluster_set, bottom, Fraction(0)) if c < 0]
    cuts = sorted(set(cuts) | {Fraction(0)}, reverse=True)
    # gaps (cuts[i+1], cuts[i]) scanned from 0 downward
    best: FiltValue = NEG_INF
    for upper, lower in zip(cuts, cuts[1:]):
        rep = (upper + lower) / 2
        w = stable_truncation(e, rep, u).window
        if window_theta_cycle(w, True) is None:
            return best
        best = -lower
    low = cuts[-1]
    below = max(c for c in cluster_points_between(e.cluster_set, low - 2, low) if c < low)
    w = stable_truncation(e, (low + below) / 2, u).window
    if window_theta_cycle(w, True) is not None:
        return INF
    return best


def enriched_rs(e: EnrichedComplex, s: FiltValue) -> EnrichedValue:
    """Enriched ``r_s``; at critical ``s`` (``-s`` in ``K + Z``) the left limit.

    Both one-sided values are reported at a critical point.
    """
    s = parse_filt(s)
    if s > 0 or s == NEG_INF:
        raise ValueError("enriched r_s is evaluated at finite s <= 0")
    u = -s
    if distance_to_cluster(u, e.cluster_set) != 0:
        return EnrichedValue(s, _value_at_top(e, u), False)
    pts = cluster_points_between(e.cluster_set, u - 2, u + 2)
    above = min(p for p in pts if p > u)
    left = _value_at_top(e, (u + above) / 2)
    right = None
    if u > 0:
        below = max(p for p in pts if p < u)
        right = _value_at_top(e, (u + below) / 2)
    notes = (f"-s = {fmt_filt(u)} lies in K + Z; reporting the limit from the left",)
    return EnrichedValue(s, left, True, left, right, notes)


def enriched_local_map(source: EnrichedComplex, target: EnrichedComplex, max_level: FiltValue = 0):
    """Per-index equivariant local maps ``source_i -> target_i`` of level ``<= max_level``.

    Returns the list of witnesses, or ``None`` when some index has none.
    Compatibility with the psi maps is not searched for.
    """
    from .morphism import find_local_map

    if len(source.terms) != len(target.terms):
        raise EnrichedError("enriched local maps need sequences of equal length")
    out = []
    for a, b in zip(source.terms, target.terms):
        w = find_local_map(a, b, max_level, equivariant=True)
        if w is None:
            return None
        out.append(w)
    return out


# --------------------------------------------------------------------------
# manifests


def load_manifest(path: str | Path) -> EnrichedComplex:
    """Load ``{"cluster_set", "radius", "terms": [{"complex", "level"}], "psi": [...]}``.

    Complex paths are relative to the manifest.  Each psi entry has ``from``,
    ``to``, ``level`` and either ``"identity": true`` or ``map`` (a file or an
    inline ``{"entries", "h"}`` object).
    """
    from .io import ComplexFormatError, load_complex, map_from_dict

    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(exc.msg, f"{path}: line {exc.lineno}, column {exc.colno}") from None
    except OSError as exc:
        raise ComplexFormatError(str(exc), str(path)) from None
    base = path.parent

    def need(obj: Any, key: str, where: str) -> Any:
        if not isinstance(obj, dict) or key not in obj:
            raise ComplexFormatError(f"missing field {key!r}", f"{path}: {where}")
        return obj[key]

    def filt(v: Any, where: str) -> Fraction:
        try:
            return parse_filt(v)
        except ValueError as exc:
            raise ComplexFormatError(str(exc), f"{path}: {where}") from None

    cluster = [filt(v, f"$.cluster_set[{i}]") for i, v in enumerate(need(data, "cluster_set", "$"))]
    terms = []
    for i, t in enumerate(need(data, "terms", "$")):
        c = load_complex(base / need(t, "complex", f"$.terms[{i}]"))
        if not isinstance(c, InvolutiveComplex):
            c = InvolutiveComplex.trivial_tau(c)
        if "level" in t:
            lv = filt(t["level"], f"$.terms[{i}].level")
            c = InvolutiveComplex(c.complex, c.tau.with_level(lv), lv, c.h_witness)
        terms.append(c)
    radius = data.get("radius", "0")
    if isinstance(radius, list):
        radii = tuple(filt(v, f"$.radius[{i}]") for i, v in enumerate(radius))
    else:
        radii = tuple([filt(radius, "$.radius")] * len(terms))
    psi = {}
    for n, p in enumerate(data.get("psi", [])):
        where = f"$.psi[{n}]"
        i, j = need(p, "from", where), need(p, "to", where)
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < len(terms) and 0 <= j < len(terms)):
            raise ComplexFormatError("psi indices must name terms", f"{path}: {where}")
        lv = filt(p.get("level", "0"), f"{where}.level")
        if p.get("identity"):
            gens = terms[i].generators
            f, h = LinearMap.identity(gens), LinearMap.zero(gens, gens, 1)
            if terms[i].generators != terms[j].generators:
                raise ComplexFormatError("identity psi between different complexes", f"{path}: {where}")
        else:
            raw = need(p, "map", where)
            if isinstance(raw, str):
                try:
                    raw = json.loads((base / raw).read_text(encoding="utf-8"))
                except (OSError, json.JSONDecodeError) as exc:
                    raise ComplexFormatError(str(exc), f"{path}: {where}.map") from None
            f, h = map_from_dict(raw, terms[i], terms[j], f"{where}.map")
        psi[(i, j)] = Psi(f, h, lv)
    return EnrichedComplex(tuple(terms), psi, normalize_cluster(cluster), radii)
