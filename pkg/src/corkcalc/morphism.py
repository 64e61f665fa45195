"""Morphisms, local maps, homotopies, and pushing approximate cycles forward.

Searches treat every admissible map entry as one GF(2) unknown.  An entry
``g -> h`` is admissible when the gradings pin a y-power, the filtration rise
is within the level bound, and the two-step filtration is respected.  The
chain-map and homotopy identities are then linear in the unknowns.
"""

from __future__ import annotations

import random
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
    StructuralError,
    chain_degree,
    underlying,
    ypow,
)
from .filt import INF, NEG_INF, FiltValue, fmt_filt, parse_filt

TWO_STEP_NOTE = "equivariance homotopies are held to the same two-step constraint as morphisms"


def _allowed(src: InstantonComplex, dst: InstantonComplex, g: int, h: int) -> bool:
    """Two-step filtration: C lands in C' (D2), theta's span lands in theta''s span (D1)."""
    if src.flavor is Flavor.D2:
        return not (h == dst.theta and g != src.theta)
    return not (g == src.theta and h != dst.theta)


def _tau_of(c: AnyComplex) -> LinearMap:
    if isinstance(c, InvolutiveComplex):
        return c.tau
    return LinearMap.identity(c.generators)


@dataclass(frozen=True)
class _Unknown:
    kind: str
    g: int
    h: int


class _MapSystem:
    """Affine GF(2) system whose unknowns are entries of maps ``src -> dst``.

    Equations are keyed by ``(name, g, h)``: the ``g -> h`` entry of the
    named identity, whose y-power is pinned by gradings.
    """

    def __init__(self, src: InstantonComplex, dst: InstantonComplex) -> None:
        self.src, self.dst = src, dst
        self.unknowns: list[_Unknown] = []
        self.slot: dict[tuple[str, int, int], int] = {}
        self.shift: dict[str, int] = {}
        self.eqs: dict[tuple, int] = {}
        self.extra: list[int] = []

    def add_map(self, kind: str, shift: int, max_level: FiltValue, two_step: bool = True) -> None:
        self.shift[kind] = shift
        for g, sg in enumerate(self.src.generators):
            for h, th in enumerate(self.dst.generators):
                k = ypow(sg, th, shift)
                if k is None:
                    continue
                if th.deg_i + k - sg.deg_i > max_level:
                    continue
                if two_step and not _allowed(self.src, self.dst, g, h):
                    continue
                self.slot[(kind, g, h)] = len(self.unknowns)
                self.unknowns.append(_Unknown(kind, g, h))

    def _bit(self, kind: str, g: int, h: int) -> int:
        return 1 << (self.slot[(kind, g, h)] + 1)

    def _toggle(self, key: tuple, bit: int) -> None:
        self.eqs[key] = self.eqs.get(key, 0) ^ bit

    def left(self, eq: str, left: LinearMap, kind: str) -> None:
        """Add ``left @ X`` (``left`` acts on the target side) to equation ``eq``."""
        for (kd, g, h), i in self.slot.items():
            if kd != kind:
                continue
            for h2 in gf2.bits(left.cols[h]):
                self._toggle((eq, g, h2), 1 << (i + 1))

    def right(self, eq: str, kind: str, right: LinearMap) -> None:
        """Add ``X @ right`` (``right`` acts on the source side) to equation ``eq``."""
        for (kd, g, h), i in self.slot.items():
            if kd != kind:
                continue
            for g1, col in enumerate(right.cols):
                if (col >> g) & 1:
                    self._toggle((eq, g1, h), 1 << (i + 1))

    def constant(self, eq: str, m: LinearMap) -> None:
        for g, h, _ in m.entries():
            self._toggle((eq, g, h), 1)

    def fix(self, kind: str, g: int, h: int, value: int) -> bool:
        if (kind, g, h) not in self.slot:
            return False
        self.extra.append(self._bit(kind, g, h) | value)
        return True

    def solve(self) -> gf2.AffineSolution | None:
        return gf2.solve_affine(list(self.eqs.values()) + self.extra, len(self.unknowns))

    def extract(self, x: int, kind: str) -> LinearMap:
        cols = [0] * len(self.src.generators)
        for (kd, g, h), i in self.slot.items():
            if kd == kind and (x >> i) & 1:
                cols[g] |= 1 << h
        return LinearMap(self.src.generators, self.dst.generators, tuple(cols), self.shift[kind])


# --------------------------------------------------------------------------
# checks


@dataclass
class MorphismReport:
    chain_map: bool
    two_step: bool
    level: FiltValue
    local: bool
    equivariant: bool | None = None
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.chain_map and self.two_step and self.equivariant is not False


@dataclass(frozen=True)
class MorphismWitness:
    f: LinearMap
    h: LinearMap | None = None

    @property
    def level(self) -> FiltValue:
        lv = self.f.level()
        if self.h is not None:
            lv = max(lv, self.h.level())
        return max(lv, Fraction(0))

    def describe(self) -> list[str]:
        out = ["f:"] + ["  " + x for x in self.f.describe()]
        if self.h is not None:
            out += ["H:"] + ["  " + x for x in self.h.describe()]
        return out


def _check_shape(m: LinearMap, src: InstantonComplex, dst: InstantonComplex, shift: int, what: str) -> None:
    if m.source != src.generators or m.target != dst.generators:
        raise StructuralError(f"{what} is not a map between the given complexes")
    if m.shift != shift:
        raise StructuralError(f"{what} must have degree {shift}")


def _two_step_problems(m: LinearMap, src: InstantonComplex, dst: InstantonComplex, what: str) -> list[str]:
    return [
        f"{what}: {src.generators[g].name} -> {dst.generators[h].name} breaks the two-step filtration"
        for g, h, _ in m.entries()
        if not _allowed(src, dst, g, h)
    ]


def check_morphism(f: LinearMap, source: AnyComplex, target: AnyComplex, h: LinearMap | None = None) -> MorphismReport:
    """Chain-map, two-step, level and locality data for ``f`` (and ``H`` if given)."""
    src, dst = underlying(source), underlying(target)
    _check_shape(f, src, dst, 0, "f")
    problems = []
    defect = dst.diff @ f + f @ src.diff
    chain = defect.is_zero()
    if not chain:
        problems += [f"d'f + fd has entry {s} -> {t}" for s, t, _ in defect.named_entries()]
    two = _two_step_problems(f, src, dst, "f")
    problems += two
    local = bool((f.cols[src.theta] >> dst.theta) & 1)
    eq = None
    level = f.level()
    if h is not None:
        _check_shape(h, src, dst, 1, "H")
        eqd = dst.diff @ h + h @ src.diff + _tau_of(target) @ f + f @ _tau_of(source)
        eq = eqd.is_zero()
        if not eq:
            problems += [f"d'H + Hd + tau'f + f tau has entry {s} -> {t}" for s, t, _ in eqd.named_entries()]
        h_two = _two_step_problems(h, src, dst, "H")
        if h_two:
            eq = False
            problems += h_two
        level = max(level, h.level())
    return MorphismReport(chain, not two, level, local, eq, problems)


def find_local_map(
    source: AnyComplex,
    target: AnyComplex,
    max_level: FiltValue = Fraction(0),
    equivariant: bool = False,
    local: bool = True,
) -> MorphismWitness | None:
    """Lexicographically least (equivariant) local map of level ``<= max_level``.

    ``f`` and the equivariance homotopy ``H`` are solved for jointly;
    solving ``f`` first and then looking for ``H`` can miss maps.
    """
    src, dst = underlying(source), underlying(target)
    if src.flavor is not dst.flavor:
        raise ValueError("local maps need complexes of the same flavor")
    max_level = parse_filt(max_level)
    if src.generators == dst.generators and src.diff == dst.diff and max_level >= 0:
        # Same complex: prefer the identity whenever it qualifies.
        ident = LinearMap.identity(src.generators)
        if not equivariant or _tau_of(source) == _tau_of(target):
            return MorphismWitness(ident, LinearMap.zero(src.generators, src.generators, 1) if equivariant else None)
    sys = _MapSystem(src, dst)
    sys.add_map("f", 0, max_level)
    sys.left("chain", dst.diff, "f")
    sys.right("chain", "f", src.diff)
    if local and not sys.fix("f", src.theta, dst.theta, 1):
        return None
    if equivariant:
        sys.add_map("H", 1, max_level)
        sys.left("equi", dst.diff, "H")
        sys.right("equi", "H", src.diff)
        sys.left("equi", _tau_of(target), "f")
        sys.right("equi", "f", _tau_of(source))
    sol = sys.solve()
    if sol is None:
        return None
    f = sys.extract(sol.particular, "f")
    h = sys.extract(sol.particular, "H") if equivariant else None
    return MorphismWitness(f, h)


def random_local_map(
    source: AnyComplex,
    target: AnyComplex,
    max_level: FiltValue,
    equivariant: bool,
    rng: random.Random,
) -> MorphismWitness | None:
    """A uniformly random element of the affine space of witnesses."""
    src, dst = underlying(source), underlying(target)
    sys = _MapSystem(src, dst)
    sys.add_map("f", 0, parse_filt(max_level))
    sys.left("chain", dst.diff, "f")
    sys.right("chain", "f", src.diff)
    if not sys.fix("f", src.theta, dst.theta, 1):
        return None
    if equivariant:
        sys.add_map("H", 1, parse_filt(max_level))
        sys.left("equi", dst.diff, "H")
        sys.right("equi", "H", src.diff)
        sys.left("equi", _tau_of(target), "f")
        sys.right("equi", "f", _tau_of(source))
    sol = sys.solve()
    if sol is None:
        return None
    x = sol.element(rng.getrandbits(len(sol.kernel)) if sol.kernel else 0)
    return MorphismWitness(sys.extract(x, "f"), sys.extract(x, "H") if equivariant else None)


def solve_homotopy(
    source: InstantonComplex,
    target: InstantonComplex,
    rhs: LinearMap,
    max_level: FiltValue,
    two_step: bool = True,
) -> LinearMap | None:
    """Some ``H`` of degree +1 and level ``<= max_level`` with ``d'H + Hd = rhs``."""
    sys = _MapSystem(source, target)
    sys.add_map("H", 1, parse_filt(max_level), two_step)
    sys.left("eq", target.diff, "H")
    sys.right("eq", "H", source.diff)
    sys.constant("eq", rhs)
    sol = sys.solve()
    if sol is None:
        return None
    return sys.extract(sol.particular, "H")


def _candidate_levels(source: InstantonComplex, target: InstantonComplex, shift: int) -> list[Fraction]:
    out = {Fraction(0)}
    for sg in source.generators:
        for th in target.generators:
            k = ypow(sg, th, shift)
            if k is not None:
                r = th.deg_i + k - sg.deg_i
                if r > 0:
                    out.add(r)
    return sorted(out)


def minimal_homotopy(
    source: InstantonComplex,
    target: InstantonComplex,
    rhs: LinearMap,
    two_step: bool = True,
) -> tuple[LinearMap, Fraction] | None:
    """Least level (at least 0) admitting a homotopy ``d'H + Hd = rhs``, with a witness."""
    for lvl in _candidate_levels(source, target, 1):
        h = solve_homotopy(source, target, rhs, lvl, two_step)
        if h is not None:
            return h, lvl
    return None


def minimal_local_level(
    source: AnyComplex, target: AnyComplex, equivariant: bool = False, cap: FiltValue = INF
) -> tuple[MorphismWitness, Fraction] | None:
    """Least level at which a local map exists, scanning the finitely many entry rises."""
    src, dst = underlying(source), underlying(target)
    levels = sorted(set(_candidate_levels(src, dst, 0)) | set(_candidate_levels(src, dst, 1)))
    for lvl in levels:
        if lvl > cap:
            break
        w = find_local_map(source, target, lvl, equivariant)
        if w is not None:
            return w, lvl
    return None


@dataclass
class EquivalenceReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


def check_homotopy_equivalence(
    f: LinearMap,
    g: LinearMap,
    h: LinearMap,
    h2: LinearMap,
    level: FiltValue,
    a: AnyComplex,
    b: AnyComplex,
    equivariance: tuple[LinearMap, LinearMap] | None = None,
) -> EquivalenceReport:
    """Verify ``gf + id = dH + Hd`` on ``a`` and ``fg + id = d'H' + H'd'`` on ``b``.

    Every map must respect the two-step filtration and have level at most
    ``level``.  ``equivariance`` optionally supplies the homotopies making
    ``f`` and ``g`` commute with tau.
    """
    A, B = underlying(a), underlying(b)
    level = parse_filt(level)
    problems: list[str] = []
    try:
        _check_shape(f, A, B, 0, "f")
        _check_shape(g, B, A, 0, "g")
        _check_shape(h, A, A, 1, "H")
        _check_shape(h2, B, B, 1, "H'")
    except StructuralError as exc:
        return EquivalenceReport(False, [str(exc)])
    checks = [
        ("gf + id = dH + Hd", g @ f + LinearMap.identity(A.generators) + A.diff @ h + h @ A.diff),
        ("fg + id = d'H' + H'd'", f @ g + LinearMap.identity(B.generators) + B.diff @ h2 + h2 @ B.diff),
        ("f chain map", B.diff @ f + f @ A.diff),
        ("g chain map", A.diff @ g + g @ B.diff),
    ]
    maps = [("f", f, A, B), ("g", g, B, A), ("H", h, A, A), ("H'", h2, B, B)]
    if equivariance is not None:
        ef, eg = equivariance
        try:
            _check_shape(ef, A, B, 1, "equivariance homotopy of f")
            _check_shape(eg, B, A, 1, "equivariance homotopy of g")
        except StructuralError as exc:
            return EquivalenceReport(False, [str(exc)])
        checks.append(("f commutes with tau", B.diff @ ef + ef @ A.diff + _tau_of(b) @ f + f @ _tau_of(a)))
        checks.append(("g commutes with tau", A.diff @ eg + eg @ B.diff + _tau_of(a) @ g + g @ _tau_of(b)))
        maps += [("Hf", ef, A, B), ("Hg", eg, B, A)]
    for name, defect in checks:
        if not defect.is_zero():
            problems.append(f"{name} fails at " + ", ".join(f"{s} -> {t}" for s, t, _ in defect.named_entries()))
    for name, m, s, t in maps:
        problems += _two_step_problems(m, s, t, name)
        if m.level() > level:
            problems.append(f"{name} has level {fmt_filt(m.level())} > {fmt_filt(level)}")
    return EquivalenceReport(not problems, problems)


# --------------------------------------------------------------------------
# pushing approximate equivariant cycles forward


class ObstructionInputError(ValueError):
    """The supplied chains do not satisfy ``d h = z + tau z + xi``."""


@dataclass(frozen=True)
class PushResult:
    z: frozenset
    xi: frozenset
    identity_check: bool
    xi_bound: bool
    dz_bound: bool
    deg_xi: FiltValue
    deg_dz: FiltValue
    bound_xi: FiltValue
    bound_dz: FiltValue

    @property
    def ok(self) -> bool:
        return self.identity_check and self.xi_bound and self.dz_bound


def _sum(*chains: Iterable) -> frozenset:
    out: set = set()
    for c in chains:
        out ^= set(c)
    return frozenset(out)


def push_obstruction(
    z: Iterable, h: Iterable, xi: Iterable, witness: MorphismWitness, source: AnyComplex, target: AnyComplex
) -> PushResult:
    """Transport ``d h = z + tau z + xi`` along an equivariant map ``(lambda, H)``.

    The new data are ``z' = lambda z`` and ``xi' = lambda xi + H d z``; they
    satisfy ``z' + tau' z' = d'(H z + lambda h) + xi'`` in the target.
    """
    z, h, xi = frozenset(z), frozenset(h), frozenset(xi)
    src, dst = underlying(source), underlying(target)
    tau, tau2 = _tau_of(source), _tau_of(target)
    lam = witness.f
    big_h = witness.h if witness.h is not None else LinearMap.zero(src.generators, dst.generators, 1)
    if src.diff.apply(h) != _sum(z, tau.apply(z), xi):
        raise ObstructionInputError("not an approximate equivariant cycle: d h != z + tau z + xi")
    dz = src.diff.apply(z)
    z2 = lam.apply(z)
    xi2 = _sum(lam.apply(xi), big_h.apply(dz))
    lhs = _sum(z2, tau2.apply(z2))
    rhs = _sum(dst.diff.apply(_sum(big_h.apply(z), lam.apply(h))), xi2)
    delta = witness.level
    deg_xi = chain_degree(src, xi).deg_i
    deg_dz = chain_degree(src, dz).deg_i
    bound_xi = _add(max(deg_xi, deg_dz), delta)
    bound_dz = _add(deg_dz, delta)
    new_xi = chain_degree(dst, xi2).deg_i
    new_dz = chain_degree(dst, dst.diff.apply(z2)).deg_i
    return PushResult(z2, xi2, lhs == rhs, new_xi <= bound_xi, new_dz <= bound_dz, new_xi, new_dz, bound_xi, bound_dz)


def _add(a: FiltValue, b: FiltValue) -> FiltValue:
    return NEG_INF if a == NEG_INF else a + b
