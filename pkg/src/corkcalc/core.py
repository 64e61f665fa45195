"""Instanton-type complexes over GF(2)[y, 1/y] and their validation.

Multiplication by ``y`` raises ``deg_z`` by 8 and ``deg_i`` by 1, so a graded
map entry from ``g`` to ``h`` can only be the single monomial ``y^k`` with
``deg_z(h) + 8k = deg_z(g) + shift``.  Maps are therefore stored as GF(2)
column bitmasks over generators; the y-power of each entry is implied by the
gradings, and composition is plain bitset matrix multiplication.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import gf2
from .filt import NEG_INF, FiltValue, fmt_filt, parse_filt

Point = tuple[int, int]
"""A lattice point ``(generator index, y-power)``; its chain is ``y^k g``."""

Chain = frozenset
"""A GF(2) chain: a frozenset of lattice points."""


class StructuralError(ValueError):
    """Malformed complex data: duplicate ids, incoherent entries, missing theta."""


class Flavor(str, enum.Enum):
    D2 = "D2"
    D1 = "D1"


THETA_DEG_Z = {Flavor.D2: -3, Flavor.D1: 0}


@dataclass(frozen=True)
class Generator:
    name: str
    deg_z: int
    deg_i: Fraction
    is_theta: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "deg_i", parse_filt(self.deg_i))
        if not isinstance(self.deg_i, Fraction):
            raise StructuralError(f"generator {self.name!r} needs a finite deg_i")


def ypow(src: Generator, dst: Generator, shift: int) -> int | None:
    """The y-power forced on an entry ``src -> dst`` of a map of degree ``shift``."""
    diff = src.deg_z + shift - dst.deg_z
    if diff % 8:
        return None
    return diff // 8


def rise(src: Generator, dst: Generator, shift: int) -> Fraction:
    """How much an entry ``src -> dst`` raises ``deg_i``."""
    k = ypow(src, dst, shift)
    if k is None:
        raise StructuralError(f"no graded entry {src.name} -> {dst.name} in degree {shift}")
    return dst.deg_i + k - src.deg_i


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A GF(2)[y, 1/y]-linear map of fixed homological degree between free modules."""

    source: tuple[Generator, ...]
    target: tuple[Generator, ...]
    cols: tuple[int, ...]
    shift: int = 0
    declared_level: FiltValue | None = None

    def __post_init__(self) -> None:
        if len(self.cols) != len(self.source):
            raise StructuralError("column count does not match source rank")
        limit = 1 << len(self.target)
        for g, col in enumerate(self.cols):
            if col >= limit:
                raise StructuralError("entry points past the target basis")
            for h in gf2.bits(col):
                if ypow(self.source[g], self.target[h], self.shift) is None:
                    raise StructuralError(
                        f"entry {self.source[g].name} -> {self.target[h].name} "
                        f"violates grading coherence in degree {self.shift}"
                    )

    @classmethod
    def zero(cls, source: Sequence[Generator], target: Sequence[Generator], shift: int = 0) -> LinearMap:
        return cls(tuple(source), tuple(target), (0,) * len(source), shift)

    @classmethod
    def identity(cls, gens: Sequence[Generator]) -> LinearMap:
        return cls(tuple(gens), tuple(gens), tuple(1 << i for i in range(len(gens))), 0, Fraction(0))

    @classmethod
    def from_entries(
        cls,
        source: Sequence[Generator],
        target: Sequence[Generator],
        entries: Iterable[tuple],
        shift: int = 0,
        declared_level: FiltValue | None = None,
    ) -> LinearMap:
        """Build from ``(src, dst)`` or ``(src, dst, ypow)`` triples naming generators.

        Repeated entries cancel mod 2.  A stated y-power must equal the one
        forced by the gradings, otherwise the entry would not be a monomial
        of the right degree.
        """
        source, target = tuple(source), tuple(target)
        sidx = _index_by_name(source)
        tidx = _index_by_name(target)
        cols = [0] * len(source)
        for entry in entries:
            src, dst = entry[0], entry[1]
            if src not in sidx:
                raise StructuralError(f"unknown source generator {src!r}")
            if dst not in tidx:
                raise StructuralError(f"unknown target generator {dst!r}")
            g, h = sidx[src], tidx[dst]
            forced = ypow(source[g], target[h], shift)
            if forced is None:
                raise StructuralError(
                    f"entry {src} -> {dst}: deg_z {source[g].deg_z} -> {target[h].deg_z} "
                    f"is not congruent to degree {shift} mod 8"
                )
            if len(entry) > 2 and entry[2] is not None and int(entry[2]) != forced:
                raise StructuralError(
                    f"entry {src} -> {dst}: y^{entry[2]} breaks grading coherence (expected y^{forced})"
                )
            cols[g] ^= 1 << h
        return cls(source, target, tuple(cols), shift, declared_level)

    def entries(self) -> list[tuple[int, int, int]]:
        """Nonzero entries as ``(src index, dst index, ypow)``."""
        out = []
        for g, col in enumerate(self.cols):
            for h in gf2.bits(col):
                out.append((g, h, ypow(self.source[g], self.target[h], self.shift)))
        return out

    def named_entries(self) -> list[tuple[str, str, int]]:
        return [(self.source[g].name, self.target[h].name, k) for g, h, k in self.entries()]

    def entry_rise(self, g: int, h: int) -> Fraction:
        return rise(self.source[g], self.target[h], self.shift)

    def level(self) -> FiltValue:
        """Smallest ``delta`` with ``deg_i(f(x)) <= deg_i(x) + delta`` for all x."""
        best: FiltValue = NEG_INF
        for g, h, _ in self.entries():
            best = max(best, self.entry_rise(g, h))
        return best

    def is_zero(self) -> bool:
        return not any(self.cols)

    def compose(self, inner: LinearMap) -> LinearMap:
        """``self`` after ``inner``."""
        if inner.target != self.source:
            raise StructuralError("composition across mismatched bases")
        cols = tuple(gf2.apply_columns(self.cols, c) for c in inner.cols)
        return LinearMap(inner.source, self.target, cols, inner.shift + self.shift)

    def __matmul__(self, inner: LinearMap) -> LinearMap:
        return self.compose(inner)

    def __add__(self, other: LinearMap) -> LinearMap:
        if (other.source, other.target, other.shift) != (self.source, self.target, self.shift):
            raise StructuralError("sum of maps with different shapes")
        return LinearMap(self.source, self.target, tuple(a ^ b for a, b in zip(self.cols, other.cols)), self.shift)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.source, self.target, self.shift, self.cols) == (
            other.source,
            other.target,
            other.shift,
            other.cols,
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.shift, self.cols))

    def apply(self, chain: Iterable[Point]) -> frozenset:
        out: set[Point] = set()
        for g, m in chain:
            for h in gf2.bits(self.cols[g]):
                out ^= {(h, m + ypow(self.source[g], self.target[h], self.shift))}
        return frozenset(out)

    def transpose(self) -> LinearMap:
        """Dual map on dual bases; y-powers and homological degree are unchanged."""
        cols = [0] * len(self.target)
        for g, h, _ in self.entries():
            cols[h] |= 1 << g
        return LinearMap(_dual_gens(self.target), _dual_gens(self.source), tuple(cols), self.shift)

    def with_level(self, level: FiltValue | None) -> LinearMap:
        return LinearMap(self.source, self.target, self.cols, self.shift, level)

    def describe(self) -> list[str]:
        return [f"{s} --y^{k}--> {t}" for s, t, k in self.named_entries()]


def _index_by_name(gens: Sequence[Generator]) -> dict[str, int]:
    out: dict[str, int] = {}
    for i, g in enumerate(gens):
        if g.name in out:
            raise StructuralError(f"duplicate generator id {g.name!r}")
        out[g.name] = i
    return out


def dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def _dual_gens(gens: Sequence[Generator]) -> tuple[Generator, ...]:
    return tuple(Generator(dual_name(g.name), -g.deg_z - 3, -g.deg_i, g.is_theta) for g in gens)


@dataclass(frozen=True)
class InstantonComplex:
    """Free filtered complex with a designated theta generator.

    The D2 flavor has theta at (deg_z, deg_i) = (-3, 0) spanning the
    quotient by the subcomplex of the other generators; the D1 flavor has
    theta at (0, 0) spanning a subcomplex.
    """

    generators: tuple[Generator, ...]
    diff: LinearMap
    flavor: Flavor = Flavor.D2
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "flavor", Flavor(self.flavor))
        _index_by_name(self.generators)
        if self.diff.source != self.generators or self.diff.target != self.generators:
            raise StructuralError("differential must act on the complex's own basis")
        if self.diff.shift != -1:
            raise StructuralError("differential must have degree -1")
        thetas = [i for i, g in enumerate(self.generators) if g.is_theta]
        if len(thetas) != 1:
            raise StructuralError(f"expected exactly one theta generator, found {len(thetas)}")

    @classmethod
    def build(
        cls,
        generators: Iterable[Generator | tuple],
        diff: Iterable[tuple] = (),
        flavor: Flavor | str = Flavor.D2,
        name: str = "",
    ) -> InstantonComplex:
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in generators)
        d = LinearMap.from_entries(gens, gens, diff, shift=-1, declared_level=Fraction(0))
        return cls(gens, d, Flavor(flavor), name)

    @property
    def theta(self) -> int:
        return next(i for i, g in enumerate(self.generators) if g.is_theta)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def point_level(self, p: Point) -> Fraction:
        g, k = p
        return self.generators[g].deg_i + k

    def point_grading(self, p: Point) -> int:
        g, k = p
        return self.generators[g].deg_z + 8 * k

    def slice_points(self, grading: int, lo: FiltValue = NEG_INF, hi: FiltValue = float("inf")) -> list[Point]:
        """Lattice points of one homological grading with ``lo < deg_i <= hi``.

        Every grading slice is finite: each generator contributes at most one
        y-multiple to it.
        """
        pts = []
        for g, gen in enumerate(self.generators):
            off = grading - gen.deg_z
            if off % 8:
                continue
            p = (g, off // 8)
            if lo < self.point_level(p) <= hi:
                pts.append(p)
        pts.sort(key=lambda p: (self.point_level(p), p[0], p[1]))
        return pts

    def chain(self, *terms: str | tuple[str, int]) -> frozenset:
        """Chain from generator names, optionally paired with a y-power."""
        out: set[Point] = set()
        for t in terms:
            name, k = (t, 0) if isinstance(t, str) else t
            out ^= {(self.index(name), k)}
        return frozenset(out)

    def format_chain(self, chain: Iterable[Point]) -> str:
        if not chain:
            return "0"
        parts = []
        for g, k in sorted(chain, key=lambda p: (p[0], p[1])):
            name = self.generators[g].name
            parts.append(name if k == 0 else f"y^{k}*{name}")
        return " + ".join(parts)


@dataclass(frozen=True)
class InvolutiveComplex:
    """An instanton-type complex with a homotopy involution ``tau`` of level ``level``."""

    complex: InstantonComplex
    tau: LinearMap
    level: Fraction = Fraction(0)
    h_witness: LinearMap | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "level", parse_filt(self.level))
        gens = self.complex.generators
        if self.tau.source != gens or self.tau.target != gens or self.tau.shift != 0:
            raise StructuralError("tau must be a degree-0 self-map of the complex")
        if self.h_witness is not None:
            h = self.h_witness
            if h.source != gens or h.target != gens or h.shift != 1:
                raise StructuralError("h_witness must be a degree +1 self-map of the complex")

    @classmethod
    def build(
        cls,
        complex: InstantonComplex,
        tau: Iterable[tuple] | None = None,
        level: FiltValue = Fraction(0),
        h_witness: Iterable[tuple] | None = None,
    ) -> InvolutiveComplex:
        """``tau`` entries list only the deviation from the identity."""
        gens = complex.generators
        t = LinearMap.identity(gens)
        if tau:
            t = t + LinearMap.from_entries(gens, gens, tau, 0)
        t = t.with_level(parse_filt(level))
        h = LinearMap.from_entries(gens, gens, h_witness, 1) if h_witness is not None else None
        return cls(complex, t, parse_filt(level), h)

    @classmethod
    def trivial_tau(cls, complex: InstantonComplex) -> InvolutiveComplex:
        return cls(complex, LinearMap.identity(complex.generators), Fraction(0), LinearMap.zero(complex.generators, complex.generators, 1))

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.complex.generators

    @property
    def diff(self) -> LinearMap:
        return self.complex.diff

    @property
    def flavor(self) -> Flavor:
        return self.complex.flavor

    @property
    def theta(self) -> int:
        return self.complex.theta

    @property
    def name(self) -> str:
        return self.complex.name


AnyComplex = InstantonComplex | InvolutiveComplex


def underlying(c: AnyComplex) -> InstantonComplex:
    return c.complex if isinstance(c, InvolutiveComplex) else c


def trivial_complex(flavor: Flavor | str = Flavor.D2, name: str = "trivial") -> InstantonComplex:
    flavor = Flavor(flavor)
    return InstantonComplex.build([Generator("theta", THETA_DEG_Z[flavor], Fraction(0), True)], (), flavor, name)


def trivial_involutive(flavor: Flavor | str = Flavor.D2) -> InvolutiveComplex:
    return InvolutiveComplex.trivial_tau(trivial_complex(flavor))


# --------------------------------------------------------------------------
# chain degrees


@dataclass(frozen=True)
class ChainDegree:
    deg_z: int | None
    deg_i: FiltValue
    homogeneous: bool


def chain_degree(c: AnyComplex, chain: Iterable[Point]) -> ChainDegree:
    """Grading (when homogeneous) and filtration level (max over terms) of a chain."""
    c = underlying(c)
    chain = list(chain)
    if not chain:
        return ChainDegree(None, NEG_INF, True)
    gradings = {c.point_grading(p) for p in chain}
    level = max(c.point_level(p) for p in chain)
    if len(gradings) == 1:
        return ChainDegree(gradings.pop(), level, True)
    return ChainDegree(None, level, False)


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    witness_level: FiltValue | None = None
    h_witness: LinearMap | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, offending: list[str]) -> None:
        self.checks.append(Check(name, not offending, "; ".join(offending[:8])))

    def lines(self) -> list[str]:
        out = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "") for c in self.checks]
        if self.witness_level is not None:
            out.append(f"homotopy witness level: {fmt_filt(self.witness_level)}")
        out.extend(self.notes)
        return out


def _entry_names(m: LinearMap, pairs: Iterable[tuple[int, int]]) -> list[str]:
    return [f"{m.source[g].name} -> {m.target[h].name}" for g, h in pairs]


def _nonzero_pairs(m: LinearMap) -> list[tuple[int, int]]:
    return [(g, h) for g, h, _ in m.entries()]


def _rising(m: LinearMap, bound: FiltValue) -> list[str]:
    return [
        f"{m.source[g].name} --y^{k}--> {m.target[h].name} raises deg_i by {fmt_filt(m.entry_rise(g, h))}"
        for g, h, k in m.entries()
        if m.entry_rise(g, h) > bound
    ]


def _into_theta(m: LinearMap, theta: int) -> list[str]:
    return [f"{m.source[g].name} -> {m.target[h].name}" for g, h, _ in m.entries() if h == theta and g != theta]


def validate(c: AnyComplex, solve_witness: bool = True) -> ValidationReport:
    """Check every structural invariant and report pass/fail per invariant.

    For an involutive complex without a homotopy witness, the minimal level
    at which ``d H + H d = tau^2 + id`` is solvable is searched for.
    """
    report = ValidationReport()
    cx = underlying(c)
    gens = cx.generators
    th = cx.theta
    theta = gens[th]
    want = THETA_DEG_Z[cx.flavor]
    report.add(
        "theta position",
        [] if (theta.deg_z, theta.deg_i) == (want, 0) else [f"theta at ({theta.deg_z}, {fmt_filt(theta.deg_i)}), expected ({want}, 0)"],
    )
    d = cx.diff
    report.add("d^2 = 0", _entry_names(d, _nonzero_pairs(d @ d)))
    report.add("differential filtered", [f"differential not filtered: {x}" for x in _rising(d, 0)])
    if cx.flavor is Flavor.D2:
        report.add("two-step filtration (nothing maps onto theta)", _into_theta(d, th))
    else:
        report.add("theta spans a subcomplex (d theta = 0)", [f"{theta.name} -> {gens[h].name}" for h in gf2.bits(d.cols[th])])

    if isinstance(c, InvolutiveComplex):
        tau = c.tau
        report.add("tau chain map", _entry_names(d, _nonzero_pairs(d @ tau + tau @ d)))
        report.add(f"tau level <= {fmt_filt(c.level)}", _rising(tau, c.level))
        if cx.flavor is Flavor.D2:
            bad = _into_theta(tau, th)
            if not (tau.cols[th] >> th) & 1:
                bad.append("theta -> theta entry missing")
            report.add("tau is the identity on the quotient by C", bad)
        else:
            bad = [] if tau.cols[th] == 1 << th else [f"tau(theta) = {cx.format_chain(tau.apply({(th, 0)}))}"]
            report.add("tau fixes theta", bad)
        target = tau @ tau + LinearMap.identity(gens)
        if c.h_witness is not None:
            h = c.h_witness
            report.add("d H + H d = tau^2 + id", _entry_names(d, _nonzero_pairs(d @ h + h @ d + target)))
            report.add(f"H level <= {fmt_filt(c.level)}", _rising(h, c.level))
            report.add("H two-step filtered", _two_step_violations(h, cx))
            report.witness_level = h.level()
            report.h_witness = h
        elif solve_witness:
            from .morphism import minimal_homotopy

            found = minimal_homotopy(cx, cx, target, two_step=True)
            if found is None:
                report.add("homotopy involution", ["no witness H exists at any level"])
            else:
                h, lvl = found
                report.witness_level = lvl
                report.h_witness = h
                report.add(
                    f"homotopy involution (solved H level <= {fmt_filt(c.level)})",
                    [] if lvl <= c.level else [f"minimal witness level {fmt_filt(lvl)} exceeds {fmt_filt(c.level)}"],
                )
    return report


def _two_step_violations(m: LinearMap, cx: InstantonComplex) -> list[str]:
    """A map preserves the two-step filtration when it keeps C inside C (D2) or theta's span inside itself (D1)."""
    th = cx.theta
    if cx.flavor is Flavor.D2:
        return _into_theta(m, th)
    return [f"{cx.generators[th].name} -> {cx.generators[h].name}" for h in gf2.bits(m.cols[th]) if h != th]


def require_valid(c: AnyComplex) -> None:
    report = validate(c)
    if not report.ok:
        raise StructuralError("invalid complex: " + "; ".join(f"{x.name}: {x.detail}" for x in report.failures()))


def shift_by_y(c: InstantonComplex, n: int = 1) -> InstantonComplex:
    """Rename every generator ``g`` to ``y^n g`` (theta included).

    The module is unchanged; only the basis moves, so windows of the result
    at ``(r + n, s + n]`` match windows of ``c`` at ``(r, s]``.  The result
    intentionally fails the theta-position check.
    """
    gens = tuple(Generator(g.name, g.deg_z + 8 * n, g.deg_i + n, g.is_theta) for g in c.generators)
    d = LinearMap(gens, gens, c.diff.cols, -1, c.diff.declared_level)
    return InstantonComplex(gens, d, c.flavor, c.name)
