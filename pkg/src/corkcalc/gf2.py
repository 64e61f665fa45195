"""GF(2) linear algebra on int bitsets.

Vectors are Python ints (bit ``i`` is coordinate ``i``).  Affine systems are
lists of equation masks where bit 0 holds the right-hand side and bit
``i + 1`` the coefficient of unknown ``x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class XorBasis:
    """Incremental row-echelon basis keyed by highest set bit."""

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduced(self) -> list[int]:
        """Fully reduced basis vectors, ordered by pivot."""
        pivots = sorted(self.rows)
        rows = dict(self.rows)
        for p in pivots:
            for q in pivots:
                if q != p and (rows[q] >> p) & 1:
                    rows[q] ^= rows[p]
        return [rows[p] for p in pivots]


def rank(vectors: Iterable[int]) -> int:
    return len(XorBasis(vectors))


def in_span(v: int, vectors: Iterable[int]) -> bool:
    return v in XorBasis(vectors)


@dataclass(frozen=True)
class AffineSolution:
    particular: int
    kernel: tuple[int, ...]

    def element(self, choice: int) -> int:
        """Solution obtained by adding the kernel vectors picked by ``choice``."""
        x = self.particular
        for i in bits(choice):
            x ^= self.kernel[i]
        return x


def solve_affine(equations: Iterable[int], nvars: int) -> AffineSolution | None:
    """Solve an affine system; ``None`` when inconsistent.

    The particular solution is the lexicographically least one with ``x_0``
    most significant: pivots are taken on the highest-index unknowns, so
    setting every free unknown to zero minimises the leading coordinates.
    """
    rows: dict[int, int] = {}
    for eq in equations:
        v = eq
        while v >> 1:
            top = v.bit_length() - 1
            row = rows.get(top)
            if row is None:
                break
            v ^= row
        if v >> 1:
            rows[v.bit_length() - 1] = v
        elif v & 1:
            return None
    pivots = sorted(rows)
    for p in pivots:
        for q in pivots:
            if q > p and (rows[q] >> p) & 1:
                rows[q] ^= rows[p]
    particular = 0
    for p in pivots:
        if rows[p] & 1:
            particular |= 1 << (p - 1)
    pivot_set = set(pivots)
    kernel = []
    for f in range(1, nvars + 1):
        if f in pivot_set:
            continue
        v = 1 << (f - 1)
        for p in pivots:
            if (rows[p] >> f) & 1:
                v |= 1 << (p - 1)
        kernel.append(v)
    return AffineSolution(particular, tuple(kernel))


def kernel_basis(columns: list[int], nrows: int) -> list[int]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}`` as masks over column indices."""
    eqs = [0] * nrows
    for j, col in enumerate(columns):
        for i in bits(col):
            eqs[i] |= 1 << (j + 1)
    sol = solve_affine(eqs, len(columns))
    assert sol is not None
    return list(sol.kernel)


def apply_columns(columns: list[int] | tuple[int, ...], x: int) -> int:
    out = 0
    for j in bits(x):
        out ^= columns[j]
    return out
