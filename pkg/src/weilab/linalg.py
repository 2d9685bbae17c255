"""Exact rational linear algebra on coordinate spaces.

Vectors are sequences of :class:`~fractions.Fraction`.  A :class:`Subspace`
stores its basis in reduced row-echelon form, so two subspaces are equal
exactly when their stored rows are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatch(ValueError):
    pass


def _leading(v) -> int:
    for i, c in enumerate(v):
        if c:
            return i
    return -1


def _echelon(rows: Iterable[Sequence], n: int) -> dict[int, list]:
    """Insert rows one at a time into a pivot -> normalized row map."""
    piv: dict[int, list] = {}
    for row in rows:
        if len(row) != n:
            raise DimensionMismatch(f"row of length {len(row)} in a space of dimension {n}")
        v = [Fraction(c) for c in row]
        for p in sorted(piv):
            c = v[p]
            if c:
                pr = piv[p]
                for j in range(p, n):
                    if pr[j]:
                        v[j] -= c * pr[j]
        lead = _leading(v)
        if lead < 0:
            continue
        inv = 1 / v[lead]
        piv[lead] = [c * inv if c else ZERO for c in v]
    return piv


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n in canonical RREF."""

    n: int
    rows: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def is_full(self) -> bool:
        return len(self.rows) == self.n

    def reduce(self, v: Sequence) -> list[Fraction]:
        """Remainder of ``v`` after elimination against the basis."""
        if len(v) != self.n:
            raise DimensionMismatch(f"vector of length {len(v)} in a space of dimension {self.n}")
        out = [Fraction(c) for c in v]
        for p, row in zip(self.pivots, self.rows):
            c = out[p]
            if c:
                for j in range(p, self.n):
                    if row[j]:
                        out[j] -= c * row[j]
        return out

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> list[Fraction]:
        """Coefficients of ``v`` in the RREF basis (assumes membership)."""
        return [Fraction(v[p]) for p in self.pivots]

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.n != self.n:
            raise DimensionMismatch("subspaces of different ambient dimension")
        return rref(list(self.rows) + list(other.rows), self.n)

    def __contains__(self, v):
        return self.contains(v)


def rref(rows: Iterable[Sequence], n: int) -> Subspace:
    """Canonical reduced row-echelon basis of the span of ``rows`` in Q^n."""
    piv = _echelon(rows, n)
    order = sorted(piv)
    # back substitution: clear every pivot column above its pivot
    for idx in reversed(range(len(order))):
        p = order[idx]
        pr = piv[p]
        for q in order[:idx]:
            row = piv[q]
            c = row[p]
            if c:
                for j in range(p, n):
                    if pr[j]:
                        row[j] -= c * pr[j]
    return Subspace(n, tuple(tuple(piv[p]) for p in order), tuple(order))


def zero_space(n: int) -> Subspace:
    return Subspace(n, (), ())


def full_space(n: int) -> Subspace:
    return rref(unit_vectors(n), n)


def unit_vector(n: int, i: int, c=ONE) -> Vector:
    return tuple(Fraction(c) if j == i else ZERO for j in range(n))


def unit_vectors(n: int) -> list[Vector]:
    return [unit_vector(n, i) for i in range(n)]


def span(vectors: Iterable[Sequence], n: int) -> Subspace:
    return rref(vectors, n)


def contains(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def kernel(rows: Sequence[Sequence], n: int) -> Subspace:
    """Null space {v in Q^n : row . v = 0 for every row}."""
    s = rref(rows, n)
    free = [j for j in range(n) if j not in set(s.pivots)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for p, row in zip(s.pivots, s.rows):
            v[p] = -row[f]
        basis.append(v)
    return rref(basis, n)


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Canonical basis of s1 ∩ s2."""
    if s1.n != s2.n:
        raise DimensionMismatch("subspaces of different ambient dimension")
    if s1.is_zero() or s2.is_zero():
        return zero_space(s1.n)
    # a in Q^dim(s1) with sum a_i * reduce_{s2}(row_i) = 0
    residues = [s2.reduce(row) for row in s1.rows]
    m = len(residues)
    eqs = [[residues[i][c] for i in range(m)] for c in range(s1.n)]
    coeffs = kernel(eqs, m)
    out = []
    for a in coeffs.rows:
        v = [ZERO] * s1.n
        for ai, row in zip(a, s1.rows):
            if ai:
                for j in range(s1.n):
                    if row[j]:
                        v[j] += ai * row[j]
        out.append(v)
    return rref(out, s1.n)


def standard_complement(s: Subspace) -> list[int]:
    """Indices that are not pivots: a basis of the quotient Q^n / s."""
    pivots = set(s.pivots)
    return [j for j in range(s.n) if j not in pivots]


def coordinate_slice_dim(s: Subspace, cols: Iterable[int]) -> int:
    """dim of s ∩ span{e_c : c in cols}."""
    keep = set(cols)
    outside = [j for j in range(s.n) if j not in keep]
    projected = rref([[row[j] for j in outside] for row in s.rows], len(outside))
    return s.dim - projected.dim


# -- small dense matrix helpers ---------------------------------------------


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * cols
        for t, c in enumerate(row):
            if c:
                brow = b[t]
                for j in range(cols):
                    if brow[j]:
                        acc[j] += c * brow[j]
        out.append(acc)
    return out


def identity(n: int) -> list[list[Fraction]]:
    return [list(unit_vector(n, i)) for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return rref(a, len(a[0])).dim


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(a)
    m = [[Fraction(c) for c in row] for row in a]
    if any(len(row) != n for row in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    d = ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            d = -d
        d *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] * inv
            if f:
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return d


def is_nilpotent(a: Sequence[Sequence]) -> bool:
    """True iff a^n = 0 (n = size), via repeated squaring."""
    n = len(a)
    if n == 0:
        return True
    p = [list(map(Fraction, row)) for row in a]
    e = 1
    while e < n:
        p = mat_mul(p, p)
        e *= 2
        if not any(any(row) for row in p):
            return True
    return not any(any(row) for row in p)
