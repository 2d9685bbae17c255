"""Der(A), its joint kernel, and the resulting upper bound on the fixed subalgebra.

A derivation is fixed by its values on the variable classes.  Lifting those
values to polynomials, D descends to A exactly when it sends every ideal
generator and every monomial of degree r+1 back into the ideal, i.e.

    sum_i  dQ/dx_i (x) * D(x_i)  =  0   in A

for Q ranging over the generators and the degree-(r+1) monomials.  This is a
linear system in the k*dim coordinates of the D(x_i).

The joint kernel of Der(A) is the fixed space of the identity component of
Aut(A).  Intersecting with the fixed spaces of the sign-diagonal
automorphisms gives a subspace that always contains SA.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .autos import Endo, fixed_subspace, sign_diagonal_automorphisms
from .linalg import Subspace
from .poly import TruncPoly, monomials_of_degree, partial_derivative
from .weil import Element, WeilAlgebra

TRIVIAL = "TrivialCertified"
UPPER_BOUND = "UpperBoundOnly"


class Derivation:
    def __init__(self, algebra: WeilAlgebra, images):
        self.algebra = algebra
        self.images: tuple[Element, ...] = tuple(images)

    def __call__(self, a: Element) -> Element:
        m = self.matrix
        return self.algebra.element(
            [sum((row[j] * a.coords[j] for j in range(len(row)) if row[j]), Fraction(0)) for row in m]
        )

    @cached_property
    def matrix(self) -> list[list[Fraction]]:
        """Column j is D(basis[j]) via the chain rule."""
        A = self.algebra
        cols = []
        for m in A.basis:
            mono = TruncPoly.monomial(A.ctx, m)
            col = A.zero()
            for i in range(A.k):
                if m[i]:
                    col = col + A.normal_form(partial_derivative(mono, i)) * self.images[i]
            cols.append(col.coords)
        return linalg.transpose(cols)

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(c for im in self.images for c in im.coords)

    def bracket(self, other: "Derivation") -> "Derivation":
        """[self, other] evaluated on the variables."""
        return Derivation(self.algebra, [self(other.images[i]) - other(self.images[i])
                                         for i in range(self.algebra.k)])

    def __repr__(self):
        names = self.algebra.ctx.names
        return "Derivation(" + "; ".join(f"D({n}) = {im}" for n, im in zip(names, self.images)) + ")"


def _relations(algebra: WeilAlgebra) -> list[list[Element]]:
    """For each relation Q, the classes of dQ/dx_i for i = 1..k."""
    A = algebra
    ctx = A.ctx
    rels = []
    for g in A.spec.generators:
        rels.append([A.normal_form(partial_derivative(g, i)) for i in range(ctx.k)])
    for m in monomials_of_degree(ctx.k, ctx.r + 1):
        row = []
        for i in range(ctx.k):
            if m[i]:
                dm = m[:i] + (m[i] - 1,) + m[i + 1:]
                row.append(A.monomial_class(dm) * m[i])
            else:
                row.append(A.zero())
        rels.append(row)
    return rels


def derivation_constraints(algebra: WeilAlgebra) -> list[list[Fraction]]:
    """Rows of the linear system on the k*dim unknowns (D(x_i) coordinates)."""
    A = algebra
    n = A.dim
    mats = {}
    rows = []
    for rel in _relations(A):
        # coordinate t of sum_i rel[i] * D(x_i), linear in D(x_i)
        blocks = []
        for i, part in enumerate(rel):
            if not part:
                blocks.append(None)
                continue
            key = part.coords
            if key not in mats:
                mats[key] = A.mult_matrix(part)
            blocks.append(mats[key])
        for t in range(n):
            row = []
            for b in blocks:
                row.extend(b[t] if b is not None else [Fraction(0)] * n)
            if any(row):
                rows.append(row)
    return rows


def derivation_space(algebra: WeilAlgebra) -> list[Derivation]:
    """A basis of Der(A) (RREF order over the stacked D(x_i) coordinates)."""
    A = algebra
    n = A.dim
    sol = linalg.kernel(derivation_constraints(A), A.k * n)
    return [Derivation(A, [A.element(v[i * n:(i + 1) * n]) for i in range(A.k)]) for v in sol.rows]


def derivation_kernel(algebra: WeilAlgebra, basis: list[Derivation] | None = None) -> Subspace:
    if basis is None:
        basis = derivation_space(algebra)
    rows = [row for d in basis for row in d.matrix]
    return linalg.kernel(rows, algebra.dim)


@dataclass(frozen=True)
class FixedPointEstimate:
    algebra: WeilAlgebra
    kernel: Subspace
    refined: Subspace
    sign_automorphisms: tuple[tuple[int, ...], ...]
    derivation_dim: int

    @property
    def status(self) -> str:
        return TRIVIAL if self.refined.dim == 1 else UPPER_BOUND

    @property
    def is_trivial(self) -> bool:
        return self.status == TRIVIAL


def fixed_subalgebra_estimate(algebra: WeilAlgebra) -> FixedPointEstimate:
    basis = derivation_space(algebra)
    k = derivation_kernel(algebra, basis)
    signs = sign_diagonal_automorphisms(algebra)
    refined = linalg.intersect(k, fixed_subspace(algebra, signs))
    return FixedPointEstimate(algebra, k, refined, tuple(e.signs for e in signs), len(basis))


def verify_subalgebra(algebra: WeilAlgebra, s: Subspace) -> bool:
    """Contains 1 and is closed under multiplication (checked on a basis)."""
    A = algebra
    if not s.contains(A.one().coords):
        return False
    els = [A.element(row) for row in s.rows]
    for i, a in enumerate(els):
        for b in els[i:]:
            if not s.contains((a * b).coords):
                return False
    return True


def derivation_matrices_bruteforce(algebra: WeilAlgebra) -> list[list[list[Fraction]]]:
    """Der(A) by solving Leibniz directly for all dim x dim matrices.

    Independent of the relation-based solve above (it never looks at the
    generators), but with dim^2 unknowns it is only meant for cross-checks.
    """
    A = algebra
    n = A.dim
    N = n * n
    rows = []
    for t in range(n):  # L(1) = 0
        v = [Fraction(0)] * N
        v[t * n] = Fraction(1)
        rows.append(v)
    mult = [A.mult_matrix(A.basis_element(i)) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = A.multiply(A.basis_element(i), A.basis_element(j)).coords
            for t in range(n):
                v = [Fraction(0)] * N
                for s in range(n):
                    if prod[s]:
                        v[t * n + s] += prod[s]
                    if mult[i][t][s]:
                        v[s * n + j] -= mult[i][t][s]
                    if mult[j][t][s]:
                        v[s * n + i] -= mult[j][t][s]
                if any(v):
                    rows.append(v)
    sol = linalg.kernel(rows, N)
    return [[list(row[t * n:(t + 1) * n]) for t in range(n)] for row in sol.rows]
