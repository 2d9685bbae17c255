"""Sufficient conditions for the fixed subalgebra SA to be trivial.

Each granted :class:`Certificate` is re-checkable through :func:`verify`,
which recomputes its condition by a route independent of the one that
granted it.  A verdict of ``Unknown`` never claims that SA is nontrivial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from . import linalg
from .autos import Endo
from .derivations import derivation_matrices_bruteforce, fixed_subalgebra_estimate
from .weil import WeilAlgebra

MONOMIAL = "Monomial"
HOMOGENEOUS = "Homogeneous"
WEIGHT_GRADING = "WeightGrading"
ORDER_THEOREM = "OrderTheorem"
DERIVATION_KERNEL = "DerivationKernelTrivial"
KINDS = (MONOMIAL, HOMOGENEOUS, WEIGHT_GRADING, ORDER_THEOREM, DERIVATION_KERNEL)

GRANTED = "granted"
FAILED = "failed"
NOT_APPLICABLE = "not applicable"

TRIVIAL = "Trivial"
UNKNOWN = "Unknown"


def default_weight_bound(algebra: WeilAlgebra) -> int:
    return 4 * algebra.ctx.r


@dataclass(frozen=True)
class Certificate:
    kind: str
    witness: dict = field(default_factory=dict)
    conclusion: str = "SA is trivial"


def _monomial_columns(algebra: WeilAlgebra) -> list[int]:
    ideal = algebra.ideal
    return [j for j in range(ideal.n) if ideal.contains(linalg.unit_vector(ideal.n, j))]


def is_monomial_ideal(algebra: WeilAlgebra) -> bool:
    """True iff the ideal is spanned by the monomials it contains."""
    cols = _monomial_columns(algebra)
    return len(cols) == algebra.ideal.dim


def _graded_slice_total(algebra: WeilAlgebra, weights: Sequence[int]) -> int:
    """Sum over weighted degrees d of dim(ideal ∩ degree-d slice)."""
    ctx = algebra.ctx
    slices: dict[int, list[int]] = {}
    for j, m in enumerate(ctx.monomials):
        slices.setdefault(sum(w * e for w, e in zip(weights, m)), []).append(j)
    return sum(linalg.coordinate_slice_dim(algebra.ideal, cols) for cols in slices.values())


def is_weight_graded(algebra: WeilAlgebra, weights: Sequence[int]) -> bool:
    return _graded_slice_total(algebra, weights) == algebra.ideal.dim


def is_homogeneous_ideal(algebra: WeilAlgebra) -> bool:
    return is_weight_graded(algebra, (1,) * algebra.k)


def grading_space(algebra: WeilAlgebra) -> linalg.Subspace:
    """All rational w with the ideal stable under sum_i w_i x_i d/dx_i.

    That operator is diagonal on monomials (eigenvalue = weighted degree),
    so stability is the same as splitting into weighted slices.
    """
    ctx = algebra.ctx
    ideal = algebra.ideal
    rows = []
    for row in ideal.rows:
        residues = []
        for i in range(ctx.k):
            scaled = [c * m[i] if c else c for c, m in zip(row, ctx.monomials)]
            residues.append(ideal.reduce(scaled))
        for c in range(ideal.n):
            eq = [res[c] for res in residues]
            if any(eq):
                rows.append(eq)
    return linalg.kernel(rows, ctx.k)


def find_grading_weights(algebra: WeilAlgebra, bound: int | None = None) -> tuple[int, ...] | None:
    """Lexicographically smallest positive integer grading with max weight <= bound."""
    if bound is None:
        bound = default_weight_bound(algebra)
    if bound < 1:
        raise ValueError("weight bound must be >= 1")
    space = grading_space(algebra)
    k = algebra.k
    if space.is_zero():
        return None
    pivot_row = {p: t for t, p in enumerate(space.pivots)}
    rows = space.rows

    # a vector of the space is fixed by its values at the pivot columns;
    # RREF rows vanish left of their pivot, so coordinate j depends only
    # on pivots <= j and the search can proceed left to right.
    chosen: list[Fraction] = []

    def value_at(j):
        return sum((chosen[t] * rows[t][j] for t, p in enumerate(space.pivots) if p <= j and t < len(chosen)),
                   Fraction(0))

    def search(j, w):
        if j == k:
            return tuple(int(v) for v in w)
        if j in pivot_row:
            for v in range(1, bound + 1):
                chosen.append(Fraction(v))
                found = search(j + 1, w + [v])
                if found:
                    return found
                chosen.pop()
            return None
        v = value_at(j)
        if v.denominator != 1 or not 1 <= v <= bound:
            return None
        return search(j + 1, w + [v])

    return search(0, [])


def monomial_certificate(algebra: WeilAlgebra) -> Certificate | None:
    if is_monomial_ideal(algebra):
        return Certificate(MONOMIAL, {"monomials_in_ideal": len(_monomial_columns(algebra))})
    return None


def homogeneous_certificate(algebra: WeilAlgebra) -> Certificate | None:
    if is_homogeneous_ideal(algebra):
        return Certificate(HOMOGENEOUS, {"ideal_dim": algebra.ideal.dim})
    return None


def dwindlable_certificate(algebra: WeilAlgebra, bound: int | None = None) -> Certificate | None:
    """Positive weights w give automorphisms x_i -> t^(w_i) x_i tending to κ_A as t -> 0."""
    w = find_grading_weights(algebra, bound)
    if w is None:
        return None
    return Certificate(WEIGHT_GRADING, {"weights": list(w), "dwindlable": True})


def order_theorem_precheck(algebra: WeilAlgebra) -> Certificate | None:
    w, r = algebra.width, algebra.order
    if w <= 1 or (w == 2 and r <= 3) or (w >= 3 and r <= 2):
        return Certificate(ORDER_THEOREM, {"width": w, "order": r, "trusted": True})
    return None


def derivation_certificate(algebra: WeilAlgebra, estimate=None) -> Certificate | None:
    est = estimate if estimate is not None else fixed_subalgebra_estimate(algebra)
    if est.is_trivial:
        return Certificate(DERIVATION_KERNEL, {
            "kernel_dim": est.kernel.dim,
            "refined_dim": est.refined.dim,
            "sign_automorphisms": [list(s) for s in est.sign_automorphisms],
        })
    return None


def verify(algebra: WeilAlgebra, cert: Certificate) -> bool:
    """Recompute the granting condition of ``cert`` from scratch."""
    if cert.kind == MONOMIAL:
        # every ideal row must be a combination of ideal monomials: each
        # nonzero entry of an RREF row must itself be an ideal monomial
        ideal = algebra.ideal
        return all(
            ideal.contains(linalg.unit_vector(ideal.n, j))
            for row in ideal.rows for j, c in enumerate(row) if c
        )
    if cert.kind == HOMOGENEOUS:
        return _graded_slice_total(algebra, (1,) * algebra.k) == algebra.ideal.dim
    if cert.kind == WEIGHT_GRADING:
        w = cert.witness["weights"]
        return all(isinstance(x, int) and x > 0 for x in w) and is_weight_graded(algebra, w)
    if cert.kind == ORDER_THEOREM:
        fresh = order_theorem_precheck(algebra)
        return fresh is not None and fresh.witness["width"] == cert.witness["width"]
    if cert.kind == DERIVATION_KERNEL:
        # Leibniz solved directly on dim x dim matrices; sign maps act
        # diagonally on monomials, so their fixed space is read off exponents
        n = algebra.dim
        rows = [row for mat in derivation_matrices_bruteforce(algebra) for row in mat]
        for signs in cert.witness["sign_automorphisms"]:
            if not Endo.diagonal(algebra, signs).is_well_defined:
                return False
            for j, m in enumerate(algebra.basis):
                if prod(s ** e for s, e in zip(signs, m)) == -1:
                    rows.append(linalg.unit_vector(n, j))
        return linalg.kernel(rows, n) == algebra.unit_span()
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


@dataclass
class TrivialityReport:
    name: str
    outcomes: dict[str, str]
    certificates: dict[str, Certificate]

    @property
    def verdict(self) -> str:
        return TRIVIAL if self.certificates else UNKNOWN

    @property
    def granted(self) -> list[str]:
        return [k for k in KINDS if k in self.certificates]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "certificates": [
                {
                    "kind": kind,
                    "outcome": self.outcomes[kind],
                    "witness": self.certificates[kind].witness if kind in self.certificates else None,
                }
                for kind in KINDS
            ],
        }


def triviality_report(algebra: WeilAlgebra, bound: int | None = None, use_order_theorem: bool = True,
                      estimate=None) -> TrivialityReport:
    checks = {
        MONOMIAL: lambda: monomial_certificate(algebra),
        HOMOGENEOUS: lambda: homogeneous_certificate(algebra),
        WEIGHT_GRADING: lambda: dwindlable_certificate(algebra, bound),
        ORDER_THEOREM: lambda: order_theorem_precheck(algebra) if use_order_theorem else None,
        DERIVATION_KERNEL: lambda: derivation_certificate(algebra, estimate),
    }
    outcomes, certs = {}, {}
    for kind, check in checks.items():
        if kind == ORDER_THEOREM and not use_order_theorem:
            outcomes[kind] = NOT_APPLICABLE
            continue
        cert = check()
        if cert is None:
            outcomes[kind] = FAILED
        else:
            outcomes[kind] = GRANTED
            certs[kind] = cert
    return TrivialityReport(algebra.name, outcomes, certs)

