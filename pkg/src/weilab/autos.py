"""Concrete endomorphisms of a Weil algebra given by images of the variables."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .linalg import Subspace
from .poly import PolyError, TruncPoly, mul_terms, parse_terms, substitute_terms
from .weil import Element, WeilAlgebra, WeilError


class NotWellDefined(WeilError):
    pass


class NotAnAutomorphism(WeilError):
    pass


def _monomial_images(algebra: WeilAlgebra, images: Sequence[dict]) -> dict:
    """Truncated-ring values of every basis monomial at ``images``."""
    ctx = algebra.ctx
    one = ctx.one()
    powers = [[{one: Fraction(1)}] for _ in images]

    def power(i, e):
        ps = powers[i]
        while len(ps) <= e:
            ps.append(mul_terms(ps[-1], images[i], ctx.r))
        return ps[e]

    out = {}
    for m in algebra.basis:
        acc = {one: Fraction(1)}
        for i, e in enumerate(m):
            if e:
                acc = mul_terms(acc, power(i, e), ctx.r)
        out[m] = acc
    return out


class Endo:
    """An algebra map A -> A fixed by the images of x_1..x_k (1 maps to 1).

    Usable only once :attr:`is_well_defined` holds; the matrix-based
    operations raise :class:`NotWellDefined` otherwise.
    """

    signs: tuple[int, ...] | None = None

    def __init__(self, algebra: WeilAlgebra, images: Sequence[Element | TruncPoly | str]):
        if len(images) != algebra.k:
            raise WeilError(f"expected {algebra.k} images, got {len(images)}")
        els = []
        for im in images:
            if isinstance(im, (str, TruncPoly)):
                im = algebra.normal_form(im)
            if im.algebra is not algebra:
                raise WeilError("image belongs to a different algebra")
            els.append(im)
        self.algebra = algebra
        self.images: tuple[Element, ...] = tuple(els)

    @classmethod
    def identity(cls, algebra: WeilAlgebra) -> "Endo":
        return cls(algebra, [algebra.var(i) for i in range(algebra.k)])

    @classmethod
    def diagonal(cls, algebra: WeilAlgebra, scales: Sequence) -> "Endo":
        return cls(algebra, [algebra.var(i) * s for i, s in enumerate(scales)])

    def __repr__(self):
        body = "; ".join(f"{n} -> {im}" for n, im in zip(self.algebra.ctx.names, self.images))
        return f"Endo({body})"

    @cached_property
    def is_well_defined(self) -> bool:
        # the variables are nilpotent, so their images must be too
        if any(im.coords[0] for im in self.images):
            return False
        imgs = [im.lift().terms for im in self.images]
        ctx = self.algebra.ctx
        for g in self.algebra.spec.generators:
            val = _substitute_terms(g.terms, imgs, ctx)
            if self.algebra.normal_form(TruncPoly(ctx, val)):
                return False
        return True

    def _require(self):
        if not self.is_well_defined:
            raise NotWellDefined(f"{self!r} does not preserve the ideal")

    @cached_property
    def matrix(self) -> list[list[Fraction]]:
        """dim x dim matrix; column j holds the image of basis[j]."""
        self._require()
        A = self.algebra
        vals = _monomial_images(A, [im.lift().terms for im in self.images])
        cols = [A.normal_form(TruncPoly(A.ctx, vals[m])).coords for m in A.basis]
        return linalg.transpose(cols)

    def apply(self, a: Element) -> Element:
        m = self.matrix
        return self.algebra.element(
            [sum((row[j] * a.coords[j] for j in range(len(row)) if row[j]), Fraction(0)) for row in m]
        )

    def compose(self, other: "Endo") -> "Endo":
        """``self ∘ other``: first ``other``, then ``self``."""
        return Endo(self.algebra, [self.apply(im) for im in other.images])

    @cached_property
    def _cotangent(self):
        """Basis indices of n / n^2 and the subspace n^2."""
        A = self.algebra
        n2 = A.nilradical_power(2)
        pivots = set(n2.pivots)
        reps = [j for j in range(1, A.dim) if j not in pivots]
        return reps, n2

    @cached_property
    def linear_part(self) -> list[list[Fraction]]:
        """Matrix of the induced map on n/n^2 (entry (i, j): coordinate i of image j)."""
        self._require()
        reps, n2 = self._cotangent
        cols = []
        for j in reps:
            image = n2.reduce(self.apply(self.algebra.basis_element(j)).coords)
            cols.append([image[i] for i in reps])
        return linalg.transpose(cols) if cols else []

    @cached_property
    def is_automorphism(self) -> bool:
        if not self.is_well_defined:
            return False
        return linalg.det(self.linear_part) != 0

    def is_bijective(self) -> bool:
        """Full-matrix check, independent of the linear-part shortcut."""
        return self.is_well_defined and linalg.det(self.matrix) != 0

    def _require_auto(self):
        if not self.is_automorphism:
            raise NotAnAutomorphism(f"{self!r} is not an automorphism")

    @property
    def determinant(self) -> Fraction:
        self._require_auto()
        return linalg.det(self.linear_part)

    @property
    def is_orientation_preserving(self) -> bool:
        return self.determinant > 0

    @property
    def is_unipotent(self) -> bool:
        self._require_auto()
        n = self.algebra.dim
        diff = [[(1 if i == j else 0) - self.matrix[i][j] for j in range(n)] for i in range(n)]
        return linalg.is_nilpotent(diff)

    def fixed_subspace(self) -> Subspace:
        n = self.algebra.dim
        rows = [[self.matrix[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        return linalg.kernel(rows, n)


def _substitute_terms(terms, images, ctx) -> dict:
    return substitute_terms(terms, images, ctx.r, ctx.one())


def is_well_defined(algebra: WeilAlgebra, e: Endo) -> bool:
    return e.is_well_defined


def linear_part(algebra: WeilAlgebra, e: Endo):
    return e.linear_part


def is_automorphism(algebra: WeilAlgebra, e: Endo) -> bool:
    return e.is_automorphism


def is_orientation_preserving(algebra: WeilAlgebra, e: Endo) -> bool:
    return e.is_orientation_preserving


def is_unipotent(algebra: WeilAlgebra, e: Endo) -> bool:
    return e.is_unipotent


def apply(algebra: WeilAlgebra, e: Endo, a: Element) -> Element:
    return e.apply(a)


def sign_diagonal_automorphisms(algebra: WeilAlgebra) -> list[Endo]:
    """Every x_i -> ±x_i that preserves the ideal; identity comes first."""
    out = []
    for signs in itertools.product((1, -1), repeat=algebra.k):
        e = Endo.diagonal(algebra, signs)
        if e.is_well_defined:
            e.signs = signs
            out.append(e)
    return out


def fixed_subspace(algebra: WeilAlgebra, endos: Iterable[Endo]) -> Subspace:
    result = linalg.full_space(algebra.dim)
    for e in endos:
        result = linalg.intersect(result, e.fixed_subspace())
    return result


def parse_map(algebra: WeilAlgebra, text: str) -> Endo:
    """Parse ``"x -> -x; y -> y + x^2"``; unmapped variables stay fixed."""
    names = algebra.ctx.names
    images: list = [algebra.var(i) for i in range(algebra.k)]
    seen = set()
    for part in filter(None, (p.strip() for p in text.split(";"))):
        lhs, sep, rhs = part.partition("->")
        lhs = lhs.strip()
        if not sep or lhs not in names:
            raise PolyError(f"bad map clause {part!r}; expected '<var> -> <poly>'")
        if lhs in seen:
            raise PolyError(f"variable {lhs} mapped twice")
        seen.add(lhs)
        terms = parse_terms(rhs, names)
        images[names.index(lhs)] = algebra.normal_form(
            TruncPoly(algebra.ctx, {m: c for m, c in terms.items() if sum(m) <= algebra.ctx.r})
        )
    return Endo(algebra, images)
