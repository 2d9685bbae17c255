"""Automorphism ansatz with unknown coefficients and its constraint system.

The image of each variable is a general combination of the nilradical
basis monomials with fresh unknown coefficients.  Substituting the ansatz
into every relation and reducing modulo the ideal gives polynomial
equations in the unknowns.  Nothing here solves those equations; candidate
solutions are checked with :func:`verify_assignment`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import linalg
from .autos import Endo
from .linalg import Subspace
from .poly import (
    add_terms,
    monomials_of_degree,
    mul_terms,
    parse_terms,
    render_terms,
    substitute_terms,
)
from .weil import Element, WeilAlgebra, WeilError


class MissingUnknowns(WeilError):
    pass


def _unknown_key(m):
    return (-sum(m), tuple(-e for e in m))


class UnknownPoly:
    """Polynomial over Q in ``n`` unknown scalars (exponent tuple -> Fraction)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms = {tuple(m): Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def symbol(cls, n: int, i: int) -> "UnknownPoly":
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): 1})

    @classmethod
    def const(cls, n: int, c) -> "UnknownPoly":
        return cls(n, {(0,) * n: c})

    def _wrap(self, terms):
        p = UnknownPoly.__new__(UnknownPoly)
        p.n = self.n
        p.terms = terms
        return p

    def _lift(self, other):
        if isinstance(other, UnknownPoly):
            return other
        return UnknownPoly.const(self.n, other)

    def __add__(self, other):
        return self._wrap(add_terms(self.terms, self._lift(other).terms))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(add_terms(self.terms, self._lift(other).terms, -1))

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UnknownPoly):
            return self._wrap(mul_terms(self.terms, other.terms, None))
        c = Fraction(other)
        if not c:
            return self._wrap({})
        return self._wrap({m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, UnknownPoly):
            other = self._lift(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    t *= Fraction(values[i]) ** e
            total += t
        return total

    def partial_evaluate(self, values: Mapping[int, Fraction]) -> "UnknownPoly":
        out: dict = {}
        for m, c in self.terms.items():
            t = c
            rest = list(m)
            for i, v in values.items():
                if m[i]:
                    t *= Fraction(v) ** m[i]
                    rest[i] = 0
            out = add_terms(out, {tuple(rest): t})
        return self._wrap(out)

    def extend(self, n: int) -> "UnknownPoly":
        pad = (0,) * (n - self.n)
        p = UnknownPoly(n)
        p.terms = {m + pad: c for m, c in self.terms.items()}
        return p

    def render(self, names: Sequence[str]) -> str:
        return render_terms(self.terms, names, key=_unknown_key)

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "UnknownPoly":
        return cls(len(names), parse_terms(text, names))

    def __repr__(self):
        return f"UnknownPoly({self.render([f'u{i}' for i in range(self.n)])!r})"


def unknown_name(algebra: WeilAlgebra, i: int, m) -> str:
    tag = "_".join(f"{v}{e}" for v, e in zip(algebra.ctx.names, m) if e)
    return f"a_{i + 1}_{tag}"


@dataclass
class SymbolicEndo:
    algebra: WeilAlgebra
    unknowns: list[str]
    # images[i] maps basis monomial -> UnknownPoly coefficient
    images: list[dict]
    # index of the unknown for (variable i, basis monomial m)
    slots: dict[tuple[int, tuple], int]

    @property
    def linear_slots(self) -> dict[tuple[int, tuple], int]:
        return {key: idx for key, idx in self.slots.items() if sum(key[1]) == 1}


def general_ansatz(algebra: WeilAlgebra) -> SymbolicEndo:
    """x_i -> sum over nilradical basis monomials b of a_{i,b} * b."""
    nil = [m for m in algebra.basis if sum(m)]
    names, slots = [], {}
    for i in range(algebra.k):
        for m in nil:
            slots[i, m] = len(names)
            names.append(unknown_name(algebra, i, m))
    n = len(names)
    images = [{m: UnknownPoly.symbol(n, slots[i, m]) for m in nil} for i in range(algebra.k)]
    return SymbolicEndo(algebra, names, images, slots)


def _reduce(algebra: WeilAlgebra, terms: Mapping, n: int) -> list[UnknownPoly]:
    """Normal-form coordinates of a term map with UnknownPoly coefficients."""
    coords = [UnknownPoly(n) for _ in range(algebra.dim)]
    for m, c in terms.items():
        if sum(m) > algebra.ctx.r:
            continue
        for j, a in algebra._nf_cache[m].items():
            coords[j] = coords[j] + c * a
    return coords


@dataclass
class ConstraintSystem:
    algebra: WeilAlgebra
    ansatz: SymbolicEndo
    equations: list[UnknownPoly]

    @property
    def unknowns(self) -> list[str]:
        return self.ansatz.unknowns

    @property
    def linear_unknowns(self) -> list[str]:
        return [self.unknowns[i] for i in self.ansatz.linear_slots.values()]

    def export(self) -> str:
        return "".join(f"0 = {eq.render(self.unknowns)}\n" for eq in self.equations)


def _relations(algebra: WeilAlgebra) -> list[dict]:
    ctx = algebra.ctx
    rels = [dict(g.terms) for g in algebra.spec.generators]
    rels += [{m: Fraction(1)} for m in monomials_of_degree(ctx.k, ctx.r + 1)]
    return rels


def generate_constraints(algebra: WeilAlgebra, ansatz: SymbolicEndo | None = None) -> ConstraintSystem:
    ansatz = ansatz or general_ansatz(algebra)
    n = len(ansatz.unknowns)
    ctx = algebra.ctx
    equations = []
    for rel in _relations(algebra):
        val = substitute_terms(rel, ansatz.images, ctx.r, ctx.one())
        equations.extend(c for c in _reduce(algebra, val, n) if c)
    return ConstraintSystem(algebra, ansatz, equations)


def _values(cs: ConstraintSystem, assignment: Mapping[str, object]) -> list[Fraction]:
    missing = [u for u in cs.unknowns if u not in assignment]
    if missing:
        raise MissingUnknowns(f"assignment is missing {len(missing)} unknowns, e.g. {missing[0]}")
    return [Fraction(assignment[u]) for u in cs.unknowns]


def endo_from_assignment(cs: ConstraintSystem, assignment: Mapping[str, object]) -> Endo:
    A = cs.algebra
    vals = _values(cs, assignment)
    images = []
    for i in range(A.k):
        coords = [Fraction(0)] * A.dim
        for m in A.basis[1:]:
            coords[A.basis_index[m]] = vals[cs.ansatz.slots[i, m]]
        images.append(A.element(coords))
    return Endo(A, images)


def verify_assignment(cs: ConstraintSystem, assignment: Mapping[str, object]) -> bool:
    """Every equation vanishes and the linear part is non-singular."""
    vals = _values(cs, assignment)
    if any(eq.evaluate(vals) for eq in cs.equations):
        return False
    endo = endo_from_assignment(cs, assignment)
    return linalg.det(endo.linear_part) != 0


def assignment_from_images(cs: ConstraintSystem, images: Sequence) -> dict[str, Fraction]:
    """Read the ansatz coefficients off explicit image polynomials."""
    A = cs.algebra
    out = {}
    for i, im in enumerate(images):
        el = im if isinstance(im, Element) else A.normal_form(im)
        for m in A.basis[1:]:
            out[cs.unknowns[cs.ansatz.slots[i, m]]] = el.coords[A.basis_index[m]]
    return out


@dataclass
class FixedPointSystem:
    names: list[str]
    equations: list[UnknownPoly]
    n_ansatz: int

    def export(self) -> str:
        return "".join(f"0 = {eq.render(self.names)}\n" for eq in self.equations)


def fixed_point_equations(algebra: WeilAlgebra, cs: ConstraintSystem) -> FixedPointSystem:
    """Coordinates of phi(sum k_j b_j) - sum k_j b_j for the ansatz phi."""
    A = algebra
    n_a = len(cs.unknowns)
    names = list(cs.unknowns) + [f"k_{j + 1}" for j in range(A.dim)]
    n = len(names)
    ctx = A.ctx
    images = [{m: c.extend(n) for m, c in im.items()} for im in cs.ansatz.images]
    coords = [UnknownPoly(n) for _ in range(A.dim)]
    for j, b in enumerate(A.basis):
        kj = UnknownPoly.symbol(n, n_a + j)
        val = substitute_terms({b: Fraction(1)}, images, ctx.r, ctx.one())
        for t, c in enumerate(_reduce(A, val, n)):
            if c:
                coords[t] = coords[t] + c * kj
        coords[j] = coords[j] - kj
    return FixedPointSystem(names, coords, n_a)


def fixed_space_over_family(
    algebra: WeilAlgebra,
    fps: FixedPointSystem,
    sample: Callable[[random.Random], Mapping[str, object]],
    seed: int = 0,
    stable_rounds: int = 3,
    max_rounds: int = 200,
) -> Subspace:
    """Intersect the fixed conditions over random members of a verified family.

    ``sample`` returns an assignment of the ansatz unknowns.  Stops once the
    intersection has not shrunk for ``stable_rounds`` consecutive samples.
    """
    rng = random.Random(seed)
    n_a, dim = fps.n_ansatz, algebra.dim
    space = linalg.full_space(dim)
    unchanged = 0
    for _ in range(max_rounds):
        assignment = sample(rng)
        vals = {i: Fraction(assignment[name]) for i, name in enumerate(fps.names[:n_a])}
        rows = []
        for eq in fps.equations:
            lin = eq.partial_evaluate(vals)
            row = [Fraction(0)] * dim
            for m, c in lin.terms.items():
                row[m.index(1, n_a) - n_a] = c
            rows.append(row)
        new = linalg.intersect(space, linalg.kernel(rows, dim))
        if new == space:
            unchanged += 1
            if unchanged >= stable_rounds:
                break
        else:
            unchanged = 0
            space = new
    return space


def random_rational(rng: random.Random, lo: int = -10, hi: int = 10) -> Fraction:
    den = rng.randint(1, 5)
    return Fraction(rng.randint(lo * den, hi * den), den)
