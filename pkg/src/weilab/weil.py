"""Weil algebras A = D^r_k / I and their structural invariants."""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg
from .linalg import Subspace
from .poly import (
    Monomial,
    PolyError,
    RingContext,
    TruncPoly,
    display_key,
    parse_poly,
    render_terms,
)

DEFAULT_DIM_CAP = 400


class WeilError(ValueError):
    pass


class NonLocal(WeilError):
    """The presentation does not define a local algebra."""


class SpecError(WeilError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


class DimensionCapExceeded(WeilError):
    pass


class EffectiveWidthWarning(UserWarning):
    """Some generator has a linear part, so the width is smaller than k."""


def dim_cap() -> int:
    env = os.environ.get("WEILAB_DIM_CAP")
    return int(env) if env else DEFAULT_DIM_CAP


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    context: RingContext
    generators: tuple[TruncPoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for j, g in enumerate(self.generators):
            if g.ctx != self.context:
                raise SpecError(f"generator {j + 1} lives in a different ring")
            if not g:
                raise SpecError(f"generator {j + 1} is zero")
            if g.constant_term:
                raise NonLocal(f"generator {j + 1} ({g}) has a nonzero constant term")

    @classmethod
    def from_strings(cls, names: Sequence[str] | str, r: int, gens: Iterable[str] = (),
                     name: str = "algebra", priority: Sequence[str] | str | None = None):
        if isinstance(names, str):
            names = names.split()
        if isinstance(priority, str):
            priority = priority.split()
        ctx = RingContext(tuple(names), r, tuple(priority) if priority else None)
        return cls(name, ctx, tuple(parse_poly(g, ctx) for g in gens))

    def to_text(self) -> str:
        lines = [f"vars: {' '.join(self.context.names)}", f"order: {self.context.r}"]
        if self.context.priority:
            lines.append(f"basis-order: {' '.join(self.context.priority)}")
        lines += [f"gen: {g}" for g in self.generators]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "vars": list(self.context.names),
            "order": self.context.r,
            "generators": [str(g) for g in self.generators],
        }
        if self.context.priority:
            d["basis_order"] = list(self.context.priority)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraSpec":
        return cls.from_strings(d["vars"], d["order"], d["generators"], d.get("name", "algebra"),
                                d.get("basis_order"))


def parse_spec(text: str, name: str = "algebra", path: str | None = None) -> AlgebraSpec:
    """Parse the plain-text algebra format (``vars:``, ``order:``, ``gen:``).

    ``basis-order:`` optionally reorders variable priority for pivot choice.
    """
    names = r = prio = None
    gens: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise SpecError(f"expected 'key: value', got {raw.strip()!r}", path, lineno)
        key, value = key.strip().lower(), value.strip()
        if key == "vars":
            names = (tuple(value.split()), lineno)
        elif key == "order":
            try:
                r = (int(value), lineno)
            except ValueError:
                raise SpecError(f"order must be an integer, got {value!r}", path, lineno) from None
        elif key == "basis-order":
            prio = (tuple(value.split()), lineno)
        elif key == "gen":
            gens.append((lineno, value))
        elif key == "name":
            name = value
        else:
            raise SpecError(f"unknown key {key!r}", path, lineno)
    if names is None:
        raise SpecError("missing 'vars:' line", path)
    if r is None:
        raise SpecError("missing 'order:' line", path)
    try:
        ctx = RingContext(names[0], r[0], prio[0] if prio else None)
    except PolyError as exc:
        raise SpecError(str(exc), path, (prio or r or names)[1]) from None
    polys = []
    for lineno, g in gens:
        try:
            polys.append(parse_poly(g, ctx))
        except PolyError as exc:
            raise SpecError(str(exc), path, lineno) from None
    try:
        return AlgebraSpec(name, ctx, tuple(polys))
    except WeilError as exc:
        bad = [ln for (ln, _), p in zip(gens, polys) if not p or p.constant_term]
        raise type(exc)(f"{path + ':' + str(bad[0]) + ': ' if path and bad else ''}{exc}") from None


def load_spec(path: str | os.PathLike) -> AlgebraSpec:
    p = Path(path)
    return parse_spec(p.read_text(), name=p.stem, path=str(p))


def ideal_closure(spec: AlgebraSpec) -> Subspace:
    """Span of all monomial multiples M * P_j truncated at degree r."""
    ctx = spec.context
    rows = []
    for g in spec.generators:
        low = g.min_degree
        for m in ctx.monomials:
            if sum(m) + low > ctx.r:
                continue
            rows.append((TruncPoly.monomial(ctx, m) * g).to_vector())
    return linalg.rref(rows, ctx.size)


class WeilAlgebra:
    """The quotient D^r_k / I with a standard-monomial basis.

    Basis monomials are listed by ascending degree, lex-descending within a
    degree; ``basis[0]`` is always the unit.  Multiplication is table-driven.
    """

    def __init__(self, spec: AlgebraSpec, max_dim: int | None = None):
        ctx = spec.context
        self.spec = spec
        self.ctx = ctx
        self.ideal = ideal_closure(spec)
        if self.ideal.contains(TruncPoly.constant(ctx, 1).to_vector()):
            raise NonLocal("1 lies in the ideal")
        std = [ctx.monomials[j] for j in linalg.standard_complement(self.ideal)]
        self.basis: tuple[Monomial, ...] = tuple(sorted(std, key=display_key))
        cap = dim_cap() if max_dim is None else max_dim
        if len(self.basis) > cap:
            raise DimensionCapExceeded(f"dim {len(self.basis)} exceeds cap {cap}")
        self.basis_index = {m: i for i, m in enumerate(self.basis)}
        self._nf_cache: dict[Monomial, dict[int, Fraction]] = {}
        for m in ctx.monomials:
            self._nf_cache[m] = self._monomial_nf(m)
        n = len(self.basis)
        self.table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i in range(n):
            for j in range(i, n):
                prod = tuple(a + b for a, b in zip(self.basis[i], self.basis[j]))
                self.table[i, j] = self._nf_cache.get(prod, {})
        if not self.ideal_in_m2:
            warnings.warn(
                f"{spec.name}: ideal is not contained in m^2, effective width {self.width} < {ctx.k}",
                EffectiveWidthWarning,
                stacklevel=2,
            )

    def _monomial_nf(self, m: Monomial) -> dict[int, Fraction]:
        if m in self.basis_index:
            return {self.basis_index[m]: Fraction(1)}
        col = self.ctx.index[m]
        # pivot monomial: m = m - row (mod I), and the row's other
        # nonzero entries are all standard monomials
        row = self.ideal.rows[self.ideal.pivots.index(col)]
        out = {}
        for j, c in enumerate(row):
            if c and j != col:
                out[self.basis_index[self.ctx.monomials[j]]] = -c
        return out

    # -- elements -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def k(self) -> int:
        return self.ctx.k

    def element(self, coords: Sequence) -> "Element":
        return Element(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "Element":
        return self.element([0] * self.dim)

    def one(self) -> "Element":
        return self.basis_element(0)

    def basis_element(self, i: int) -> "Element":
        return self.element(linalg.unit_vector(self.dim, i))

    def var(self, i: int) -> "Element":
        return self.normal_form(TruncPoly.variable(self.ctx, i))

    def normal_form(self, p: TruncPoly | str) -> "Element":
        if isinstance(p, str):
            p = parse_poly(p, self.ctx)
        if p.ctx != self.ctx:
            raise WeilError("polynomial lives in a different ring")
        v = [Fraction(0)] * self.dim
        for m, c in p.terms.items():
            for j, a in self._nf_cache[m].items():
                v[j] += c * a
        return Element(self, tuple(v))

    def monomial_class(self, m: Monomial) -> "Element":
        v = [Fraction(0)] * self.dim
        for j, a in self._nf_cache.get(tuple(m), {}).items():
            v[j] = a
        return Element(self, tuple(v))

    def lift(self, coords: Sequence) -> TruncPoly:
        """The polynomial in standard monomials with these coordinates."""
        return TruncPoly(self.ctx, {m: c for m, c in zip(self.basis, coords) if c})

    def render(self, coords: Sequence) -> str:
        return render_terms({m: Fraction(c) for m, c in zip(self.basis, coords) if c},
                            self.ctx.names, key=self._render_key)

    def _render_key(self, m):
        return self.basis_index[m]

    def render_subspace(self, s: Subspace) -> list[str]:
        return [self.render(row) for row in s.rows]

    def multiply(self, a: "Element", b: "Element") -> "Element":
        if a.algebra is not self or b.algebra is not self:
            raise WeilError("elements belong to different algebras")
        v = [Fraction(0)] * self.dim
        ia = [(i, c) for i, c in enumerate(a.coords) if c]
        ib = [(j, c) for j, c in enumerate(b.coords) if c]
        for i, ca in ia:
            for j, cb in ib:
                entry = self.table[(i, j) if i <= j else (j, i)]
                if entry:
                    f = ca * cb
                    for t, s in entry.items():
                        v[t] += f * s
        return Element(self, tuple(v))

    def mult_matrix(self, a: "Element") -> list[list[Fraction]]:
        """Matrix of b -> a*b; column j is a * basis[j]."""
        cols = [self.multiply(a, self.basis_element(j)).coords for j in range(self.dim)]
        return linalg.transpose(cols)

    # -- invariants -----------------------------------------------------

    @cached_property
    def ideal_in_m2(self) -> bool:
        linear = [j for j, m in enumerate(self.ctx.monomials) if sum(m) == 1]
        return not any(row[j] for row in self.ideal.rows for j in linear)

    @cached_property
    def nilradical(self) -> Subspace:
        return linalg.rref([linalg.unit_vector(self.dim, i) for i in range(1, self.dim)], self.dim)

    def nilradical_power(self, n: int) -> Subspace:
        if n < 1:
            raise ValueError("power must be >= 1")
        return self._powers(n)[n - 1]

    def _powers(self, n: int) -> list[Subspace]:
        powers = self.__dict__.setdefault("_power_cache", [self.nilradical])
        variables = [self.var(i) for i in range(self.k)]
        while len(powers) < n:
            prev = powers[-1]
            if prev.is_zero():
                powers.append(prev)
                continue
            rows = []
            for row in prev.rows:
                e = self.element(row)
                rows.extend(self.multiply(x, e).coords for x in variables)
            powers.append(linalg.rref(rows, self.dim))
        return powers

    @cached_property
    def order(self) -> int:
        n = 1
        while not self.nilradical_power(n + 1).is_zero():
            n += 1
        return n if not self.nilradical.is_zero() else 0

    @cached_property
    def width(self) -> int:
        return self.nilradical_power(1).dim - self.nilradical_power(2).dim

    @cached_property
    def socle(self) -> Subspace:
        rows = []
        for i in range(self.k):
            rows.extend(self.mult_matrix(self.var(i)))
        return linalg.kernel(rows, self.dim)

    @cached_property
    def ma_subalgebra(self) -> Subspace:
        return linalg.rref([self.one().coords, *self.socle.rows], self.dim)

    def unit_span(self) -> Subspace:
        return linalg.rref([self.one().coords], self.dim)

    def __repr__(self):
        return f"WeilAlgebra({self.name!r}, dim={self.dim})"


@dataclass(frozen=True)
class Element:
    algebra: WeilAlgebra = field(compare=False, repr=False)
    coords: tuple[Fraction, ...]

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: "Element") -> "Element":
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        c = Fraction(other)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.coords)

    def lift(self) -> TruncPoly:
        return self.algebra.lift(self.coords)

    def __str__(self):
        return self.algebra.render(self.coords)


def build(spec: AlgebraSpec, max_dim: int | None = None) -> WeilAlgebra:
    return WeilAlgebra(spec, max_dim=max_dim)


def normal_form(a: WeilAlgebra, p: TruncPoly) -> Element:
    return a.normal_form(p)


def multiply(a: WeilAlgebra, x: Element, y: Element) -> Element:
    return a.multiply(x, y)


def nilradical_power(a: WeilAlgebra, n: int) -> Subspace:
    return a.nilradical_power(n)


def order(a: WeilAlgebra) -> int:
    return a.order


def width(a: WeilAlgebra) -> int:
    return a.width


def socle(a: WeilAlgebra) -> Subspace:
    return a.socle


def ma_subalgebra(a: WeilAlgebra) -> Subspace:
    return a.ma_subalgebra


def truncated_dimension(k: int, r: int) -> int:
    return comb(k + r, k)
