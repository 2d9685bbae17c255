"""Truncated polynomial arithmetic in D^r_k = Q[x_1..x_k] / m^(r+1).

Monomials are plain exponent tuples.  A :class:`TruncPoly` is a sparse map
from monomials of total degree <= r to nonzero :class:`~fractions.Fraction`
coefficients.  The term-level helpers (``mul_terms``, ``add_terms``,
``parse_terms``, ``render_terms``) are coefficient-generic so that
:mod:`weilab.aut_constraints` can reuse them with symbolic coefficients.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class PolyError(ValueError):
    """Base class for polynomial construction errors."""


class ContextMismatch(PolyError):
    pass


class PolySyntaxError(PolyError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class UnknownVariable(PolyError):
    pass


class DegreeTooHigh(PolyError):
    pass


def degree(m: Monomial) -> int:
    return sum(m)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


def monomials_of_degree(k: int, d: int) -> list[Monomial]:
    """All exponent tuples of length ``k`` summing to ``d``, lex-descending."""
    if k == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(k - 1, d - first):
            out.append((first,) + rest)
    return out


def display_key(m: Monomial):
    """Sort key for listings: ascending degree, then lex-descending."""
    return (sum(m), tuple(-e for e in m))


@dataclass(frozen=True)
class RingContext:
    """The ambient ring D^r_k with named variables.

    ``priority`` is a permutation of ``names`` that decides which monomial
    becomes a pivot when an ideal is row-reduced: the highest total degree
    wins, ties are broken lexicographically with variables ranked in
    ``priority`` order.  It defaults to the declared order.
    """

    names: tuple[str, ...]
    r: int
    priority: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise PolyError("at least one variable is required")
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        for n in names:
            if not _IDENT.fullmatch(n):
                raise PolyError(f"invalid variable name {n!r}")
        if self.r < 1:
            raise PolyError("truncation order must be >= 1")
        if self.priority is not None:
            prio = tuple(self.priority)
            if sorted(prio) != sorted(names):
                raise PolyError(f"priority {prio} is not a permutation of {names}")
            if prio == names:
                prio = None
            object.__setattr__(self, "priority", prio)

    @property
    def k(self) -> int:
        return len(self.names)

    @cached_property
    def _prio_index(self) -> tuple[int, ...]:
        prio = self.priority or self.names
        return tuple(self.names.index(n) for n in prio)

    def elimination_key(self, m: Monomial):
        return (-sum(m), tuple(-m[i] for i in self._prio_index))

    @cached_property
    def monomials(self) -> tuple[Monomial, ...]:
        """Coordinate order of the ambient space (pivot priority first)."""
        ms = [m for d in range(self.r + 1) for m in monomials_of_degree(self.k, d)]
        return tuple(sorted(ms, key=self.elimination_key))

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}

    @property
    def size(self) -> int:
        return len(self.monomials)

    def one(self) -> Monomial:
        return (0,) * self.k

    def var(self, i: int) -> Monomial:
        return tuple(1 if j == i else 0 for j in range(self.k))

    def render_monomial(self, m: Monomial) -> str:
        return render_monomial(m, self.names)


# ---------------------------------------------------------------------------
# coefficient-generic term helpers


def add_terms(a: Mapping, b: Mapping, scale=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + (c * scale if scale != 1 else c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def mul_terms(a: Mapping, b: Mapping, r: int | None) -> dict:
    """Convolution of two term maps, dropping monomials of degree > r."""
    out: dict = {}
    for ma, ca in a.items():
        da = sum(ma)
        for mb, cb in b.items():
            if r is not None and da + sum(mb) > r:
                continue
            m = monomial_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def render_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


def _render_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_terms(terms: Mapping, names: Sequence[str], key=display_key) -> str:
    """Render rational terms in the input grammar, ordered by ``key``."""
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, key=key):
        c = Fraction(terms[m])
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = render_monomial(m, names)
        if mono == "1":
            body = _render_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_render_coeff(a)}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # only trailing whitespace remains
            break
        start = mt.start(mt.lastindex)
        if mt.group(1) is not None:
            toks.append(("int", int(mt.group(1)), start))
        elif mt.group(2) is not None:
            toks.append(("name", mt.group(2), start))
        else:
            toks.append(("op", mt.group(3), start))
        pos = mt.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_terms(text: str, names: Sequence[str]) -> dict[Monomial, Fraction]:
    """Parse ``text`` into a term map over the variables ``names``.

    Grammar: ``poly := [sign] term (sign term)*``, ``term := [coeff '*']
    factor ('*' factor)* | coeff``, ``factor := var ['^' nat]``,
    ``coeff := int | int '/' nat``.
    """
    where = {n: i for i, n in enumerate(names)}
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind, value=None):
        nonlocal i
        t = toks[i]
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = t[1] if t[0] != "end" else "end of input"
            raise PolySyntaxError(f"expected {want!r}, found {got!r}", text, t[2])
        i += 1
        return t

    def parse_coeff() -> Fraction:
        num = take("int")[1]
        if peek()[0] == "op" and peek()[1] == "/":
            take("op", "/")
            den_tok = take("int")
            if den_tok[1] == 0:
                raise PolySyntaxError("zero denominator", text, den_tok[2])
            return Fraction(num, den_tok[1])
        return Fraction(num)

    def parse_factor(exps: list[int]):
        t = take("name")
        if t[1] not in where:
            raise UnknownVariable(f"unknown variable {t[1]!r} at position {t[2]}: {text!r}")
        e = 1
        if peek()[0] == "op" and peek()[1] == "^":
            take("op", "^")
            e = take("int")[1]
        exps[where[t[1]]] += e

    def parse_term():
        coeff = Fraction(1)
        exps = [0] * len(names)
        if peek()[0] == "int":
            coeff = parse_coeff()
            if not (peek()[0] == "op" and peek()[1] == "*"):
                return tuple(exps), coeff
            take("op", "*")
        parse_factor(exps)
        while peek()[0] == "op" and peek()[1] == "*":
            take("op", "*")
            parse_factor(exps)
        return tuple(exps), coeff

    terms: dict = {}
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take("op")[1] == "-" else 1
    while True:
        m, c = parse_term()
        terms = add_terms(terms, {m: sign * c})
        t = peek()
        if t[0] == "end":
            break
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if t[1] == "-" else 1
            i += 1
            continue
        raise PolySyntaxError(f"unexpected token {t[1]!r}", text, t[2])
    return terms


# ---------------------------------------------------------------------------


class TruncPoly:
    """An element of D^r_k.  Immutable; supports ``+ - *`` and ``==``."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != ctx.k:
                raise PolyError(f"monomial {m} has wrong arity for {ctx.k} variables")
            if sum(m) > ctx.r:
                continue
            c = Fraction(c)
            if c:
                clean[m] = c
        self.ctx = ctx
        self.terms = clean

    @classmethod
    def constant(cls, ctx: RingContext, c) -> "TruncPoly":
        return cls(ctx, {ctx.one(): c})

    @classmethod
    def variable(cls, ctx: RingContext, i: int) -> "TruncPoly":
        return cls(ctx, {ctx.var(i): 1})

    @classmethod
    def monomial(cls, ctx: RingContext, m: Monomial, c=1) -> "TruncPoly":
        return cls(ctx, {m: c})

    def _wrap(self, terms) -> "TruncPoly":
        p = TruncPoly.__new__(TruncPoly)
        p.ctx = self.ctx
        p.terms = terms
        return p

    def _coerce(self, other) -> "TruncPoly":
        if isinstance(other, TruncPoly):
            if other.ctx != self.ctx:
                raise ContextMismatch("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncPoly.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(mul_terms(self.terms, other.terms, self.ctx.r))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = TruncPoly.constant(self.ctx, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncPoly.constant(self.ctx, other)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"TruncPoly({str(self)!r})"

    def __str__(self):
        return render_terms(self.terms, self.ctx.names)

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeff(self.ctx.one())

    @property
    def min_degree(self) -> int | None:
        return min((sum(m) for m in self.terms), default=None)

    @property
    def max_degree(self) -> int | None:
        return max((sum(m) for m in self.terms), default=None)

    def to_vector(self) -> list[Fraction]:
        """Dense coordinates in the ambient monomial order."""
        v = [Fraction(0)] * self.ctx.size
        for m, c in self.terms.items():
            v[self.ctx.index[m]] = c
        return v

    @classmethod
    def from_vector(cls, ctx: RingContext, v: Sequence) -> "TruncPoly":
        return cls(ctx, {m: c for m, c in zip(ctx.monomials, v) if c})


def _check(p: TruncPoly, q: TruncPoly):
    if p.ctx != q.ctx:
        raise ContextMismatch("polynomials live in different rings")


def add(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    _check(p, q)
    return p + q


def mul_trunc(p: TruncPoly, q: TruncPoly) -> TruncPoly:
    _check(p, q)
    return p * q


def substitute_terms(terms: Mapping, images: Sequence[Mapping], r: int, one) -> dict:
    """Evaluate a term map at ``images`` (term maps) inside the truncated ring.

    Powers of each image are cached, so this is one truncated product per
    variable factor.  ``one`` is the constant monomial.
    """
    k = len(images)
    powers: list[list[dict]] = [[{one: 1}] for _ in range(k)]

    def power(i, e):
        ps = powers[i]
        while len(ps) <= e:
            ps.append(mul_terms(ps[-1], images[i], r))
        return ps[e]

    out: dict = {}
    for m, c in terms.items():
        acc = {one: c}
        for i, e in enumerate(m):
            if e:
                acc = mul_terms(acc, power(i, e), r)
                if not acc:
                    break
        out = add_terms(out, acc)
    return out


def substitute(p: TruncPoly, images: Sequence[TruncPoly]) -> TruncPoly:
    """``p(images[0], ..., images[k-1])`` computed with truncated products."""
    ctx = p.ctx
    if len(images) != ctx.k:
        raise PolyError(f"expected {ctx.k} images, got {len(images)}")
    for q in images:
        _check(p, q)
    return TruncPoly(ctx, substitute_terms(p.terms, [q.terms for q in images], ctx.r, ctx.one()))


def partial_derivative(p: TruncPoly, i: int) -> TruncPoly:
    """Formal derivative with respect to variable ``i`` (0-based)."""
    ctx = p.ctx
    if not 0 <= i < ctx.k:
        raise PolyError(f"variable index {i} out of range for {ctx.k} variables")
    out = {}
    for m, c in p.terms.items():
        if m[i]:
            dm = m[:i] + (m[i] - 1,) + m[i + 1:]
            out[dm] = c * m[i]
    return TruncPoly(ctx, out)


def parse_poly(text: str, ctx: RingContext) -> TruncPoly:
    """Parse ``text`` exactly; terms of degree > r are rejected, not dropped."""
    terms = parse_terms(text, ctx.names)
    for m in terms:
        if sum(m) > ctx.r:
            raise DegreeTooHigh(
                f"term {render_monomial(m, ctx.names)} has degree {sum(m)} > {ctx.r}"
            )
    return TruncPoly(ctx, terms)


def all_monomials(k: int, r: int) -> Iterable[Monomial]:
    return (m for m in itertools.product(range(r + 1), repeat=k) if sum(m) <= r)
