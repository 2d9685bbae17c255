"""Slow, independent reference computations used to cross-check weilab.

Nothing here imports weilab's algebra code.  Polynomials are parsed by
sympy, and elimination uses a small sparse Gaussian routine written
separately from weilab.linalg.  The oracles only consume monomial
tuples and spec strings, so a bug shared with the package would have to be
a bug in the mathematics, not in the code.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def all_monomials(k, r):
    return [m for m in itertools.product(range(r + 1), repeat=k) if sum(m) <= r]


def parse(text, names):
    syms = sympy.symbols(names)
    expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(names, syms)))
    if expr == 0:
        return {}
    poly = sympy.Poly(expr, *syms)
    return {m: Fraction(int(c.p), int(c.q)) for m, c in poly.as_dict().items()}


def mul(p, q, r):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            m = tuple(x + y for x, y in zip(a, b))
            if sum(m) <= r:
                out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


class Eliminator:
    """Incremental sparse row reduction; rows are {column: Fraction}."""

    def __init__(self, order=None):
        self.rows = {}  # pivot column -> row with coefficient 1 at the pivot
        self.order = order  # column -> rank; lower ranks are pivoted first

    def _pivot(self, row):
        if self.order is None:
            return min(row)
        return min(row, key=self.order.__getitem__)

    def reduce(self, row):
        row = {c: v for c, v in row.items() if v}
        changed = True
        while changed:
            changed = False
            for c in list(row):
                if c in self.rows and c in row:
                    f = row[c]
                    for cc, vv in self.rows[c].items():
                        nv = row.get(cc, 0) - f * vv
                        if nv:
                            row[cc] = nv
                        else:
                            row.pop(cc, None)
                    changed = True
        return row

    def add(self, row):
        row = self.reduce(row)
        if not row:
            return False
        p = self._pivot(row)
        inv = 1 / row[p]
        row = {c: v * inv for c, v in row.items()}
        for q, other in self.rows.items():
            if p in other:
                f = other[p]
                for cc, vv in row.items():
                    nv = other.get(cc, 0) - f * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self.rows[p] = row
        return True

    @property
    def rank(self):
        return len(self.rows)


def nullspace(rows, n):
    """Basis of {v : row . v = 0 for all rows}, one vector per free column."""
    e = Eliminator()
    for row in rows:
        e.add({j: Fraction(v) for j, v in enumerate(row) if v} if isinstance(row, list) else row)
    free = [j for j in range(n) if j not in e.rows]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for p, row in e.rows.items():
            v[p] = -row.get(f, 0)
        out.append(v)
    return out


def rank(vectors):
    e = Eliminator()
    for v in vectors:
        e.add({j: Fraction(c) for j, c in enumerate(v) if c})
    return e.rank


class NaiveQuotient:
    """D^r_k / I with a *given* monomial basis, checked to be a complement."""

    def __init__(self, names, r, gens, basis):
        self.names, self.r, self.k = list(names), r, len(names)
        self.monos = all_monomials(self.k, r)
        self.basis = [tuple(b) for b in basis]
        self.bidx = {m: i for i, m in enumerate(self.basis)}
        gens = [parse(g, self.names) for g in gens]
        # non-basis monomials are pivoted first, so reduction leaves basis support only
        order = {m: (m in self.bidx, i) for i, m in enumerate(self.monos)}
        self.ideal = Eliminator(order)
        for g in gens:
            for m in self.monos:
                self.ideal.add(mul({m: Fraction(1)}, g, r))
        self.ideal_dim = self.ideal.rank
        self.is_complement = (
            len(self.monos) - self.ideal_dim == len(self.basis)
            and all(p not in self.bidx for p in self.ideal.rows)
        )

    @property
    def dim(self):
        return len(self.basis)

    def coords(self, poly):
        red = self.ideal.reduce({m: c for m, c in poly.items() if sum(m) <= self.r})
        v = [Fraction(0)] * self.dim
        for m, c in red.items():
            v[self.bidx[m]] = c
        return v

    def in_ideal(self, poly):
        return not any(self.coords(poly))

    def product(self, i, j):
        return self.coords(mul({self.basis[i]: Fraction(1)}, {self.basis[j]: Fraction(1)}, self.r))

    def structure(self):
        n = self.dim
        return [[self.product(i, j) for j in range(n)] for i in range(n)]


def derivation_matrices(q: NaiveQuotient):
    """All dim x dim matrices L with L(ab) = aL(b) + L(a)b on basis pairs."""
    n = q.dim
    table = q.structure()
    rows = []
    for t in range(n):
        rows.append({t * n + 0: Fraction(1)})
    for i in range(n):
        for j in range(i, n):
            for t in range(n):
                row = {}
                for s in range(n):
                    # coordinate t of L(b_i b_j) - b_i L(b_j) - L(b_i) b_j
                    if table[i][j][s]:
                        row[t * n + s] = row.get(t * n + s, 0) + table[i][j][s]
                    if table[i][s][t]:
                        row[s * n + j] = row.get(s * n + j, 0) - table[i][s][t]
                    if table[j][s][t]:
                        row[s * n + i] = row.get(s * n + i, 0) - table[j][s][t]
                row = {c: v for c, v in row.items() if v}
                if row:
                    rows.append(row)
    sol = nullspace(rows, n * n)
    return [[[v[t * n + s] for s in range(n)] for t in range(n)] for v in sol]


def joint_kernel(mats, n):
    rows = [row for m in mats for row in m]
    return nullspace(rows, n)


def sign_fixed_kernel(q: NaiveQuotient, gens):
    """Joint kernel of Der(A) cut down by every well-defined x_i -> ±x_i."""
    n = q.dim
    mats = derivation_matrices(q)
    rows = [row for m in mats for row in m]
    parsed = [parse(g, q.names) for g in gens]
    for signs in itertools.product((1, -1), repeat=q.k):
        ok = True
        for g in parsed:
            image = {m: c * _sign(signs, m) for m, c in g.items()}
            if not q.in_ideal(image):
                ok = False
                break
        if ok:
            for j, m in enumerate(q.basis):
                if _sign(signs, m) == -1:
                    rows.append([Fraction(1) if s == j else Fraction(0) for s in range(n)])
    return nullspace(rows, n), len(mats)


def _sign(signs, m):
    out = 1
    for s, e in zip(signs, m):
        out *= s ** e
    return out


def is_graded(q: NaiveQuotient, gens, w):
    """Every weighted-homogeneous piece of every m*g lies in the ideal."""
    parsed = [parse(g, q.names) for g in gens]
    for g in parsed:
        for m in q.monos:
            f = mul({m: Fraction(1)}, g, q.r)
            pieces = {}
            for mono, c in f.items():
                pieces.setdefault(sum(a * b for a, b in zip(w, mono)), {})[mono] = c
            if len(pieces) > 1 and not all(q.in_ideal(p) for p in pieces.values()):
                return False
    return True


def smallest_weights(q: NaiveQuotient, gens, bound):
    for w in itertools.product(range(1, bound + 1), repeat=q.k):
        if is_graded(q, gens, w):
            return w
    return None


def monomial_tuple(text, names):
    """'x^2*y' -> (2, 1); '1' -> (0, ..., 0)."""
    if text == "1":
        return (0,) * len(names)
    (m, c), = parse(text, names).items()
    assert c == 1
    return m
