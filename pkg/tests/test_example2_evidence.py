"""Why x^2 cannot be a fixed point of example 2 (see the red acceptance item).

D with D(x) = x^2, D(y) = 0, D(z) = 2/3*x*z is a derivation of the algebra,
so phi = exp(D) is an automorphism.  phi moves x^2, while x^2 + z^3 stays
fixed.  Both facts are checked here with sympy's Groebner bases, which share
no code with weilab.
"""
import itertools
from fractions import Fraction

import pytest
import sympy

from conftest import EX2_GENS
from weilab.autos import Endo
from weilab.derivations import Derivation

x, y, z = sympy.symbols("x y z")
R = 4


@pytest.fixture(scope="module")
def groebner():
    gens = [sympy.sympify(g.replace("^", "**")) for g in EX2_GENS]
    high = [x ** a * y ** b * z ** c for a, b, c in itertools.product(range(R + 2), repeat=3) if a + b + c == R + 1]
    return sympy.groebner(gens + high, x, y, z, order="grevlex", domain="QQ")


def D(f):
    return sympy.expand(sympy.diff(f, x) * x ** 2 + sympy.diff(f, z) * sympy.Rational(2, 3) * x * z)


def exp_D(f):
    out, term = 0, f
    for n in range(R + 1):
        out += term / sympy.factorial(n)
        term = D(term)
    return sympy.expand(out)


def reduce(G, f):
    return G.reduce(sympy.expand(f))[1]


def phi(f):
    return sympy.expand(f.subs({x: exp_D(x), y: exp_D(y), z: exp_D(z)}, simultaneous=True))


def test_D_is_a_derivation(groebner):
    for g in groebner.exprs:
        assert reduce(groebner, D(g)) == 0


def test_exp_D_preserves_the_ideal(groebner):
    for g in groebner.exprs:
        assert reduce(groebner, phi(g)) == 0


def test_exp_D_moves_x_squared(groebner):
    assert reduce(groebner, phi(x ** 2) - x ** 2) != 0
    assert reduce(groebner, D(x ** 2)) != 0


def test_exp_D_fixes_combination(groebner):
    for f in (x ** 2 + z ** 3, x ** 2 * y, x ** 2 * z, x * y ** 2, y ** 2 * z ** 2):
        assert reduce(groebner, phi(f) - f) == 0


def test_same_automorphism_inside_weilab(ex2):
    d = Derivation(ex2, [ex2.normal_form("x^2"), ex2.zero(), ex2.normal_form("2/3*x*z")])
    images = []
    for i in range(3):
        v, term, fact = ex2.zero(), ex2.var(i), 1
        for n in range(R + 1):
            v = v + term * Fraction(1, fact)
            term = d(term)
            fact *= n + 1
        images.append(v)
    e = Endo(ex2, images)
    assert e.is_automorphism
    x2 = ex2.normal_form("x^2")
    assert e.apply(x2) != x2
    assert e.apply(ex2.normal_form("x^2 + z^3")) == ex2.normal_form("x^2 + z^3")
