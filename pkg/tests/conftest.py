import sys
import warnings
from pathlib import Path

import pytest

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
sys.path.insert(0, str(HERE))

from weilab.weil import AlgebraSpec, EffectiveWidthWarning, WeilAlgebra, load_spec  # noqa: E402

EX1_BASIS = "1 x y x^2 x*y y^2 x^3 x^2*y y^3".split()
EX2_BASIS = ("1 x y z x^2 x*y y^2 x*z y*z z^2 x^2*y x*y^2 x^2*z y^2*z x*z^2 y*z^2 z^3 "
             "y^2*z^2").split()
EX2_GENS = ["x^2 + y^3 + z^3", "x^3 + y^3 + z^4", "x*y*z"]


def build(names, r, gens, priority=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EffectiveWidthWarning)
        return WeilAlgebra(AlgebraSpec.from_strings(names, r, gens, priority=priority))


def load(name):
    return WeilAlgebra(load_spec(DATA / f"{name}.weil"))


@pytest.fixture(scope="session")
def ex1():
    return load("example1")


@pytest.fixture(scope="session")
def ex2():
    return load("example2")


@pytest.fixture(scope="session")
def counterexample():
    return load("counterexample")


@pytest.fixture(scope="session")
def nontrivial():
    return load("nontrivial")


@pytest.fixture(scope="session")
def nondwindlable():
    return load("nondwindlable")


def example1_family(rng, cs, epsilon=None):
    """A random member of the hand-derived automorphism family of example 1:

        x -> e*x + C*x^2 + D*x*y + F*x^3 + G*x^2*y + H*y^3
        y -> y + K*x^2 + L*x*y + M*y^2 + N*x^3 + O*x^2*y + P*y^3

    with e = +-1 and the other letters free.  Returned as an assignment of
    the general ansatz unknowns.
    """
    from weilab.aut_constraints import random_rational

    e = epsilon if epsilon is not None else rng.choice((1, -1))
    free = lambda: random_rational(rng)  # noqa: E731
    values = {
        "a_1_x1": e, "a_1_y1": 0, "a_1_x2": free(), "a_1_x1_y1": free(), "a_1_y2": 0,
        "a_1_x3": free(), "a_1_x2_y1": free(), "a_1_y3": free(),
        "a_2_x1": 0, "a_2_y1": 1, "a_2_x2": free(), "a_2_x1_y1": free(), "a_2_y2": free(),
        "a_2_x3": free(), "a_2_x2_y1": free(), "a_2_y3": free(),
    }
    assert set(values) == set(cs.unknowns)
    return values


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
