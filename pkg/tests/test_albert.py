import time
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from luinv import linalg
from luinv.bloch import BlochTriple
from luinv.harness import paper_fixture, paper_triple
from luinv.invariants import MultiPoly, Outcome, albert_check, albert_polynomial
from luinv.scalarfield import exact

from conftest import matrix_to_sympy, random_rational_triple, scalar_to_sympy

x, x1, x2, x3 = sympy.symbols("x x1 x2 x3")


def oracle(t):
    """Determinant computed by sympy from the definition."""
    u, v, W = matrix_to_sympy(t.u), matrix_to_sympy(t.v), matrix_to_sympy(t.W)
    m = u.shape[0]
    M = x * sympy.eye(m) - x1 * W * W.T - x2 * u * u.T - x3 * W * v * u.T
    return sympy.expand(M.det(method="berkowitz"))


def to_sympy(p: MultiPoly):
    total = sympy.Integer(0)
    for (a, b, c, d), coeff in p.terms.items():
        total += scalar_to_sympy(coeff) * x**a * x1**b * x2**c * x3**d
    return sympy.expand(total)


def same(p, expr):
    return sympy.simplify(to_sympy(p) - expr) == 0


def test_zero_triple_gives_power_of_x():
    p = albert_polynomial(BlochTriple.zero(2, 2))
    assert str(p) == "x^3"
    assert str(albert_polynomial(BlochTriple.zero(3, 3))) == "x^8"


def test_single_vector():
    e1 = linalg.exact_array([1, 0, 0])
    t = BlochTriple(e1, linalg.zeros(3), linalg.zeros((3, 3)))
    assert same(albert_polynomial(t), x**2 * (x - x2))
    u = linalg.exact_array([Fraction(1, 2), Fraction(1, 3), 0])
    t = BlochTriple(u, linalg.zeros(3), linalg.zeros((3, 3)))
    assert same(albert_polynomial(t), x**2 * (x - sympy.Rational(13, 36) * x2))


def test_homogeneous_of_degree_m(rng):
    p = albert_polynomial(random_rational_triple(rng, 3, 8))
    assert all(sum(e) == 3 for e in p.terms)
    assert p.coefficient((3, 0, 0, 0)) == 1


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3)])
def test_matches_sympy_determinant(d1, d2, rng):
    for _ in range(3):
        t = random_rational_triple(rng, d1 * d1 - 1, d2 * d2 - 1)
        assert same(albert_polynomial(t), oracle(t))


@pytest.mark.parametrize("p", ["0", "1/2", "1"])
def test_example_triple_against_sympy(p):
    t = paper_triple(p)
    assert same(albert_polynomial(t), oracle(t))


def test_example_pair_agrees():
    for p in ("0", "1/4", "1/2", "1"):
        f = paper_fixture(p)
        assert albert_polynomial(f.triple) == albert_polynomial(f.triple_prime)
        assert albert_check(f.triple, f.triple_prime).outcome is Outcome.CONSISTENT


def test_specialises_to_charpoly_of_gram(rng):
    t = random_rational_triple(rng, 3, 3)
    p = albert_polynomial(t)
    G = matrix_to_sympy(t.W) * matrix_to_sympy(t.W).T
    cp = G.charpoly(x).as_expr()
    special = sum(
        (scalar_to_sympy(c) * x**a for (a, b, cc, d), c in p.terms.items() if cc == 0 and d == 0),
        sympy.Integer(0),
    )
    assert sympy.expand(special - cp) == 0
    # substitution x1 = 1, x2 = x3 = 0 as a numeric spot check
    for xv in (0, 1, 3):
        val = p.substitute([exact(xv), exact(1), exact(0), exact(0)])
        assert scalar_to_sympy(val) == cp.subs(x, xv)


def test_scaled_W_is_refuted():
    t = paper_triple("1/2")
    v = albert_check(t, t.replace(W=t.W * 2))
    assert v.outcome is Outcome.INEQUIVALENT
    assert v.witness.startswith("coefficient of ")


def test_never_upgrades_to_equivalent():
    t = paper_triple("1/3")
    assert albert_check(t, t).outcome is Outcome.CONSISTENT


def test_shape_mismatch():
    with pytest.raises(ValueError):
        albert_check(BlochTriple.zero(2, 2), BlochTriple.zero(2, 3))
    with pytest.raises(ValueError):
        albert_polynomial(BlochTriple.zero(2, 2), strategy="nope")


@given(st.integers(0, 2**32))
def test_expand_equals_interpolate_qubits(seed):
    t = random_rational_triple(np.random.default_rng(seed), 3, 3)
    assert albert_polynomial(t, "expand") == albert_polynomial(t, "interpolate")


def test_expand_equals_interpolate_qutrits(rng):
    t = random_rational_triple(rng, 8, 8, density=0.4)
    assert albert_polynomial(t, "expand") == albert_polynomial(t, "interpolate")


def test_example_qutrit_size_is_fast():
    t = paper_triple("1/2")
    start = time.perf_counter()
    albert_polynomial(t)
    assert time.perf_counter() - start < 10.0


def test_float_backend_agrees(rng):
    t = random_rational_triple(rng, 3, 8)
    exact_poly = albert_polynomial(t)
    float_poly = albert_polynomial(t.to_float())
    for e in set(exact_poly.terms) | set(float_poly.terms):
        want = float(exact_poly.coefficient(e))
        assert complex(float_poly.coefficient(e)) == pytest.approx(want, rel=1e-9, abs=1e-12)
    assert albert_check(t.to_float(), t.to_float()).outcome is Outcome.CONSISTENT


def test_text_round_trip(rng):
    p = albert_polynomial(random_rational_triple(rng, 3, 3))
    assert MultiPoly.parse(str(p)) == p
