"""Acceptance criteria 1-9, each at its stated tolerance and time limit."""

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy.linalg import expm
from scipy.optimize import least_squares

from luinv import linalg
from luinv.adjoint import adjoint_matrix, apply_local_unitary
from luinv.bloch import decompose, reconstruct
from luinv.harness import GeneratorSpec, generate_pair, make_rng, paper_fixture, random_state, random_unitary
from luinv.invariants import (
    MultiPoly,
    Outcome,
    albert_check,
    albert_polynomial,
    ghs_block,
    ghs_check,
    norm_check,
    specht_check,
    trace_identity_check,
)
from luinv.pencil import Poly, PolyMatrix, smith_normal_form, snf_check
from luinv.scalarfield import ExactScalar, exact, sqrt

from conftest import scalar_to_sympy

pytestmark = pytest.mark.acceptance

P_VALUES = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


# 1 ------------------------------------------------------------------------


def displayed_triples(p):
    """Typed in from the worked example, independent of the fixture code."""
    q = 1 - p
    c = sqrt(3).inverse() * Fraction(1, 2)  # 1/(2 sqrt 3)
    u = [q / 3, 0, 0]
    v = [0, 0, -q / 2, 0, 0, 0, 0, c]
    W = [[0] * 8 for _ in range(3)]
    W[0][2], W[0][7], W[1][0], W[2][1] = (2 * p - 1) / 2, c * q, p / 2, p / 2
    u2 = [0, 0, q / 3]
    v2 = [0, 0, q / 2, 0, 0, 0, 0, c]
    W2 = [[0] * 8 for _ in range(3)]
    W2[0][1], W2[1][0], W2[2][2], W2[2][7] = -p / 2, -p / 2, -(2 * p - 1) / 2, c * q
    return (u, v, W), (u2, v2, W2)


def strings(vals):
    return [str(exact(x)) for x in vals]


def test_criterion_1_fixture_triples():
    with Clock(1.0):
        for p in P_VALUES:
            f = paper_fixture(p)
            for got, (u, v, W) in zip((f.triple, f.triple_prime), displayed_triples(p)):
                assert strings(got.u) == strings(u)
                assert strings(got.v) == strings(v)
                for i in range(3):
                    assert strings(got.W[i]) == strings(W[i])


# 2 ------------------------------------------------------------------------


def test_criterion_2_fixture_snf(tmp_path, capsys):
    import json

    from luinv.cli import main

    with Clock(1.0):
        for p in P_VALUES:
            out_dir = tmp_path / str(p).replace("/", "_")
            assert main(["fixture", "--p", str(p), "--out-dir", str(out_dir)]) == 0
            capsys.readouterr()
            diagonals = []
            for name in ("rho.json", "rho_prime.json"):
                assert main(["snf", str(out_dir / name)]) == 0
                diagonals.append(json.loads(capsys.readouterr().out)["diagonal"])
            assert diagonals[0] == diagonals[1]
            if p not in (0, 1):
                assert diagonals[0] == ["1", "l", "l"]


# 3 ------------------------------------------------------------------------


def displayed_factorization(p):
    x, x1, x2, x3 = (MultiPoly.variable(k) for k in range(4))

    def c(v):
        return MultiPoly.constant(exact(v))

    first = x - c(p * p / 4) * x1
    second = (
        x
        - c((3 * (2 * p - 1) ** 2 + (1 - p) ** 2) / Fraction(12)) * x1
        - c((1 - p) ** 2 / Fraction(9)) * x2
        - c((2 - 3 * p) * (1 - p) ** 2 / Fraction(18)) * x3
    )
    return first * first * second


def test_criterion_3_fixture_albert():
    with Clock(1.0):
        for p in P_VALUES + [Fraction(1, 3), Fraction(2, 7)]:
            f = paper_fixture(p)
            a, b = albert_polynomial(f.triple), albert_polynomial(f.triple_prime)
            assert a == b
            assert a == displayed_factorization(p)


# 4 ------------------------------------------------------------------------


def test_criterion_4_fixture_ghs():
    with Clock(30.0):
        f = paper_fixture("1/2")
        v = ghs_check(f.triple, f.triple_prime, max_len=12)  # 6 pairs = 12 letters
        assert v.outcome is not Outcome.INEQUIVALENT
        P = linalg.exact_array([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
        D = linalg.zeros((12, 12))
        for k in range(4):
            D[3 * k:3 * k + 3, 3 * k:3 * k + 3] = P
        M1, M2 = ghs_block(f.triple), ghs_block(f.triple_prime)
        assert linalg.arrays_equal(linalg.matmul(linalg.matmul(D, M1), D.T), M2)


# 5 ------------------------------------------------------------------------


def is_orthogonal(O):
    return linalg.arrays_equal(linalg.matmul(O, O.T), linalg.identity(O.shape[0]))


def test_criterion_5_lu_invariance():
    failures = []
    with Clock(300.0):
        for k in range(100):
            d1, d2 = (2, 2) if k % 2 == 0 else (2, 3)
            rng = make_rng(5000 + k)
            rho = random_state(rng, d1, d2)
            U1, U2 = random_unitary(rng, d1), random_unitary(rng, d2)
            A, B = adjoint_matrix(U1), adjoint_matrix(U2)
            if not (is_orthogonal(A.entries) and is_orthogonal(B.entries)):
                failures.append((k, "orthogonality"))
            t1, t2 = decompose(rho), decompose(apply_local_unitary(rho, U1, U2))
            for v in (
                norm_check(t1, t2),
                snf_check(t1, t2),
                albert_check(t1, t2),
                trace_identity_check(t1, t2),
                ghs_check(t1, t2),
            ):
                if v.outcome is Outcome.INEQUIVALENT:
                    failures.append((k, v.criterion, v.witness))
    assert failures == []


# 6 ------------------------------------------------------------------------


def test_criterion_6_refutation_sensitivity():
    refuted = 0
    with Clock(300.0):
        for seed in range(50):
            g = generate_pair(GeneratorSpec(2, 3, 7000 + seed, "perturbed"))
            a, b = decompose(g.rho_a), decompose(g.rho_b)
            if (
                snf_check(a, b).refuted
                or albert_check(a, b).refuted
                or trace_identity_check(a, b, max_pairs=3).refuted
            ):
                refuted += 1
    assert refuted >= 45, f"only {refuted}/50 refuted"


# 7 ------------------------------------------------------------------------


def signed_permutations(n):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            S = np.zeros((n, n), dtype=int)
            for i, j in enumerate(perm):
                S[i, j] = signs[i]
            yield S


def float_orthogonal_search(M1, M2, restarts=12, seed=0):
    """Smallest ||O M1 O^t - M2||_F over O(n) found by Levenberg-Marquardt
    from random starts on both components of O(n)."""
    n = M1.shape[0]
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    best = np.inf
    for reflect in (False, True):
        R = np.eye(n)
        if reflect:
            R[0, 0] = -1

        def residual(theta):
            K = np.zeros((n, n))
            K[iu] = theta
            O = expm(K - K.T) @ R
            return (O @ M1 @ O.T - M2).ravel()

        for _ in range(restarts):
            start = rng.uniform(-np.pi, np.pi, len(iu[0]))
            res = least_squares(residual, start, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
            best = min(best, float(np.linalg.norm(res.fun)))
            if best < 1e-12:
                return best
    return best


def oracle_similar(M1, M2):
    """Brute-force orthogonal similarity: exact signed-permutation scan, then
    numeric necessary invariants, then a numeric search at 1e-8."""
    n = M1.shape[0]
    for S in signed_permutations(n):
        if np.array_equal(S @ M1 @ S.T, M2):
            return True
    F1, F2 = M1.astype(float), M2.astype(float)
    if not np.allclose(np.poly(F1), np.poly(F2), atol=1e-8):
        return False
    if not np.allclose(np.linalg.svd(F1, compute_uv=False), np.linalg.svd(F2, compute_uv=False), atol=1e-8):
        return False
    return float_orthogonal_search(F1, F2) < 1e-8


def sample_pairs(rng, n, count):
    """A third uniform, a third with matching spectra and singular values,
    a third conjugated by a random signed permutation."""
    allm = np.array(list(itertools.product((-1, 0, 1), repeat=n * n))).reshape(-1, n, n)
    keys = {}
    for idx, M in enumerate(allm):
        key = (
            tuple(np.round(np.poly(M.astype(float)), 6)),
            tuple(np.round(np.linalg.svd(M.astype(float), compute_uv=False), 6)),
        )
        keys.setdefault(key, []).append(idx)
    classes = [v for v in keys.values() if len(v) > 1]
    sperms = list(signed_permutations(n))
    pairs = []
    for k in range(count):
        kind = k % 3
        if kind == 0:
            a, b = rng.integers(0, len(allm), 2)
            pairs.append((allm[a], allm[b]))
        elif kind == 1:
            cls = classes[rng.integers(0, len(classes))]
            a, b = rng.choice(cls, 2, replace=False)
            pairs.append((allm[a], allm[b]))
        else:
            M = allm[rng.integers(0, len(allm))]
            S = sperms[rng.integers(0, len(sperms))]
            pairs.append((M, S @ M @ S.T))
    return pairs


def test_criterion_7_specht_oracle():
    rng = np.random.default_rng(77)
    contradictions, disagreements = [], []
    with Clock(600.0):
        for n in (2, 3):
            for M1, M2 in sample_pairs(rng, n, 250):
                v = specht_check(linalg.exact_array(M1.tolist()), linalg.exact_array(M2.tolist()))
                similar = oracle_similar(M1, M2)
                if v.outcome is Outcome.INEQUIVALENT and similar:
                    contradictions.append((M1.tolist(), M2.tolist(), v.witness))
                if v.outcome is Outcome.EQUIVALENT and not similar:
                    disagreements.append((M1.tolist(), M2.tolist()))
    assert contradictions == []
    assert disagreements == []


# 8 ------------------------------------------------------------------------

lam = sympy.Symbol("l")


def poly_to_sympy(p):
    return sympy.expand(sum((scalar_to_sympy(c) * lam**k for k, c in enumerate(p.coeffs)), sympy.Integer(0)))


def determinantal_divisor_factors(S):
    m, n = S.shape
    prev, out = sympy.Integer(1), []
    for k in range(1, min(m, n) + 1):
        g = sympy.Integer(0)
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = sympy.gcd(g, sympy.expand(S.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        g = sympy.Poly(g, lam).monic().as_expr()
        out.append(sympy.cancel(g / prev))
        prev = g
    return out


def test_criterion_8_snf_oracle():
    rng = np.random.default_rng(88)
    bad = []
    with Clock(120.0):
        for trial in range(200):
            rows = []
            for _ in range(3):
                row = []
                for _ in range(3):
                    deg = int(rng.integers(-1, 3))  # -1: the zero polynomial
                    coeffs = [Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5))) for _ in range(deg + 1)]
                    row.append(Poly([exact(c) for c in coeffs]))
                rows.append(row)
            M = PolyMatrix(rows)
            got = [poly_to_sympy(d) for d in smith_normal_form(M).diagonal]
            S = sympy.Matrix([[poly_to_sympy(M[i, j]) for j in range(3)] for i in range(3)])
            want = determinantal_divisor_factors(S)
            if len(got) != len(want) or any(sympy.expand(a - b) != 0 for a, b in zip(got, want)):
                bad.append(trial)
    assert bad == []


# 9 ------------------------------------------------------------------------


def random_scalar(rng):
    value = ExactScalar()
    for r in rng.choice([1, 2, 3, 5, 6, 7, 10, 11], size=int(rng.integers(0, 4)), replace=False):
        value = value + sqrt(int(r)) * Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 13)))
    return value


def test_criterion_9_round_trip_and_field():
    rng = np.random.default_rng(99)
    with Clock(60.0):
        dims = [(2, 2), (2, 3), (3, 2), (3, 3)]
        for k in range(200):
            d1, d2 = dims[k % len(dims)]
            rho = random_state(make_rng(9000 + k), d1, d2)
            assert reconstruct(decompose(rho)).equals(rho)
        for _ in range(1000):
            a, b, c = random_scalar(rng), random_scalar(rng), random_scalar(rng)
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a and a * b == b * a
            assert a + (-a) == 0 and a * 1 == a
            if a != 0:
                assert a * a.inverse() == 1
