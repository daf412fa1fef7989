from fractions import Fraction

import pytest

from luinv import linalg
from luinv.bloch import decompose, validate_density
from luinv.harness import (
    GeneratorSpec,
    generate_pair,
    make_rng,
    paper_fixture,
    paper_triple,
    perturb,
    random_rational,
    random_state,
    random_unitary,
)
from luinv.invariants import albert_check, ghs_check, norm_check, trace_identity_check
from luinv.pencil import snf_check
from luinv.scalarfield import exact, sqrt


def run_criteria(a, b):
    return {
        "norm": norm_check(a, b),
        "snf": snf_check(a, b),
        "albert": albert_check(a, b),
        "trace": trace_identity_check(a, b, max_pairs=2),
        "ghs": ghs_check(a, b, max_len=4),
    }


def test_rng_is_deterministic():
    a, b = make_rng(7), make_rng(7)
    assert [random_rational(a) for _ in range(20)] == [random_rational(b) for _ in range(20)]
    assert random_state(make_rng(3), 2, 3).equals(random_state(make_rng(3), 2, 3))


def test_random_rational_range():
    rng = make_rng(1)
    for _ in range(200):
        q = random_rational(rng)
        assert abs(q.numerator) <= 9 and 1 <= q.denominator <= 9


@pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (3, 3)])
def test_random_state_is_a_state(d1, d2):
    rho = random_state(make_rng(d1 * 10 + d2), d1, d2)
    report = validate_density(rho)
    assert report.ok and report.psd


@pytest.mark.parametrize("d", [2, 3, 4])
def test_random_unitary_is_exact(d):
    U = random_unitary(make_rng(d), d)
    assert linalg.is_exact_array(U.entries)


def test_generate_pair_is_reproducible():
    spec = GeneratorSpec(2, 3, 12345, "equivalent")
    p1, p2 = generate_pair(spec), generate_pair(spec)
    assert p1.rho_a.equals(p2.rho_a) and p1.rho_b.equals(p2.rho_b)
    assert p1.witness is not None


def test_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(1, 2, 0)
    with pytest.raises(ValueError):
        GeneratorSpec(2, 2, 0, mode="odd")
    with pytest.raises(ValueError):
        GeneratorSpec(2, 2, 0, backend="quad")
    with pytest.raises(ValueError):
        GeneratorSpec(2, 2, -1)
    with pytest.raises(ValueError):
        GeneratorSpec(2, 2, 2**64)


@pytest.mark.parametrize("seed", range(8))
def test_equivalent_pairs_never_refuted(seed):
    g = generate_pair(GeneratorSpec(2, 2 + seed % 2, seed, "equivalent"))
    a, b = decompose(g.rho_a), decompose(g.rho_b)
    for name, v in run_criteria(a, b).items():
        assert not v.refuted, name


@pytest.mark.parametrize("seed", range(8))
def test_independent_pairs_refuted(seed):
    g = generate_pair(GeneratorSpec(2, 3, seed, "independent"))
    assert g.witness is None
    a, b = decompose(g.rho_a), decompose(g.rho_b)
    verdicts = run_criteria(a, b)
    # norms of independent random states essentially never coincide
    assert verdicts["norm"].refuted
    assert verdicts["albert"].refuted


def test_perturbed_pairs_stay_states():
    for seed in range(5):
        g = generate_pair(GeneratorSpec(2, 3, seed, "perturbed"))
        assert validate_density(g.rho_b).psd
        assert g.witness is None


def test_perturb_shifts_one_coefficient():
    rho = random_state(make_rng(2), 2, 2)
    shifted = perturb(rho, 0, 1)
    t, t2 = decompose(rho), decompose(shifted)
    diff = t2.W - t.W
    assert diff[0, 1] == Fraction(1, 100)
    diff[0, 1] = exact(0)
    assert linalg.is_zero_array(diff)
    assert linalg.arrays_equal(t.u, t2.u) and linalg.arrays_equal(t.v, t2.v)


def test_float_backend_pair():
    g = generate_pair(GeneratorSpec(2, 2, 9, "equivalent", "float"))
    assert not g.rho_a.is_exact
    a, b = decompose(g.rho_a), decompose(g.rho_b)
    assert not snf_check(a, b).refuted
    assert not albert_check(a, b).refuted


def test_fixture_values():
    t = paper_triple("1/2")
    assert list(t.u) == [Fraction(1, 6), 0, 0]
    assert t.W[1, 0] == Fraction(1, 4) and t.W[0, 2] == 0
    t1 = paper_triple(1)
    assert linalg.is_zero_array(t1.u)
    assert t1.v[7] == sqrt(3).inverse() * Fraction(1, 2)
    assert linalg.is_zero_array(t1.v[:7])


def test_fixture_accepts_strings_and_fractions():
    assert paper_fixture("1/3").triple.equals(paper_fixture(Fraction(1, 3)).triple)
    with pytest.raises(ValueError):
        paper_fixture(Fraction(3, 2))
    with pytest.raises(ValueError):
        paper_fixture(-1)
    with pytest.raises((TypeError, ValueError)):
        paper_fixture(0.5)


def test_fixture_states_are_rotations():
    from luinv.adjoint import apply_local_unitary

    f = paper_fixture("1/4")
    assert apply_local_unitary(f.rho, f.u1, f.u2).equals(f.rho_prime)
    assert linalg.trace(f.rho.entries) == 1
