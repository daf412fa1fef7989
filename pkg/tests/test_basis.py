from fractions import Fraction

import numpy as np
import pytest

from luinv import linalg
from luinv.basis import custom_basis, expand, gellmann_basis, verify_orthonormal
from luinv.harness import paper_basis_qubit, paper_basis_qutrit
from luinv.scalarfield import I, ComplexScalar, exact, sqrt


def ket_bra(d, i, j):
    out = linalg.zeros((d, d))
    out[i, j] = exact(1)
    return out


@pytest.mark.parametrize("d", [2, 3, 4])
def test_gellmann_orthonormal(d):
    b = gellmann_basis(d)
    assert len(b) == d * d
    assert verify_orthonormal(b)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_identity_first_and_traceless_rest(d):
    b = gellmann_basis(d)
    assert linalg.arrays_equal(b[0], linalg.identity(d) * sqrt(d).inverse())
    assert linalg.trace(linalg.matmul(b[0], b[0])) == 1
    for e in b.elements[1:]:
        assert linalg.trace(e) == 0


def test_qubit_elements():
    b = gellmann_basis(2)
    r = sqrt(2).inverse()
    z = (ket_bra(2, 0, 0) - ket_bra(2, 1, 1)) * r
    x = (ket_bra(2, 0, 1) + ket_bra(2, 1, 0)) * r
    assert any(linalg.arrays_equal(e, z) for e in b)
    assert any(linalg.arrays_equal(e, x) for e in b)


def test_qutrit_last_diagonal():
    b = gellmann_basis(3)
    d8 = (ket_bra(3, 0, 0) + ket_bra(3, 1, 1) - ket_bra(3, 2, 2) * 2) * sqrt(6).inverse()
    assert linalg.arrays_equal(b.elements[-1], d8)


def test_antisymmetric_sign_convention():
    b = gellmann_basis(3)
    a01 = b.elements[b.labels.index("A01")]
    assert a01[0, 1] == -I * sqrt(2).inverse()
    assert a01[1, 0] == I * sqrt(2).inverse()


def test_invalid_dimension():
    with pytest.raises(ValueError):
        gellmann_basis(1)


def test_custom_basis_accepts_example_orders():
    assert verify_orthonormal(paper_basis_qubit())
    assert verify_orthonormal(paper_basis_qutrit())
    g = gellmann_basis(3)
    again = custom_basis(g.elements, g.labels)
    assert all(linalg.arrays_equal(a, b) for a, b in zip(again, g))


def test_custom_basis_rejects_non_hermitian():
    els = list(gellmann_basis(2).elements)
    els[1] = ket_bra(2, 0, 1)
    with pytest.raises(ValueError, match="Hermitian"):
        custom_basis(els)


def test_custom_basis_rejects_non_orthonormal():
    els = list(gellmann_basis(2).elements)
    els[2] = els[2] * 2
    with pytest.raises(ValueError):
        custom_basis(els)


def test_scaled_element_fails_verification():
    g = gellmann_basis(2)
    els = list(g.elements)
    els[1] = els[1] * 2
    broken = type(g)(2, tuple(els), g.labels)
    assert not verify_orthonormal(broken)


@pytest.mark.parametrize("d", [2, 3])
def test_completeness_on_random_hermitian(d, rng):
    b = gellmann_basis(d)
    for _ in range(5):
        H = linalg.zeros((d, d))
        for i in range(d):
            for j in range(i, d):
                re = exact(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))))
                if i == j:
                    H[i, i] = re
                else:
                    im = exact(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10))))
                    H[i, j] = ComplexScalar(re, im)
                    H[j, i] = H[i, j].conjugate()
        coeffs = expand(H, b)
        total = linalg.zeros((d, d))
        for c, e in zip(coeffs, b):
            total = total + e * c
        assert linalg.arrays_equal(total, H)


def test_float_basis():
    b = gellmann_basis(3).to_float()
    assert not b.is_exact
    assert verify_orthonormal(b)
    assert np.allclose(b[0], np.eye(3) / np.sqrt(3))
