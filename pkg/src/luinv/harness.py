"""Reproducible test pairs and the worked two-qubit-by-qutrit fixture.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``, so a
``GeneratorSpec`` fully determines its output.  Exact unitaries are drawn
from a family whose entries stay rational complex numbers: signed
permutations, diagonal phases in {1, -1, i, -i} and Pythagorean rotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .adjoint import LocalUnitary, apply_local_unitary
from .basis import HermitianBasis, custom_basis, gellmann_basis
from .bloch import BlochTriple, DensityMatrix, decompose, reconstruct, validate_density
from .scalarfield import I, ONE, ZERO, ComplexScalar, exact, sqrt

MODES = ("equivalent", "perturbed", "independent")
BACKENDS = ("exact", "float")

PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25))
PERTURBATION = Fraction(1, 100)


@dataclass(frozen=True)
class GeneratorSpec:
    d1: int
    d2: int
    seed: int
    mode: str = "equivalent"
    backend: str = "exact"

    def __post_init__(self):
        if self.d1 < 2 or self.d2 < 2:
            raise ValueError(f"dimensions must be at least 2, got ({self.d1}, {self.d2})")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class GeneratedPair:
    rho_a: DensityMatrix
    rho_b: DensityMatrix
    witness: tuple[LocalUnitary, LocalUnitary] | None = None


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))


def random_state(rng: np.random.Generator, d1: int, d2: int) -> DensityMatrix:
    """``M M^dagger / tr(M M^dagger)`` for a random rational complex ``M``."""
    N = d1 * d2
    while True:
        M = np.empty((N, N), dtype=object)
        for idx in np.ndindex(N, N):
            M[idx] = ComplexScalar(exact(random_rational(rng)), exact(random_rational(rng)))
        R = linalg.matmul(M, linalg.dagger(M))
        tr = linalg.trace(R).real
        if tr:
            return DensityMatrix(d1, d2, R * tr.inverse())


def random_unitary(rng: np.random.Generator, d: int) -> LocalUnitary:
    """Phase-diagonal times signed permutation times one Pythagorean rotation."""
    perm = rng.permutation(d)
    phases = (ONE, -ONE, I, -I)
    U = linalg.zeros((d, d))
    for row, col in enumerate(perm):
        U[row, col] = phases[int(rng.integers(0, 4))]
    a, b, c = PYTHAGOREAN[int(rng.integers(0, len(PYTHAGOREAN)))]
    cos, sin = exact(Fraction(a, c)), exact(Fraction(b, c))
    i, j = sorted(int(k) for k in rng.choice(d, size=2, replace=False))
    R = linalg.identity(d)
    if rng.integers(0, 2):
        R[i, i], R[i, j], R[j, i], R[j, j] = cos, -sin, sin, cos
    else:
        R[i, i], R[i, j], R[j, i], R[j, j] = cos, I * sin, I * sin, cos
    return LocalUnitary(linalg.matmul(U, R))


def _float_pair(pair: GeneratedPair) -> GeneratedPair:
    w = pair.witness
    if w is not None:
        w = tuple(LocalUnitary(linalg.to_float_array(U.entries).astype(complex)) for U in w)
    return GeneratedPair(pair.rho_a.to_float(), pair.rho_b.to_float(), w)


def perturb(rho: DensityMatrix, i: int, j: int, eps=PERTURBATION) -> DensityMatrix:
    """Add ``eps`` to ``W[i, j]`` of the standard-basis triple and rebuild."""
    t = decompose(rho)
    W = t.W.copy()
    W[i, j] = W[i, j] + eps
    return reconstruct(t.replace(W=W))


def generate_pair(spec: GeneratorSpec) -> GeneratedPair:
    rng = make_rng(spec.seed)
    rho = random_state(rng, spec.d1, spec.d2)
    if spec.mode == "independent":
        pair = GeneratedPair(rho, random_state(rng, spec.d1, spec.d2))
    else:
        U1, U2 = random_unitary(rng, spec.d1), random_unitary(rng, spec.d2)
        rho_b = apply_local_unitary(rho, U1, U2)
        if spec.mode == "equivalent":
            pair = GeneratedPair(rho, rho_b, (U1, U2))
        else:
            m, n = spec.d1**2 - 1, spec.d2**2 - 1
            while True:
                shifted = perturb(rho_b, int(rng.integers(0, m)), int(rng.integers(0, n)))
                if validate_density(shifted).psd:
                    break
                # PSD lost: redraw the base state and try again
                rho = random_state(rng, spec.d1, spec.d2)
                rho_b = apply_local_unitary(rho, U1, U2)
            pair = GeneratedPair(rho, shifted)
    return _float_pair(pair) if spec.backend == "float" else pair


# -- the worked example ----------------------------------------------------


def _ket_bra(d: int, i: int, j: int, value=ONE) -> np.ndarray:
    out = linalg.zeros((d, d))
    out[i, j] = value
    return out


def paper_basis_qubit() -> HermitianBasis:
    """``I, Z, X`` and ``i|0><1| - i|1><0|``, each over ``sqrt(2)``."""
    r = sqrt(2).inverse()
    els = [
        linalg.identity(2) * r,
        (_ket_bra(2, 0, 0) - _ket_bra(2, 1, 1)) * r,
        (_ket_bra(2, 0, 1) + _ket_bra(2, 1, 0)) * r,
        (_ket_bra(2, 0, 1, I) - _ket_bra(2, 1, 0, I)) * r,
    ]
    return custom_basis(els, ("I", "Z", "X", "Y'"))


def paper_basis_qutrit() -> HermitianBasis:
    """Gell-Mann matrices in the interleaved order ``I, S01, A01, D1, S02, A02, S12, A12, D2``.

    The identity is scaled to unit trace pairing (``I/sqrt(3)``).
    """
    g = gellmann_basis(3)
    order = ("I", "S01", "A01", "D1", "S02", "A02", "S12", "A12", "D2")
    pick = {label: e for label, e in zip(g.labels, g.elements)}
    return custom_basis([pick[k] for k in order], order)


def _rational(p) -> Fraction:
    if isinstance(p, str):
        p = Fraction(p)
    if isinstance(p, float):
        raise TypeError("p must be rational (int, Fraction or a 'a/b' string)")
    return Fraction(p)


def paper_triple(p) -> BlochTriple:
    """The displayed ``(mu, nu, W)`` of the example state."""
    p = exact(_rational(p))
    q = ONE - p
    c = sqrt(3).inverse() * Fraction(1, 2)
    u = linalg.exact_array([q * Fraction(1, 3), ZERO, ZERO])
    v = linalg.zeros(8)
    v[2], v[7] = -q * Fraction(1, 2), c
    W = linalg.zeros((3, 8))
    W[0, 2] = (p * 2 - 1) * Fraction(1, 2)
    W[0, 7] = q * c
    W[1, 0] = p * Fraction(1, 2)
    W[2, 1] = p * Fraction(1, 2)
    return BlochTriple(u, v, W, paper_basis_qubit(), paper_basis_qutrit())


def paper_triple_prime(p) -> BlochTriple:
    """The displayed triple of the rotated state."""
    p = exact(_rational(p))
    q = ONE - p
    c = sqrt(3).inverse() * Fraction(1, 2)
    u = linalg.exact_array([ZERO, ZERO, q * Fraction(1, 3)])
    v = linalg.zeros(8)
    v[2], v[7] = q * Fraction(1, 2), c
    W = linalg.zeros((3, 8))
    W[0, 1] = -p * Fraction(1, 2)
    W[1, 0] = -p * Fraction(1, 2)
    W[2, 2] = -(p * 2 - 1) * Fraction(1, 2)
    W[2, 7] = q * c
    return BlochTriple(u, v, W, paper_basis_qubit(), paper_basis_qutrit())


def paper_unitaries() -> tuple[LocalUnitary, LocalUnitary]:
    r = sqrt(2).inverse()
    U1 = linalg.exact_array([[r, I * r], [-I * r, -r]])
    U2 = linalg.exact_array([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    return LocalUnitary(U1), LocalUnitary(U2)


@dataclass(frozen=True)
class PaperFixture:
    p: Fraction
    rho: DensityMatrix
    rho_prime: DensityMatrix
    triple: BlochTriple
    triple_prime: BlochTriple
    u1: LocalUnitary
    u2: LocalUnitary
    basis1: HermitianBasis
    basis2: HermitianBasis


def paper_fixture(p) -> PaperFixture:
    """State built from the displayed triple, rotated by the displayed unitaries.

    ``triple`` and ``triple_prime`` are decomposed from the two states in the
    example's bases, so they can be compared against :func:`paper_triple`
    and :func:`paper_triple_prime`.
    """
    p = _rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    b1, b2 = paper_basis_qubit(), paper_basis_qutrit()
    rho = reconstruct(paper_triple(p), b1, b2)
    U1, U2 = paper_unitaries()
    rho_prime = apply_local_unitary(rho, U1, U2)
    return PaperFixture(
        p, rho, rho_prime, decompose(rho, b1, b2), decompose(rho_prime, b1, b2), U1, U2, b1, b2
    )
