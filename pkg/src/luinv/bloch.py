"""Density matrices and their Bloch triples ``(W, u, v)``.

With orthonormal bases ``{a_i}`` of the first factor and ``{b_j}`` of the
second (``a_0``, ``b_0`` the normalized identities), a state expands as::

    rho = I/(d1*d2) + sum_i u_i a_i(x)b_0 + sum_j v_j a_0(x)b_j
                    + sum_ij w_ij a_i(x)b_j

and every coefficient is a plain trace pairing, e.g. ``w_ij = tr(rho a_i(x)b_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .basis import HermitianBasis, gellmann_basis
from .scalarfield import ONE, Tolerance, ZERO, approx_equal, is_zero


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A ``(d1*d2) x (d1*d2)`` matrix with declared factor dimensions.

    Only the shape is enforced on construction so that invalid inputs can be
    diagnosed with :func:`validate_density`; :func:`decompose` rejects
    non-Hermitian or trace != 1 matrices.
    """

    d1: int
    d2: int
    entries: np.ndarray

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError("factor dimensions must be positive")
        n = self.d1 * self.d2
        entries = linalg.as_matrix(self.entries)
        if entries.shape != (n, n):
            raise ValueError(
                f"density matrix for {self.d1}x{self.d2} needs shape {(n, n)}, got {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def is_exact(self) -> bool:
        return linalg.is_exact_array(self.entries)

    def to_float(self) -> DensityMatrix:
        return DensityMatrix(self.d1, self.d2, linalg.to_float_array(self.entries).astype(complex))

    def equals(self, other: DensityMatrix, tol: Tolerance | None = None) -> bool:
        return (self.d1, self.d2) == (other.d1, other.d2) and linalg.arrays_equal(
            self.entries, other.entries, tol
        )

    __eq__ = equals
    __hash__ = None


def _real_array(a, name: str) -> np.ndarray:
    a = linalg.as_matrix(a)
    if linalg.is_exact_array(a):
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            if x.imag != 0:
                raise ValueError(f"{name} must be real")
            out[idx] = x.real
        return out
    if np.iscomplexobj(a):
        raise ValueError(f"{name} must be real")
    return a.astype(float)


def _dim_from_size(k: int, what: str) -> int:
    d = math.isqrt(k + 1)
    if d * d != k + 1 or d < 2:
        raise ValueError(f"{what} has length {k}, which is not d**2 - 1 for d >= 2")
    return d


@dataclass(frozen=True, eq=False)
class BlochTriple:
    """Real data ``(W, u, v)`` with ``W`` of shape ``(m, n)``, ``m = d1**2 - 1``."""

    u: np.ndarray
    v: np.ndarray
    W: np.ndarray
    basis1: HermitianBasis | None = field(default=None, repr=False)
    basis2: HermitianBasis | None = field(default=None, repr=False)

    def __post_init__(self):
        u = _real_array(self.u, "u").reshape(-1)
        v = _real_array(self.v, "v").reshape(-1)
        W = _real_array(self.W, "W")
        if W.size == 0 or W.shape != (len(u), len(v)):
            W = W.reshape(len(u), len(v))
        _dim_from_size(len(u), "u")
        _dim_from_size(len(v), "v")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "W", W)

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def n(self) -> int:
        return len(self.v)

    @property
    def d1(self) -> int:
        return _dim_from_size(self.m, "u")

    @property
    def d2(self) -> int:
        return _dim_from_size(self.n, "v")

    @property
    def is_exact(self) -> bool:
        return linalg.is_exact_array(self.W)

    @classmethod
    def zero(cls, d1: int, d2: int) -> BlochTriple:
        m, n = d1 * d1 - 1, d2 * d2 - 1
        return cls(linalg.zeros(m), linalg.zeros(n), linalg.zeros((m, n)))

    def replace(self, u=None, v=None, W=None) -> BlochTriple:
        return BlochTriple(
            self.u if u is None else u,
            self.v if v is None else v,
            self.W if W is None else W,
            self.basis1,
            self.basis2,
        )

    def to_float(self) -> BlochTriple:
        return BlochTriple(
            linalg.to_float_array(self.u),
            linalg.to_float_array(self.v),
            linalg.to_float_array(self.W),
            None if self.basis1 is None else self.basis1.to_float(),
            None if self.basis2 is None else self.basis2.to_float(),
        )

    def equals(self, other: BlochTriple, tol: Tolerance | None = None) -> bool:
        return (
            linalg.arrays_equal(self.u, other.u, tol)
            and linalg.arrays_equal(self.v, other.v, tol)
            and linalg.arrays_equal(self.W, other.W, tol)
        )

    __eq__ = equals
    __hash__ = None


def _bases_for(d1: int, d2: int, basis1, basis2, exact: bool):
    b1 = basis1 if basis1 is not None else gellmann_basis(d1)
    b2 = basis2 if basis2 is not None else gellmann_basis(d2)
    if b1.dim != d1 or b2.dim != d2:
        raise ValueError(f"basis dimensions ({b1.dim}, {b2.dim}) do not match state ({d1}, {d2})")
    if not exact:
        b1 = b1 if not b1.is_exact else b1.to_float()
        b2 = b2 if not b2.is_exact else b2.to_float()
    return b1, b2


def _real(x, tol, what):
    if not is_zero(x.imag, tol):
        raise ValueError(f"{what} has nonzero imaginary part {x.imag}; input is not Hermitian")
    return x.real


def decompose(
    rho: DensityMatrix,
    basis1: HermitianBasis | None = None,
    basis2: HermitianBasis | None = None,
    tol: Tolerance | None = None,
) -> BlochTriple:
    """Bloch triple of ``rho`` (standard Gell-Mann bases unless given)."""
    d1, d2 = rho.d1, rho.d2
    b1, b2 = _bases_for(d1, d2, basis1, basis2, rho.is_exact)
    R = rho.entries
    if not approx_equal(linalg.trace(R), 1, tol):
        raise ValueError(f"trace of the density matrix is {linalg.trace(R)}, expected 1")
    exact = rho.is_exact
    zero = ZERO if exact else 0.0
    nz1, nz2 = b1.nonzero_entries(), b2.nonzero_entries()
    # partial[i][b, b'] = sum_{a, a'} A_i[a', a] * R[(a, b), (a', b')]
    partial = []
    for entries in nz1:
        M = linalg.zeros((d2, d2), exact, complex_=True)
        for (ap, a), x in entries:
            block = R[a * d2:(a + 1) * d2, ap * d2:(ap + 1) * d2]
            M = M + block * x
        partial.append(M)

    def pair(i, j):
        total = zero
        for (bp, b), y in nz2[j]:
            total = total + partial[i][b, bp] * y
        return total

    m, n = d1 * d1 - 1, d2 * d2 - 1
    u = linalg.zeros(m, exact)
    v = linalg.zeros(n, exact)
    W = linalg.zeros((m, n), exact)
    for i in range(1, m + 1):
        u[i - 1] = _real(pair(i, 0), tol, f"u[{i}]")
    for j in range(1, n + 1):
        v[j - 1] = _real(pair(0, j), tol, f"v[{j}]")
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            W[i - 1, j - 1] = _real(pair(i, j), tol, f"W[{i},{j}]")
    return BlochTriple(u, v, W, basis1, basis2)


def reconstruct(
    triple: BlochTriple,
    basis1: HermitianBasis | None = None,
    basis2: HermitianBasis | None = None,
) -> DensityMatrix:
    """Inverse of :func:`decompose`: sum the Bloch expansion."""
    d1, d2 = triple.d1, triple.d2
    b1, b2 = _bases_for(
        d1,
        d2,
        basis1 if basis1 is not None else triple.basis1,
        basis2 if basis2 is not None else triple.basis2,
        triple.is_exact,
    )
    exact = triple.is_exact
    nz1, nz2 = b1.nonzero_entries(), b2.nonzero_entries()
    N = d1 * d2
    rho = linalg.zeros((N, N), exact, complex_=True)
    diag = Fraction(1, N) if exact else 1.0 / N
    for k in range(N):
        rho[k, k] = rho[k, k] + diag

    def add(coeff, i, j):
        if is_zero(coeff):
            return
        for (a, ap), x in nz1[i]:
            cx = coeff * x
            for (b, bp), y in nz2[j]:
                rho[a * d2 + b, ap * d2 + bp] = rho[a * d2 + b, ap * d2 + bp] + cx * y

    for i, c in enumerate(triple.u, start=1):
        add(c, i, 0)
    for j, c in enumerate(triple.v, start=1):
        add(c, 0, j)
    for (i, j), c in np.ndenumerate(triple.W):
        add(c, i + 1, j + 1)
    return DensityMatrix(d1, d2, rho)


@dataclass
class DensityReport:
    hermitian: bool
    trace_one: bool
    trace: object
    min_eigenvalue: float | None
    psd: bool | None
    warnings: list[str]

    @property
    def ok(self) -> bool:
        return self.hermitian and self.trace_one


def validate_density(rho: DensityMatrix, tol: Tolerance | None = None) -> DensityReport:
    """Hermiticity and trace checks, plus an advisory float PSD check."""
    tol = tol or Tolerance()
    R = rho.entries
    n = R.shape[0]
    hermitian = all(
        approx_equal(R[i, j], R[j, i].conjugate(), tol) for i in range(n) for j in range(i, n)
    )
    tr = linalg.trace(R)
    trace_one = approx_equal(tr, 1, tol)
    warnings = []
    if not hermitian:
        warnings.append("matrix is not Hermitian")
    if not trace_one:
        warnings.append(f"trace is {tr}, expected 1")
    min_eig = psd = None
    if hermitian:
        F = linalg.to_float_array(R).astype(complex)
        min_eig = float(np.linalg.eigvalsh((F + F.conj().T) / 2).min())
        psd = min_eig >= -max(tol.absolute, 1e-10)
        if not psd:
            warnings.append(f"not positive semidefinite (min eigenvalue {min_eig:.3g})")
    return DensityReport(hermitian, trace_one, tr, min_eig, psd, warnings)


def maximally_mixed(d1: int, d2: int) -> DensityMatrix:
    N = d1 * d2
    return DensityMatrix(d1, d2, linalg.identity(N) * Fraction(1, N))


def product_basis_state(d1: int, d2: int, a: int, b: int) -> DensityMatrix:
    """The pure state ``|a b><a b|``."""
    N = d1 * d2
    rho = linalg.zeros((N, N))
    rho[a * d2 + b, a * d2 + b] = ONE
    return DensityMatrix(d1, d2, rho)
