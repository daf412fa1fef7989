"""Local unitaries, their adjoint action on a Hermitian basis, and witnesses.

Conjugating basis element ``e_i`` by ``U`` gives ``U e_i U^dagger = sum_j a_ij e_j``
with a real orthogonal ``A``; then ``u' = A^t u``, ``v' = B^t v`` and
``W' = A^t W B``.  Quasi-LU witnesses use the transposed convention
``u2 = O1 u1, v2 = O2 v1, W2 = O1 W1 O2^t``, i.e. ``O1 = A^t``.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .basis import HermitianBasis, gellmann_basis
from .bloch import BlochTriple, DensityMatrix
from .scalarfield import Tolerance, is_zero

QUASI_LU = "quasi-lu"
ADJOINT = "adjoint"


class LocalUnitary:
    """A ``d x d`` unitary acting on one tensor factor."""

    __slots__ = ("entries",)

    def __init__(self, entries, tol: Tolerance | None = None):
        U = linalg.as_matrix(entries)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError(f"unitary must be square, got shape {U.shape}")
        if not linalg.arrays_equal(linalg.matmul(U, linalg.dagger(U)), _eye_like(U), tol):
            raise ValueError("matrix is not unitary: U U^dagger != I")
        self.entries = U

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def is_exact(self) -> bool:
        return linalg.is_exact_array(self.entries)

    def dagger(self) -> LocalUnitary:
        return LocalUnitary(linalg.dagger(self.entries))

    def __matmul__(self, other: LocalUnitary) -> LocalUnitary:
        return LocalUnitary(linalg.matmul(self.entries, other.entries))

    def __repr__(self):
        return f"LocalUnitary(d={self.d})"


class OrthogonalWitness:
    """Real square matrix ``O`` with ``O O^t = O^t O = I``."""

    __slots__ = ("entries",)

    def __init__(self, entries, tol: Tolerance | None = None):
        O = linalg.as_matrix(entries)
        if O.ndim != 2 or O.shape[0] != O.shape[1]:
            raise ValueError(f"orthogonal witness must be square, got shape {O.shape}")
        if np.iscomplexobj(O) or (
            linalg.is_exact_array(O) and any(x.imag != 0 for x in O.flat)
        ):
            raise ValueError("orthogonal witness must be real")
        eye = _eye_like(O)
        if not (
            linalg.arrays_equal(linalg.matmul(O, O.T), eye, tol)
            and linalg.arrays_equal(linalg.matmul(O.T, O), eye, tol)
        ):
            raise ValueError("matrix is not orthogonal")
        self.entries = O

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def T(self) -> OrthogonalWitness:
        return OrthogonalWitness(self.entries.T)

    def __neg__(self):
        return OrthogonalWitness(-self.entries)

    def __matmul__(self, other: OrthogonalWitness) -> OrthogonalWitness:
        return OrthogonalWitness(linalg.matmul(self.entries, other.entries))

    def __eq__(self, other):
        if not isinstance(other, OrthogonalWitness):
            return NotImplemented
        return linalg.arrays_equal(self.entries, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"OrthogonalWitness(size={self.size})"


def _eye_like(a: np.ndarray) -> np.ndarray:
    return linalg.identity(a.shape[0], linalg.is_exact_array(a))


def _matrix(x) -> np.ndarray:
    if isinstance(x, (LocalUnitary, OrthogonalWitness)):
        return x.entries
    return linalg.as_matrix(x)


def adjoint_matrix(
    U: LocalUnitary, basis: HermitianBasis | None = None, tol: Tolerance | None = None
) -> OrthogonalWitness:
    """Real matrix ``a_ij = tr(U e_i U^dagger e_j)`` over the traceless elements.

    Under this convention ``adjoint_matrix(U @ V) == adjoint_matrix(V) @ adjoint_matrix(U)``.
    """
    if not isinstance(U, LocalUnitary):
        U = LocalUnitary(U, tol)
    basis = basis if basis is not None else gellmann_basis(U.d)
    if basis.dim != U.d:
        raise ValueError(f"basis dimension {basis.dim} does not match unitary dimension {U.d}")
    if not U.is_exact and basis.is_exact:
        basis = basis.to_float()
    Um, Ud = U.entries, linalg.dagger(U.entries)
    els = basis.elements
    k = len(els) - 1
    A = linalg.zeros((k, k), U.is_exact)
    for i in range(1, k + 1):
        conj = linalg.matmul(linalg.matmul(Um, els[i]), Ud)
        for j in range(1, k + 1):
            x = linalg.trace_of_product(conj, els[j])
            if not is_zero(x.imag, tol):
                raise ValueError(f"adjoint entry ({i},{j}) is not real: {x}")
            A[i - 1, j - 1] = x.real
    return OrthogonalWitness(A, tol)


def apply_local_unitary(
    rho: DensityMatrix, U1: LocalUnitary, U2: LocalUnitary
) -> DensityMatrix:
    """``(U1 (x) U2) rho (U1 (x) U2)^dagger``."""
    U1m, U2m = _matrix(U1), _matrix(U2)
    if U1m.shape[0] != rho.d1 or U2m.shape[0] != rho.d2:
        raise ValueError(
            f"unitary dimensions ({U1m.shape[0]}, {U2m.shape[0]}) do not match state ({rho.d1}, {rho.d2})"
        )
    U = np.kron(U1m, U2m)
    out = linalg.matmul(linalg.matmul(U, rho.entries), linalg.dagger(U))
    return DensityMatrix(rho.d1, rho.d2, out)


def transform_triple(t: BlochTriple, A, B) -> BlochTriple:
    """``(A^t u, B^t v, A^t W B)``: the triple of the rotated state."""
    Am, Bm = _matrix(A), _matrix(B)
    if Am.shape != (t.m, t.m) or Bm.shape != (t.n, t.n):
        raise ValueError(f"witness sizes {Am.shape}, {Bm.shape} do not match triple ({t.m}, {t.n})")
    return t.replace(
        u=linalg.matmul(Am.T, t.u),
        v=linalg.matmul(Bm.T, t.v),
        W=linalg.matmul(linalg.matmul(Am.T, t.W), Bm),
    )


def verify_witness(
    t1: BlochTriple,
    t2: BlochTriple,
    O1,
    O2,
    convention: str = QUASI_LU,
    tol: Tolerance | None = None,
) -> bool:
    """Check that ``(O1, O2)`` carries ``t1`` onto ``t2``.

    ``convention="quasi-lu"``: ``u2 = O1 u1, v2 = O2 v1, W2 = O1 W1 O2^t``.
    ``convention="adjoint"``: ``u2 = O1^t u1, v2 = O2^t v1, W2 = O1^t W1 O2``.
    """
    O1m, O2m = _matrix(O1), _matrix(O2)
    if (t1.m, t1.n) != (t2.m, t2.n):
        raise ValueError("triples have different shapes")
    if O1m.shape != (t1.m, t1.m) or O2m.shape != (t1.n, t1.n):
        raise ValueError(f"witness sizes {O1m.shape}, {O2m.shape} do not match triple ({t1.m}, {t1.n})")
    if convention == ADJOINT:
        O1m, O2m = O1m.T, O2m.T
    elif convention != QUASI_LU:
        raise ValueError(f"unknown convention {convention!r}")
    return (
        linalg.arrays_equal(linalg.matmul(O1m, t1.u), t2.u, tol)
        and linalg.arrays_equal(linalg.matmul(O2m, t1.v), t2.v, tol)
        and linalg.arrays_equal(
            linalg.matmul(linalg.matmul(O1m, t1.W), O2m.T), t2.W, tol
        )
    )
