"""Orthonormal Hermitian operator bases (generalized Gell-Mann matrices)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .scalarfield import ComplexScalar, ExactScalar, Tolerance, approx_equal, is_zero


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Ordered orthonormal Hermitian basis of d x d matrices.

    Element 0 is ``I_d/sqrt(d)``; ``tr(e_i e_j) = delta_ij``.  Build one with
    :func:`gellmann_basis` or :func:`custom_basis`, which validate these
    invariants; the raw constructor does not.
    """

    dim: int
    elements: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def nonzero_entries(self):
        """Per element, the list of ``((row, col), value)`` with nonzero value."""
        cached = self.__dict__.get("_nz")
        if cached is None:
            cached = tuple(linalg.nonzeros(e) for e in self.elements)
            object.__setattr__(self, "_nz", cached)
        return cached

    def to_float(self) -> HermitianBasis:
        return HermitianBasis(
            self.dim,
            tuple(linalg.to_float_array(e).astype(complex) for e in self.elements),
            self.labels,
        )

    @property
    def is_exact(self) -> bool:
        return linalg.is_exact_array(self.elements[0])


def _unit(d: int, i: int, j: int, value) -> np.ndarray:
    m = linalg.zeros((d, d))
    m[i, j] = value
    return m


def gellmann_basis(d: int) -> HermitianBasis:
    """Generalized Gell-Mann basis for ``d x d`` matrices, all entries exact.

    Order: ``I/sqrt(d)``; symmetric ``(|i><j| + |j><i|)/sqrt(2)`` for i < j;
    antisymmetric ``-i(|i><j| - |j><i|)/sqrt(2)`` for i < j; diagonal
    ``(|0><0| + ... + |k-1><k-1| - k|k><k|)/sqrt(k(k+1))`` for k = 1..d-1.
    The pair loops run over (i, j) in lexicographic order.
    """
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"basis dimension must be an integer >= 2, got {d!r}")
    r2 = ExactScalar.sqrt(Fraction(1, 2))
    elements = [linalg.identity(d) * ExactScalar.sqrt(Fraction(1, d))]
    labels = ["I"]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for i, j in pairs:
        m = _unit(d, i, j, r2)
        m[j, i] = r2
        elements.append(m)
        labels.append(f"S{i}{j}")
    for i, j in pairs:
        m = _unit(d, i, j, ComplexScalar(0, -r2))
        m[j, i] = ComplexScalar(0, r2)
        elements.append(m)
        labels.append(f"A{i}{j}")
    for k in range(1, d):
        norm = ExactScalar.sqrt(Fraction(1, k * (k + 1)))
        m = linalg.zeros((d, d))
        for i in range(k):
            m[i, i] = norm
        m[k, k] = -k * norm
        elements.append(m)
        labels.append(f"D{k}")
    return HermitianBasis(d, tuple(elements), tuple(labels))


def _hermitian_error(m: np.ndarray, tol) -> tuple[int, int] | None:
    d = m.shape[0]
    for i in range(d):
        for j in range(i, d):
            if not approx_equal(m[i, j], m[j, i].conjugate(), tol):
                return i, j
    return None


def _pairing(a: np.ndarray, b: np.ndarray):
    return linalg.trace_of_product(a, b)


def _orthonormal_error(elements, tol) -> tuple[int, int] | None:
    for i, a in enumerate(elements):
        for j in range(i, len(elements)):
            target = 1 if i == j else 0
            if not approx_equal(_pairing(a, elements[j]), target, tol):
                return i, j
    return None


def custom_basis(
    matrices, labels=None, tol: Tolerance | None = None
) -> HermitianBasis:
    """Validate and wrap an explicitly ordered basis.

    Raises ``ValueError`` if an element is not Hermitian, if the trace
    pairings differ from ``delta_ij``, or if element 0 is not a multiple of the
    identity.
    """
    elements = tuple(linalg.as_matrix(m) for m in matrices)
    if not elements:
        raise ValueError("empty basis")
    d = elements[0].shape[0]
    if len(elements) != d * d:
        raise ValueError(f"a basis of {d}x{d} matrices needs {d * d} elements, got {len(elements)}")
    for k, m in enumerate(elements):
        if m.shape != (d, d):
            raise ValueError(f"element {k} has shape {m.shape}, expected {(d, d)}")
        bad = _hermitian_error(m, tol)
        if bad is not None:
            raise ValueError(f"element {k} is not Hermitian at entry {bad}")
    e0 = elements[0]
    off = [x for (i, j), x in np.ndenumerate(e0) if i != j]
    if not all(is_zero(x, tol) for x in off) or not all(
        approx_equal(e0[i, i], e0[0, 0], tol) for i in range(d)
    ):
        raise ValueError("element 0 must be proportional to the identity")
    bad = _orthonormal_error(elements, tol)
    if bad is not None:
        i, j = bad
        raise ValueError(f"tr(e_{i} e_{j}) differs from delta_{i}{j}")
    if labels is None:
        labels = tuple(f"e{k}" for k in range(d * d))
    return HermitianBasis(d, elements, tuple(labels))


def verify_orthonormal(basis: HermitianBasis, tol: Tolerance | None = None) -> bool:
    """True iff all ``d**4`` trace pairings equal ``delta_ij``."""
    els = basis.elements
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            if not approx_equal(_pairing(a, b), 1 if i == j else 0, tol):
                return False
    return True


def expand(h: np.ndarray, basis: HermitianBasis) -> list:
    """Coefficients ``tr(h e_i)`` of ``h`` in the basis."""
    return [_pairing(h, e) for e in basis.elements]
