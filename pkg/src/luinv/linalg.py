"""Small dense-matrix helpers shared by the exact and floating backends.

Exact matrices are numpy ``object`` arrays holding :class:`ExactScalar` /
:class:`ComplexScalar` (or Python ints); floating matrices are ordinary
``float``/``complex`` arrays.  Most numpy operations already work on object
arrays; the helpers here cover what does not (sparse-aware products, typed
zeros, tolerant comparisons).
"""

from __future__ import annotations

import numpy as np

from .scalarfield import (
    ComplexScalar,
    ExactScalar,
    ONE,
    Tolerance,
    ZERO,
    approx_equal,
    exact,
    is_zero,
    to_float,
)


def is_exact_array(a: np.ndarray) -> bool:
    return a.dtype == object


def exact_array(rows) -> np.ndarray:
    """Object array with every entry coerced to the exact field."""
    a = np.asarray(rows, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = exact(x)
    return out


def as_matrix(a) -> np.ndarray:
    """Normalise input: integer arrays become exact, floats stay floats."""
    a = np.asarray(a)
    if a.dtype == object or np.issubdtype(a.dtype, np.integer) or a.dtype == bool:
        return exact_array(a)
    return a


def zeros(shape, exact_: bool = True, complex_: bool = False) -> np.ndarray:
    if exact_:
        return np.full(shape, ZERO, dtype=object)
    return np.zeros(shape, dtype=complex if complex_ else float)


def identity(n: int, exact_: bool = True) -> np.ndarray:
    if not exact_:
        return np.eye(n)
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = ONE
    return out


def like_zeros(ref: np.ndarray, shape) -> np.ndarray:
    return zeros(shape, exact_=is_exact_array(ref), complex_=np.iscomplexobj(ref))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product; exact operands use a loop that skips zero entries."""
    if not (is_exact_array(a) or is_exact_array(b)):
        return a @ b
    a2 = a if a.ndim == 2 else a.reshape(1, -1)
    b2 = b if b.ndim == 2 else b.reshape(-1, 1)
    n, k = a2.shape
    k2, m = b2.shape
    if k != k2:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    brows = [[(j, x) for j, x in enumerate(b2[r]) if x] for r in range(k)]
    out = np.full((n, m), ZERO, dtype=object)
    for i in range(n):
        acc: dict[int, object] = {}
        for r in range(k):
            x = a2[i, r]
            if not x:
                continue
            for j, y in brows[r]:
                p = x * y
                acc[j] = acc[j] + p if j in acc else p
        for j, v in acc.items():
            out[i, j] = v
    if a.ndim == 1 and b.ndim == 1:
        return out[0, 0]
    if a.ndim == 1:
        return out[0]
    if b.ndim == 1:
        return out[:, 0]
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def trace(a: np.ndarray):
    total = ZERO if is_exact_array(a) else 0.0
    for i in range(min(a.shape)):
        total = total + a[i, i]
    return total


def trace_of_product(a: np.ndarray, b: np.ndarray):
    """``tr(a @ b)`` without forming the product."""
    if not is_exact_array(a) and not is_exact_array(b):
        return np.sum(a * b.T)
    total = ZERO
    n, k = a.shape
    for i in range(n):
        for r in range(k):
            x = a[i, r]
            if x:
                y = b[r, i]
                if y:
                    total = total + x * y
    return total


def nonzeros(a: np.ndarray) -> list[tuple[tuple[int, ...], object]]:
    return [(idx, x) for idx, x in np.ndenumerate(a) if x]


def is_zero_array(a: np.ndarray, tol: Tolerance | None = None) -> bool:
    return all(is_zero(x, tol) for x in a.flat)


def arrays_equal(a: np.ndarray, b: np.ndarray, tol: Tolerance | None = None) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return all(approx_equal(x, y, tol) for x, y in zip(a.flat, b.flat))


def to_float_array(a: np.ndarray) -> np.ndarray:
    """Convert an exact array to ``float`` (or ``complex`` if any entry is)."""
    a = np.asarray(a)
    if not is_exact_array(a):
        return a
    vals = [to_float(x) if isinstance(x, (ExactScalar, ComplexScalar)) else x for x in a.flat]
    kind = complex if any(isinstance(v, complex) for v in vals) else float
    return np.array(vals, dtype=kind).reshape(a.shape)


def real_part(a: np.ndarray, tol: Tolerance | None = None, what: str = "matrix") -> np.ndarray:
    """Real part of ``a`` after checking the imaginary part vanishes."""
    for idx, x in np.ndenumerate(a):
        if not is_zero(x.imag, tol):
            raise ValueError(f"{what} entry {idx} has nonzero imaginary part {x.imag}")
    if is_exact_array(a):
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = x.real
        return out
    return np.real(a).astype(float)


def format_array(a: np.ndarray) -> list:
    """Nested lists of canonical strings (exact) or numbers (float)."""
    if is_exact_array(a):
        return np.vectorize(str, otypes=[object])(a).tolist() if a.size else a.tolist()
    return a.tolist()
