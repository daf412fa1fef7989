"""The Albert determinant ``det(x I - x1 W W^t - x2 u u^t - x3 W v u^t)``."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import numpy as np

from .. import linalg
from ..bloch import BlochTriple
from ..scalarfield import ONE, ZERO, Tolerance, approx_equal, format_terms, is_zero, parse_terms
from .traces import derived_triple
from .verdict import Outcome, Verdict

VARIABLES = ("x", "x1", "x2", "x3")

#: above this size the determinant is interpolated instead of expanded
EXPANSION_LIMIT = 8


class MultiPoly:
    """Sparse polynomial in ``x, x1, x2, x3`` with field coefficients.

    Zero coefficients are never stored (exact zero test; float coefficients
    are trimmed with :meth:`trimmed`).  Text form lists monomials in graded
    lexicographic order, highest first, with ``x > x1 > x2 > x3``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {tuple(k): v for k, v in (terms or {}).items() if not _exact_zero(v)}

    @classmethod
    def constant(cls, c) -> MultiPoly:
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def variable(cls, k: int, coeff=ONE) -> MultiPoly:
        e = [0, 0, 0, 0]
        e[k] = 1
        return cls({tuple(e): coeff})

    @classmethod
    def parse(cls, text: str) -> MultiPoly:
        return cls(parse_terms(text, VARIABLES))

    def __add__(self, other: MultiPoly) -> MultiPoly:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return MultiPoly(out)

    def __neg__(self) -> MultiPoly:
        return MultiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return MultiPoly({k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3])
                p = va * vb
                out[k] = out[k] + p if k in out else p
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPoly:
        out = MultiPoly.constant(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def equals(self, other: MultiPoly, tol: Tolerance | None = None) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(
            approx_equal(self.terms.get(k, 0), other.terms.get(k, 0), tol) for k in keys
        )

    def trimmed(self, tol: Tolerance | None = None) -> MultiPoly:
        return MultiPoly({k: v for k, v in self.terms.items() if not is_zero(v, tol)})

    def monomials(self) -> list[tuple[int, ...]]:
        """Exponent vectors in graded lexicographic order, highest first."""
        return sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), ZERO)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def substitute(self, values) -> object:
        """Evaluate at ``(x, x1, x2, x3)``."""
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            total = total + term
        return total

    def __str__(self):
        mons = self.monomials()
        if all(hasattr(self.terms[e], "_terms") for e in mons):
            return format_terms({e: self.terms[e] for e in mons}, VARIABLES)
        parts = [
            f"({_float_text(self.terms[e])})" + (f"*{monomial_name(e)}" if any(e) else "")
            for e in mons
        ]
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def _float_text(c) -> str:
    c = complex(c)
    return repr(c.real) if c.imag == 0 else repr(c)


def monomial_name(exps) -> str:
    mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(VARIABLES, exps) if k)
    return mono or "1"


def _exact_zero(v) -> bool:
    return v == 0 if not isinstance(v, float) else v == 0.0


def _determinant_by_minors(M: list[list[MultiPoly]], one=ONE) -> MultiPoly:
    """Division-free Laplace expansion along rows, memoized on column subsets."""
    n = len(M)
    memo: dict[int, MultiPoly] = {}

    def minor(row: int, cols: int) -> MultiPoly:
        if row == n:
            return MultiPoly.constant(one)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = MultiPoly()
        sign = 1
        for c in range(n):
            if cols >> c & 1:
                a = M[row][c]
                if a:
                    term = a * minor(row + 1, cols & ~(1 << c))
                    total = total + term if sign > 0 else total - term
                sign = -sign
        memo[cols] = total
        return total

    return minor(0, (1 << n) - 1)


def _pencil_matrix(A1, A3, A2, one=ONE) -> list[list[MultiPoly]]:
    m = A1.shape[0]
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            p = MultiPoly()
            if i == j:
                p = p + MultiPoly.variable(0, one)
            for k, A in ((1, A1), (2, A3), (3, A2)):
                if not _exact_zero(A[i, j]):
                    p = p + MultiPoly.variable(k, -A[i, j])
            row.append(p)
        rows.append(row)
    return rows


def _charpoly(N: np.ndarray) -> list:
    """Coefficients ``c_0..c_m`` of ``det(x I - N)`` (Faddeev-LeVerrier)."""
    m = N.shape[0]
    exact = linalg.is_exact_array(N)
    coeffs = [ZERO if exact else 0.0] * (m + 1)
    coeffs[m] = ONE if exact else 1.0
    eye = linalg.identity(m, exact)
    Mk = linalg.zeros((m, m), exact)
    for k in range(1, m + 1):
        Mk = linalg.matmul(N, Mk) + eye * coeffs[m - k + 1]
        coeffs[m - k] = -linalg.trace(linalg.matmul(N, Mk)) * (Fraction(1, k) if exact else 1.0 / k)
    return coeffs


def _interpolate(A1, A3, A2) -> MultiPoly:
    """Evaluate the characteristic polynomial on the lattice ``a+b+c <= m``
    and rebuild each coefficient with multivariate Newton forward differences."""
    m = A1.shape[0]
    exact = linalg.is_exact_array(A1)
    pts = [(a, b, c) for a in range(m + 1) for b in range(m + 1 - a) for c in range(m + 1 - a - b)]
    values = {}
    for a, b, c in pts:
        values[(a, b, c)] = _charpoly(A1 * a + A3 * b + A2 * c)

    one = ONE if exact else 1.0
    result = MultiPoly()
    for k in range(m + 1):
        deg = m - k
        # forward differences along each axis, in place on the simplex
        diff = {p: values[p][k] for p in pts if sum(p) <= deg}
        for axis in range(3):
            new = {}
            for p in diff:
                # Delta^{p[axis]} along axis at the origin of that axis
                n = p[axis]
                total = ZERO if exact else 0.0
                for s in range(n + 1):
                    q = list(p)
                    q[axis] = s
                    coef = comb(n, s) * (-1) ** (n - s)
                    total = total + diff[tuple(q)] * coef
                new[p] = total
            diff = new
        # f = sum_{i+j+l<=deg} diff[i,j,l] C(x1,i) C(x2,j) C(x3,l)
        for (i, j, l), d in diff.items():
            if _exact_zero(d):
                continue
            term = MultiPoly.constant(d)
            for var, n in ((1, i), (2, j), (3, l)):
                term = term * _binomial_poly(var, n, one)
            result = result + term * MultiPoly({(k, 0, 0, 0): one})
    return result


def _binomial_poly(var: int, n: int, one=ONE) -> MultiPoly:
    """``C(x_var, n) = x(x-1)...(x-n+1)/n!`` as a polynomial."""
    out = MultiPoly.constant(one)
    for r in range(n):
        out = out * (MultiPoly.variable(var, one) - MultiPoly.constant(one * r))
    scale = Fraction(1, factorial(n))
    return out * (scale if one is ONE else float(scale))


def albert_polynomial(t: BlochTriple, strategy: str = "auto") -> MultiPoly:
    """``det(x I - x1 W W^t - x2 u u^t - x3 W v u^t)``, homogeneous of degree m.

    ``strategy``: ``"expand"`` (Laplace expansion over the polynomial ring),
    ``"interpolate"`` (exact characteristic polynomials at lattice points plus
    Newton interpolation) or ``"auto"`` (expand for m <= 8).
    """
    d = derived_triple(t)
    one = ONE if t.is_exact else 1.0
    if strategy == "auto":
        strategy = "expand" if t.m <= EXPANSION_LIMIT else "interpolate"
    if strategy == "expand":
        return _determinant_by_minors(_pencil_matrix(d.A1, d.A3, d.A2, one), one)
    if strategy == "interpolate":
        return _interpolate(d.A1, d.A3, d.A2)
    raise ValueError(f"unknown strategy {strategy!r}")


def albert_check(t1: BlochTriple, t2: BlochTriple, tol: Tolerance | None = None) -> Verdict:
    """Necessary condition only: never returns ``EQUIVALENT``."""
    if (t1.m, t1.n) != (t2.m, t2.n):
        raise ValueError(f"triples have different shapes ({t1.m},{t1.n}) vs ({t2.m},{t2.n})")
    p1, p2 = albert_polynomial(t1), albert_polynomial(t2)
    keys = sorted(set(p1.terms) | set(p2.terms), key=lambda e: (sum(e), e), reverse=True)
    for e in keys:
        a, b = p1.terms.get(e, ZERO), p2.terms.get(e, ZERO)
        if not approx_equal(a, b, tol):
            return Verdict(
                "albert", Outcome.INEQUIVALENT, witness=f"coefficient of {monomial_name(e)}",
                detail=f"{a} vs {b}",
            )
    return Verdict("albert", Outcome.CONSISTENT, detail="Albert polynomials agree")
