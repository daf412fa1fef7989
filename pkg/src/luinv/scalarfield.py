"""Exact arithmetic in multi-quadratic fields Q(sqrt(n1), ..., sqrt(nk)).

An :class:`ExactScalar` is a finite sum ``c_1*sqrt(r_1) + ... + c_k*sqrt(r_k)``
with rational coefficients and distinct squarefree radicands.  Every
normalisation constant of a generalized Gell-Mann basis lives in such a field,
so rank and gcd decisions downstream can be made exactly.

:class:`ComplexScalar` pairs two exact reals.  Floating point values (Python
``float``/``complex`` or numpy scalars) are the approximate backend; the helper
functions :func:`is_zero` and :func:`approx_equal` dispatch on the element type
so that generic algorithms work with either backend.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

__all__ = [
    "ExactScalar",
    "ComplexScalar",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "ScalarSyntaxError",
    "ZERO",
    "ONE",
    "I",
    "parse_scalar",
    "parse_terms",
    "format_terms",
    "squarefree_reduce",
    "sqrt",
    "to_float",
    "exact",
    "is_exact",
    "is_zero",
    "approx_equal",
]


@dataclass(frozen=True)
class Tolerance:
    """Comparison tolerance for the floating backend (ignored by exact values)."""

    relative: float = 1e-9
    absolute: float = 1e-12

    def __post_init__(self):
        if self.relative < 0 or self.absolute < 0:
            raise ValueError("tolerances must be nonnegative")


DEFAULT_TOLERANCE = Tolerance()


class ScalarSyntaxError(ValueError):
    """Raised for malformed scalar or polynomial text; carries the offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def squarefree_reduce(n: int) -> tuple[int, int]:
    """Split ``n`` as ``f**2 * s`` with ``s`` squarefree; returns ``(s, f)``."""
    if n < 1:
        raise ValueError(f"squarefree_reduce needs a positive integer, got {n}")
    s, f = 1, 1
    p = 2
    while p * p <= n:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        f *= p ** (k // 2)
        if k % 2:
            s *= p
        p += 1 if p == 2 else 2
    return s * n, f


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class ExactScalar:
    """Element of a multi-quadratic extension of the rationals.

    ``terms`` maps squarefree radicands (``1`` is the rational part) to
    rational coefficients.  Values are immutable and hashable; equal values
    have identical canonical terms.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        acc: dict[int, Fraction] = {}
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {1: terms}
        for radicand, coeff in terms.items():
            radicand = int(radicand)
            if radicand < 1:
                raise ValueError(f"radicand must be positive, got {radicand}")
            s, f = squarefree_reduce(radicand)
            acc[s] = acc.get(s, Fraction(0)) + _as_fraction(coeff) * f
        self._terms = {r: c for r, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> ExactScalar:
        # terms must already be canonical: squarefree keys, nonzero Fractions
        obj = object.__new__(cls)
        obj._terms = dict(sorted(terms.items())) if len(terms) > 1 else terms
        obj._hash = None
        return obj

    @classmethod
    def sqrt(cls, n) -> ExactScalar:
        """Exact square root of a nonnegative rational."""
        q = _as_fraction(n)
        if q < 0:
            raise ValueError("square root of a negative number is not real")
        if q == 0:
            return ZERO
        # sqrt(a/b) = sqrt(a*b)/b
        return cls({q.numerator * q.denominator: Fraction(1, q.denominator)})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(self._terms)

    def is_rational(self) -> bool:
        return not self._terms or tuple(self._terms) == (1,)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    # numeric protocol -------------------------------------------------

    @property
    def real(self) -> ExactScalar:
        return self

    @property
    def imag(self) -> ExactScalar:
        return ZERO

    def conjugate(self) -> ExactScalar:
        return self

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return to_float(self)

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            q = _as_fraction(other)
            return ExactScalar._raw({1: q} if q else {})
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, ComplexScalar):
                return other == self
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __neg__(self):
        return ExactScalar._raw({r: -c for r, c in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = dict(self._terms)
        for r, c in o._terms.items():
            v = acc.get(r)
            v = c if v is None else v + c
            if v:
                acc[r] = v
            else:
                acc.pop(r, None)
        return ExactScalar._raw(acc)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._terms, o._terms
        if not a or not b:
            return ZERO
        if len(b) == 1 and 1 in b:
            k = b[1]
            return ExactScalar._raw({r: c * k for r, c in a.items()})
        if len(a) == 1 and 1 in a:
            k = a[1]
            return ExactScalar._raw({r: c * k for r, c in b.items()})
        acc: dict[int, Fraction] = {}
        for ra, ca in a.items():
            for rb, cb in b.items():
                # product of squarefree radicands: sqrt(ra*rb) = g*sqrt(ra*rb/g^2)
                g = math.gcd(ra, rb)
                r = (ra // g) * (rb // g)
                acc[r] = acc.get(r, 0) + ca * cb * g
        return ExactScalar._raw({r: c for r, c in acc.items() if c})

    __rmul__ = __mul__

    def inverse(self) -> ExactScalar:
        if not self._terms:
            raise ZeroDivisionError("inverse of zero in the exact field")
        if len(self._terms) == 1:
            (r, c), = self._terms.items()
            # 1/(c*sqrt(r)) = sqrt(r)/(c*r)
            return ExactScalar._raw({r: 1 / (c * r)})
        return _inverse(tuple(self._terms.items()))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, ComplexScalar):
                return ComplexScalar(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self):
        return abs(to_float(self))

    def __repr__(self):
        return f"ExactScalar({str(self)!r})"

    def __str__(self):
        return format_terms({(): self})


@lru_cache(maxsize=4096)
def _inverse(items: tuple) -> ExactScalar:
    # Solve a*x = 1 over the Q-basis {sqrt(b)} of Q(sqrt(p) for the primes p
    # dividing the radicands of a); dimension 2**k.
    primes = sorted({p for r, _ in items for p in _prime_factors(r)})
    basis = [1]
    for p in primes:
        basis += [b * p for b in basis]
    basis.sort()
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    # column j holds the coordinates of a*sqrt(basis[j])
    mat = [[Fraction(0)] * n for _ in range(n)]
    for j, b in enumerate(basis):
        for r, c in items:
            g = math.gcd(r, b)
            mat[index[(r // g) * (b // g)]][j] += c * g
    rhs = [Fraction(0)] * n
    rhs[index[1]] = Fraction(1)
    for col in range(n):
        piv = next(i for i in range(col, n) if mat[i][col])
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / mat[col][col]
        row = [x * inv for x in mat[col]]
        mat[col], rhs[col] = row, rhs[col] * inv
        for i in range(n):
            f = mat[i][col]
            if i != col and f:
                mat[i] = [x - f * y for x, y in zip(mat[i], row)]
                rhs[i] -= f * rhs[col]
    return ExactScalar._raw({b: rhs[i] for i, b in enumerate(basis) if rhs[i]})


ZERO = ExactScalar._raw({})
ONE = ExactScalar._raw({1: Fraction(1)})


def sqrt(n) -> ExactScalar:
    """Shorthand for :meth:`ExactScalar.sqrt`."""
    return ExactScalar.sqrt(n)


def exact(value) -> ExactScalar | ComplexScalar:
    """Coerce ints, Fractions, scalar strings and exact values to the exact field."""
    if isinstance(value, (ExactScalar, ComplexScalar)):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, (int, Fraction, np.integer)):
        q = _as_fraction(value)
        return ExactScalar._raw({1: q} if q else {})
    if isinstance(value, complex):
        raise TypeError("complex floats have no exact representation")
    if isinstance(value, float):
        return ExactScalar(Fraction(repr(value)))
    raise TypeError(f"cannot coerce {type(value).__name__} to an exact scalar")


class ComplexScalar:
    """Complex number ``re + i*im`` over the exact real field."""

    __slots__ = ("re", "im")

    def __init__(self, re=ZERO, im=ZERO):
        self.re = exact(re)
        self.im = exact(im)
        if isinstance(self.re, ComplexScalar) or isinstance(self.im, ComplexScalar):
            raise TypeError("ComplexScalar parts must be real")

    @property
    def real(self) -> ExactScalar:
        return self.re

    @property
    def imag(self) -> ExactScalar:
        return self.im

    def conjugate(self) -> ComplexScalar:
        return ComplexScalar(self.re, -self.im)

    def abs2(self) -> ExactScalar:
        return self.re * self.re + self.im * self.im

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexScalar):
            return other
        if isinstance(other, (ExactScalar, int, Fraction, np.integer)):
            return ComplexScalar(other)
        return None

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (ExactScalar, int, Fraction)):
            return ComplexScalar(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.im:
            return ComplexScalar(self.re * o.re, self.im * o.re)
        if not self.im:
            return ComplexScalar(self.re * o.re, self.re * o.im)
        return ComplexScalar(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self) -> ComplexScalar:
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("inverse of zero in the exact field")
        inv = n.inverse()
        return ComplexScalar(self.re * inv, -self.im * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __complex__(self):
        return complex(to_float(self.re), to_float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"ComplexScalar({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re} + ({self.im})*i"


I = ComplexScalar(0, 1)


def to_float(a) -> float | complex:
    """Double-precision value of an exact scalar (approximate by design)."""
    if isinstance(a, ComplexScalar):
        return complex(to_float(a.re), to_float(a.im))
    if isinstance(a, ExactScalar):
        return math.fsum(float(c) * math.sqrt(r) for r, c in a._terms.items())
    if isinstance(a, (complex, np.complexfloating)):
        return complex(a)
    return float(a)


def is_exact(x) -> bool:
    return isinstance(x, (ExactScalar, ComplexScalar, int, Fraction, np.integer))


def is_zero(x, tol: Tolerance | None = None) -> bool:
    """Zero test: exact for exact values, ``|x| <= tol.absolute`` for floats."""
    if is_exact(x):
        return x == 0
    tol = tol or DEFAULT_TOLERANCE
    return abs(x) <= tol.absolute


def approx_equal(a, b, tol: Tolerance | None = None) -> bool:
    """Equality: exact when both sides are exact, else relative+absolute tolerance."""
    if is_exact(a) and is_exact(b):
        return a == b
    a, b = to_float(a) if is_exact(a) else a, to_float(b) if is_exact(b) else b
    tol = tol or DEFAULT_TOLERANCE
    return abs(a - b) <= tol.absolute + tol.relative * max(abs(a), abs(b))


# -- text grammar ---------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)\s*\(|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_terms(poly: dict, variables: tuple[str, ...] = ()) -> str:
    """Canonical text for ``{exponents: ExactScalar}``.

    Monomials are listed in the order given by the caller's keys (callers pass
    them already sorted); each coefficient is expanded over its radicands in
    ascending order, so ``(1 + sqrt(2))*l`` prints as ``l + sqrt(2)*l``.
    """
    parts: list[tuple[bool, str]] = []
    for exps, coeff in poly.items():
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(variables, exps or ()) if e
        )
        for r, c in coeff._terms.items():
            negative = c < 0
            mag = -c if negative else c
            factors = []
            if mag != 1 or (r == 1 and not mono):
                factors.append(_format_rational(mag))
            if r != 1:
                factors.append(f"sqrt({r})")
            if mono:
                factors.append(mono)
            parts.append((negative, "*".join(factors)))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for negative, body in parts[1:]:
        out += (" - " if negative else " + ") + body
    return out


def parse_terms(text: str, variables: tuple[str, ...] = ()) -> dict:
    """Parse a signed sum of products into ``{exponent tuple: ExactScalar}``.

    Each product is built from factors ``int``, ``int/int``, ``sqrt(int)`` and
    (when ``variables`` is given) ``var`` or ``var^int``.
    """
    pos = 0
    n = len(text)
    result: dict = {}

    def peek():
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start() or pos >= n:
            return None, pos
        return m, m.end()

    def expect_int(where):
        nonlocal pos
        m, end = peek()
        if m is None or m.group(1) is None:
            raise ScalarSyntaxError("expected an integer", text, where)
        pos = end
        return int(m.group(1))

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect_char(ch):
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != ch:
            raise ScalarSyntaxError(f"expected {ch!r}", text, pos)
        pos += 1

    skip_ws()
    if pos >= n:
        raise ScalarSyntaxError("empty expression", text, pos)
    sign = 1
    first = True
    while True:
        skip_ws()
        if pos < n and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ScalarSyntaxError("expected '+' or '-'", text, pos)
        first = False
        coeff = ExactScalar._raw({1: Fraction(sign)})
        exps = [0] * len(variables)
        while True:
            skip_ws()
            start = pos
            m, end = peek()
            if m is None:
                raise ScalarSyntaxError("expected a term", text, start)
            if m.group(1) is not None:
                pos = end
                num = int(m.group(1))
                skip_ws()
                if pos < n and text[pos] == "/":
                    pos += 1
                    skip_ws()
                    den_at = pos
                    den = expect_int(den_at)
                    if den == 0:
                        raise ScalarSyntaxError("zero denominator", text, den_at)
                    coeff = coeff * Fraction(num, den)
                else:
                    coeff = coeff * num
            elif m.group(2) is not None:
                pos = end
                skip_ws()
                arg_at = pos
                arg = expect_int(arg_at)
                if arg == 0:
                    raise ScalarSyntaxError("sqrt radicand must be positive", text, arg_at)
                expect_char(")")
                coeff = coeff * ExactScalar.sqrt(arg)
            elif m.group(3) is not None and m.group(3) in variables:
                pos = end
                k = variables.index(m.group(3))
                skip_ws()
                power = 1
                if pos < n and text[pos] == "^":
                    pos += 1
                    skip_ws()
                    power = expect_int(pos)
                exps[k] += power
            else:
                raise ScalarSyntaxError("unexpected token", text, start)
            skip_ws()
            if pos < n and text[pos] == "*":
                pos += 1
                continue
            break
        key = tuple(exps)
        total = result.get(key, ZERO) + coeff
        if total:
            result[key] = total
        else:
            result.pop(key, None)
        skip_ws()
        if pos >= n:
            break
    return result


def parse_scalar(text: str) -> ExactScalar:
    """Parse the scalar grammar, e.g. ``"1/2 - 1/3*sqrt(2)"`` or ``"sqrt(12)"``."""
    return parse_terms(text).get((), ZERO)
