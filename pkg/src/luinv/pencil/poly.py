"""Univariate polynomials in ``l`` (the pencil variable) over the scalar field."""

from __future__ import annotations

from ..scalarfield import ONE, ZERO, Tolerance, approx_equal, format_terms, is_zero, parse_terms

VARIABLE = "l"


def _zero_like(c):
    return 0.0 if isinstance(c, (float, complex)) else ZERO


class Poly:
    """Dense polynomial with ascending coefficients; trailing zeros trimmed.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and is_zero(coeffs[-1]) and not isinstance(coeffs[-1], float):
            coeffs.pop()
        while coeffs and isinstance(coeffs[-1], float) and coeffs[-1] == 0.0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=ONE) -> Poly:
        return cls([_zero_like(c)] * degree + [c])

    @classmethod
    def parse(cls, text: str) -> Poly:
        terms = parse_terms(text, (VARIABLE,))
        if not terms:
            return cls()
        deg = max(k for (k,) in terms)
        return cls([terms.get((k,), ZERO) for k in range(deg + 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def trimmed(self, tol: Tolerance | None = None) -> Poly:
        c = list(self.coeffs)
        while c and is_zero(c[-1], tol):
            c.pop()
        return Poly(c)

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        inv = 1 / self.lc()
        return Poly([c * inv for c in self.coeffs[:-1]] + [ONE if not isinstance(inv, float) else 1.0])

    def __call__(self, x):
        acc = _zero_like(self.coeffs[0]) if self.coeffs else ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            return other
        try:
            return Poly([other])
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if is_zero(x):
                continue
            for j, y in enumerate(b):
                p = x * y
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        z = _zero_like(a[0])
        return Poly([z if c is None else c for c in out])

    def __rmul__(self, other):
        return self * other

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def equals(self, other: Poly, tol: Tolerance | None = None) -> bool:
        a, b = self.trimmed(tol), other.trimmed(tol)
        return a.degree == b.degree and all(
            approx_equal(x, y, tol) for x, y in zip(a.coeffs, b.coeffs)
        )

    def __str__(self):
        if not self.coeffs:
            return "0"
        if all(hasattr(c, "_terms") for c in self.coeffs):
            terms = {(k,): self.coeffs[k] for k in range(self.degree, -1, -1) if self.coeffs[k]}
            return format_terms(terms, (VARIABLE,))
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                mono = "" if k == 0 else (f"*{VARIABLE}" if k == 1 else f"*{VARIABLE}^{k}")
                c = complex(c)
                text = repr(c.real) if c.imag == 0 else repr(c)
                parts.append(f"({text}){mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def poly_divmod(a: Poly, b: Poly, tol: Tolerance | None = None) -> tuple[Poly, Poly]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    b = b.trimmed(tol)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a.trimmed(tol).coeffs)
    db = b.degree
    inv = 1 / b.lc()
    if len(r) <= db:
        return Poly(), Poly(r)
    q = [None] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv
        q[k - db] = c
        if is_zero(c):
            continue
        for i in range(db):
            r[k - db + i] = r[k - db + i] - c * b.coeffs[i]
        # leading term cancels by construction
        r[k] = _zero_like(r[k])
    return Poly(q), Poly(r[:db]).trimmed(tol)


def poly_gcd(a: Poly, b: Poly, tol: Tolerance | None = None) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = a.trimmed(tol), b.trimmed(tol)
    while not b.is_zero():
        a, b = b, poly_divmod(a, b, tol)[1]
    return a.monic()
