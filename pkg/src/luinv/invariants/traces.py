"""Trace-word invariants: Specht's criterion and its simultaneous version.

Words are enumerated once per cyclic class (trace is invariant under
rotation), as necklaces over the letter alphabet, shortest first and in
lexicographic order within a length.  The enumeration walks prenecklaces
level by level so every word's matrix product extends its parent's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .. import linalg
from ..bloch import BlochTriple
from ..scalarfield import Tolerance, approx_equal
from .verdict import Outcome, Verdict

#: the pair alphabet of the simultaneous trace identities, 1-based and i <= j
PAIRS = ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))


@dataclass(frozen=True)
class DerivedTriple:
    """``A1 = W W^t``, ``A2 = W v u^t``, ``A3 = u u^t`` (all m x m)."""

    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray

    @property
    def family(self) -> list[np.ndarray]:
        return [self.A1, self.A2, self.A3]


def derived_triple(t: BlochTriple) -> DerivedTriple:
    Wv = linalg.matmul(t.W, t.v)
    return DerivedTriple(
        linalg.matmul(t.W, t.W.T),
        np.multiply.outer(Wv, t.u),
        np.multiply.outer(t.u, t.u),
    )


@dataclass(frozen=True)
class WordComposition:
    """A sequence of index pairs ``(i_t, j_t)`` with ``1 <= i_t <= j_t <= 3``.

    Stands for the product ``A_{i_1} A_{j_1}^t ... A_{i_k} A_{j_k}^t``.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if not 1 <= i <= j <= 3:
                raise ValueError(f"pair ({i},{j}) violates 1 <= i <= j <= 3")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def rotate(self, k: int) -> WordComposition:
        k %= max(len(self.pairs), 1)
        return WordComposition(self.pairs[k:] + self.pairs[:k])

    def canonical(self) -> WordComposition:
        """Lexicographically least rotation by whole pairs."""
        if not self.pairs:
            return self
        return min((self.rotate(k) for k in range(len(self.pairs))), key=lambda w: w.pairs)

    def __str__(self):
        return "".join(f"({i},{j})" for i, j in self.pairs) or "()"

    @classmethod
    def parse(cls, text: str) -> WordComposition:
        nums = [int(x) for x in text.replace("(", " ").replace(")", " ").replace(",", " ").split()]
        if len(nums) % 2:
            raise ValueError(f"malformed word {text!r}")
        return cls(tuple(zip(nums[::2], nums[1::2])))


def specht_word_trace(family: Sequence[np.ndarray], word) -> object:
    """``tr(A_{i_1} A_{j_1}^t ... A_{i_k} A_{j_k}^t)`` for a 1-based pair word.

    The empty word gives ``tr(I_m) = m``.
    """
    pairs = word.pairs if isinstance(word, WordComposition) else tuple(word)
    m = family[0].shape[0]
    exact = linalg.is_exact_array(family[0])
    if not pairs:
        return linalg.trace(linalg.identity(m, exact))
    prod = None
    for i, j in pairs:
        if not (1 <= i <= len(family) and 1 <= j <= len(family)):
            raise IndexError(f"pair ({i},{j}) addresses a family of size {len(family)}")
        step = linalg.matmul(family[i - 1], family[j - 1].T)
        prod = step if prod is None else linalg.matmul(prod, step)
    return linalg.trace(prod)


def completeness_bound(n: int) -> int:
    """Word-length bound ``ceil(n*sqrt(2n^2/(n-1) + 1/4) + n/2 - 2)``.

    Known sufficient length for trace words to separate orbits of n x n
    matrices (Pappacena-type bound); computed exactly.
    """
    if n < 1:
        raise ValueError("matrix size must be positive")
    if n == 1:
        return 1
    # need smallest integer k with k - c >= sqrt(q), c = n/2 - 2
    q = Fraction(n * n) * (Fraction(2 * n * n, n - 1) + Fraction(1, 4))
    c = Fraction(n, 2) - 2
    k = math.floor(c + math.isqrt(math.floor(q)))
    while not (k - c >= 0 and (k - c) ** 2 >= q):
        k += 1
    while k - 1 - c >= 0 and (k - 1 - c) ** 2 >= q:
        k -= 1
    return k


def necklaces(k: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """All necklaces over ``range(k)`` of length 1..max_len, shortest first."""
    for word, _, _ in _walk([None] * k, [None] * k, max_len, products=False):
        yield word


def _walk(letters1, letters2, max_len, products=True, tol=None):
    """Yield ``(word, trace1, trace2)`` for every necklace up to ``max_len``.

    Prenecklace extension follows the FKM rule: with period ``p`` the next
    symbol is ``a[t-p]`` (period kept) or anything larger (period becomes t).
    """
    k = len(letters1)
    level = [((), 1, None, None)]
    for t in range(1, max_len + 1):
        last = t == max_len
        nxt = []
        for word, p, P1, P2 in level:
            ref = word[t - p - 1] if t > 1 else 0
            children = [(ref, p)] + [(j, t) for j in range(ref + 1, k)]
            for sym, period in children:
                child = word + (sym,)
                necklace = t % period == 0
                if not products:
                    if necklace:
                        yield child, None, None
                    if not last:
                        nxt.append((child, period, None, None))
                    continue
                L1, L2 = letters1[sym], letters2[sym]
                if last:
                    if necklace:
                        tr1 = linalg.trace(L1) if P1 is None else linalg.trace_of_product(P1, L1)
                        tr2 = linalg.trace(L2) if P2 is None else linalg.trace_of_product(P2, L2)
                        yield child, tr1, tr2
                    continue
                Q1 = L1 if P1 is None else linalg.matmul(P1, L1)
                Q2 = L2 if P2 is None else linalg.matmul(P2, L2)
                if necklace:
                    yield child, linalg.trace(Q1), linalg.trace(Q2)
                if linalg.is_zero_array(Q1, tol) and linalg.is_zero_array(Q2, tol):
                    # every extension has trace 0 on both sides
                    continue
                nxt.append((child, period, Q1, Q2))
        level = nxt


def first_trace_mismatch(letters1, letters2, max_len: int, tol: Tolerance | None = None):
    """First necklace word whose traces differ, or ``None``.

    Returns ``(word, trace1, trace2)``.
    """
    if len(letters1) != len(letters2):
        raise ValueError("alphabets differ in size")
    for word, tr1, tr2 in _walk(list(letters1), list(letters2), max_len, tol=tol):
        if not approx_equal(tr1, tr2, tol):
            return word, tr1, tr2
    return None


def _pair_letters(family):
    return [linalg.matmul(family[i - 1], family[j - 1].T) for i, j in PAIRS]


def _check_shapes(t1: BlochTriple, t2: BlochTriple):
    if (t1.m, t1.n) != (t2.m, t2.n):
        raise ValueError(f"triples have different shapes ({t1.m},{t1.n}) vs ({t2.m},{t2.n})")


def trace_identity_check(
    t1: BlochTriple,
    t2: BlochTriple,
    max_pairs: int | None = None,
    tol: Tolerance | None = None,
) -> Verdict:
    """Compare all pair-word traces of the derived triples up to ``max_pairs`` pairs.

    ``max_pairs`` defaults to ``m``.  The verdict is ``EQUIVALENT`` only for
    identical triples or when ``max_pairs`` reaches :func:`completeness_bound`
    of ``m``; otherwise a clean run is ``CONSISTENT`` up to the bound.
    """
    _check_shapes(t1, t2)
    if max_pairs is None:
        max_pairs = t1.m
    if max_pairs < 1:
        raise ValueError("max_pairs must be at least 1")
    if t1.equals(t2, tol):
        return Verdict("trace", Outcome.EQUIVALENT, max_pairs, detail="identical triples")
    L1 = _pair_letters(derived_triple(t1).family)
    L2 = _pair_letters(derived_triple(t2).family)
    hit = first_trace_mismatch(L1, L2, max_pairs, tol)
    if hit is not None:
        word, a, b = hit
        w = WordComposition(tuple(PAIRS[s] for s in word))
        return Verdict("trace", Outcome.INEQUIVALENT, max_pairs, str(w), f"traces {a} vs {b}")
    full = completeness_bound(t1.m)
    if max_pairs >= full:
        return Verdict("trace", Outcome.EQUIVALENT, max_pairs, detail=f"complete at length {full}")
    return Verdict("trace", Outcome.CONSISTENT, max_pairs, detail=f"complete bound is {full}")


def format_letters(word: Sequence[int]) -> str:
    return "".join("xy"[s] for s in word)


def specht_check(
    M1: np.ndarray,
    M2: np.ndarray,
    max_len: int | None = None,
    tol: Tolerance | None = None,
    criterion: str = "specht",
) -> Verdict:
    """Orthogonal-similarity test via traces of words in ``M`` (x) and ``M^t`` (y).

    ``max_len`` counts letters and defaults to the completeness bound of the
    matrix size, at which a clean run is reported ``EQUIVALENT``.
    """
    M1, M2 = linalg.as_matrix(M1), linalg.as_matrix(M2)
    if M1.shape != M2.shape or M1.ndim != 2 or M1.shape[0] != M1.shape[1]:
        raise ValueError(f"need square matrices of equal size, got {M1.shape} and {M2.shape}")
    full = completeness_bound(M1.shape[0])
    if max_len is None:
        max_len = full
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if linalg.arrays_equal(M1, M2, tol):
        return Verdict(criterion, Outcome.EQUIVALENT, max_len, detail="identical matrices")
    hit = first_trace_mismatch([M1, M1.T], [M2, M2.T], max_len, tol)
    if hit is not None:
        word, a, b = hit
        return Verdict(criterion, Outcome.INEQUIVALENT, max_len, format_letters(word), f"traces {a} vs {b}")
    if max_len >= full:
        return Verdict(criterion, Outcome.EQUIVALENT, max_len, detail=f"complete at length {full}")
    return Verdict(criterion, Outcome.CONSISTENT, max_len, detail=f"complete bound is {full}")


def _sq_norm(x: np.ndarray):
    return linalg.matmul(x, x)


def norm_condition(t1: BlochTriple, t2: BlochTriple, tol: Tolerance | None = None) -> bool:
    """``|u1|^2 == |u2|^2`` or ``|v1|^2 == |v2|^2`` (squared norms, no radicals)."""
    return approx_equal(_sq_norm(t1.u), _sq_norm(t2.u), tol) or approx_equal(
        _sq_norm(t1.v), _sq_norm(t2.v), tol
    )


def norm_check(t1: BlochTriple, t2: BlochTriple, tol: Tolerance | None = None) -> Verdict:
    _check_shapes(t1, t2)
    if norm_condition(t1, t2, tol):
        return Verdict("norm", Outcome.CONSISTENT)
    witness = (
        f"|u|^2 {_sq_norm(t1.u)} vs {_sq_norm(t2.u)}; |v|^2 {_sq_norm(t1.v)} vs {_sq_norm(t2.v)}"
    )
    return Verdict("norm", Outcome.INEQUIVALENT, witness=witness)
