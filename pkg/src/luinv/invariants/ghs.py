"""Block reduction of simultaneous orthogonal similarity to a single matrix.

The triple ``{W W^t, W v u^t, u u^t}`` is packed into one nilpotent
``4m x 4m`` block upper-triangular matrix; two triples are simultaneously
orthogonally similar exactly when the packed matrices are orthogonally
similar, which :func:`specht_check` tests with trace words.
"""

from __future__ import annotations

import numpy as np

from .. import linalg
from ..bloch import BlochTriple
from ..scalarfield import Tolerance
from .traces import derived_triple, specht_check
from .verdict import Outcome, Verdict


def ghs_block(t: BlochTriple) -> np.ndarray:
    """Superdiagonal identity blocks; ``uu^t`` at (1,3), ``WW^t`` at (1,4), ``Wvu^t`` at (2,4)."""
    m = t.m
    d = derived_triple(t)
    exact = t.is_exact
    M = linalg.zeros((4 * m, 4 * m), exact)
    eye = linalg.identity(m, exact)

    def put(bi, bj, block):
        M[bi * m:(bi + 1) * m, bj * m:(bj + 1) * m] = block

    put(0, 1, eye)
    put(1, 2, eye)
    put(2, 3, eye)
    put(0, 2, d.A3)
    put(0, 3, d.A1)
    put(1, 3, d.A2)
    return M


def ghs_check(
    t1: BlochTriple,
    t2: BlochTriple,
    max_len: int | None = None,
    tol: Tolerance | None = None,
) -> Verdict:
    """Specht test on the packed block matrices; ``max_len`` counts letters
    (default ``2*m``, i.e. as many letters as ``m`` trace pairs)."""
    if (t1.m, t1.n) != (t2.m, t2.n):
        raise ValueError(f"triples have different shapes ({t1.m},{t1.n}) vs ({t2.m},{t2.n})")
    if max_len is None:
        max_len = 2 * t1.m
    if t1.equals(t2, tol):
        return Verdict("ghs", Outcome.EQUIVALENT, max_len, detail="identical triples")
    return specht_check(ghs_block(t1), ghs_block(t2), max_len, tol, criterion="ghs")
