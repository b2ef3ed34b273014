"""Hot numeric kernels: F_p row reduction and group-ring convolution.

Every kernel has a numba ``@njit`` body and a pure-numpy twin with the
same signature.  The numba path is used when numba imports cleanly and
``MILNOR_FORGE_NUMBA`` is not set to ``0``; the flag is read once at import.
Both paths return identical results (tests compare them).
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly by the environment
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("MILNOR_FORGE_NUMBA", "1") != "0"


def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


# ---------------------------------------------------------------- rref

def _rref_numpy(A: np.ndarray, p: int, inv: np.ndarray):
    m, n = A.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        s = inv[A[r, c]]
        if s != 1:
            A[r] = (A[r] * s) % p
        rows = np.flatnonzero(A[:, c])
        rows = rows[rows != r]
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r])) % p
        pivots.append(c)
        r += 1
    return r, np.asarray(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _rref_numba(A, p, inv):  # pragma: no cover - compiled
        m, n = A.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        nzcols = np.empty(n, dtype=np.int64)
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(n):
                    t = A[r, j]
                    A[r, j] = A[piv, j]
                    A[piv, j] = t
            s = inv[A[r, c]]
            k = 0
            for j in range(c, n):
                if A[r, j] != 0:
                    if s != 1:
                        A[r, j] = (A[r, j] * s) % p
                    nzcols[k] = j
                    k += 1
            for i in range(m):
                if i != r:
                    f = A[i, c]
                    if f != 0:
                        for t in range(k):
                            j = nzcols[t]
                            A[i, j] = (A[i, j] - f * A[r, j]) % p
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

else:  # pragma: no cover
    _rref_numba = None


def rref(A, p: int, *, numba: bool | None = None):
    """Reduced row echelon form of ``A`` over F_p.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    The input is not modified.
    """
    A = np.array(A, dtype=np.int64, copy=True) % p
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if A.size == 0:
        return A[:0], np.zeros(0, dtype=np.int64)
    inv = inverse_table(p)
    use = USE_NUMBA if numba is None else (numba and HAVE_NUMBA)
    if use:
        r, piv = _rref_numba(A, p, inv)
    else:
        r, piv = _rref_numpy(A, p, inv)
    return A[:r], piv


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, p)[1])


def rref_reversed(A, p: int):
    """Row reduce preferring the *last* columns as pivots.

    Non-pivot columns are then the earliest possible ones, which is how
    canonical lex-least complements are chosen.
    """
    A = np.asarray(A, dtype=np.int64)
    R, piv = rref(A[:, ::-1], p)
    n = A.shape[1]
    return R[:, ::-1], np.sort(n - 1 - piv)


# ------------------------------------------------- group ring convolution

def _convolve_numpy(ai, ae, av, bi, be, bv, table, out):
    for g, e, a in zip(ai, ae, av):
        np.add.at(out, (table[g, bi], e + be), a * bv)
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _convolve_numba(ai, ae, av, bi, be, bv, table, out):  # pragma: no cover
        for s in range(ai.shape[0]):
            g = ai[s]
            e = ae[s]
            a = av[s]
            for t in range(bi.shape[0]):
                out[table[g, bi[t]], e + be[t]] += a * bv[t]
        return out

else:  # pragma: no cover
    _convolve_numba = None


def convolve(a_terms, b_terms, table, width: int, *, numba: bool | None = None):
    """Multiply two integer-coefficient group-ring elements.

    ``*_terms`` are triples of int64 arrays ``(element index, t exponent,
    coefficient)``.  Exponents are added without reduction, so ``width``
    must exceed the largest sum.  Returns a dense ``(|G|, width)`` array.
    """
    out = np.zeros((table.shape[0], width), dtype=np.int64)
    use = USE_NUMBA if numba is None else (numba and HAVE_NUMBA)
    fn = _convolve_numba if use else _convolve_numpy
    return fn(*a_terms, *b_terms, table, out)


def matmul_mod(A, B, p: int) -> np.ndarray:
    """``A @ B mod p`` for reduced operands, through float BLAS when exact."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 2**52:
        C = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
        return np.rint(C).astype(np.int64) % p
    return (A.astype(object) @ B.astype(object) % p).astype(np.int64)
