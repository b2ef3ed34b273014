"""Dense per-degree coordinates for F_p[y_1..y_n]."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .poly import FpPolynomial


@lru_cache(maxsize=None)
def monomials(n: int, t: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree ``t``, lex-descending (y1 first)."""
    if n == 0:
        return ((),) if t == 0 else ()
    out = []
    for a in range(t, -1, -1):
        for rest in monomials(n - 1, t - a):
            out.append((a,) + rest)
    return tuple(out)


class MonomialSpace:
    """Index tables for the homogeneous pieces S_0..S_top of S = F_p[y]."""

    def __init__(self, p: int, n: int, top: int):
        self.p = p
        self.n = n
        self.top = top
        self.basis = [monomials(n, t) for t in range(top + 1)]
        self.index = [{m: i for i, m in enumerate(b)} for b in self.basis]

    def dim(self, t: int) -> int:
        return len(self.basis[t]) if 0 <= t <= self.top else 0

    @lru_cache(maxsize=None)
    def shift_index(self, t: int, i: int) -> np.ndarray:
        """Position in S_{t+1} of ``y_i * m`` for each monomial m of S_t."""
        idx = self.index[t + 1]
        out = np.empty(self.dim(t), dtype=np.int64)
        for k, m in enumerate(self.basis[t]):
            e = list(m)
            e[i] += 1
            out[k] = idx[tuple(e)]
        return out

    def vector(self, f: FpPolynomial, t: int) -> np.ndarray:
        v = np.zeros(self.dim(t), dtype=np.int64)
        idx = self.index[t]
        for e, c in f.terms.items():
            if sum(e) == t:
                v[idx[e]] = c
        return v

    def multiplication_matrix(self, f: FpPolynomial, t: int) -> np.ndarray:
        """Matrix of ``m -> f*m`` from S_t to S_{t+deg f} (f homogeneous)."""
        d = f.total_degree()
        rows, cols = self.dim(t + d), self.dim(t)
        M = np.zeros((rows, cols), dtype=np.int64)
        if d < 0 or t + d > self.top:
            return M
        tgt = self.index[t + d]
        for k, m in enumerate(self.basis[t]):
            for e, c in f.terms.items():
                M[tgt[tuple(a + b for a, b in zip(m, e))], k] += c
        return M % self.p

    @lru_cache(maxsize=None)
    def parents(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        """For each monomial m of S_t: first index j with m_j > 0, and index of m / y_j."""
        js = np.empty(self.dim(t), dtype=np.int64)
        par = np.empty(self.dim(t), dtype=np.int64)
        idx_prev = self.index[t - 1]
        for k, m in enumerate(self.basis[t]):
            j = next(i for i, a in enumerate(m) if a)
            parent = list(m)
            parent[j] -= 1
            js[k] = j
            par[k] = idx_prev[tuple(parent)]
        return js, par

    def substitution_matrices(self, g) -> list[np.ndarray]:
        """Matrices of the substitution ``y_j -> sum_i g[i][j] y_i`` on S_0..S_top.

        Column m of degree t is built from its parent ``m / y_j`` (j the first
        nonzero index) multiplied by the linear form ``g . y_j``.
        """
        p, n = self.p, self.n
        g = np.asarray(g, dtype=np.int64) % p
        mats = [np.ones((1, 1), dtype=np.int64)]
        for t in range(1, self.top + 1):
            js, par = self.parents(t)
            cols = mats[-1][:, par]
            M = np.zeros((self.dim(t), self.dim(t)), dtype=np.int64)
            for i in range(n):
                coeff = g[i, js]
                if coeff.any():
                    M[self.shift_index(t - 1, i)] += cols * coeff[None, :]
            mats.append(M % p)
        return mats
