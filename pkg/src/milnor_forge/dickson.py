"""Dickson invariants, the coinvariant algebra, and Koszul regularity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .errors import ResourceError
from .groups import enumerate_group, gl_order, size_cap
from .monomials import MonomialSpace
from .poly import FpPolynomial, y_variables
from .scalars import X_BIDEGREE, Y_BIDEGREE, BiDegree

DICKSON_CAP = 64  # p^n, the number of linear forms multiplied together


def dickson_degrees(p: int, n: int) -> list[int]:
    return [p**n - p ** (n - r) for r in range(1, n + 1)]


@dataclass(frozen=True)
class DicksonSet:
    p: int
    n: int
    invariants: tuple[FpPolynomial, ...]

    @property
    def degrees(self) -> list[int]:
        return [D.total_degree() for D in self.invariants]

    @property
    def variables(self):
        return y_variables(self.n)


def linear_form_product(p: int, n: int) -> list[FpPolynomial]:
    """Coefficients (in y) of f(X) = prod_{v in F_p^n} (X - v.y), indexed by X-power."""
    if p**n > DICKSON_CAP:
        raise ResourceError(f"p^n = {p**n} exceeds the Dickson cap {DICKSON_CAP}")
    vars_ = y_variables(n)
    zero = FpPolynomial(p, vars_)
    coeffs = [zero.constant(1)]
    for v in itertools.product(range(p), repeat=n):
        form = zero._new({tuple(int(i == j) for j in range(n)): -c for i, c in enumerate(v)})
        # multiply sum_k c_k X^k by (X + form)
        new = [zero] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] = new[k + 1] + c
            new[k] = new[k] + c * form
        coeffs = new
    return coeffs


def dickson_invariants(p: int, n: int) -> DicksonSet:
    """D_r is the literal coefficient of X^{p^{n-r}} in prod_v (X - v.y)."""
    coeffs = linear_form_product(p, n)
    return DicksonSet(p, n, tuple(coeffs[p ** (n - r)] for r in range(1, n + 1)))


@dataclass
class InvarianceReport:
    invariant: bool
    checked: int
    failure: tuple | None = None  # (group element, r)

    def to_json(self):
        out = {"invariant": self.invariant, "elements_checked": self.checked}
        if self.failure:
            g, r = self.failure
            out["failure"] = {"element": [list(row) for row in g.matrix.tolist()], "r": r}
        return out


def verify_invariance(ds: DicksonSet, elements=None) -> InvarianceReport:
    elements = enumerate_group(ds.p, ds.n) if elements is None else elements
    for g in elements:
        for r, D in enumerate(ds.invariants, start=1):
            if D.linear_substitute(g.matrix) != D:
                return InvarianceReport(False, len(elements), (g, r))
    return InvarianceReport(True, len(elements))


# ------------------------------------------------------ coinvariant algebra

class CoinvariantAlgebra:
    """S / (D_1..D_n) realized degree by degree.

    In every degree the ideal is row reduced with pivots preferred on the
    largest monomials, so the surviving (standard) monomials are the
    lex-least complement.
    """

    def __init__(self, ds: DicksonSet, relations: list[FpPolynomial] | None = None):
        self.ds = ds
        self.p, self.n = ds.p, ds.n
        self.relations = list(ds.invariants if relations is None else relations)
        self.top = sum(D.total_degree() - 1 for D in self.relations)
        if self.top > 200:
            raise ResourceError("coinvariant socle degree too large")
        self.space = MonomialSpace(self.p, self.n, self.top + 1)
        self._reduce()

    def _ideal_rows(self, t: int) -> np.ndarray:
        rows = []
        for D in self.relations:
            d = D.total_degree()
            if t >= d:
                M = self.space.multiplication_matrix(D, t - d)
                rows.append(M.T)
        if not rows:
            return np.zeros((0, self.space.dim(t)), dtype=np.int64)
        return np.concatenate(rows, axis=0)

    def _reduce(self):
        self.standard: list[list[int]] = []
        self.nf: list[np.ndarray] = []
        for t in range(self.top + 2):
            dim = self.space.dim(t)
            R, piv = _kernels.rref(self._ideal_rows(t), self.p) if dim else (None, [])
            piv = list(piv)
            std = [i for i in range(dim) if i not in set(piv)]
            # normal form: unit on standard monomials, -row on pivot monomials
            N = np.zeros((len(std), dim), dtype=np.int64)
            pos = {m: k for k, m in enumerate(std)}
            for m in std:
                N[pos[m], m] = 1
            for row, c in zip(R if R is not None else [], piv):
                N[:, c] = (-row[std]) % self.p
            self.standard.append(std)
            self.nf.append(N)
        if self.standard[self.top + 1]:
            raise AssertionError("ideal does not contain the degree above the socle")

    # basis ------------------------------------------------------------
    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        """Standard monomials, degree by degree (lex-descending inside a degree)."""
        return [self.space.basis[t][i] for t in range(self.top + 1) for i in self.standard[t]]

    @cached_property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for t in range(self.top + 1):
            out.append(acc)
            acc += len(self.standard[t])
        out.append(acc)
        return out

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def hilbert(self) -> list[int]:
        return [len(self.standard[t]) for t in range(self.top + 1)]

    def degree_of(self, i: int) -> int:
        return sum(self.basis[i])

    def normal_form(self, f: FpPolynomial) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        for t in range(self.top + 1):
            part = self.space.vector(f, t)
            if part.any():
                v[self.offsets[t]:self.offsets[t + 1]] = self.nf[t] @ part
        return v % self.p

    # operators --------------------------------------------------------
    def action_matrix(self, g) -> np.ndarray:
        """Matrix of the substitution y_j -> sum_i g_ij y_i on the basis."""
        mats = self.space.substitution_matrices(g)
        A = np.zeros((self.dim, self.dim), dtype=np.int64)
        for t in range(self.top + 1):
            o0, o1 = self.offsets[t], self.offsets[t + 1]
            A[o0:o1, o0:o1] = _kernels.matmul_mod(self.nf[t], mats[t][:, self.standard[t]], self.p)
        return A % self.p

    def multiplication(self, f: FpPolynomial) -> np.ndarray:
        """Matrix of multiplication by a homogeneous f."""
        d = f.total_degree()
        A = np.zeros((self.dim, self.dim), dtype=np.int64)
        for t in range(self.top + 1 - d):
            M = self.space.multiplication_matrix(f, t)
            o0, o1 = self.offsets[t], self.offsets[t + 1]
            q0, q1 = self.offsets[t + d], self.offsets[t + d + 1]
            A[q0:q1, o0:o1] = self.nf[t + d] @ M[:, self.standard[t]]
        return A % self.p


@lru_cache(maxsize=None)
def coinvariant_algebra(p: int, n: int) -> CoinvariantAlgebra:
    return CoinvariantAlgebra(dickson_invariants(p, n))


# ------------------------------------------------------------ Koszul

@dataclass
class KoszulReport:
    degree_bound: int
    homology: dict[tuple[int, int], int] = field(default_factory=dict)  # (i, t) -> dim
    partial: bool = False

    @property
    def regular(self) -> bool:
        return all(d == 0 for (i, _), d in self.homology.items() if i >= 1)

    def h0(self) -> list[int]:
        return [self.homology.get((0, t), 0) for t in range(self.degree_bound + 1)]

    def to_json(self):
        return {
            "degree_bound": self.degree_bound,
            "partial": self.partial,
            "regular_within_bound": self.regular,
            "homology": [
                {"index": i, "degree": t, "dim": d}
                for (i, t), d in sorted(self.homology.items()) if d
            ],
        }


def koszul_regularity(ds: DicksonSet, degree_bound: int, relations=None) -> KoszulReport:
    """Homology of the Koszul complex on the invariants, degree by degree.

    ``relations`` replaces the invariants (used to exhibit non-regular input).
    """
    seq = list(ds.invariants if relations is None else relations)
    p, n, k = ds.p, ds.n, len(seq)
    degs = [f.total_degree() for f in seq]
    space = MonomialSpace(p, n, degree_bound)
    subsets = [list(itertools.combinations(range(k), i)) for i in range(k + 1)]
    report = KoszulReport(degree_bound, partial=degree_bound < sum(degs))

    def block_dims(i, t):
        return [space.dim(t - sum(degs[r] for r in I)) for I in subsets[i]]

    def differential(i, t):
        # K_i -> K_{i-1}: e_I -> sum_pos (-1)^pos f_{I[pos]} e_{I - I[pos]}
        src, tgt = block_dims(i, t), block_dims(i - 1, t)
        M = np.zeros((sum(tgt), sum(src)), dtype=np.int64)
        src_off = np.concatenate([[0], np.cumsum(src)]).astype(int)
        tgt_off = np.concatenate([[0], np.cumsum(tgt)]).astype(int)
        tgt_pos = {J: a for a, J in enumerate(subsets[i - 1])}
        for a, I in enumerate(subsets[i]):
            s = t - sum(degs[r] for r in I)
            if s < 0:
                continue
            for pos, r in enumerate(I):
                J = I[:pos] + I[pos + 1:]
                b = tgt_pos[J]
                block = space.multiplication_matrix(seq[r], s) * (-1) ** pos
                M[tgt_off[b]:tgt_off[b + 1], src_off[a]:src_off[a + 1]] += block
        return M % p

    for t in range(degree_bound + 1):
        ranks = [0] * (k + 2)
        for i in range(1, k + 1):
            ranks[i] = _kernels.rank(differential(i, t), p)
        for i in range(k + 1):
            dim = sum(block_dims(i, t))
            report.homology[(i, t)] = dim - ranks[i] - ranks[i + 1]
    return report


# ------------------------------------------------------------ Hilbert series

def _series_product(factors):
    out = {BiDegree(0, 0): 1}
    for factor in factors:
        new: dict[BiDegree, int] = {}
        for b, c in out.items():
            for fb, fc in factor.items():
                new[b + fb] = new.get(b + fb, 0) + c * fc
        out = new
    return {b: c for b, c in out.items() if c}


def closed_form_series(p: int, n: int, with_exterior: bool) -> dict[BiDegree, int]:
    """prod_r (1 - T^{d_r})/(1 - T) * (1 + U)^n, T ~ (1)[2], U ~ (1)[1]."""
    factors = [{Y_BIDEGREE * a: 1 for a in range(d)} for d in dickson_degrees(p, n)]
    if with_exterior:
        factors += [{BiDegree(0, 0): 1, X_BIDEGREE: 1}] * n
    return _series_product(factors)


def z_exterior_series(p: int, n: int) -> dict[BiDegree, int]:
    """Series of Lambda(z_i | 1 <= i <= p^n, i != p^n - p^s), deg z_i = (i)[2i-1]."""
    skip = set(dickson_degrees(p, n))
    return _series_product(
        [{BiDegree(0, 0): 1, BiDegree(i, 2 * i - 1): 1} for i in range(1, p**n + 1) if i not in skip]
    )


@dataclass
class HilbertTable:
    dims: dict[BiDegree, int]
    closed_form: dict[BiDegree, int]
    z_series: dict[BiDegree, int] | None = None

    @property
    def matches(self) -> bool:
        return self.dims == self.closed_form

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def to_json(self):
        def table(d):
            return [{"weight": b.weight, "degree": b.degree, "dim": c} for b, c in sorted(d.items())]

        out = {"dims": table(self.dims), "matches_closed_form": self.matches, "total": self.total}
        if self.z_series is not None:
            out["z_series"] = table(self.z_series)
        return out


def coinvariant_hilbert_series(ds: DicksonSet, with_exterior: bool, bound: int | None = None,
                               with_z: bool = False) -> HilbertTable:
    """Bigraded dimensions of the realized coinvariant algebra (optionally
    tensored with Lambda(x)), compared with the closed product formula."""
    alg = CoinvariantAlgebra(ds)
    dims: dict[BiDegree, int] = {}
    for t, d in enumerate(alg.hilbert()):
        if bound is not None and t > bound:
            break
        subsets = [1] if not with_exterior else [
            len(list(itertools.combinations(range(ds.n), s))) for s in range(ds.n + 1)
        ]
        for s, count in enumerate(subsets):
            if d * count:
                b = Y_BIDEGREE * t + X_BIDEGREE * s
                dims[b] = dims.get(b, 0) + d * count
    closed = closed_form_series(ds.p, ds.n, with_exterior)
    if bound is not None:
        closed = {b: c for b, c in closed.items()
                  if b.degree - b.weight <= bound}  # y-degree = degree - weight
    z = z_exterior_series(ds.p, ds.n) if with_z else None
    return HilbertTable(dims, closed, z)


def group_order_check(p: int, n: int) -> dict:
    """Three independent counts of |GL_n(F_p)|."""
    if gl_order(p, n) > size_cap():
        raise ResourceError("group too large")
    ds = dickson_invariants(p, n)
    alg = CoinvariantAlgebra(ds)
    kz = koszul_regularity(ds, sum(ds.degrees))
    return {
        "formula": gl_order(p, n),
        "enumeration": len(enumerate_group(p, n)),
        "quotient": alg.dim,
        "koszul_h0": sum(kz.h0()),
    }
