"""GL_n(F_p), its standard subgroups, and the p-local group ring.

Twisted idempotents ``phi_k(g) = det^k(g^{-1}) g`` need the values of
``det^k`` as p-local scalars.  Coefficients therefore live in
``Z_(p)[t] / Phi_{p-1}(t)``, where ``t`` stands for the Teichmueller lift
of the least primitive root.  For p = 2, 3 this ring is Z_(p) itself, and
any twist whose values are +-1 also stays rational.  Reducing mod p sends
``t`` to that primitive root.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ParameterError, ResourceError
from .scalars import fraction_mod_p

DEFAULT_GROUP_CAP = 100_000


def size_cap() -> int:
    return int(os.environ.get("MILNOR_FORGE_CAP", DEFAULT_GROUP_CAP))


def gl_order(p: int, n: int) -> int:
    return math.prod(p**n - p**i for i in range(n))


def unipotent_order(p: int, n: int) -> int:
    return p ** (n * (n - 1) // 2)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, cyclotomic(d))
    return tuple(num)


def _exact_divide(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact division"
    return q


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(p)  # pragma: no cover


# ------------------------------------------------------------ elements

@dataclass(frozen=True, order=True)
class GroupElement:
    """Invertible n x n matrix over F_p, stored row-major."""

    key: bytes
    p: int
    n: int

    @classmethod
    def from_rows(cls, rows, p: int) -> "GroupElement":
        n = len(rows)
        flat = [int(x) % p for row in rows for x in row]
        return cls(bytes(flat), p, n)

    @property
    def matrix(self) -> np.ndarray:
        return np.frombuffer(self.key, dtype=np.uint8).astype(np.int64).reshape(self.n, self.n)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_rows((self.matrix @ other.matrix) % self.p, self.p)

    def det(self) -> int:
        return _det_mod(self.matrix, self.p)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.matrix) + "]"


def _det_mod(M, p: int) -> int:
    M = [[int(x) % p for x in row] for row in np.asarray(M)]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], -1, p)
        for r in range(c + 1, n):
            f = M[r][c] * inv % p
            if f:
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[c])]
    return det % p


def enumerate_group(p: int, n: int) -> list[GroupElement]:
    """All of GL_n(F_p) in canonical (row-major byte) order.

    Rows are chosen one at a time outside the span of the previous ones, in
    lexicographic order, so the output is sorted without a final sort.
    """
    if not is_prime(p) or n < 1:
        raise ParameterError(f"need a prime p and n >= 1, got p={p}, n={n}")
    order = gl_order(p, n)
    if order > size_cap():
        raise ResourceError(f"|GL_{n}(F_{p})| = {order} exceeds the cap {size_cap()}")
    vectors = list(itertools.product(range(p), repeat=n))
    out: list[GroupElement] = []

    def span(rows):
        return {
            tuple(sum(c * r[i] for c, r in zip(cs, rows)) % p for i in range(n))
            for cs in itertools.product(range(p), repeat=len(rows))
        }

    def extend(rows):
        if len(rows) == n:
            out.append(GroupElement.from_rows(rows, p))
            return
        forbidden = span(rows)
        for v in vectors:
            if v not in forbidden:
                extend(rows + [v])

    extend([])
    assert len(out) == order
    return out


def permutation_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def permutation_matrix(perm, p: int) -> GroupElement:
    """Matrix sending e_j to e_{perm[j]}."""
    n = len(perm)
    rows = [[int(perm[j] == i) for j in range(n)] for i in range(n)]
    return GroupElement.from_rows(rows, p)


def generators(p: int, n: int) -> list[GroupElement]:
    """Elementary transvections I + E_ij, plus diag(root, 1, ..., 1) for odd p."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                M = np.eye(n, dtype=np.int64)
                M[i, j] = 1
                out.append(GroupElement.from_rows(M, p))
    if p > 2:
        M = np.eye(n, dtype=np.int64)
        M[0, 0] = primitive_root(p)
        out.append(GroupElement.from_rows(M, p))
    return sorted(out)


def subgroup(p: int, n: int, tag: str) -> list[GroupElement]:
    tag = tag.lower()
    if tag == "full":
        return enumerate_group(p, n)
    if tag == "permutation":
        return sorted(permutation_matrix(s, p) for s in itertools.permutations(range(n)))
    diag_values = range(1, p) if tag == "borel" else (1,) if tag == "unipotent" else None
    if diag_values is None:
        raise ParameterError(f"unknown subgroup tag {tag!r}")
    above = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for diag in itertools.product(diag_values, repeat=n):
        for upper in itertools.product(range(p), repeat=len(above)):
            M = [[0] * n for _ in range(n)]
            for i, d in enumerate(diag):
                M[i][i] = d
            for (i, j), u in zip(above, upper):
                M[i][j] = u
            out.append(GroupElement.from_rows(M, p))
    return sorted(out)


# ------------------------------------------------------------ group ring

TABLE_LIMIT = 600


class GroupRing:
    """Z_(p)[t]/(t^m - w) [GL_n(F_p)] with cached group data."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.elements = enumerate_group(p, n)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.minpoly = cyclotomic(p - 1)
        self.m = len(self.minpoly) - 1
        self.root = primitive_root(p)
        # row e holds t^e reduced modulo Phi_{p-1}
        rows = max(p - 1, 2 * self.m - 1)
        red = np.zeros((rows, self.m), dtype=np.int64)
        cur = [1] + [0] * (self.m - 1)
        for e in range(rows):
            red[e] = cur
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - top * a for c, a in zip(cur, self.minpoly[:-1])]
        self.reduction = red
        self.reduction_norm = int(np.abs(red[: 2 * self.m - 1]).sum(axis=0).max())
        self.root_log = {pow(self.root, e, p): e for e in range(p - 1)}

    @cached_property
    def identity(self) -> GroupElement:
        return GroupElement.from_rows(np.eye(self.n, dtype=np.int64), self.p)

    @cached_property
    def table(self) -> np.ndarray | None:
        N = len(self.elements)
        if N > TABLE_LIMIT:
            return None
        mats = np.stack([g.matrix for g in self.elements])
        prods = np.einsum("aij,bjk->abik", mats, mats) % self.p
        weights = self.p ** np.arange(self.n * self.n - 1, -1, -1)
        codes = prods.reshape(N, N, -1) @ weights
        # canonical order is row-major lex, i.e. increasing base-p code
        own = np.stack([g.matrix.reshape(-1) for g in self.elements]) @ weights
        return np.searchsorted(own, codes).astype(np.int64)

    @cached_property
    def det_logs(self) -> np.ndarray:
        """Discrete log (base the primitive root) of det(g) for each element."""
        return np.array([self.root_log[g.det()] for g in self.elements], dtype=np.int64)

    def mul_index(self, a: int, b: int) -> int:
        t = self.table
        if t is not None:
            return int(t[a, b])
        return self.index[self.elements[a] * self.elements[b]]

    def root_vector(self, e: int) -> np.ndarray:
        """Coordinates of ``t^e`` in the basis ``1, t, ..., t^{m-1}``."""
        return self.reduction[e % (self.p - 1)]

    def reduce_dense(self, dense: np.ndarray) -> np.ndarray:
        """Fold a ``(|G|, width)`` array of raw t-exponents into ``(|G|, m)``."""
        red = self.reduction[: dense.shape[1]]
        if self.m == 1:
            return dense @ red
        if np.abs(dense).max(initial=0) * self.reduction_norm < 2**52:
            return np.rint(dense.astype(np.float64) @ red.astype(np.float64)).astype(np.int64)
        return dense @ red

    def root_mod_p(self, r: int) -> int:
        return pow(self.root, r, self.p)

    # element constructors
    def zero(self) -> "GroupRingElement":
        return GroupRingElement(self, {})

    def delta(self, g: GroupElement, coeff=1) -> "GroupRingElement":
        return GroupRingElement(self, {(self.index[g], 0): Fraction(coeff)})


@lru_cache(maxsize=None)
def group_ring(p: int, n: int) -> GroupRing:
    return GroupRing(p, n)


class GroupRingElement:
    """Finitely supported map ``(group element, t-power) -> Z_(p)``."""

    __slots__ = ("ring", "_terms", "_dense")

    def __init__(self, ring: GroupRing, terms: dict):
        self.ring = ring
        p = ring.p
        clean = {}
        for key, c in terms.items():
            if type(c) is not Fraction:
                c = Fraction(c)
            if c:
                if c.denominator % p == 0:
                    raise ConfigurationError(f"coefficient {c} is not {p}-local")
                clean[key] = c
        self._terms = clean
        self._dense = None

    @classmethod
    def from_dense(cls, ring: GroupRing, dense: np.ndarray, den: int) -> "GroupRingElement":
        """Element ``dense / den`` with ``dense`` of shape ``(|G|, m)``; ``den`` prime to p."""
        if den % ring.p == 0:
            raise ConfigurationError(f"denominator {den} is not {ring.p}-local")
        x = cls.__new__(cls)
        x.ring = ring
        x._terms = None
        x._dense = (dense, den)
        return x

    @property
    def terms(self) -> dict:
        if self._terms is None:
            dense, den = self._dense
            gi, ri = np.nonzero(dense)
            self._terms = {(int(g), int(r)): Fraction(int(dense[g, r]), den) for g, r in zip(gi, ri)}
        return self._terms

    def is_zero(self) -> bool:
        if self._terms is None:
            return not self._dense[0].any()
        return not self._terms

    # views
    @property
    def support(self) -> dict[GroupElement, dict[int, Fraction]]:
        out: dict[GroupElement, dict[int, Fraction]] = {}
        for (i, r), c in sorted(self.terms.items()):
            out.setdefault(self.ring.elements[i], {})[r] = c
        return out

    def coefficient(self, g: GroupElement) -> dict[int, Fraction]:
        i = self.ring.index[g]
        return {r: c for (j, r), c in self.terms.items() if j == i}

    def rational_coefficient(self, g: GroupElement) -> Fraction:
        """Coefficient of g when it is free of t (raises otherwise)."""
        coeff = self.coefficient(g)
        if any(r for r in coeff):
            raise ValueError("coefficient involves the root of unity t")
        return coeff.get(0, Fraction(0))

    def is_rational(self) -> bool:
        return all(r == 0 for (_, r) in self.terms)

    def __len__(self):
        return len({i for i, _ in self.terms})

    def _check(self, other: "GroupRingElement"):
        if (self.ring.p, self.ring.n) != (other.ring.p, other.ring.n):
            raise ConfigurationError("group ring elements over different groups")

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check(other)
        if self._dense is not None and other._dense is not None:
            (a, da), (b, db) = self._dense, other._dense
            if max(np.abs(a).max(initial=0) * db, np.abs(b).max(initial=0) * da) < 2**62:
                return bool(np.array_equal(a * db, b * da))
        return self.terms == other.terms

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return GroupRingElement(self.ring, out)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + other.scale(-1)

    def scale(self, c) -> "GroupRingElement":
        c = Fraction(c)
        return GroupRingElement(self.ring, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return group_ring_multiply(self, other)

    def mod_p(self) -> dict[int, int]:
        """Coefficients reduced to F_p, keyed by element index."""
        p = self.ring.p
        out: dict[int, int] = {}
        for (i, r), c in self.terms.items():
            out[i] = (out.get(i, 0) + fraction_mod_p(c, p) * self.ring.root_mod_p(r)) % p
        return {i: c for i, c in out.items() if c}

    def to_json(self) -> list:
        rows = []
        for (i, r), c in sorted(self.terms.items()):
            rows.append({"element": list(self.ring.elements[i].key), "t_power": r, "coefficient": str(c)})
        return rows


def _integer_terms(x: GroupRingElement):
    """(indices, t-exponents, integer numerators, common denominator)."""
    if x._dense is not None:
        dense, den = x._dense
        idx, exp = np.nonzero(dense)
        return idx.astype(np.int64), exp.astype(np.int64), dense[idx, exp], den
    terms = x.terms
    den = math.lcm(*(c.denominator for c in terms.values())) if terms else 1
    keys = sorted(terms)
    idx = np.array([k[0] for k in keys], dtype=np.int64)
    exp = np.array([k[1] for k in keys], dtype=np.int64)
    val = [terms[k].numerator * (den // terms[k].denominator) for k in keys]
    return idx, exp, val, den


def _max_abs(val) -> int:
    if isinstance(val, np.ndarray):
        return int(np.abs(val).max(initial=0))
    return max(map(abs, val), default=0)


def group_ring_multiply(a: GroupRingElement, b: GroupRingElement, *, numba=None) -> GroupRingElement:
    """Convolution product in the group ring."""
    a._check(b)
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return ring.zero()
    ai, ae, av, ad = _integer_terms(a)
    bi, be, bv, bd = _integer_terms(b)
    bound = _max_abs(av) * _max_abs(bv) * min(len(av), len(bv)) * ring.reduction_norm
    table = ring.table
    if table is not None and bound < 2**61:
        dense = _kernels.convolve(
            (ai, ae, np.asarray(av, dtype=np.int64)),
            (bi, be, np.asarray(bv, dtype=np.int64)),
            table, 2 * ring.m - 1, numba=numba,
        )
        return GroupRingElement.from_dense(ring, ring.reduce_dense(dense), ad * bd)
    out: dict = {}
    for (g, e), c in a.terms.items():
        for (h, f), d in b.terms.items():
            key = ring.mul_index(g, h)
            for r, x in enumerate(ring.root_vector(e + f)):
                if x:
                    out[(key, r)] = out.get((key, r), 0) + int(x) * c * d
    return GroupRingElement(ring, out)


def twist(x: GroupRingElement, k: int) -> GroupRingElement:
    """phi_k: g -> det^k(g^{-1}) g, extended linearly."""
    ring = x.ring
    if x.is_zero():
        return ring.zero()
    idx, exp, val, den = _integer_terms(x)
    shifted = (exp - k * ring.det_logs[idx]) % (ring.p - 1)
    if _max_abs(val) * len(val) * ring.reduction_norm < 2**61:
        dense = np.zeros((len(ring.elements), ring.m), dtype=np.int64)
        np.add.at(dense, idx, np.asarray(val, dtype=np.int64)[:, None] * ring.reduction[shifted])
        return GroupRingElement.from_dense(ring, dense, den)
    out: dict = {}
    for (i, e), c in zip(zip(idx.tolist(), shifted.tolist()), val):
        for r, a in enumerate(ring.root_vector(e)):
            if a:
                out[(i, r)] = out.get((i, r), 0) + int(a) * Fraction(int(c), den)
    return GroupRingElement(ring, out)


def check_twist_range(p: int, n: int, k: int) -> None:
    if p == 2:
        if k != 0:
            raise ParameterError("p = 2 only admits the untwisted projector k = 0")
        if n < 2:
            raise ParameterError("p = 2 requires n >= 2")
    elif not 1 <= k <= p - 2:
        raise ParameterError(f"k must satisfy 1 <= k <= p-2 = {p - 2} for odd p, got {k}")


@lru_cache(maxsize=64)
def _untwisted_idempotent(p: int, n: int) -> GroupRingElement:
    ring = group_ring(p, n)
    index = gl_order(p, n) // unipotent_order(p, n)
    assert index % p != 0, "[GL:U] must be prime to p"
    borel = GroupRingElement(ring, {(ring.index[b], 0): 1 for b in subgroup(p, n, "borel")})
    signed = {}
    for perm in itertools.permutations(range(n)):
        key = (ring.index[permutation_matrix(perm, p)], 0)
        signed[key] = signed.get(key, 0) + permutation_sign(perm)
    sigma = GroupRingElement(ring, signed)
    return (borel * sigma).scale(Fraction(1, index))


def is_idempotent(e: GroupRingElement) -> bool:
    """e * e == e, on dense integer arrays when the multiplication table exists."""
    ring = e.ring
    if e.is_zero():
        return True
    idx, exp, val, den = _integer_terms(e)
    table = ring.table
    if table is None or _max_abs(val) ** 2 * len(val) * ring.reduction_norm >= 2**61:
        return e * e == e
    terms = (idx, exp, np.asarray(val, dtype=np.int64))
    sq = ring.reduce_dense(_kernels.convolve(terms, terms, table, 2 * ring.m - 1))
    dense = np.zeros_like(sq)
    dense[idx, exp] = terms[2]
    return bool(np.array_equal(sq, dense * den))


def steinberg_idempotent(p: int, n: int, k: int, *, strict: bool = True,
                         check: bool = True) -> GroupRingElement:
    """e_k = phi_k([GL:U]^{-1} (sum_B b)(sum_Sigma sign(s) s)).

    ``strict=False`` accepts any ``0 <= k <= p-2`` (and n = 1 at p = 2),
    which the module-level tests use for the even summand e_0 at odd p.
    Idempotency is checked before returning unless ``check`` is off.
    """
    if strict:
        check_twist_range(p, n, k)
    elif not (0 <= k <= max(p - 2, 0)):
        raise ParameterError(f"k out of range 0..{max(p - 2, 0)}")
    e0 = _untwisted_idempotent(p, n)
    e = twist(e0, k) if k else e0
    if check and not is_idempotent(e):
        raise AssertionError(f"e_{k} for (p={p}, n={n}) is not idempotent")
    return e
