"""The module L = (S (x)_{S^G} F_p) (x) Lambda(x_1..x_n) and its summands.

Basis elements are pairs (standard y-monomial a, x-subset T), ordered by
bidegree, then by the coinvariant basis order of a, then by T (size, lex).
Milnor operations act by ``Q_i(x_j) = y_j^{p^i}``, ``Q_i(y_j) = 0`` as odd
derivations; the group acts by the same linear substitution on x and y.
For p = 2 the exterior relation ``x_j^2 = 0`` is the Chow-graded one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .bigraded import BigradedModule
from .dickson import CoinvariantAlgebra, coinvariant_algebra, dickson_invariants
from .errors import ParameterError, ResourceError, StructuralError
from .groups import GroupElement, GroupRingElement, _det_mod, generators
from .poly import FpPolynomial, y_variables
from .scalars import X_BIDEGREE, Y_BIDEGREE, BiDegree

MODULE_CAP = 100_000


def exterior_basis(n: int) -> list[tuple[int, ...]]:
    return [T for s in range(n + 1) for T in itertools.combinations(range(n), s)]


def exterior_action(g: np.ndarray, p: int, n: int) -> np.ndarray:
    """g on Lambda(x): entry (T', T) is the minor det g[T', T]."""
    basis = exterior_basis(n)
    A = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for b, T in enumerate(basis):
        for a, U in enumerate(basis):
            if len(U) == len(T):
                A[a, b] = 1 if not T else _det_mod(g[np.ix_(U, T)], p)
    return A


def contraction(j: int, p: int, n: int) -> np.ndarray:
    """x_T -> (-1)^{pos of j in T} x_{T - j}."""
    basis = exterior_basis(n)
    pos = {T: i for i, T in enumerate(basis)}
    C = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for b, T in enumerate(basis):
        if j in T:
            k = T.index(j)
            C[pos[T[:k] + T[k + 1:]], b] = (-1) ** k
    return C % p


def _monomial_label(a, T, n) -> str:
    parts = []
    for j, e in enumerate(a):
        if e == 1:
            parts.append(f"y{j + 1}")
        elif e > 1:
            parts.append(f"y{j + 1}^{e}")
    parts += [f"x{j + 1}" for j in T]
    return "*".join(parts) if parts else "1"


class CoinvariantModule(BigradedModule):
    """L for (p, n) with operators Q_0..Q_{q_max} and the GL_n(F_p)-action."""

    def __init__(self, p: int, n: int, q_max: int | None = None):
        alg = coinvariant_algebra(p, n)
        dim = alg.dim * 2**n
        if dim > MODULE_CAP:
            raise ResourceError(f"module dimension {dim} exceeds the cap {MODULE_CAP}")
        self.alg = alg
        self.n = n
        self.q_max = n if q_max is None else q_max
        ext = exterior_basis(n)
        entries = []
        for a_idx, a in enumerate(alg.basis):
            for t_idx, T in enumerate(ext):
                b = Y_BIDEGREE * sum(a) + X_BIDEGREE * len(T)
                entries.append((b.weight, b.degree, a_idx, t_idx))
        entries.sort()
        self.perm = np.array([a * len(ext) + t for _, _, a, t in entries], dtype=np.int64)
        self.pairs = [(alg.basis[a], ext[t]) for _, _, a, t in entries]
        labels = [_monomial_label(a, T, n) for a, T in self.pairs]
        grades = [BiDegree(w, d) for w, d, _, _ in entries]
        super().__init__(p, labels, grades)
        self.operators = {i: self._milnor_matrix(i) for i in range(self.q_max + 1)}
        self.projector_image = False

    def _permute(self, K: np.ndarray) -> np.ndarray:
        return K[np.ix_(self.perm, self.perm)] % self.p

    def _milnor_matrix(self, i: int) -> np.ndarray:
        p, n = self.p, self.n
        vars_ = y_variables(n)
        total = np.zeros((self.dim, self.dim), dtype=np.int64)
        for j in range(n):
            yj = FpPolynomial.variable(p, vars_, vars_[j]) ** (p**i)
            total += np.kron(self.alg.multiplication(yj), contraction(j, p, n))
        return self._permute(total)

    def _kron_action(self, g: GroupElement) -> np.ndarray:
        M = g.matrix
        return np.kron(self.alg.action_matrix(M), exterior_action(M, self.p, self.n))

    def action(self, g: GroupElement) -> np.ndarray:
        return self._permute(self._kron_action(g))

    def monomial_vector(self, a, T) -> np.ndarray:
        """Coordinates of y^a * x_T (a need not be standard; T sorted)."""
        T = tuple(T)
        vars_ = y_variables(self.n)
        f = FpPolynomial(self.p, vars_, {tuple(a): 1})
        yv = self.alg.normal_form(f)
        ext = exterior_basis(self.n)
        xv = np.zeros(len(ext), dtype=np.int64)
        xv[ext.index(T)] = 1
        return np.kron(yv, xv)[self.perm] % self.p

    def projector(self, e: GroupRingElement) -> np.ndarray:
        ring = e.ring
        if (ring.p, ring.n) != (self.p, self.n):
            raise ParameterError("idempotent and module are over different groups")
        P = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in e.mod_p().items():
            P += c * self._kron_action(ring.elements[i])
        return self._permute(P)


def build_module(p: int, n: int, q_max: int | None = None) -> CoinvariantModule:
    return _build_module(p, n, q_max)


@lru_cache(maxsize=8)
def _build_module(p, n, q_max):
    return CoinvariantModule(p, n, q_max)


def apply_idempotent(mod, e: GroupRingElement) -> BigradedModule:
    """Image of the projector sum_g e(g) g, as an operator-stable submodule."""
    if e * e != e:
        raise ParameterError("group ring element is not idempotent")
    P = mod.projector(e)
    if not np.array_equal(_kernels.matmul_mod(P, P, mod.p), P):
        raise StructuralError("projector matrix is not idempotent mod p")
    grade_id = {g: i for i, g in enumerate(mod.blocks)}
    ids = np.array([grade_id[g] for g in mod.grades])
    rows, cols = np.nonzero(P)
    if np.any(ids[rows] != ids[cols]):
        raise StructuralError("projector mixes bidegrees")
    R, piv = _kernels.rref(P.T, mod.p)
    sub = mod.submodule(R, piv)
    sub.projector_image = True
    sub.parent = mod
    return sub


# ------------------------------------------------------------ p = 2 topology

class FrobeniusModule(BigradedModule):
    """F_2[xb_1..xb_n] / (D~_r^2), singly graded by degree."""

    def __init__(self, n: int, q_max: int | None = None):
        ds = dickson_invariants(2, n)
        squares = [D * D for D in ds.invariants]
        self.alg = CoinvariantAlgebra(ds, relations=squares)
        self.n = n
        self.squares = squares
        self.q_max = n if q_max is None else q_max
        labels = [_monomial_label((), (), 0) if not any(a) else
                  "*".join(f"xb{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(a) if e)
                  for a in self.alg.basis]
        grades = [sum(a) for a in self.alg.basis]
        super().__init__(2, labels, grades)
        self.operators = {i: self._milnor_matrix(i) for i in range(self.q_max + 1)}
        self.projector_image = False

    def _milnor_matrix(self, i: int) -> np.ndarray:
        vars_ = y_variables(self.n)
        total = np.zeros((self.dim, self.dim), dtype=np.int64)
        for j in range(self.n):
            f = FpPolynomial.variable(2, vars_, vars_[j]) ** (2 ** (i + 1) - 1)
            weights = np.array([a[j] % 2 for a in self.alg.basis], dtype=np.int64)
            total += self.alg.multiplication(f) * weights[None, :]
        return total % 2

    def action(self, g: GroupElement) -> np.ndarray:
        return self.alg.action_matrix(g.matrix)

    def projector(self, e: GroupRingElement) -> np.ndarray:
        P = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in e.mod_p().items():
            P += c * self.action(e.ring.elements[i])
        return P % 2

    def realization_identity(self) -> bool:
        """D_r(y) with y_j -> xb_j^2 equals D~_r^2 exactly."""
        ds = dickson_invariants(2, self.n)
        for D, sq in zip(ds.invariants, self.squares):
            image = FpPolynomial(2, D.variables, {tuple(2 * a for a in e): c for e, c in D.terms.items()})
            if image != sq:
                return False
        return True


def build_frobenius_module(n: int, q_max: int | None = None) -> FrobeniusModule:
    if n < 1:
        raise ParameterError("n must be positive")
    return FrobeniusModule(n, q_max)


@dataclass
class RealizationReport:
    degree_profile: dict[int, tuple[int, int]] = field(default_factory=dict)
    bijective: bool = True
    q_intertwines: dict[int, bool] = field(default_factory=dict)
    action_discrepancies: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijective and all(self.q_intertwines.values())

    def to_json(self):
        return {
            "degree_profile": [{"degree": j, "motivic": a, "topological": b}
                               for j, (a, b) in sorted(self.degree_profile.items())],
            "bijective": self.bijective,
            "q_intertwines": {str(i): ok for i, ok in sorted(self.q_intertwines.items())},
            "action_discrepancies": self.action_discrepancies,
        }


def realize_topologically(mod: CoinvariantModule, frob: FrobeniusModule | None = None,
                          elements=None) -> RealizationReport:
    """Compare L with the Frobenius module under (i)[j] -> [j], y -> xb^2, x -> xb."""
    if mod.dim == 0:
        return RealizationReport()
    if mod.p != 2:
        raise ParameterError("topological comparison is only implemented for p = 2")
    frob = frob or build_frobenius_module(mod.n, mod.q_max)
    report = RealizationReport()
    prof_l: dict[int, int] = {}
    for g in mod.grades:
        prof_l[g.degree] = prof_l.get(g.degree, 0) + 1
    prof_f = frob.dims()
    for j in sorted(set(prof_l) | set(prof_f)):
        report.degree_profile[j] = (prof_l.get(j, 0), prof_f.get(j, 0))
        if prof_l.get(j, 0) != prof_f.get(j, 0):
            raise StructuralError(f"graded dimension mismatch in degree {j}")
    vars_ = y_variables(mod.n)
    Phi = np.zeros((frob.dim, mod.dim), dtype=np.int64)
    for c, (a, T) in enumerate(mod.pairs):
        e = [2 * x for x in a]
        for j in T:
            e[j] += 1
        Phi[:, c] = frob.alg.normal_form(FpPolynomial(2, vars_, {tuple(e): 1}))
    report.bijective = _kernels.rank(Phi, 2) == mod.dim
    for i in sorted(set(mod.operators) & set(frob.operators)):
        lhs = _kernels.matmul_mod(Phi, mod.operators[i], 2)
        rhs = _kernels.matmul_mod(frob.operators[i], Phi, 2)
        report.q_intertwines[i] = bool(np.array_equal(lhs, rhs))
    # intertwining on generators is intertwining on the whole group
    for g in elements if elements is not None else generators(2, mod.n):
        lhs = _kernels.matmul_mod(Phi, mod.action(g), 2)
        if not np.array_equal(lhs, _kernels.matmul_mod(frob.action(g), Phi, 2)):
            report.action_discrepancies.append(str(g))
    return report
