"""Finite-dimensional graded F_p vector spaces carrying linear operators.

Vectors are columns; an operator matrix ``Q`` sends ``v`` to ``Q @ v``.
Grades are any hashable, orderable keys (``BiDegree`` for the motivic
modules, plain ``int`` for the singly graded topological ones).
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import StructuralError


class BigradedModule:
    def __init__(self, p: int, labels, grades, operators=None, *, ambient_basis=None, pivots=None):
        self.p = p
        self.labels = list(labels)
        self.grades = list(grades)
        if len(self.labels) != len(self.grades):
            raise StructuralError("labels and grades differ in length")
        self.operators: dict[int, np.ndarray] = {
            m: np.asarray(Q, dtype=np.int64) % p for m, Q in (operators or {}).items()
        }
        # for submodules: rows are basis vectors in ambient coordinates
        self.ambient_basis = ambient_basis
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def blocks(self) -> dict:
        out = defaultdict(list)
        for i, g in enumerate(self.grades):
            out[g].append(i)
        return dict(sorted(out.items()))

    def support(self) -> list:
        return list(self.blocks)

    def dims(self) -> dict:
        return {g: len(ix) for g, ix in self.blocks.items()}

    def zero_vector(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def unit(self, i: int) -> np.ndarray:
        v = self.zero_vector()
        v[i] = 1
        return v

    def apply(self, m: int, v) -> np.ndarray:
        return (self.operators[m] @ np.asarray(v, dtype=np.int64)) % self.p

    def grade_of(self, v) -> object:
        """Grade of a nonzero homogeneous vector; raises if inhomogeneous."""
        gs = {self.grades[i] for i in np.flatnonzero(np.asarray(v) % self.p)}
        if len(gs) != 1:
            raise StructuralError(f"vector is not homogeneous (grades {sorted(gs)})")
        return gs.pop()

    def describe(self, v) -> str:
        v = np.asarray(v) % self.p
        parts = []
        for i in np.flatnonzero(v):
            c = int(v[i])
            parts.append(self.labels[i] if c == 1 else f"{c}*({self.labels[i]})")
        return " + ".join(parts) if parts else "0"

    def operator_shift(self, m: int):
        """Grade difference of Q_m, checked homogeneous; ``None`` if Q_m = 0."""
        Q = self.operators[m]
        shifts = set()
        rows, cols = np.nonzero(Q)
        for r, c in zip(rows, cols):
            shifts.add((self.grades[r], self.grades[c]))
        diffs = {_grade_diff(a, b) for a, b in shifts}
        if len(diffs) > 1:
            raise StructuralError(f"Q_{m} is not homogeneous")
        return diffs.pop() if diffs else None

    # ------------------------------------------------------------ submodules
    def submodule(self, rows: np.ndarray, pivots) -> "BigradedModule":
        """Subspace spanned by RREF ``rows`` (with ``pivots``); must be operator-stable."""
        p = self.p
        rows = np.asarray(rows, dtype=np.int64) % p
        pivots = np.asarray(pivots, dtype=np.int64)
        grades = [self.grade_of(r) for r in rows]
        labels = [self.describe(r) for r in rows]
        ops = {}
        for m, Q in self.operators.items():
            images = _kernels.matmul_mod(Q, rows.T, p)  # columns: images of basis vectors
            coords = images[pivots, :]
            if not np.array_equal(_kernels.matmul_mod(rows.T, coords, p), images):
                raise StructuralError(f"subspace is not stable under Q_{m}")
            ops[m] = coords
        sub = BigradedModule(p, labels, grades, ops, ambient_basis=rows, pivots=pivots)
        return sub

    def to_ambient(self, v) -> np.ndarray:
        if self.ambient_basis is None:
            return np.asarray(v) % self.p
        return (self.ambient_basis.T @ np.asarray(v)) % self.p

    def image_rows(self, matrix) -> tuple[np.ndarray, np.ndarray]:
        """RREF basis of the column space of ``matrix`` (as rows)."""
        return _kernels.rref(np.asarray(matrix).T, self.p)


def _grade_diff(a, b):
    return a - b
