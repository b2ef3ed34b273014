"""Freeness over exterior algebras on Milnor operations.

Two independent witnesses: Margolis homology ker Q_s / im Q_s per grade, and
an explicit basis of generators whose Q-orbits span the module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bigraded import BigradedModule
from .errors import AmbiguityError, CertificationFailure
from .scalars import BiDegree, milnor_shift


def element_label(mod: BigradedModule, v) -> str:
    """Human-readable form of ``v``, in ambient monomials for submodules."""
    parent = getattr(mod, "parent", None)
    if parent is not None:
        return parent.describe(mod.to_ambient(v))
    return mod.describe(v)


def _grade_json(g):
    return g.to_json() if isinstance(g, BiDegree) else {"degree": int(g)}


def margolis_homology(mod: BigradedModule, m: int) -> dict:
    """dim(ker Q_m / im Q_m) in each grade."""
    Q = mod.operators[m]
    p = mod.p
    out = {}
    for g, idx in mod.blocks.items():
        out_rank = _kernels.rank(Q[:, idx], p)
        in_rank = _kernels.rank(Q[idx, :], p)
        out[g] = len(idx) - out_rank - in_rank
    return out


@dataclass
class MargolisWitness:
    m: int
    kernel_dim: int
    image_dim: int
    homology: dict

    @property
    def vanishes(self) -> bool:
        return all(v == 0 for v in self.homology.values())

    def to_json(self):
        return {
            "q_index": self.m,
            "kernel_dim": self.kernel_dim,
            "image_dim": self.image_dim,
            "vanishes": self.vanishes,
            "nonzero": [dict(_grade_json(g), dim=d) for g, d in sorted(self.homology.items()) if d],
        }


def margolis_witness(mod: BigradedModule, m: int) -> MargolisWitness:
    r = _kernels.rank(mod.operators[m], mod.p)
    return MargolisWitness(m, mod.dim - r, r, margolis_homology(mod, m))


@dataclass
class FreenessCertificate:
    ops: list[int]
    free: bool
    generators: list[tuple[np.ndarray, object]] = field(default_factory=list)
    generator_labels: list[str] = field(default_factory=list)
    margolis: list[MargolisWitness] = field(default_factory=list)
    dimension: int = 0
    witness: dict | None = None

    @property
    def margolis_agrees(self) -> bool:
        return all(w.vanishes for w in self.margolis) == self.free

    def generator_grades(self):
        return [g for _, g in self.generators]

    def to_json(self):
        out = {
            "ops": self.ops,
            "free": self.free,
            "dimension": self.dimension,
            "generators": [dict(_grade_json(g), element=lab)
                           for (_, g), lab in zip(self.generators, self.generator_labels)],
            "dimension_identity": {
                "total": self.dimension,
                "rank_factor": 2 ** len(self.ops),
                "generators": len(self.generators),
            },
            "margolis": [w.to_json() for w in self.margolis],
            "margolis_agrees": self.margolis_agrees,
        }
        if self.witness is not None:
            out["non_freeness_witness"] = self.witness
        return out


def _complement_lifts(mod: BigradedModule, ops) -> list[tuple[np.ndarray, object]]:
    """Lex-least homogeneous lifts of a basis of mod / sum_s im Q_s."""
    p = mod.p
    lifts = []
    for g, idx in mod.blocks.items():
        images = [mod.operators[s][idx, :] for s in ops]
        J = np.concatenate(images, axis=1) if images else np.zeros((len(idx), 0), dtype=np.int64)
        if J.shape[1]:
            _, piv = _kernels.rref_reversed(J.T, p)
            piv = set(int(x) for x in piv)
        else:
            piv = set()
        for k, i in enumerate(idx):
            if k not in piv:
                lifts.append((mod.unit(i), g))
    return lifts


def _orbit(mod: BigradedModule, v: np.ndarray, subset) -> np.ndarray:
    for s in subset:  # ascending
        v = mod.apply(s, v)
    return v


def certify_freeness(mod: BigradedModule, ops) -> FreenessCertificate:
    ops = sorted(ops)
    cert = FreenessCertificate(ops=ops, free=False, dimension=mod.dim)
    cert.margolis = [margolis_witness(mod, s) for s in ops]
    rank_factor = 2 ** len(ops)
    if mod.dim % rank_factor:
        cert.witness = {"reason": "dimension not divisible by 2^#ops", "dimension": mod.dim}
        return cert
    lifts = _complement_lifts(mod, ops)
    cert.generators = lifts
    cert.generator_labels = [element_label(mod, v) for v, _ in lifts]
    subsets = [c for r in range(len(ops) + 1) for c in itertools.combinations(ops, r)]
    columns = [_orbit(mod, v, T) for v, _ in lifts for T in subsets]
    E = np.stack(columns, axis=1) if columns else np.zeros((mod.dim, 0), dtype=np.int64)
    full = len(columns) == mod.dim and _kernels.rank(E, mod.p) == mod.dim
    cert.free = bool(full)
    if not full:
        cert.witness = _rank_witness(mod, E, lifts, subsets)
    return cert


def _rank_witness(mod: BigradedModule, E: np.ndarray, lifts, subsets) -> dict:
    for c in range(E.shape[1]):
        if not E[:, c].any():
            v, g = lifts[c // len(subsets)]
            return dict(_grade_json(g), reason="generator is annihilated", element=element_label(mod, v),
                        ops=list(subsets[c % len(subsets)]))
    for g, idx in mod.blocks.items():
        cols = [c for c in range(E.shape[1]) if E[idx, c].any() and not np.delete(E[:, c], idx).any()]
        r = _kernels.rank(E[np.ix_(idx, cols)], mod.p) if cols else 0
        if r != len(idx) or len(cols) != len(idx):
            return dict(_grade_json(g), reason="evaluation map is not bijective here",
                        module_dim=len(idx), evaluation_vectors=len(cols), rank=r)
    return {"reason": "evaluation map is not bijective"}


# ------------------------------------------------------------ generators

@dataclass
class GeneratorReport:
    alpha: np.ndarray | None = None
    alpha_bidegree: BiDegree | None = None
    alpha_label: str = ""
    ambiguous: bool = False
    candidates: list[str] = field(default_factory=list)
    beta: np.ndarray | None = None
    beta_bidegree: BiDegree | None = None
    beta_label: str = ""
    slope_check: bool | None = None

    def to_json(self):
        out = {
            "alpha": dict(self.alpha_bidegree.to_json(), element=self.alpha_label),
            "alpha_ambiguous": self.ambiguous,
        }
        if self.ambiguous:
            out["alpha_candidates"] = self.candidates
        if self.beta_bidegree is not None:
            out["beta"] = dict(self.beta_bidegree.to_json(), element=self.beta_label)
            out["slope_two"] = self.slope_check
        return out


def locate_generator(mod: BigradedModule) -> GeneratorReport:
    """Element of simultaneously smallest weight and smallest degree."""
    if mod.dim == 0:
        raise CertificationFailure("module is zero")
    grades = mod.support()
    min_w = min(g.weight for g in grades)
    min_j = min(g.degree for g in grades)
    best = min(g for g in grades if g.weight == min_w)
    if best.degree != min_j:
        raise AmbiguityError(
            f"smallest weight at {best} but smallest degree is {min_j}",
            witness={"min_weight_bidegree": best.to_json(), "min_degree": min_j},
        )
    idx = mod.blocks[best]
    rep = GeneratorReport(alpha=mod.unit(idx[0]), alpha_bidegree=best, alpha_label=element_label(mod, mod.unit(idx[0])))
    if len(idx) > 1:
        rep.ambiguous = True
        rep.candidates = [element_label(mod, mod.unit(i)) for i in idx]
    return rep


def compute_beta(mod: BigradedModule, report: GeneratorReport, ops) -> GeneratorReport:
    """beta = Q_{max} o ... o Q_{min}(alpha), applied in ascending order."""
    ops = sorted(ops)
    v = report.alpha
    if v is None or not v.any():
        raise CertificationFailure("alpha is zero")
    v = _orbit(mod, v, ops)
    if not v.any():
        raise CertificationFailure("beta vanishes", witness={"ops": ops})
    b = mod.grade_of(v)
    expected = report.alpha_bidegree
    for s in ops:
        expected = expected + milnor_shift(mod.p, s)
    if b != expected:
        raise CertificationFailure(f"beta lands in {b}, expected {expected}")
    report.beta = v
    report.beta_bidegree = b
    report.beta_label = element_label(mod, v)
    report.slope_check = b.degree == 2 * b.weight
    if not report.slope_check:
        raise CertificationFailure(f"beta at {b} is off the slope-two line")
    return report
