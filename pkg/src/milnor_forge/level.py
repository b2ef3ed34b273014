"""Positional level certificates for the Steinberg summands.

The spectral sequence itself is never built.  Vanishing of K(m) comes from
Margolis vanishing of Q_m (the first differential); survival of beta in K(r)
comes from three bidegree checks against the module's support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bigraded import BigradedModule
from .errors import CertificationFailure, ParameterError
from .freeness import (
    FreenessCertificate,
    GeneratorReport,
    certify_freeness,
    compute_beta,
    locate_generator,
    margolis_witness,
)
from .groups import check_twist_range, steinberg_idempotent
from .module import apply_idempotent, build_module
from .scalars import BiDegree, milnor_shift

SCHEMA_TOOLCHAIN = "milnor-forge/0.1.0"

# Lower bound for the weight shift of every differential in the K(r) spectral
# sequence; d_1 = Q_r realises it.
WEIGHT_SHIFT_ASSUMPTION = "p^r - 1"


def weight_shift_bound(p: int, r: int) -> int:
    return p**r - 1


def claimed_level(p: int, n: int) -> int:
    return n if p % 2 else n - 1


def check_level_params(p: int, n: int, k: int) -> None:
    if p == 2 and n < 2:
        raise ParameterError("p = 2 requires n >= 2")
    if n < 1:
        raise ParameterError("n must be positive")
    check_twist_range(p, n, k)


def triviality_certificate(mod: BigradedModule, m: int, level: int | None = None) -> dict:
    if level is not None and m >= level:
        raise ParameterError(f"triviality is only claimed below the level ({m} >= {level})")
    w = margolis_witness(mod, m)
    if not w.vanishes:
        raise CertificationFailure(f"Margolis homology of Q_{m} is nonzero", witness=w.to_json())
    out = w.to_json()
    out["conclusion"] = "E2 page vanishes"
    return out


def survival_certificate(mod: BigradedModule, alpha: BiDegree, beta: BiDegree, r: int,
                         window: int) -> dict:
    """Three positional checks showing beta is a permanent, non-hit cycle for K(r)."""
    p = mod.p
    shift = milnor_shift(p, r)
    bound = weight_shift_bound(p, r)
    support = mod.support()
    min_weight = min(g.weight for g in support)

    slope_ok = beta.degree == 2 * beta.weight
    target = beta + shift
    levels = [g.chow_level for g in support]
    window_ok = min(levels) >= 0 and max(levels) <= window
    gap = beta.weight - bound
    gap_ok = gap < min_weight

    out = {
        "r": r,
        "slope_two": {"ok": slope_ok, "beta": beta.to_json(),
                      "first_differential_target": target.to_json(),
                      "target_chow_level": target.chow_level},
        "support_window": {"ok": window_ok, "min_chow_level": min(levels),
                           "max_chow_level": max(levels), "window": [0, window]},
        "weight_gap": {"ok": gap_ok, "beta_weight": beta.weight, "shift_bound": bound,
                       "difference": gap, "min_weight": min_weight},
        "assumption": {"weight_shift_lower_bound": WEIGHT_SHIFT_ASSUMPTION},
    }
    for name in ("slope_two", "support_window", "weight_gap"):
        if not out[name]["ok"]:
            raise CertificationFailure(f"survival check {name} failed for r = {r}", witness=out)
    return out


def closed_form_gap(p: int, n: int) -> int:
    """weight(beta) - weight(alpha) predicted from the formulas."""
    if p % 2:
        q = (p**n - 1) // (p - 1)
        return q - n
    return 2 ** (n - 1) - n


def closed_form_alpha(p: int, n: int, k: int) -> BiDegree:
    if p % 2:
        q = (p**n - 1) // (p - 1)
        return BiDegree(k * q, 2 * k * q - n)
    return BiDegree(2 ** (n - 1) - 1, 2**n - 1 - n)


@dataclass
class LevelCertificate:
    p: int
    n: int
    k: int
    level: int
    r_max: int
    freeness: FreenessCertificate
    generator: GeneratorReport
    triviality: list[dict] = field(default_factory=list)
    survival: list[dict] = field(default_factory=list)
    gap: dict = field(default_factory=dict)
    summand_dim: int = 0

    def to_json(self):
        return {
            "params": {"p": self.p, "n": self.n, "k": self.k, "r_max": self.r_max},
            "level": self.level,
            "summand_dim": self.summand_dim,
            "alpha": self.generator.alpha_bidegree.to_json(),
            "beta": self.generator.beta_bidegree.to_json(),
            "generator": self.generator.to_json(),
            "freeness": self.freeness.to_json(),
            "triviality": self.triviality,
            "survival": self.survival,
            "weight_gap_closed_form": self.gap,
            "assumptions": {"weight_shift_lower_bound": WEIGHT_SHIFT_ASSUMPTION},
            "toolchain_version": SCHEMA_TOOLCHAIN,
        }


def level_certificate(p: int, n: int, k: int, r_max: int | None = None) -> LevelCertificate:
    check_level_params(p, n, k)
    level = claimed_level(p, n)
    r_max = level + 2 if r_max is None else r_max
    if r_max < level:
        raise ParameterError(f"r_max = {r_max} is below the level {level}")
    mod = build_module(p, n)
    e = steinberg_idempotent(p, n, k, strict=False)
    sub = apply_idempotent(mod, e)
    ops = list(range(level))
    free = certify_freeness(sub, ops)
    if not free.free:
        raise CertificationFailure("summand is not free", witness=free.to_json())
    if not free.margolis_agrees:
        raise CertificationFailure("Margolis and basis witnesses disagree", witness=free.to_json())
    gen = compute_beta(sub, locate_generator(sub), ops)
    if gen.alpha_bidegree != closed_form_alpha(p, n, k):
        raise CertificationFailure(
            f"alpha at {gen.alpha_bidegree}, formula gives {closed_form_alpha(p, n, k)}")
    cert = LevelCertificate(p, n, k, level, r_max, free, gen, summand_dim=sub.dim)
    cert.triviality = [triviality_certificate(sub, m, level) for m in ops]
    alpha, beta = gen.alpha_bidegree, gen.beta_bidegree
    for r in range(level, r_max + 1):
        cert.survival.append(survival_certificate(sub, alpha, beta, r, window=n))
    computed = beta.weight - alpha.weight
    closed = closed_form_gap(p, n)
    if computed != closed:
        raise CertificationFailure(f"weight gap {computed} differs from closed form {closed}")
    bounds = {r: weight_shift_bound(p, r) for r in range(level, r_max + 1)}
    if not all(closed < b for b in bounds.values()):
        raise CertificationFailure("closed-form gap exceeds a shift bound")
    cert.gap = {"computed": computed, "closed_form": closed,
                "shift_bounds": [{"r": r, "bound": b} for r, b in bounds.items()]}
    return cert
