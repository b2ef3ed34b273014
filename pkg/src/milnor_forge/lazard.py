"""Annihilators of certificate-shaped modules over a truncated Lazard ring.

Ring: Z_(p)[v, x_1..x_D] with positive gradings and one designated v = v_m of
grading p^m - 1.  I is the ideal (p, x_1..x_D).  A presentation has
generators y_1..y_g and relations ``y_i v^{r_i} = sum_j y_j u_{j,i}`` with all
u in I; the elimination below produces ``v^s + tail`` (tail in I) killing
every y_i.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import ConfigurationError, ParameterError, ValuationError
from .scalars import valuation

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_NUMBER = re.compile(r"^\d+(/\d+)?$")


class TruncatedLazardRing:
    def __init__(self, p: int, names: Sequence[str], gradings: Sequence[int], v: str):
        if len(names) != len(gradings) or len(set(names)) != len(names):
            raise ParameterError("generator names must be distinct and match the gradings")
        if any(int(d) <= 0 for d in gradings):
            raise ParameterError("gradings must be positive")
        if v not in names:
            raise ParameterError(f"designated generator {v!r} is not a ring generator")
        self.p = p
        self.names = tuple(names)
        self.gradings = tuple(int(d) for d in gradings)
        self.v = self.names.index(v)
        dv = self.gradings[self.v]
        m, q = 0, 1
        while q - 1 < dv:
            q *= p
            m += 1
        if q - 1 != dv:
            raise ParameterError(f"grading {dv} of {v} is not of the form {p}^m - 1")
        self.m = m

    @property
    def v_grading(self) -> int:
        return self.gradings[self.v]

    def key(self):
        return (self.p, self.names, self.gradings, self.v)

    def __eq__(self, other):
        return isinstance(other, TruncatedLazardRing) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def grade(self, e: tuple[int, ...]) -> int:
        return sum(a * w for a, w in zip(e, self.gradings))

    def monomials(self, grade: int) -> tuple[tuple[int, ...], ...]:
        return _monomials_of_grade(self.gradings, grade)

    def poly(self, terms=None) -> "LazardPolynomial":
        return LazardPolynomial(self, terms or {})

    def one(self):
        return self.poly({(0,) * len(self.names): 1})

    def gen(self, name: str, power: int = 1):
        e = [0] * len(self.names)
        e[self.names.index(name)] = power
        return self.poly({tuple(e): 1})

    def v_power(self, s: int):
        return self.gen(self.names[self.v], s)

    def parse(self, text: str) -> "LazardPolynomial":
        return LazardPolynomial.parse(self, text)

    def to_json(self):
        return {"p": self.p, "v_m": self.names[self.v], "m": self.m,
                "generators": [{"name": n, "grading": d} for n, d in zip(self.names, self.gradings)]}


@lru_cache(maxsize=None)
def _monomials_of_grade(weights: tuple[int, ...], grade: int) -> tuple[tuple[int, ...], ...]:
    if grade < 0:
        return ()
    if not weights:
        return ((),) if grade == 0 else ()
    w = weights[0]
    out = []
    for a in range(grade // w, -1, -1):
        for rest in _monomials_of_grade(weights[1:], grade - a * w):
            out.append((a,) + rest)
    return tuple(out)


class LazardPolynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: TruncatedLazardRing, terms: Mapping[tuple[int, ...], object]):
        self.ring = ring
        p = ring.p
        clean = {}
        for e, c in terms.items():
            c = Fraction(c)
            if c and c.denominator % p == 0:
                raise ValuationError(f"coefficient {c} is not {p}-local")
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def parse(cls, ring: TruncatedLazardRing, text: str) -> "LazardPolynomial":
        """``c*g1^e1*g2^e2 + ...``; c may be an integer or a fraction a/b."""
        index = {n: i for i, n in enumerate(ring.names)}
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        if text == "0":
            return ring.poly()
        if text[0] not in "+-":
            text = "+" + text
        pieces = _TERM_SPLIT.split(text)[1:]
        terms: dict = {}
        for sign, body in zip(pieces[::2], pieces[1::2]):
            c = Fraction(-1 if sign == "-" else 1)
            e = [0] * len(ring.names)
            for factor in body.split("*"):
                factor = factor.strip()
                if _NUMBER.match(factor):
                    c *= Fraction(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in index:
                    raise ValueError(f"unknown ring generator {name!r}")
                e[index[name]] += int(power) if power else 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return cls(ring, terms)

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LazardPolynomial):
            other = self.ring.poly({(0,) * len(self.ring.names): other})
        if other.ring != self.ring:
            raise ConfigurationError("polynomials over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LazardPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LazardPolynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LazardPolynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LazardPolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.one() * other
        return isinstance(other, LazardPolynomial) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def grades(self) -> set[int]:
        return {self.ring.grade(e) for e in self.terms}

    def grade(self) -> int | None:
        """Grading of a homogeneous polynomial; ``None`` for zero."""
        gs = self.grades()
        if len(gs) > 1:
            raise ParameterError(f"{self} is not homogeneous")
        return gs.pop() if gs else None

    def is_pure_v(self, e) -> bool:
        return all(a == 0 for k, a in enumerate(e) if k != self.ring.v)

    def in_ideal(self) -> bool:
        """Membership in I = (p, generators other than v)."""
        p = self.ring.p
        return all(c.numerator % p == 0 for e, c in self.terms.items() if self.is_pure_v(e))

    def v_coefficient(self, s: int) -> Fraction:
        e = [0] * len(self.ring.names)
        e[self.ring.v] = s
        return self.terms.get(tuple(e), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (self.ring.grade(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(n + (f"^{a}" if a > 1 else "") for n, a in zip(self.ring.names, e) if a)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"LazardPolynomial({self})"


# ------------------------------------------------------------ presentations

@dataclass
class LazardPresentation:
    """Generators y_i (gradings) and relations y_i v^{r_i} = sum_j y_j u[j][i].

    ``exponents[i]`` may be ``None`` when generator i has no certificate
    relation; such presentations can be inspected but not eliminated.
    ``extra`` rows are additional relations sum_j y_j c_j = 0.
    """

    ring: TruncatedLazardRing
    gradings: list[int]
    exponents: list[int | None]
    u: list[list[LazardPolynomial]]
    extra: list[list[LazardPolynomial]] = field(default_factory=list)
    names: list[str] | None = None

    def __post_init__(self):
        g = len(self.gradings)
        if self.names is None:
            self.names = [f"y{i + 1}" for i in range(g)]
        if len(self.exponents) != g or len(self.u) != g or any(len(row) != g for row in self.u):
            raise ParameterError("relation data does not match the number of generators")
        self.homogeneous = True
        for i in range(g):
            r = self.exponents[i]
            if r is None:
                if any(not self.u[j][i].is_zero() for j in range(g)):
                    raise ParameterError(f"u entries given for {self.names[i]} without an exponent")
                continue
            if r < 1:
                raise ParameterError(f"exponent r_{i + 1} must be positive")
            for j in range(g):
                if not self.u[j][i].is_zero() and not self.u[j][i].in_ideal():
                    raise ParameterError(f"u[{j + 1},{i + 1}] = {self.u[j][i]} is not in I")
        for row in self.extra:
            if len(row) != g:
                raise ParameterError("extra relation has the wrong length")
        self.homogeneous = all(len(self._row_grades(row)) <= 1 for _, row in self._raw_rows())

    def _row_grades(self, row) -> set[int]:
        return {gr + self.gradings[j] for j, c in enumerate(row) for gr in c.grades()}

    @property
    def g(self) -> int:
        return len(self.gradings)

    @property
    def certified(self) -> bool:
        return all(r is not None for r in self.exponents)

    def _raw_rows(self) -> list[tuple[int, list[LazardPolynomial]]]:
        ring = self.ring
        out = []
        for i, r in enumerate(self.exponents):
            if r is None:
                continue
            row = [-self.u[j][i] for j in range(self.g)]
            row[i] = row[i] + ring.v_power(r)
            out.append((i, row))
        out += [(None, row) for row in self.extra]
        return out

    def relation_rows(self) -> list[tuple[int, list[LazardPolynomial]]]:
        """All nonzero relations as (top grading, vector c) with sum_j y_j c_j = 0."""
        return [(max(gs), row) for _, row in self._raw_rows() if (gs := self._row_grades(row))]

    def to_json(self):
        rels = []
        for i, r in enumerate(self.exponents):
            if r is None:
                continue
            rels.append({"generator": self.names[i], "r": r,
                         "u": {self.names[j]: str(self.u[j][i]) for j in range(self.g)
                               if not self.u[j][i].is_zero()}})
        return {
            "generators": [{"name": n, "grading": d} for n, d in zip(self.names, self.gradings)],
            "relations": rels,
            "extra": [{self.names[j]: str(c) for j, c in enumerate(row) if not c.is_zero()}
                      for row in self.extra],
        }

    @classmethod
    def from_json(cls, ring: TruncatedLazardRing, data: dict) -> "LazardPresentation":
        gens = data.get("generators", [])
        names = [gdef["name"] for gdef in gens]
        index = {n: i for i, n in enumerate(names)}
        g = len(names)
        zero = ring.poly()
        u = [[zero for _ in range(g)] for _ in range(g)]
        exps: list[int | None] = [None] * g
        for rel in data.get("relations", []):
            i = index[rel["generator"]]
            exps[i] = int(rel["r"])
            for name, text in rel.get("u", {}).items():
                u[index[name]][i] = ring.parse(text)
        extra = []
        for row in data.get("extra", []):
            vec = [zero] * g
            for name, text in row.items():
                vec[index[name]] = ring.parse(text)
            extra.append(vec)
        return cls(ring, [int(gdef["grading"]) for gdef in gens], exps, u, extra, names)


# ------------------------------------------------------------ elimination

@dataclass
class AnnihilatorElement:
    element: LazardPolynomial
    s: int
    degenerate: bool = False

    @property
    def tail(self) -> LazardPolynomial:
        return self.element - self.element.ring.v_power(self.s)

    def check_shape(self) -> bool:
        tail = self.tail
        return tail.v_coefficient(self.s) == 0 and tail.in_ideal()

    def to_json(self):
        return {"element": str(self.element), "v_power": self.s, "tail": str(self.tail),
                "tail_in_ideal": self.tail.in_ideal(), "degenerate": self.degenerate}


def _eliminate_index(system, n):
    """Drop generator n from a system {i: (a_i, s_i, {j: u_ji})}."""
    a_n, s_n, u_n = system[n]
    out = {}
    for i, (a_i, s_i, u_i) in system.items():
        if i == n:
            continue
        zero = a_i.ring.poly()
        u_ni = u_i.get(n, zero)
        u_in = u_n.get(i, zero)
        new_a = a_i * a_n - u_ni * u_in
        new_u = {}
        for j in system:
            if j in (i, n):
                continue
            w = u_i.get(j, zero) * a_n + u_n.get(j, zero) * u_ni
            if not w.is_zero():
                new_u[j] = w
        out[i] = (new_a, s_i + s_n, new_u)
    return out


def _annihilate(system) -> tuple[LazardPolynomial, int]:
    keys = sorted(system)
    if len(keys) == 1:
        a, s, _ = system[keys[0]]
        return a, s
    a1, s1 = _annihilate(_eliminate_index(system, keys[-1]))
    a2, s2 = _annihilate(_eliminate_index(system, keys[0]))
    return a1 * a2, s1 + s2


def eliminate(pres: LazardPresentation) -> AnnihilatorElement:
    """Annihilator v^s + tail of every generator, by the two-sided recursion."""
    ring = pres.ring
    if pres.g == 0:
        return AnnihilatorElement(ring.one(), 0, degenerate=True)
    if not pres.certified:
        missing = [pres.names[i] for i, r in enumerate(pres.exponents) if r is None]
        raise ParameterError(f"no certificate relation for {', '.join(missing)}")
    system = {}
    for i in range(pres.g):
        a_i = ring.v_power(pres.exponents[i]) - pres.u[i][i]
        u_i = {j: pres.u[j][i] for j in range(pres.g) if j != i and not pres.u[j][i].is_zero()}
        system[i] = (a_i, pres.exponents[i], u_i)
    a, s = _annihilate(system)
    lead = a.v_coefficient(s)
    if lead == 0 or lead.numerator % ring.p == 0:
        raise AssertionError("elimination lost the unit v-power")
    out = AnnihilatorElement(a * (1 / lead), s)
    if not out.check_shape():
        raise AssertionError("annihilator does not have the shape v^s + tail")
    if s > exponent_ceiling(pres):
        raise AssertionError(f"v-power {s} exceeds the recursion ceiling {exponent_ceiling(pres)}")
    return out


def exponent_ceiling(pres: LazardPresentation) -> int:
    return 4 ** (pres.g - 1) * max(pres.exponents) if pres.g else 0


# ------------------------------------------------------------ verification

def _integer_column(col: dict, p: int) -> dict:
    den = lcm(*(c.denominator for c in col.values()))
    out = {k: int(c * den) for k, c in col.items()}
    return _normalize(out, p)


def _normalize(col: dict, p: int) -> dict:
    """Divide by the p-free part of the content (a unit of Z_(p))."""
    g = 0
    for c in col.values():
        g = gcd(g, c)
    while g % p == 0 and g:
        g //= p
    if g > 1:
        col = {k: c // g for k, c in col.items()}
    return col


def _val(x: int, p: int) -> int:
    return valuation(x, p)


@dataclass
class MembershipResult:
    member: bool
    witness: dict | None = None


def lattice_membership(columns: list[dict], target: dict, p: int) -> MembershipResult:
    """Is ``target`` in the Z_(p)-span of ``columns``?  Entries are Fractions.

    Fraction-free column echelon: in each row the column of least valuation
    becomes the pivot and clears the row from the remaining columns using only
    unit multipliers, so the pivot columns are a Z_(p)-basis of the span.
    """
    active = [c for c in (_integer_column(c, p) for c in columns if c) if c]
    rows = sorted({k for c in active for k in c} | set(target))
    pivots = []
    for r in rows:
        hits = [i for i, c in enumerate(active) if c.get(r)]
        if not hits:
            continue
        best = min(hits, key=lambda i: (_val(active[i][r], p), i))
        P = active[best]
        pr = P[r]
        k = _val(pr, p)
        u = pr // p**k
        rest = []
        for i, c in enumerate(active):
            if i == best:
                continue
            cr = c.get(r)
            if cr:
                l = _val(cr, p)
                w = (cr // p**l) * p ** (l - k)
                new = {key: u * val for key, val in c.items()}
                for key, val in P.items():
                    new[key] = new.get(key, 0) - w * val
                c = {key: val for key, val in new.items() if val}
                if not c:
                    continue
                c = _normalize(c, p)
            rest.append(c)
        active = rest
        pivots.append((r, P))
    t = {k: Fraction(v) for k, v in target.items() if v}
    for r, P in pivots:
        tr = t.get(r)
        if not tr:
            continue
        lam = tr / P[r]
        if lam.denominator % p == 0:
            return MembershipResult(False, {"row": _row_json(r), "reason": "p-adic valuation obstruction",
                                            "coefficient_valuation": valuation(lam, p)})
        for key, val in P.items():
            nv = t.get(key, 0) - lam * val
            if nv:
                t[key] = nv
            else:
                t.pop(key, None)
    if t:
        r = min(t)
        return MembershipResult(False, {"row": _row_json(r), "reason": "nonzero normal form",
                                        "residual_terms": len(t)})
    return MembershipResult(True)


def _row_json(r):
    j, e = r
    return {"generator_index": j, "monomial": list(e)}


@dataclass
class VerificationReport:
    verified: bool
    partial: bool
    per_generator: list[dict]
    bound: int

    def __bool__(self):
        return self.verified

    def to_json(self):
        return {"verified": self.verified, "partial": self.partial, "degree_bound": self.bound,
                "generators": self.per_generator}


def _module_vector(pres: LazardPresentation, vec: Sequence[LazardPolynomial], shift=None) -> dict:
    out = {}
    for j, c in enumerate(vec):
        for e, val in c.terms.items():
            key = (j, e if shift is None else tuple(a + b for a, b in zip(e, shift)))
            out[key] = out.get(key, 0) + val
    return {k: v for k, v in out.items() if v}


def relation_columns(pres: LazardPresentation, grade: int, filtered: bool = False) -> list[dict]:
    """Z_(p)-spanning set of the relation submodule in one grading.

    With ``filtered`` the columns are all multiples of top grading <= grade.
    """
    cols = []
    for g_rel, row in pres.relation_rows():
        shifts = range(grade - g_rel + 1) if filtered else [grade - g_rel]
        for d in shifts:
            for mu in pres.ring.monomials(d):
                col = _module_vector(pres, row, mu)
                if col:
                    cols.append(col)
    return cols


def _top_grade(elem: LazardPolynomial) -> int:
    return max(elem.grades(), default=0)


def required_bound(a: AnnihilatorElement | LazardPolynomial, pres: LazardPresentation) -> int:
    elem = a.element if isinstance(a, AnnihilatorElement) else a
    return _top_grade(elem) + max(pres.gradings, default=0)


def verify_annihilates(a: AnnihilatorElement | LazardPolynomial, pres: LazardPresentation,
                       degree_bound: int | None = None) -> VerificationReport:
    """Reduce a * y_i modulo the relations for every i.

    Homogeneous presentations give one exact finite system per grading.
    Otherwise the system of all relation multiples of top grading <= bound is
    used; a success is then a genuine membership proof while a failure only
    says that no certificate exists below the bound.
    """
    elem = a.element if isinstance(a, AnnihilatorElement) else a
    ring = pres.ring
    bound = required_bound(elem, pres) if degree_bound is None else degree_bound
    homogeneous = pres.homogeneous and len(elem.grades()) <= 1
    zero = ring.poly()
    per = []
    partial = False
    ok = True
    for i in range(pres.g):
        if elem.is_zero():
            per.append({"generator": pres.names[i], "status": "verified", "grade": None})
            continue
        grade = _top_grade(elem) + pres.gradings[i]
        if grade > bound:
            partial = True
            per.append({"generator": pres.names[i], "status": "unchecked", "grade": grade})
            continue
        vec = [zero] * pres.g
        vec[i] = elem
        cols = relation_columns(pres, bound if not homogeneous else grade, filtered=not homogeneous)
        res = lattice_membership(cols, _module_vector(pres, vec), ring.p)
        entry = {"generator": pres.names[i], "grade": grade,
                 "status": "verified" if res.member else "not_killed"}
        if res.witness:
            entry["witness"] = res.witness
        if not res.member and not homogeneous:
            entry["within_bound_only"] = True
        ok = ok and res.member
        per.append(entry)
    return VerificationReport(ok and not partial, partial, per, bound)


# ------------------------------------------------------------ K(m) check

@dataclass
class LocalizationReport:
    vanishes: bool
    syntactic: bool
    killed: list[bool]

    def __bool__(self):
        return self.vanishes

    def to_json(self):
        return {"vanishes": self.vanishes, "certificate_relations_complete": self.syntactic,
                "generators_killed": self.killed}


def km_localization_check(pres: LazardPresentation, degree_bound: int | None = None) -> LocalizationReport:
    """Does N (x) F_p[v, 1/v] vanish?

    Setting p and every generator except v to zero leaves monomial entries
    c * v^k; after inverting v the relation matrix is the constant matrix of
    the c mod p, and a generator dies iff its unit vector is in its span.
    ``degree_bound`` restricts the relations considered to gradings <= bound.
    """
    ring = pres.ring
    p = ring.p
    syntactic = pres.certified
    rels = []
    for g_rel, row in pres.relation_rows():
        if degree_bound is not None and g_rel > degree_bound:
            continue
        col = []
        for c in row:
            val = 0
            for e, coeff in c.terms.items():
                if c.is_pure_v(e):
                    val = (coeff.numerator * pow(coeff.denominator, -1, p)) % p
            col.append(val)
        rels.append(col)
    C = np.array(rels, dtype=np.int64).T if rels else np.zeros((pres.g, 0), dtype=np.int64)
    base = _kernels.rank(C, p) if C.size else 0
    killed = []
    for i in range(pres.g):
        e = np.zeros((pres.g, 1), dtype=np.int64)
        e[i, 0] = 1
        aug = np.concatenate([C, e], axis=1)
        killed.append(_kernels.rank(aug, p) == base)
    return LocalizationReport(all(killed), syntactic, killed)


# ------------------------------------------------------------ random inputs

def random_ring(rng: random.Random, p: int | None = None, extra: int | None = None,
                lo: int = 3) -> TruncatedLazardRing:
    """v = v_1 plus up to three further generators of grading in (|v|, 12]."""
    p = p or rng.choice([2, 3])
    extra = rng.randint(1, 3) if extra is None else extra
    dv = p - 1
    gradings = sorted(rng.sample(range(max(dv + 1, lo), 13), extra))
    names = ["v1"] + [f"x{k + 1}" for k in range(extra)]
    return TruncatedLazardRing(p, names, [dv] + gradings, "v1")


def _random_ideal_element(rng: random.Random, ring: TruncatedLazardRing, grade: int,
                          density: float) -> LazardPolynomial:
    if grade < 0 or rng.random() > density:
        return ring.poly()
    monos = list(ring.monomials(grade))
    if not monos:
        return ring.poly()
    terms = {}
    for e in rng.sample(monos, min(len(monos), rng.randint(1, 2))):
        c = rng.randint(1, ring.p + 2)
        pure = all(a == 0 for k, a in enumerate(e) if k != ring.v)
        if pure:
            c *= ring.p
        terms[e] = c
    return ring.poly(terms)


def random_presentation(rng: random.Random, g: int | None = None, ring: TruncatedLazardRing | None = None,
                        max_r: int | None = None, density: float = 0.7) -> LazardPresentation:
    """Random certificate-shaped presentation with g <= 4 generators.

    Larger g gets smaller exponents and sparser, higher-graded rings so the
    verification systems stay small (the v-power grows like 4^(g-1)).
    """
    g = rng.randint(1, 4) if g is None else g
    if ring is None:
        ring = random_ring(rng, lo=2 if g <= 2 else g + 1)
    if max_r is None:
        max_r = {1: 3, 2: 3, 3: 2}.get(g, 1)
    gradings = [rng.randint(0, 8) for _ in range(g)]
    exps = [rng.randint(1, max_r) for _ in range(g)]
    u = [[ring.poly() for _ in range(g)] for _ in range(g)]
    for i in range(g):
        target = gradings[i] + exps[i] * ring.v_grading
        for j in range(g):
            u[j][i] = _random_ideal_element(rng, ring, target - gradings[j], density)
    return LazardPresentation(ring, gradings, exps, u)
