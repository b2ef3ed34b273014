"""Commutative multivariate polynomials over F_p with bigraded variables.

Terms are stored as ``{exponent tuple: coefficient}`` with every stored
coefficient nonzero mod p.  Printing uses graded-lex order, largest first,
with ``y1 > y2 > ...`` in the lex tie-break.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .errors import ConfigurationError
from .scalars import X_BIDEGREE, Y_BIDEGREE, ZERO_BIDEGREE, BiDegree


def default_bidegree(name: str) -> BiDegree:
    return X_BIDEGREE if name.startswith("x") else Y_BIDEGREE


def grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class FpPolynomial:
    __slots__ = ("p", "variables", "bidegrees", "terms")

    def __init__(
        self,
        p: int,
        variables: Sequence[str],
        terms: Mapping[tuple[int, ...], int] | None = None,
        bidegrees: Sequence[BiDegree] | None = None,
    ):
        self.p = p
        self.variables = tuple(variables)
        if bidegrees is None:
            bidegrees = [default_bidegree(v) for v in self.variables]
        self.bidegrees = tuple(bidegrees)
        clean = {}
        n = len(self.variables)
        for exps, c in (terms or {}).items():
            if len(exps) != n:
                raise ConfigurationError("exponent vector length does not match variables")
            c %= p
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def ring(cls, p: int, variables: Sequence[str]):
        return cls(p, variables)

    def _new(self, terms) -> "FpPolynomial":
        return FpPolynomial(self.p, self.variables, terms, self.bidegrees)

    def constant(self, c: int) -> "FpPolynomial":
        return self._new({(0,) * len(self.variables): c})

    def var(self, name_or_index) -> "FpPolynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.variables.index(name_or_index)
        e = [0] * len(self.variables)
        e[i] = 1
        return self._new({tuple(e): 1})

    @classmethod
    def variable(cls, p: int, variables: Sequence[str], name: str) -> "FpPolynomial":
        return cls(p, variables).var(name)

    # arithmetic -------------------------------------------------------
    def _check(self, other: "FpPolynomial"):
        if self.p != other.p or self.variables != other.variables:
            raise ConfigurationError(
                f"mismatched rings: p={self.p} {self.variables} vs p={other.p} {other.variables}"
            )

    def _lift(self, other) -> "FpPolynomial":
        if isinstance(other, FpPolynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.constant(other)
        if not isinstance(other, FpPolynomial):
            return NotImplemented
        return (self.p, self.variables, self.terms) == (other.p, other.variables, other.terms)

    def __hash__(self):
        return hash((self.p, self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # grading ------------------------------------------------------------
    def monomial_bidegree(self, exps: Iterable[int]) -> BiDegree:
        b = ZERO_BIDEGREE
        for e, d in zip(exps, self.bidegrees):
            b = b + d * e
        return b

    def homogeneous_component(self, b: BiDegree) -> "FpPolynomial":
        return self._new({e: c for e, c in self.terms.items() if self.monomial_bidegree(e) == b})

    def bidegrees_present(self) -> set[BiDegree]:
        return {self.monomial_bidegree(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees_present()) <= 1

    @property
    def bidegree(self) -> BiDegree | None:
        """Bidegree of a homogeneous nonzero polynomial, else ``None``."""
        bs = self.bidegrees_present()
        return bs.pop() if len(bs) == 1 else None

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    # substitution -------------------------------------------------------
    def linear_substitute(self, matrix) -> "FpPolynomial":
        """Apply ``v_j -> sum_i matrix[i][j] v_i`` to every variable."""
        n = len(self.variables)
        forms = []
        for j in range(n):
            forms.append(self._new({tuple(int(i == k) for k in range(n)): int(matrix[i][j]) for i in range(n)}))
        powers = [[self.constant(1)] for _ in range(n)]
        out = self._new({})
        for e, c in self.terms.items():
            term = self.constant(c)
            for j, k in enumerate(e):
                while len(powers[j]) <= k:
                    powers[j].append(powers[j][-1] * forms[j])
                if k:
                    term = term * powers[j][k]
            out = out + term
        return out

    # text format --------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.variables, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FpPolynomial(p={self.p}, {self})"

    @classmethod
    def parse(cls, text: str, p: int, variables: Sequence[str], bidegrees=None) -> "FpPolynomial":
        poly = cls(p, variables, bidegrees=bidegrees)
        return poly._new(parse_terms(text, poly.variables))


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")


def parse_terms(text: str, variables: Sequence[str]) -> dict[tuple[int, ...], int]:
    """Parse ``c*v1^e1*v2^e2 + ...`` into an integer-coefficient term map."""
    index = {v: i for i, v in enumerate(variables)}
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)[1:]
    terms: dict[tuple[int, ...], int] = {}
    for sign, body in zip(pieces[::2], pieces[1::2]):
        coeff = -1 if sign == "-" else 1
        exps = [0] * len(variables)
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {body!r}")
            if factor.isdigit():
                coeff *= int(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            exps[index[name]] += int(power) if power else 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return terms


def y_variables(n: int) -> tuple[str, ...]:
    return tuple(f"y{i}" for i in range(1, n + 1))


def poly_multiply(a: FpPolynomial, b: FpPolynomial) -> FpPolynomial:
    return a * b


def homogeneous_component(f: FpPolynomial, b: BiDegree) -> FpPolynomial:
    return f.homogeneous_component(b)
