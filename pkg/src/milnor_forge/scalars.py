"""Exact scalars: p-local rationals and bidegrees."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError, ValuationError


@dataclass(frozen=True, order=True)
class BiDegree:
    """Bidegree ``(weight)[degree]``; Chow level is ``2*weight - degree``."""

    weight: int
    degree: int

    @property
    def chow_level(self) -> int:
        return 2 * self.weight - self.degree

    def __add__(self, other: "BiDegree") -> "BiDegree":
        return BiDegree(self.weight + other.weight, self.degree + other.degree)

    def __sub__(self, other: "BiDegree") -> "BiDegree":
        return BiDegree(self.weight - other.weight, self.degree - other.degree)

    def __mul__(self, k: int) -> "BiDegree":
        return BiDegree(self.weight * k, self.degree * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.weight})[{self.degree}]"

    def to_json(self) -> dict:
        return {"weight": self.weight, "degree": self.degree}


ZERO_BIDEGREE = BiDegree(0, 0)
Y_BIDEGREE = BiDegree(1, 2)
X_BIDEGREE = BiDegree(1, 1)


def milnor_shift(p: int, i: int) -> BiDegree:
    """Bidegree of Q_i: ``(p^i - 1)[2p^i - 1]``."""
    return BiDegree(p**i - 1, 2 * p**i - 1)


def valuation(x: int | Fraction, p: int) -> int:
    """p-adic valuation; ``None`` is never returned, zero raises."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class PLocalRational:
    """Element of Z_(p): a fraction in lowest terms with denominator prime to p."""

    __slots__ = ("p", "value")

    def __init__(self, p: int, numerator: int | Fraction = 0, denominator: int = 1):
        value = Fraction(numerator) / denominator
        if value.denominator % p == 0:
            raise ValuationError(f"{value} is not {p}-local")
        self.p = p
        self.value = value

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def valuation(self) -> float | int:
        if self.value == 0:
            return float("inf")
        return valuation(self.value, self.p)

    def _coerce(self, other) -> "PLocalRational":
        if isinstance(other, PLocalRational):
            if other.p != self.p:
                raise ConfigurationError(f"primes differ: {self.p} vs {other.p}")
            return other
        return PLocalRational(self.p, other)

    def __add__(self, other):
        return PLocalRational(self.p, self.value + self._coerce(other).value)

    __radd__ = __add__

    def __sub__(self, other):
        return PLocalRational(self.p, self.value - self._coerce(other).value)

    def __rsub__(self, other):
        return PLocalRational(self.p, self._coerce(other).value - self.value)

    def __mul__(self, other):
        return PLocalRational(self.p, self.value * self._coerce(other).value)

    __rmul__ = __mul__

    def __neg__(self):
        return PLocalRational(self.p, -self.value)

    def invert(self) -> "PLocalRational":
        if self.value == 0 or self.value.numerator % self.p == 0:
            raise ValuationError(f"{self.value} has positive {self.p}-adic valuation")
        return PLocalRational(self.p, 1 / self.value)

    def mod_p(self) -> int:
        """Image in F_p."""
        return self.value.numerator * pow(self.value.denominator, -1, self.p) % self.p

    def __eq__(self, other):
        if isinstance(other, PLocalRational):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __repr__(self):
        return f"PLocalRational(p={self.p}, {self.value})"

    def __str__(self):
        return str(self.value)


def plocal_arith(a: PLocalRational, b: PLocalRational | None, op: str) -> PLocalRational:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.invert()
    raise ValueError(f"unknown operation {op!r}")


def fraction_mod_p(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise ValuationError(f"{x} is not {p}-local")
    return x.numerator * pow(x.denominator, -1, p) % p
