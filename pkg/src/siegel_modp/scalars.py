"""Exact rationals, residues mod p and small number-theoretic helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Scalar = Union[int, Fraction]

INF = math.inf

# Deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class NotPIntegralError(ValueError):
    """A rational with denominator divisible by p was reduced mod p."""

    def __init__(self, numerator: int, denominator: int, p: int, where=None):
        self.numerator = numerator
        self.denominator = denominator
        self.p = p
        self.where = where
        msg = f"{numerator}/{denominator} is not {p}-integral"
        if where is not None:
            msg += f" (at index {where})"
        super().__init__(msg)


def normalize(x: Scalar) -> Scalar:
    """Return ``x`` as an int when it is integral, otherwise as a Fraction."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"not an exact scalar: {x!r}")


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("prime must be an int")
        if self.p.bit_length() > 64:
            raise ValueError(f"prime {self.p} exceeds 64 bits")
        if not is_probable_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p < 5:
            raise ValueError(f"prime must be >= 5, got {self.p}")

    def __int__(self):
        return self.p


def as_prime(p) -> int:
    """Validate ``p`` (int or PrimeModulus) and return it as an int."""
    if isinstance(p, PrimeModulus):
        return p.p
    return PrimeModulus(p).p


def reduce_scalar(x: Scalar, p: int, where=None) -> int:
    """Residue of a p-integral rational in [0, p)."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise NotPIntegralError(num, den, p, where)
    return num * pow(den, -1, p) % p


@dataclass(frozen=True)
class ModScalar:
    residue: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def reduce(cls, x: Scalar, p) -> "ModScalar":
        p = as_prime(p)
        return cls(reduce_scalar(x, p), p)

    def _other(self, other) -> int:
        if isinstance(other, ModScalar):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other.residue
        return reduce_scalar(other, self.modulus)

    def __add__(self, other):
        return ModScalar(self.residue + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return ModScalar(self.residue - self._other(other), self.modulus)

    def __rsub__(self, other):
        return ModScalar(self._other(other) - self.residue, self.modulus)

    def __mul__(self, other):
        return ModScalar(self.residue * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModScalar(-self.residue, self.modulus)

    def inverse(self) -> "ModScalar":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse mod p")
        return ModScalar(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * ModScalar(self._other(other), self.modulus).inverse()

    def __bool__(self):
        return self.residue != 0

    def __str__(self):
        return str(self.residue)


def v_p(x: Scalar, p) -> float | int:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    p = int(p)
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple[Fraction, ...]:
    # B_0..B_k from sum_{j=0}^{n} C(n+1, j) B_j = 0, with B_1 = -1/2.
    b = [Fraction(1)]
    for n in range(1, k + 1):
        s = sum(math.comb(n + 1, j) * b[j] for j in range(n))
        b.append(-s / (n + 1))
    return tuple(b)


def bernoulli(k: int) -> Fraction:
    if k <= 0 or k % 2:
        raise ValueError(f"bernoulli expects an even positive index, got {k}")
    return _bernoulli_table(k)[k]


def divisors(n: int) -> list[int]:
    if n <= 0:
        raise ValueError(f"divisors expects n >= 1, got {n}")
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in divisors(n))


def format_rational(x: Scalar) -> str:
    """Canonical text form: ``num/den`` in lowest terms, ``num`` when integral."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Scalar:
    return normalize(Fraction(s))
