"""Genus-1 q-expansions and index-m Jacobi slices.

Everything here is exact.  A :class:`QSeries` is a truncated power series in
``q`` times a fixed fractional power ``q**shift``; a :class:`JacobiSlice` is a
truncated series in ``q`` whose coefficients are Laurent polynomials in
``xi = e^{2 pi i z}``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .scalars import Scalar, bernoulli, normalize, sigma


@dataclass(frozen=True)
class QSeries:
    """``q**shift * sum_{i < bound} coeffs[i] q**i``."""

    coeffs: tuple
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(normalize(c) for c in self.coeffs))
        object.__setattr__(self, "shift", Fraction(self.shift))
        if (self.shift * 24).denominator != 1:
            raise ValueError(f"shift {self.shift} has denominator not dividing 24")

    @property
    def bound(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0:
            return 0
        raise IndexError(f"exponent {i} beyond series bound {self.bound}")

    def truncate(self, bound: int) -> "QSeries":
        return QSeries(self.coeffs[:bound], self.shift)

    def __add__(self, other: "QSeries") -> "QSeries":
        if self.shift != other.shift:
            raise ValueError("cannot add series with different shifts")
        b = min(self.bound, other.bound)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(b)], self.shift)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "QSeries":
        return QSeries([c * x for x in self.coeffs], self.shift)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        b = min(self.bound, other.bound)
        a, c = self.coeffs, other.coeffs
        out = [0] * b
        for i in range(b):
            if a[i] == 0:
                continue
            ai = a[i]
            for j in range(b - i):
                out[i + j] += ai * c[j]
        return QSeries(out, self.shift + other.shift)

    __rmul__ = scale

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.reciprocal() ** (-e)
        result = QSeries([1] + [0] * (self.bound - 1))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def reciprocal(self) -> "QSeries":
        """Inverse of a series whose first coefficient is +1 or -1."""
        if not self.coeffs or self.coeffs[0] not in (1, -1):
            raise ValueError("reciprocal needs a unit leading coefficient")
        a = self.coeffs
        u = a[0]
        inv = [u]
        for n in range(1, self.bound):
            s = sum(a[i] * inv[n - i] for i in range(1, n + 1))
            inv.append(-u * s)
        return QSeries(inv, -self.shift)


def _unshifted(coeffs) -> QSeries:
    return QSeries(coeffs)


def euler_product(bound: int) -> QSeries:
    """``prod_{n>=1} (1 - q^n)`` via the pentagonal number theorem."""
    c = [0] * bound
    k = 0
    while True:
        hit = False
        for j in ((k,) if k == 0 else (k, -k)):
            e = j * (3 * j - 1) // 2
            if e < bound:
                c[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return _unshifted(c)


def eta_pow6(bound: int) -> QSeries:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return QSeries((euler_product(bound) ** 6).coeffs, Fraction(1, 4))


def eisenstein_q(k: int, bound: int) -> QSeries:
    """Normalized level-1 Eisenstein series ``1 - (2k/B_k) sum sigma_{k-1}(n) q^n``."""
    if k < 4 or k % 2:
        raise ValueError(f"Eisenstein series needs even k >= 4, got {k}")
    c = -2 * k / bernoulli(k)
    return _unshifted([1] + [c * sigma(n, k - 1) for n in range(1, bound)])


def delta_q(bound: int) -> QSeries:
    if bound < 2:
        raise ValueError("delta_q needs bound >= 2")
    e4, e6 = eisenstein_q(4, bound), eisenstein_q(6, bound)
    d = (e4 ** 3 - e6 * e6).scale(Fraction(1, 1728))
    if any(isinstance(c, Fraction) for c in d.coeffs):
        raise ArithmeticError("Delta has a non-integral coefficient")
    return d


@dataclass(frozen=True)
class JacobiSlice:
    """Truncated Jacobi form: ``coeffs[(n, r)]`` is the coefficient of q^n xi^r.

    Coefficients with ``n >= q_bound`` are unknown; absent keys below the bound
    are exact zeros.  ``modulus`` is set when values are residues mod p.
    """

    weight: int
    index: int
    coeffs: Mapping[tuple[int, int], Scalar]
    q_bound: int
    weak: bool = False
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is None:
            clean = {k: normalize(v) for k, v in self.coeffs.items() if v != 0}
        else:
            clean = {k: v % self.modulus for k, v in self.coeffs.items() if v % self.modulus}
        object.__setattr__(
            self, "coeffs", {k: clean[k] for k in sorted(clean) if k[0] < self.q_bound}
        )

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        n, _ = key
        if n >= self.q_bound:
            raise IndexError(f"q-exponent {n} beyond bound {self.q_bound}")
        return self.coeffs.get(key, 0)

    def row(self, n: int) -> dict[int, Scalar]:
        if n >= self.q_bound:
            raise IndexError(f"q-exponent {n} beyond bound {self.q_bound}")
        return {r: v for (nn, r), v in self.coeffs.items() if nn == n}

    def is_zero(self) -> bool:
        return not self.coeffs

    def _wrap(self, coeffs, weight, index, q_bound, weak):
        return JacobiSlice(weight, index, coeffs, q_bound, weak, self.modulus)

    def __add__(self, other: "JacobiSlice") -> "JacobiSlice":
        if (self.weight, self.index) != (other.weight, other.index):
            raise ValueError("slice_add needs equal weight and index")
        if self.modulus != other.modulus:
            raise ValueError("ring mismatch")
        b = min(self.q_bound, other.q_bound)
        out: dict = defaultdict(int)
        for src in (self.coeffs, other.coeffs):
            for key, v in src.items():
                if key[0] < b:
                    out[key] += v
        return self._wrap(out, self.weight, self.index, b, self.weak or other.weak)

    def scale(self, c: Scalar) -> "JacobiSlice":
        return self._wrap(
            {k: c * v for k, v in self.coeffs.items()},
            self.weight, self.index, self.q_bound, self.weak,
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            other = JacobiSlice.from_qseries(other, weight=0)
        if not isinstance(other, JacobiSlice):
            return self.scale(other)
        if self.modulus != other.modulus:
            raise ValueError("ring mismatch")
        b = min(self.q_bound, other.q_bound)
        out = _convolve(self.coeffs, other.coeffs, b)
        return self._wrap(
            out, self.weight + other.weight, self.index + other.index, b,
            self.weak or other.weak,
        )

    @classmethod
    def from_qseries(cls, f: QSeries, weight: int) -> "JacobiSlice":
        if f.shift != 0:
            raise ValueError("only integral q-exponents can be lifted to a slice")
        return cls(weight, 0, {(n, 0): c for n, c in enumerate(f.coeffs)}, f.bound)

    def check_envelope(self) -> list[tuple[int, int]]:
        """Indices violating the holomorphic (or weak) support condition."""
        m = self.index
        bad = []
        for (n, r) in self.coeffs:
            if self.weak:
                if r * r - 4 * n * m > m * m + m:
                    bad.append((n, r))
            elif 4 * n * m - r * r < 0:
                bad.append((n, r))
        return bad


def _convolve(a: Mapping, b: Mapping, bound: int) -> dict:
    out: dict = defaultdict(int)
    rows_b: dict = defaultdict(list)
    for (n, r), v in b.items():
        rows_b[n].append((r, v))
    for (n1, r1), v1 in a.items():
        for n2 in range(bound - n1):
            for r2, v2 in rows_b.get(n2, ()):
                out[(n1 + n2, r1 + r2)] += v1 * v2
    return out


def _mul_series(slice_coeffs: Mapping, f: QSeries, bound: int) -> dict:
    return _convolve(slice_coeffs, {(n, 0): c for n, c in enumerate(f.coeffs) if c}, bound)


def _theta_terms(bound: int) -> range:
    return range(-(math.isqrt(2 * bound) + 3), math.isqrt(2 * bound) + 4)


def _triangular_theta(bound: int, signed: bool) -> dict:
    # sum_n (+-1)^n q^{n(n+1)/2} xi^n
    out = {}
    for n in _theta_terms(bound):
        e = n * (n + 1) // 2
        if e < bound:
            out[(e, n)] = (-1) ** (n % 2) if signed else 1
    return out


def _square_theta(bound: int, signed: bool) -> dict:
    # sum_n (+-1)^n s^{n^2} xi^n, in s = q^{1/2}
    out = {}
    for n in _theta_terms(bound):
        if n * n < bound:
            out[(n * n, n)] = (-1) ** (n % 2) if signed else 1
    return out


def _at_zero(coeffs: Mapping, bound: int) -> QSeries:
    c = [0] * bound
    for (n, _), v in coeffs.items():
        c[n] += v
    return _unshifted(c)


def _shift_xi(coeffs: Mapping, k: int) -> dict:
    return {(n, r + k): v for (n, r), v in coeffs.items()}


def weak_jacobi_m2(bound: int) -> JacobiSlice:
    """The weak Jacobi form of weight -2, index 1: theta_11(tau,z)^2 / eta^6.

    With ``theta_11 = sum (-1)^n q^{(n+1/2)^2/2} xi^{n+1/2}`` the q^{1/4}
    factors cancel and the q^0 row is ``xi - 2 + 1/xi``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    t = _triangular_theta(bound, signed=True)
    num = _shift_xi(_convolve(t, t, bound), 1)
    inv_eta6 = (euler_product(bound) ** 6).reciprocal()
    return JacobiSlice(-2, 1, _mul_series(num, inv_eta6, bound), bound, weak=True)


def weak_jacobi_0(bound: int) -> JacobiSlice:
    """The weak Jacobi form of weight 0, index 1, from even theta quotients.

    ``4 * sum_{i=2,3,4} theta_i(tau,z)^2 / theta_i(tau,0)^2``; q^0 row is
    ``xi + 10 + 1/xi``.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    # theta_2 part, integral q-exponents after removing q^{1/4} xi.
    t2 = _triangular_theta(bound, signed=False)
    t2sq = _convolve(t2, t2, bound)
    # theta_2(tau,0)^2 = 4 q^{1/4} (1 + q + q^3 + ...)^2
    half = [0] * bound
    for (n, _), v in t2.items():
        if n < bound:
            half[n] += v
    half_series = _unshifted([Fraction(c, 2) for c in half])
    part2 = _mul_series(_shift_xi(t2sq, 1), (half_series * half_series).reciprocal(), bound)
    part2 = {k: Fraction(v) / 4 for k, v in part2.items()}

    # theta_3 and theta_4 parts, in s = q^{1/2}.
    sb = 2 * bound
    total: dict = defaultdict(int)
    for signed in (False, True):
        t = _square_theta(sb, signed)
        tsq = _convolve(t, t, sb)
        q = _mul_series(tsq, (_at_zero(t, sb) ** 2).reciprocal(), sb)
        for key, v in q.items():
            total[key] += v
    for (s_exp, r), v in total.items():
        if v == 0:
            continue
        if s_exp % 2:
            raise ArithmeticError("half-integral q-power survived in phi_{0,1}")
        part2[(s_exp // 2, r)] = part2.get((s_exp // 2, r), 0) + v

    return JacobiSlice(0, 1, {k: 4 * v for k, v in part2.items()}, bound, weak=True)


def jacobi_eisenstein(k: int, bound: int) -> JacobiSlice:
    """Jacobi Eisenstein series E_{k,1} for k in {4, 6}.

    Pinned as ``a*E_k*phi_{0,1} + b*E_{k+2}*phi_{-2,1}`` with c(0,0) = 1 and
    c(0,1) = 0.
    """
    if k not in (4, 6):
        raise ValueError(f"jacobi_eisenstein supports k in (4, 6), got {k}")
    phi0, phim2 = weak_jacobi_0(bound), weak_jacobi_m2(bound)
    ek = eisenstein_q(k, bound)
    ek2 = eisenstein_q(6, bound) if k == 4 else eisenstein_q(4, bound) ** 2
    # rows: [c(0,0), c(0,1)] of each basis element; rhs (1, 0)
    a11, a12 = phi0[(0, 0)] * ek[0], phim2[(0, 0)] * ek2[0]
    a21, a22 = phi0[(0, 1)] * ek[0], phim2[(0, 1)] * ek2[0]
    det = Fraction(a11 * a22 - a12 * a21)
    if det == 0:
        raise ArithmeticError("singular system pinning E_{k,1}")
    alpha, beta = a22 / det, -a21 / det
    e = (phi0 * JacobiSlice.from_qseries(ek, k)).scale(alpha) + (
        phim2 * JacobiSlice.from_qseries(ek2, k + 2)
    ).scale(beta)
    e = JacobiSlice(k, 1, e.coeffs, bound, weak=False)
    bad = e.check_envelope()
    if bad:
        raise ArithmeticError(f"E_{k},1 is not holomorphic at {bad[:3]}")
    return e

