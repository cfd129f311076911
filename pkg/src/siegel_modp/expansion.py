"""Truncated Fourier expansions of genus-2 Siegel modular forms.

A coefficient ``A(n, r, m)`` multiplies ``q^n xi^r q'^m``; it equals the
coefficient ``a(T)`` of the even matrix ``T = [[2n, r], [r, 2m]]``.  An
expansion at box ``B`` knows every coefficient with ``n <= B`` and ``m <= B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .genus1 import JacobiSlice, QSeries
from .scalars import INF, NotPIntegralError, Scalar, as_prime, normalize, reduce_scalar, v_p

Index = tuple[int, int, int]


def det_t(n: int, r: int, m: int) -> int:
    """Determinant of the even matrix [[2n, r], [r, 2m]]."""
    return 4 * n * m - r * r


def box_indices(box: int) -> Iterator[Index]:
    """All (n, r, m) with n, m <= box and 4nm - r^2 >= 0, in (m, n, r) order."""
    for m in range(box + 1):
        for n in range(box + 1):
            rmax = math.isqrt(4 * n * m)
            for r in range(-rmax, rmax + 1):
                yield (n, r, m)


def _sort_key(idx: Index) -> tuple[int, int, int]:
    n, r, m = idx
    return (m, n, r)


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class BoxLimited:
    """Result of ``ord_p`` when every slice in the box vanishes mod p."""

    lower: int

    def __str__(self):
        return f">= {self.lower}: box-limited"


@dataclass(frozen=True)
class WittPair:
    """Restriction to z = 0: ``table[(n, m)]`` is the coefficient of q^n q'^m."""

    table: Mapping[tuple[int, int], Scalar]
    box: int

    def __getitem__(self, key):
        return self.table.get(key, 0)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.table.values())

    @classmethod
    def outer(cls, f: QSeries, g: QSeries, box: int) -> "WittPair":
        return cls(
            {(n, m): f[n] * g[m] for n in range(box + 1) for m in range(box + 1)
             if f[n] * g[m] != 0},
            box,
        )

    def __mul__(self, other: "WittPair") -> "WittPair":
        b = min(self.box, other.box)
        out: dict = {}
        for (n1, m1), v1 in self.table.items():
            for (n2, m2), v2 in other.table.items():
                n, m = n1 + n2, m1 + m2
                if n <= b and m <= b:
                    out[(n, m)] = out.get((n, m), 0) + v1 * v2
        return WittPair({k: v for k, v in out.items() if v != 0}, b)

    def proportionality(self, other: "WittPair"):
        """Scalar c with self == c * other on the common box, or None."""
        b = min(self.box, other.box)
        keys = {(n, m) for n in range(b + 1) for m in range(b + 1)}
        c = None
        for key in sorted(keys):
            a, o = self[key], other[key]
            if o == 0:
                if a != 0:
                    return None
                continue
            ratio = Fraction(a) / Fraction(o)
            if c is None:
                c = ratio
            elif ratio != c:
                return None
        return normalize(c) if c is not None else 0


@dataclass(frozen=True)
class OrbitReport:
    checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True, eq=False)
class SiegelExpansion:
    """Sparse exact (or mod p) coefficients of a genus-2 form on a box.

    ``modulus`` is None for exact rational coefficients and p for residues.
    Absent keys inside the box are zeros.
    """

    weight: int
    box: int
    coeffs: Mapping[Index, Scalar]
    modulus: int | None = None
    level: str = "1"
    note: str = ""

    def __post_init__(self):
        if self.box < 0:
            raise ValueError("box must be >= 0")
        p = self.modulus
        clean = {}
        for idx, v in self.coeffs.items():
            n, r, m = idx
            if n > self.box or m > self.box:
                continue
            if p is None:
                v = normalize(v)
            else:
                v = int(v) % p
            if v == 0:
                continue
            if n < 0 or m < 0 or det_t(n, r, m) < 0:
                raise ValueError(f"coefficient outside the holomorphic support at {idx}")
            clean[(int(n), int(r), int(m))] = v
        object.__setattr__(self, "coeffs", {k: clean[k] for k in sorted(clean, key=_sort_key)})

    # -- basic access -------------------------------------------------------

    def __getitem__(self, idx: Index) -> Scalar:
        n, r, m = idx
        if n > self.box or m > self.box:
            raise IndexError(f"{idx} lies outside box {self.box}")
        return self.coeffs.get(idx, 0)

    def __eq__(self, other):
        if not isinstance(other, SiegelExpansion):
            return NotImplemented
        return (
            self.box == other.box
            and self.modulus == other.modulus
            and self.weight == other.weight
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        ring = "QQ" if self.modulus is None else f"GF({self.modulus})"
        return (
            f"SiegelExpansion(weight={self.weight}, box={self.box}, ring={ring}, "
            f"level={self.level!r}, terms={len(self.coeffs)})"
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def replace(self, **changes) -> "SiegelExpansion":
        kw = dict(
            weight=self.weight, box=self.box, coeffs=self.coeffs,
            modulus=self.modulus, level=self.level, note=self.note,
        )
        kw.update(changes)
        return SiegelExpansion(**kw)

    def restrict(self, box: int) -> "SiegelExpansion":
        if box > self.box:
            raise ValueError(f"cannot extend box {self.box} to {box}")
        return self.replace(box=box)

    # -- ring operations ----------------------------------------------------

    def _check_ring(self, other: "SiegelExpansion"):
        if self.modulus != other.modulus:
            raise RingMismatchError(
                f"ring mismatch: modulus {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "SiegelExpansion") -> "SiegelExpansion":
        self._check_ring(other)
        if self.weight != other.weight:
            raise ValueError(f"cannot add weights {self.weight} and {other.weight}")
        box = min(self.box, other.box)
        out = dict(self.coeffs)
        for idx, v in other.coeffs.items():
            out[idx] = out.get(idx, 0) + v
        return self.replace(box=box, coeffs=out, note="")

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: Scalar) -> "SiegelExpansion":
        if self.modulus is not None:
            c = reduce_scalar(c, self.modulus)
        return self.replace(coeffs={k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, SiegelExpansion):
            return self.scale(other)
        return mul(self, other)

    def __pow__(self, e: int) -> "SiegelExpansion":
        if e < 0:
            raise ValueError("negative powers are not defined")
        result = one(self.box, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- operators ----------------------------------------------------------

    def reduce(self, p) -> "SiegelExpansion":
        p = as_prime(p)
        if self.modulus is not None:
            if self.modulus != p:
                raise RingMismatchError(f"already reduced mod {self.modulus}")
            return self
        out = {idx: reduce_scalar(v, p, where=idx) for idx, v in self.coeffs.items()}
        return self.replace(coeffs=out, modulus=p)

    def witt(self) -> WittPair:
        table: dict = {}
        for (n, _, m), v in self.coeffs.items():
            table[(n, m)] = table.get((n, m), 0) + v
        if self.modulus is not None:
            table = {k: v % self.modulus for k, v in table.items()}
        return WittPair({k: v for k, v in table.items() if v != 0}, self.box)

    def fj_slice(self, m: int) -> JacobiSlice:
        """The m-th Fourier-Jacobi coefficient as a Jacobi slice of index m."""
        if m > self.box or m < 0:
            raise ValueError(f"slice {m} not complete at box {self.box}")
        coeffs = {(n, r): v for (n, r, mm), v in self.coeffs.items() if mm == m}
        return JacobiSlice(self.weight, m, coeffs, self.box + 1, modulus=self.modulus)

    def d_op(self, times: int = 1) -> "SiegelExpansion":
        """Multiply every coefficient by det(T)**times.

        The result carries the formal weight k + 2*times; it is not a modular
        form in general.
        """
        out = {(n, r, m): det_t(n, r, m) ** times * v for (n, r, m), v in self.coeffs.items()}
        note = f"D^{times} applied; formal weight {self.weight} + 2*{times}"
        return self.replace(coeffs=out, weight=self.weight + 2 * times, note=note)

    def u_p(self, p) -> "SiegelExpansion":
        """Keep the coefficients with p | det(T) (det T = 0 included)."""
        p = as_prime(p)
        out = {idx: v for idx, v in self.coeffs.items() if det_t(*idx) % p == 0}
        return self.replace(coeffs=out, note=f"U({p}) applied")

    def v_p_form(self, p):
        if self.modulus is not None:
            raise RingMismatchError("v_p is defined on exact expansions")
        return min((v_p(v, p) for v in self.coeffs.values()), default=INF)

    def ord_p(self, p):
        """Least m whose Fourier-Jacobi slice is nonzero mod p.

        Returns :class:`BoxLimited` when all slices up to the box vanish.
        """
        p = as_prime(p)
        if self.modulus is None:
            v = self.v_p_form(p)
            if v < 0:
                raise NotPIntegralError(0, p, p, "ord_p needs a p-integral form")
            F = self.reduce(p)
        elif self.modulus == p:
            F = self
        else:
            raise RingMismatchError(f"expansion is mod {self.modulus}, not {p}")
        ms = [m for (_, _, m) in F.coeffs]
        if not ms:
            return BoxLimited(self.box + 1)
        return min(ms)

    def gl2_orbit_check(self) -> OrbitReport:
        """Check A(n,r,m) = A(m,r,n) = A(n,-r,m) = A(n, r+2n, n+r+m) inside the box."""
        B = self.box
        bad = []
        checked = 0
        for idx in box_indices(B):
            n, r, m = idx
            a = self[idx]
            for img in ((m, r, n), (n, -r, m), (n, r + 2 * n, n + r + m), (n, r - 2 * n, n - r + m)):
                if img[0] > B or img[2] > B:
                    continue
                checked += 1
                b = self[img]
                if a != b:
                    bad.append((idx, img, a, b))
        return OrbitReport(checked, bad)

    def maass_relation_violations(self, slice1: JacobiSlice | None = None) -> list:
        """Indices with m >= 1 where A(n,r,m) differs from the divisor sum
        sum_{d | gcd(n,r,m)} d^(k-1) A(nm/d^2, r/d, 1).

        ``slice1`` supplies A(., ., 1) beyond the box; it defaults to the
        form's own first Fourier-Jacobi slice.
        """
        if slice1 is None:
            slice1 = self.fj_slice(1)
        k = self.weight
        bad = []
        for (n, r, m) in box_indices(self.box):
            if m == 0:
                continue
            g = math.gcd(math.gcd(n, abs(r)), m)
            total = 0
            for d in range(1, g + 1):
                if g % d == 0:
                    total += d ** (k - 1) * _index1_value(slice1, n * m // (d * d), r // d)
            if self.modulus is not None:
                total %= self.modulus
            if total != self[(n, r, m)]:
                bad.append((n, r, m))
        return bad

    def to_dense(self, rmax: int | None = None) -> np.ndarray:
        B = self.box
        R = 2 * B if rmax is None else rmax
        # residue products must fit in int64
        small = self.modulus is not None and self.modulus < 1 << 31
        dtype = np.int64 if small else object
        a = np.zeros((B + 1, 2 * R + 1, B + 1), dtype=dtype)
        for (n, r, m), v in self.coeffs.items():
            a[n, r + R, m] = v
        return a


def _index1_value(phi: JacobiSlice, n: int, r: int) -> Scalar:
    # Index-1 coefficients depend only on 4n - r^2 (r mod 2 is then forced).
    D = 4 * n - r * r
    r0 = r % 2
    return phi[((D + r0) // 4, r0)]


def from_dense(a: np.ndarray, weight: int, modulus, **kw) -> SiegelExpansion:
    B = a.shape[0] - 1
    R = (a.shape[1] - 1) // 2
    coeffs = {}
    for (n, j, m) in zip(*np.nonzero(a)):
        v = a[n, j, m]
        coeffs[(int(n), int(j) - R, int(m))] = v if modulus is None else int(v)
    return SiegelExpansion(weight, B, coeffs, modulus, **kw)


def zero(weight: int, box: int, modulus=None, **kw) -> SiegelExpansion:
    return SiegelExpansion(weight, box, {}, modulus, **kw)


def one(box: int, modulus=None) -> SiegelExpansion:
    return SiegelExpansion(0, box, {(0, 0, 0): 1}, modulus)


def mul(F: SiegelExpansion, G: SiegelExpansion) -> SiegelExpansion:
    """Exact product on the common box; index triples add componentwise."""
    F._check_ring(G)
    B = min(F.box, G.box)
    F, G = F.restrict(B), G.restrict(B)
    if len(F.coeffs) > len(G.coeffs):
        F, G = G, F
    R = 2 * B
    W = 2 * R + 1
    p = F.modulus
    g = G.to_dense(R)
    h = np.zeros_like(g)
    for (n, r, m), c in F.coeffs.items():
        lo, hi = max(0, r), W + min(0, r)
        src = g[: B + 1 - n, lo - r : hi - r, : B + 1 - m]
        if p is None:
            h[n:, lo:hi, m:] += c * src
        else:
            t = h[n:, lo:hi, m:]
            h[n:, lo:hi, m:] = (t + c * src) % p
    level = F.level if F.level == G.level else f"{F.level}*{G.level}"
    return from_dense(h, F.weight + G.weight, p, level=level)


def from_slices(slices: Mapping[int, JacobiSlice], weight: int, box: int, modulus=None) -> SiegelExpansion:
    coeffs = {}
    for m, phi in slices.items():
        for (n, r), v in phi.coeffs.items():
            if n <= box:
                coeffs[(n, r, m)] = v
    return SiegelExpansion(weight, box, coeffs, modulus)
