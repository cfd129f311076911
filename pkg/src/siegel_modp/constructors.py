"""Concrete genus-2 forms: Igusa generators, chi_20, G_k and the level 11/19 examples."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .expansion import SiegelExpansion, WittPair, box_indices
from .genus1 import (
    JacobiSlice,
    delta_q,
    eisenstein_q,
    jacobi_eisenstein,
    weak_jacobi_0,
    weak_jacobi_m2,
)
from .lattice import QuadraticForm4, theta_counts
from .scalars import bernoulli, reduce_scalar, sigma


class ConstructionError(AssertionError):
    """A constructed form failed one of its integrity checks."""


def _jacobi_value(phi: JacobiSlice, n: int, r: int):
    D = 4 * n - r * r
    r0 = r % 2
    n0 = (D + r0) // 4
    return phi[(n0, r0)]


def maass_lift(phi: JacobiSlice, eisenstein_mode: bool, box: int) -> SiegelExpansion:
    """Maass (Saito-Kurokawa) lift of an index-1 holomorphic Jacobi form.

    ``A(n,r,m) = sum_{d | gcd(n,r,m)} d^(k-1) c(nm/d^2, r/d)`` for m >= 1.  In
    Eisenstein mode the m = 0 slice is ``A(0,0,0) = -B_k/(2k) c(0,0)`` and
    ``A(n,0,0) = sigma_{k-1}(n) c(0,0)``; otherwise it is zero.
    """
    if phi.index != 1:
        raise ValueError(f"Maass lift needs index 1, got {phi.index}")
    if phi.weak or phi.check_envelope():
        raise ValueError("Maass lift needs a holomorphic Jacobi form")
    if box < 1:
        raise ValueError("box must be >= 1")
    if phi.q_bound < box * box + 1:
        raise ValueError(f"Jacobi form known to q^{phi.q_bound - 1}, need q^{box * box}")
    k = phi.weight
    coeffs = {}
    for (n, r, m) in box_indices(box):
        if m == 0:
            if not eisenstein_mode or r != 0:
                continue
            c00 = phi[(0, 0)]
            coeffs[(n, 0, 0)] = (-bernoulli(k) / (2 * k)) * c00 if n == 0 else sigma(n, k - 1) * c00
            continue
        g = math.gcd(math.gcd(n, abs(r)), m)
        total = 0
        for d in range(1, g + 1):
            if g % d == 0:
                total += d ** (k - 1) * _jacobi_value(phi, n * m // (d * d), r // d)
        coeffs[(n, r, m)] = total
    return SiegelExpansion(k, box, coeffs)


def _check(cond: bool, what: str):
    if not cond:
        raise ConstructionError(what)


LEADING = {
    "E4": {(0, 0, 0): 1, (1, 0, 0): 240, (0, 0, 1): 240},
    "E6": {(0, 0, 0): 1, (1, 0, 0): -504, (0, 0, 1): -504},
    "chi10": {(1, -1, 1): 1, (1, 0, 1): -2, (1, 1, 1): 1},
    "chi12": {(1, -1, 1): 1, (1, 0, 1): 10, (1, 1, 1): 1},
}

WEIGHTS = {"E4": 4, "E6": 6, "chi10": 10, "chi12": 12}


@lru_cache(maxsize=None)
def _generator(name: str, box: int) -> SiegelExpansion:
    qb = box * box + 1
    if name == "E4":
        F = maass_lift(jacobi_eisenstein(4, qb), True, box).scale(240)
    elif name == "E6":
        F = maass_lift(jacobi_eisenstein(6, qb), True, box).scale(-504)
    elif name in ("chi10", "chi12"):
        phi = weak_jacobi_m2(qb) if name == "chi10" else weak_jacobi_0(qb)
        k = WEIGHTS[name]
        cusp = JacobiSlice(k, 1, (phi * delta_q(max(qb, 2))).coeffs, qb)
        F = maass_lift(cusp, False, box)
        F = F.scale(Fraction(1) / F[(1, 1, 1)])
    else:
        raise KeyError(f"unknown generator {name!r}")
    note = {
        "E4": "constant term 1",
        "E6": "constant term 1",
        "chi10": "a([[2,1],[1,2]]) = 1",
        "chi12": "a([[2,1],[1,2]]) = 1",
    }[name]
    F = F.replace(note=note)
    _verify_generator(name, F)
    return F


def _verify_generator(name: str, F: SiegelExpansion):
    for idx, v in LEADING[name].items():
        _check(F[idx] == v, f"{name}: A{idx} = {F[idx]}, expected {v}")
    B = F.box
    W = F.witt()
    if name == "chi10":
        _check(W.is_zero(), "W(chi10) is not zero")
    if name in ("chi10", "chi12"):
        _check(all(m > 0 and n > 0 for (n, _, m) in F.coeffs), f"{name} is not cuspidal")
    if name in ("E4", "E6"):
        e = eisenstein_q(WEIGHTS[name], B + 1)
        _check(W.table == WittPair.outer(e, e, B).table, f"W({name}) != {name} x {name}")
    orbit = F.gl2_orbit_check()
    _check(orbit.ok, f"{name} fails GL2(Z) invariance: {orbit.violations[:3]}")


def igusa_generator(name: str, box: int) -> SiegelExpansion:
    """E4, E6 (constant term 1) or chi10, chi12 (A(1,1,1) = 1) on the given box."""
    if box < 1:
        raise ValueError("box must be >= 1")
    if name not in WEIGHTS:
        raise KeyError(f"unknown generator {name!r}")
    return _generator(name, box)


def witt_chi12_scalar(box: int):
    """Scalar c with W(chi12) = c * Delta x Delta on the box (None if not proportional)."""
    W = igusa_generator("chi12", box).witt()
    d = delta_q(box + 1)
    return W.proportionality(WittPair.outer(d, d, box))


@lru_cache(maxsize=None)
def monomial(exps: tuple[int, int, int, int], box: int, modulus: int | None = None) -> SiegelExpansion:
    """E4^a E6^b chi10^c chi12^d, optionally reduced mod p."""
    a, b, c, d = exps
    if sum(exps) == 0:
        F = SiegelExpansion(0, box, {(0, 0, 0): 1})
        return F if modulus is None else F.reduce(modulus)
    # peel one generator off and reuse the cached smaller monomial
    for pos, name in enumerate(("E4", "E6", "chi10", "chi12")):
        if exps[pos]:
            rest = list(exps)
            rest[pos] -= 1
            g = igusa_generator(name, box)
            if modulus is not None:
                g = g.reduce(modulus)
            if sum(rest) == 0:
                return g
            return monomial(tuple(rest), box, modulus) * g
    raise AssertionError("unreachable")


def chi20(box: int) -> SiegelExpansion:
    """11 E4 E6 chi10 + 4 chi10^2 + 8 E4^2 chi12."""
    if box < 2:
        raise ValueError("chi20 needs box >= 2")
    F = (
        monomial((1, 1, 1, 0), box).scale(11)
        + monomial((0, 0, 2, 0), box).scale(4)
        + monomial((2, 0, 0, 1), box).scale(8)
    )
    return F.replace(note="11 E4 E6 chi10 + 4 chi10^2 + 8 E4^2 chi12")


def sharpness_exponents(k: int) -> tuple[int, int, int, int]:
    """Monomial exponents (a, b, c, d) of G_k with t = floor(k/10).

    k = 2 (mod 10): chi10^(t-1) chi12.  Otherwise E4^i E6^j chi10^t where
    4i + 6j = k - 10t, j in {0, 1}.
    """
    if k <= 0 or k % 2:
        raise ValueError(f"G_k needs an even positive weight, got {k}")
    t = k // 10
    if k % 10 == 2:
        if k < 12:
            raise ValueError("G_k with k = 2 (mod 10) needs k >= 12")
        return (0, 0, t - 1, 1)
    rest = k - 10 * t
    for j in (0, 1):
        if rest - 6 * j >= 0 and (rest - 6 * j) % 4 == 0:
            return ((rest - 6 * j) // 4, j, t, 0)
    raise ValueError(f"no exponents solve 4i + 6j + 10*{t} = {k}")


def sharpness_example(k: int, box: int) -> SiegelExpansion:
    exps = sharpness_exponents(k)
    return monomial(exps, box).replace(note=f"G_{k} = E4^{exps[0]} E6^{exps[1]} chi10^{exps[2]} chi12^{exps[3]}")


def _h(x):
    return Fraction(x, 2)


S11 = {
    "S1": QuadraticForm4(
        ((1, _h(1), 0, 0), (_h(1), 3, 0, 0), (0, 0, 1, _h(1)), (0, 0, _h(1), 3)), "S1^11"
    ),
    "S2": QuadraticForm4(
        ((2, 0, 1, _h(1)), (0, 2, _h(1), -1), (1, _h(1), 2, 0), (_h(1), -1, 0, 2)), "S2^11"
    ),
    "S3": QuadraticForm4(
        ((1, 0, _h(1), 0), (0, 4, 2, _h(3)), (_h(1), 2, 4, _h(7)), (0, _h(3), _h(7), 4)), "S3^11"
    ),
}

S19 = {
    "S1": QuadraticForm4(
        ((1, 0, _h(1), 0), (0, 1, 0, _h(1)), (_h(1), 0, 5, 0), (0, _h(1), 0, 5)), "S1^19"
    ),
    "S2": QuadraticForm4(
        ((1, _h(1), _h(1), _h(1)), (_h(1), 2, 0, 1), (_h(1), 0, 3, _h(3)), (_h(1), 1, _h(3), 6)),
        "S2^19",
    ),
    "S3": QuadraticForm4(
        ((2, 0, 1, _h(1)), (0, 2, _h(1), 1), (1, _h(1), 3, _h(1)), (_h(1), 1, _h(1), 3)), "S3^19"
    ),
}

QUADRATIC_FORMS = {
    **{f"{k}^11": v for k, v in S11.items()},
    **{f"{k}^19": v for k, v in S19.items()},
}


@lru_cache(maxsize=None)
def theta_series(S: QuadraticForm4, box: int) -> SiegelExpansion:
    """Degree-2 theta series of S: A(n,r,m) counts pairs of lattice vectors."""
    counts = theta_counts(S, box)
    return SiegelExpansion(2, box, counts, level="theta", note=f"theta_{S.name}")


def _combination(forms, weights, scale, box, level, p, note) -> SiegelExpansion:
    F = None
    for S, w in zip(forms, weights):
        term = theta_series(S, box).scale(w)
        F = term if F is None else F + term
    F = F.scale(scale).replace(level=level, note=note)
    for idx, v in F.coeffs.items():
        reduce_scalar(v, p, where=idx)  # raises if not p-integral
    return F


def yoshida_level11(box: int) -> SiegelExpansion:
    """(3 theta_S1 - theta_S2 - 2 theta_S3) / 24 for the level-11 forms."""
    return _combination(
        (S11["S1"], S11["S2"], S11["S3"]), (3, -1, -2), Fraction(1, 24), box,
        "Gamma0(11) genus 2", 11, "F2^(11) = (3 th1 - th2 - 2 th3)/24",
    )


def yoshida_level19(box: int) -> SiegelExpansion:
    """(theta_S1 - 2 theta_S2 + theta_S3) / 8 for the level-19 forms."""
    return _combination(
        (S19["S1"], S19["S2"], S19["S3"]), (1, -2, 1), Fraction(1, 8), box,
        "Gamma0(19) genus 2", 19, "F2^(19) = (th1 - 2 th2 + th3)/8",
    )


CATALOG = ("E4", "E6", "chi10", "chi12", "chi20", "F2_11", "F2_19")


def build(name: str, box: int) -> SiegelExpansion:
    """Construct a named form: catalog entries, ``G<k>`` or ``theta:S1^11`` style names."""
    if name in WEIGHTS:
        return igusa_generator(name, box)
    if name == "chi20":
        return chi20(box)
    if name == "F2_11":
        return yoshida_level11(box)
    if name == "F2_19":
        return yoshida_level19(box)
    if name.startswith("G") and name[1:].isdigit():
        return sharpness_example(int(name[1:]), box)
    if name.startswith("theta:") and name[6:] in QUADRATIC_FORMS:
        return theta_series(QUADRATIC_FORMS[name[6:]], box)
    raise KeyError(f"unknown form {name!r}")


def is_known(name: str) -> bool:
    if name in WEIGHTS or name in CATALOG:
        return True
    if name.startswith("theta:"):
        return name[6:] in QUADRATIC_FORMS
    if name.startswith("G") and name[1:].isdigit():
        try:
            sharpness_exponents(int(name[1:]))
        except ValueError:
            return False
        return True
    return False
