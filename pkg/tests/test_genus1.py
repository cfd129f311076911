"""Genus-1 series against independent routes (products, mpmath theta functions)."""

from fractions import Fraction

import mpmath
import pytest

from siegel_modp.genus1 import (
    JacobiSlice,
    QSeries,
    delta_q,
    eisenstein_q,
    eta_pow6,
    jacobi_eisenstein,
    weak_jacobi_0,
    weak_jacobi_m2,
)


def naive_product(factors, bound):
    """Multiply polynomials given as {exponent: coeff}, truncating at bound."""
    out = {0: 1}
    for f in factors:
        nxt = {}
        for a, x in out.items():
            for b, y in f.items():
                if a + b < bound:
                    nxt[a + b] = nxt.get(a + b, 0) + x * y
        out = nxt
    return [out.get(i, 0) for i in range(bound)]


def test_eta6_against_direct_product():
    B = 12
    f = eta_pow6(B)
    assert f.shift == Fraction(1, 4)
    assert f.coeffs[:2] == (1, -6)
    expected = naive_product([{0: 1, n: -1} for n in range(1, B) for _ in range(6)], B)
    assert list(f.coeffs) == expected


def test_eisenstein_leading_terms():
    e4, e6 = eisenstein_q(4, 4), eisenstein_q(6, 3)
    assert e4.coeffs == (1, 240, 2160, 6720)
    assert e6.coeffs[:2] == (1, -504)
    with pytest.raises(ValueError):
        eisenstein_q(5, 3)


def test_delta_against_jacobi_product():
    B = 15
    d = delta_q(B)
    expected = naive_product([{0: 1, n: -1} for n in range(1, B) for _ in range(24)], B)
    assert list(d.coeffs) == [0] + expected[: B - 1]
    assert d.coeffs[:3] == (0, 1, -24)


def test_series_reciprocal():
    d = delta_q(10)
    unit = QSeries(d.coeffs[1:])  # Delta / q
    assert list((unit * unit.reciprocal()).coeffs) == [1] + [0] * 8
    with pytest.raises(ValueError):
        QSeries((2, 1)).reciprocal()


def triple_product_phi_m2(bound):
    """(xi - 2 + 1/xi) prod (1 - q^n xi)^2 (1 - q^n/xi)^2 / (1 - q^n)^4."""
    slice_ = {(0, 1): 1, (0, 0): -2, (0, -1): 1}
    for n in range(1, bound):
        for fac in ({(0, 0): 1, (n, 1): -1}, {(0, 0): 1, (n, -1): -1}):
            for _ in range(2):
                slice_ = _mul2(slice_, fac, bound)
    inv = QSeries(naive_product([{0: 1, n: -1} for n in range(1, bound) for _ in range(4)], bound)).reciprocal()
    return _mul2(slice_, {(i, 0): c for i, c in enumerate(inv.coeffs) if c}, bound)


def _mul2(a, b, bound):
    out = {}
    for (n1, r1), x in a.items():
        for (n2, r2), y in b.items():
            if n1 + n2 < bound:
                out[(n1 + n2, r1 + r2)] = out.get((n1 + n2, r1 + r2), 0) + x * y
    return {k: v for k, v in out.items() if v}


def test_phi_m2_against_triple_product():
    B = 8
    phi = weak_jacobi_m2(B)
    assert phi[(0, 1)] == 1 and phi[(0, 0)] == -2 and phi[(0, 2)] == 0
    assert phi.row(1) == {-2: -2, -1: 8, 0: -12, 1: 8, 2: -2}
    assert phi.coeffs == triple_product_phi_m2(B)


def _evaluate(phi: JacobiSlice, tau, z):
    q = mpmath.exp(2j * mpmath.pi * tau)
    xi = mpmath.exp(2j * mpmath.pi * z)
    return sum(v * q**n * xi**r for (n, r), v in phi.coeffs.items())


def test_phi0_matches_mpmath_theta_quotients():
    mpmath.mp.dps = 40
    tau, z = mpmath.mpc(0.1, 1.1), mpmath.mpc(0.23, 0.04)
    qn = mpmath.exp(1j * mpmath.pi * tau)  # mpmath nome: q = e^{i pi tau}
    w = mpmath.pi * z
    total = 0
    for i in (2, 3, 4):
        total += (mpmath.jtheta(i, w, qn) / mpmath.jtheta(i, 0, qn)) ** 2
    expected = 4 * total
    got = _evaluate(weak_jacobi_0(25), tau, z)
    assert abs(got - expected) < mpmath.mpf(10) ** -25
    phi = weak_jacobi_0(3)
    assert phi.row(0) == {-1: 1, 0: 10, 1: 1}
    assert phi.row(1) == {-2: 10, -1: -64, 0: 108, 1: -64, 2: 10}


def test_phi_m2_matches_mpmath_theta1():
    mpmath.mp.dps = 40
    tau, z = mpmath.mpc(-0.2, 0.9), mpmath.mpc(0.11, -0.03)
    qn = mpmath.exp(1j * mpmath.pi * tau)
    eta = mpmath.exp(2j * mpmath.pi * tau / 24) * mpmath.qp(mpmath.exp(2j * mpmath.pi * tau))
    expected = -mpmath.jtheta(1, mpmath.pi * z, qn) ** 2 / eta**6
    got = _evaluate(weak_jacobi_m2(25), tau, z)
    assert abs(got - expected) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("phi", [weak_jacobi_m2(10), weak_jacobi_0(10)])
def test_weak_forms_structure(phi):
    assert phi.weak
    assert not phi.check_envelope()
    for (n, r), v in phi.coeffs.items():
        assert phi[(n, -r)] == v
        assert isinstance(v, int)
        # index-1 coefficients depend only on 4n - r^2
        D = 4 * n - r * r
        n0 = (D + r % 2) // 4
        if n0 >= 0:
            assert phi[(n0, r % 2)] == v


@pytest.mark.parametrize("k", [4, 6])
def test_jacobi_eisenstein(k):
    B = 12
    e = jacobi_eisenstein(k, B)
    assert e[(0, 0)] == 1 and e[(0, 1)] == 0 and e[(0, -1)] == 0
    assert not e.weak
    for n in range(B):
        for r in range(-2 * B, 2 * B):
            if 4 * n - r * r < 0:
                assert e[(n, r)] == 0
            assert e[(n, r)] == e[(n, -r)]
    # restriction to z = 0 is the genus-1 Eisenstein series of the same weight
    ek = eisenstein_q(k, B)
    assert [sum(e.row(n).values()) for n in range(B)] == list(ek.coeffs)


def test_jacobi_eisenstein_rows():
    e4 = jacobi_eisenstein(4, 3)
    assert e4.row(1) == {-2: 1, -1: 56, 0: 126, 1: 56, 2: 1}
    # (alpha, beta) = (1/12, -1/12) from alpha + beta = 0, 10 alpha - 2 beta = 1
    phi0, phim2 = weak_jacobi_0(3), weak_jacobi_m2(3)
    manual = (phi0 * JacobiSlice.from_qseries(eisenstein_q(4, 3), 4)).scale(Fraction(1, 12)) + (
        phim2 * JacobiSlice.from_qseries(eisenstein_q(6, 3), 6)
    ).scale(Fraction(-1, 12))
    assert manual.coeffs == e4.coeffs


def test_slice_arithmetic():
    phi = weak_jacobi_m2(4)
    prod = phi * JacobiSlice.from_qseries(delta_q(4), 12)
    assert (prod.weight, prod.index) == (10, 1)
    assert prod[(1, 1)] == 1
    assert phi.scale(0).is_zero()
    a, b, c = weak_jacobi_0(4), weak_jacobi_m2(4).scale(3), weak_jacobi_m2(4)
    b = JacobiSlice(0, 1, b.coeffs, b.q_bound, True)
    assert ((a + b) * c).coeffs == (a * c + b * c).coeffs
    with pytest.raises(ValueError):
        a + c
