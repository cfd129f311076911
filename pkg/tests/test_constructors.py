import math
from fractions import Fraction

import pytest

from siegel_modp.constructors import (
    QUADRATIC_FORMS,
    S11,
    build,
    chi20,
    igusa_generator,
    is_known,
    maass_lift,
    sharpness_example,
    sharpness_exponents,
    theta_series,
    witt_chi12_scalar,
    yoshida_level11,
    yoshida_level19,
)
from siegel_modp.expansion import box_indices
from siegel_modp.genus1 import JacobiSlice, delta_q, weak_jacobi_0, weak_jacobi_m2
from siegel_modp.lattice import QuadraticForm4, leading_minors, naive_vectors, short_vectors


def test_maass_lift_index1_slice_is_input():
    phi = JacobiSlice(10, 1, (weak_jacobi_m2(10) * delta_q(10)).coeffs, 10)
    F = maass_lift(phi, False, 3)
    for n in range(4):
        for r in range(-6, 7):
            if 4 * n - r * r >= 0:
                assert F[(n, r, 1)] == phi[(n, r)]
    assert F[(1, 1, 1)] == 1 and F[(1, 0, 1)] == -2
    # divisor sum d in {1, 2}
    assert F[(2, 2, 2)] == 2**9 * phi[(1, 1)] + phi[(4, 2)]


def test_maass_lift_preconditions():
    with pytest.raises(ValueError):
        maass_lift(weak_jacobi_0(10), False, 3)
    phi = JacobiSlice(10, 1, (weak_jacobi_m2(3) * delta_q(3)).coeffs, 3)
    with pytest.raises(ValueError):
        maass_lift(phi, False, 3)
    with pytest.raises(ValueError):
        maass_lift(JacobiSlice(10, 2, {}, 20), False, 3)


def test_generator_examples():
    E4, chi12, chi10 = (igusa_generator(n, 4) for n in ("E4", "chi12", "chi10"))
    assert (E4[(0, 0, 0)], E4[(1, 0, 0)], E4[(0, 0, 1)]) == (1, 240, 240)
    assert (chi12[(1, 1, 1)], chi12[(1, 0, 1)]) == (1, 10)
    assert all(m > 0 for (_, _, m) in chi10.coeffs)
    assert chi10[(2, 2, 2)] == 240 and chi10[(2, 0, 2)] == 32
    with pytest.raises(KeyError):
        igusa_generator("chi35", 2)


def test_witt_chi12_scalar_recorded():
    assert witt_chi12_scalar(4) == 12


def test_chi20():
    F = chi20(3)
    assert F.weight == 20
    assert F[(1, 1, 1)] == 19
    with pytest.raises(ValueError):
        chi20(1)


@pytest.mark.parametrize(
    "k, exps",
    [(14, (1, 0, 1, 0)), (16, (0, 1, 1, 0)), (20, (0, 0, 2, 0)), (22, (0, 0, 1, 1)), (24, (1, 0, 2, 0))],
)
def test_sharpness_exponents(k, exps):
    a, b, c, d = sharpness_exponents(k)
    assert (a, b, c, d) == exps
    assert 4 * a + 6 * b + 10 * c + 12 * d == k
    assert b in (0, 1)


def test_sharpness_rejects():
    for k in (3, 2, 0):
        with pytest.raises(ValueError):
            sharpness_exponents(k)


def test_sharpness_leading_rows():
    G20 = sharpness_example(20, 3)
    assert all(n >= 2 for (n, _, _) in G20.coeffs)
    assert G20[(2, 2, 2)] == 1
    # (xi^-1 - 2 + xi)^2 = xi^-2 - 4 xi^-1 + 6 - 4 xi + xi^2
    assert [G20[(2, r, 2)] for r in range(-2, 3)] == [1, -4, 6, -4, 1]
    G22 = sharpness_example(22, 3)
    # (xi^-1 + 10 + xi)(xi^-1 - 2 + xi)
    assert [G22[(2, r, 2)] for r in range(-2, 3)] == [1, 8, -18, 8, 1]
    assert all(isinstance(v, int) for v in G22.coeffs.values())


def test_quadratic_form_validation():
    for S in QUADRATIC_FORMS.values():
        assert all(x > 0 for x in leading_minors(S.gram))
        for i in range(4):
            e = [0] * 4
            e[i] = 1
            assert S.value(e) == S.gram[i][i]
    with pytest.raises(ValueError):
        QuadraticForm4(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1)), "bad")
    with pytest.raises(ValueError):
        QuadraticForm4(((1, Fraction(1, 3), 0, 0), (Fraction(1, 3), 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), "bad")
    with pytest.raises(ValueError):
        QuadraticForm4(((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), "bad")


def _sufficient_radius(S, bound):
    # |x_i| <= sqrt(bound * (S^-1)_ii) for x^t S x <= bound
    import numpy as np

    inv = np.linalg.inv(np.array([[float(v) for v in row] for row in S.gram]))
    return max(math.ceil(math.sqrt(bound * inv[i][i])) for i in range(4)) + 1


@pytest.mark.parametrize("key", sorted(QUADRATIC_FORMS))
def test_short_vectors_match_hypercube(key):
    S = QUADRATIC_FORMS[key]
    bound = 3
    C = _sufficient_radius(S, bound)
    fast = sorted(short_vectors(S.gram, bound))
    slow = sorted(naive_vectors(S.gram, bound, C))
    assert fast == slow


def test_theta_series_against_naive_pairs():
    S = S11["S1"]
    B = 2
    T = theta_series(S, B)
    vecs = list(naive_vectors(S.gram, B, _sufficient_radius(S, B)))
    counts = {}
    for x in vecs:
        for y in vecs:
            key = (S.value(x), 2 * sum(x[i] * S.gram[i][j] * y[j] for i in range(4) for j in range(4)), S.value(y))
            counts[key] = counts.get(key, 0) + 1
    counts = {k: v for k, v in counts.items() if k[0] <= B and k[2] <= B}
    assert T.coeffs == dict(sorted(counts.items(), key=lambda t: (t[0][2], t[0][0], t[0][1])))
    assert T[(0, 0, 0)] == 1 and T[(1, 0, 0)] == 4
    for (n, r, m), v in T.coeffs.items():
        assert v > 0 and T[(m, r, n)] == v and T[(n, -r, m)] == v


def test_yoshida_forms():
    F11, F19 = yoshida_level11(2), yoshida_level19(2)
    assert F11[(0, 0, 0)] == 0 and F19[(0, 0, 0)] == 0
    assert F11.weight == 2 and F11.level.startswith("Gamma0(11)")
    assert F19.level.startswith("Gamma0(19)")
    for v in F11.coeffs.values():
        assert Fraction(v).denominator % 11
    F11.reduce(11)
    F19.reduce(19)


def test_catalog_and_names():
    for name in ("E4", "chi20", "F2_11", "G14", "theta:S2^19"):
        assert is_known(name)
        assert build(name, 2).box == 2
    for name in ("chi35", "G3", "theta:S4^11", "G"):
        assert not is_known(name)
    with pytest.raises(KeyError):
        build("nope", 2)
