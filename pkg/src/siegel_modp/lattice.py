"""Positive-definite quaternary forms and exact short-vector enumeration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


def _frac_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def ldl(gram) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact LDL^t decomposition: gram = L diag(D) L^t with L unit lower triangular."""
    n = len(gram)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = gram[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise ValueError("matrix is not positive definite")
        for i in range(j + 1, n):
            L[i][j] = (gram[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def leading_minors(gram) -> list[Fraction]:
    """Exact leading principal minors, by fraction-valued Gaussian elimination."""
    n = len(gram)
    a = [list(row) for row in gram]
    minors = []
    det = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            # a zero pivot means the k-th minor vanishes
            minors.append(Fraction(0))
            minors.extend([None] * (n - k - 1))
            return minors
        det *= a[k][k]
        minors.append(det)
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return minors


@dataclass(frozen=True)
class QuadraticForm4:
    """Gram matrix S of the integer-valued form x -> x^t S x on Z^4."""

    gram: tuple
    name: str = ""

    def __post_init__(self):
        g = _frac_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != 4 or any(len(row) != 4 for row in g):
            raise ValueError("gram matrix must be 4x4")
        for i in range(4):
            for j in range(4):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix is not symmetric")
        for i in range(4):
            if g[i][i].denominator != 1:
                raise ValueError("diagonal entries must be integers")
            for j in range(4):
                if (2 * g[i][j]).denominator != 1:
                    raise ValueError("off-diagonal entries must lie in (1/2)Z")
        minors = leading_minors(g)
        if any(m is None or m <= 0 for m in minors):
            raise ValueError(f"{self.name or 'form'} is not positive definite")

    @property
    def doubled(self) -> np.ndarray:
        """The even integral matrix 2S."""
        return np.array([[int(2 * x) for x in row] for row in self.gram], dtype=np.int64)

    def value(self, x: Sequence[int]) -> int:
        v = sum(self.gram[i][j] * x[i] * x[j] for i in range(4) for j in range(4))
        assert v.denominator == 1
        return int(v)

    def det(self) -> Fraction:
        return leading_minors(self.gram)[-1]


def short_vectors(gram, bound: int) -> list[tuple[int, ...]]:
    """All integral x with x^t S x <= bound (Fincke-Pohst, exact arithmetic)."""
    g = _frac_matrix(gram)
    n = len(g)
    L, D = ldl(g)
    # Q(x) = sum_i D_i (x_i + sum_{j>i} L_ji x_j)^2
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, budget: Fraction):
        c = sum((L[j][i] * x[j] for j in range(i + 1, n)), Fraction(0))
        t = budget / D[i]
        s = math.isqrt(math.floor(t)) + 1
        lo = math.floor(-c) - s
        hi = math.ceil(-c) + s
        for xi in range(lo, hi + 1):
            d = D[i] * (xi + c) ** 2
            if d > budget:
                continue
            x[i] = xi
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, budget - d)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    return sorted(out)


def naive_vectors(gram, bound: int, radius: int) -> Iterator[tuple[int, ...]]:
    """Hypercube scan |x_i| <= radius; only a test oracle."""
    g = _frac_matrix(gram)
    n = len(g)
    rng = range(-radius, radius + 1)
    for x in itertools.product(rng, repeat=n):
        v = sum(g[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if v <= bound:
            yield x


def theta_counts(form: QuadraticForm4, box: int) -> dict[tuple[int, int, int], int]:
    """#{(x1, x2): x1^t S x1 = n, 2 x1^t S x2 = r, x2^t S x2 = m} for n, m <= box."""
    vecs = np.array(short_vectors(form.gram, box), dtype=np.int64)
    S2 = form.doubled
    G = vecs @ S2 @ vecs.T  # G[i, j] = 2 x_i^t S x_j
    norms = np.diag(G) // 2
    N = len(vecs)
    n_idx = np.broadcast_to(norms[:, None], (N, N)).ravel()
    m_idx = np.broadcast_to(norms[None, :], (N, N)).ravel()
    r_idx = G.ravel()
    keys = np.stack([n_idx, r_idx, m_idx], axis=1)
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    return {(int(a), int(b), int(c)): int(k) for (a, b, c), k in zip(uniq, counts)}
