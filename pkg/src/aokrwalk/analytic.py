"""Closed-form momentum distribution of the resonant Hadamard-coin walk.

For ``beta = 0`` and the walk ``Y`` then ``(G_H U)^(j-1) U`` the spinor
propagator reduces to two Laurent polynomials ``p_1, p_2`` in the kick
phase ``x = exp(i k cos(theta))``::

    p^(N) = sum_l a_l x^(N - 2l),   l = 0..N,   N = j - 1.

Their coefficients come either from the triple binomial sums
(:func:`coefficients_closed_form`) or from the three-term recursion
``p^(N) = zt p^(N-1) + 2 p^(N-2)`` with ``zt = x^-1 - x``
(:func:`coefficients_recursion`). Both are evaluated in exact integer
arithmetic; floats only appear in the final Bessel sums.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bessel import bessel_j_orders
from .errors import SizeError, TruncationError
from .lattice import MomentumLattice, RatchetSpec

MAX_ORDER = 64
NORM_TOL = 1e-9


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


class LaurentPolynomial:
    """Exact Laurent polynomial in ``x = exp(i k cos(theta))``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def z(cls) -> "LaurentPolynomial":
        """``x^-1 + x``."""
        return cls({-1: 1, 1: 1})

    @classmethod
    def ztilde(cls) -> "LaurentPolynomial":
        """``x^-1 - x``."""
        return cls({-1: 1, 1: -1})

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial":
        return cls({0: c})

    def times_ztilde(self) -> "LaurentPolynomial":
        out: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            out[e - 1] = out.get(e - 1, 0) + c
            out[e + 1] = out.get(e + 1, 0) - c
        return LaurentPolynomial(out)

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial({e: c * other for e, c in self.terms.items()})
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(other)
        return self.terms == other.terms

    def __repr__(self):
        return f"LaurentPolynomial({dict(sorted(self.terms.items(), reverse=True))})"

    def slots(self, order: int) -> list[Fraction]:
        """Coefficients of exponents ``order, order-2, ..., -order``.

        Raises ValueError if any term falls outside those ``order + 1`` slots.
        """
        valid = {order - 2 * l for l in range(order + 1)}
        stray = set(self.terms) - valid
        if stray:
            raise ValueError(f"exponents {sorted(stray)} do not fit order {order}")
        return [self.terms.get(order - 2 * l, Fraction(0)) for l in range(order + 1)]

    def evaluate(self, x):
        x = np.asarray(x)
        return sum(float(c) * x ** e for e, c in self.terms.items())


@dataclass(frozen=True)
class AnalyticCoefficients:
    N: int
    a1: tuple[Fraction, ...]
    a2: tuple[Fraction, ...]

    def scaled_integers(self) -> tuple[list[int], list[int]]:
        """``2^N a1`` and ``2^N a2``; raises if either is not integral."""
        scale = 2 ** self.N
        out = []
        for arr in (self.a1, self.a2):
            vals = [c * scale for c in arr]
            if any(v.denominator != 1 for v in vals):
                raise ValueError(f"2^N scaled coefficients are not integers at N={self.N}")
            out.append([int(v) for v in vals])
        return out[0], out[1]


def _check_order(N: int, max_order: int):
    if N < 0:
        raise ValueError(f"step index N must be >= 0, got {N}")
    if N > max_order:
        raise SizeError(f"N={N} exceeds the configured maximum {max_order}")


@lru_cache(maxsize=None)
def _closed_form(N: int) -> AnalyticCoefficients:
    a1, a2 = [], []
    for l in range(N + 1):
        t1 = t2 = 0
        for u in range(N // 2 + 1):
            even_minus_odd = binom(N, 2 * u) - binom(N, 2 * u + 1)
            odd = binom(N, 2 * u + 1)
            for m in range(l + 1):
                sign = -1 if (N - l + m) % 2 else 1
                w = sign * binom(u, m) * 8 ** m
                t1 += w * even_minus_odd * binom(N - 2 * m, l - m)
                t1 += 2 * w * odd * binom(N - 2 * m - 1, l - m - 1)
                t1 -= 2 * w * odd * binom(N - 2 * m - 1, l - m)
                t2 += w * binom(N + 1, 2 * u + 1) * binom(N - 2 * m, l - m)
        a1.append(Fraction(t1, 2 ** N))
        a2.append(Fraction(t2, 2 ** N))
    return AnalyticCoefficients(N, tuple(a1), tuple(a2))


def coefficients_closed_form(N: int, max_order: int = MAX_ORDER) -> AnalyticCoefficients:
    """Coefficients ``a_{l,1}``, ``a_{l,2}`` from the binomial triple sums.

    Both sums carry the sign ``(-1)^(N-l+m)``. The middle term of ``a_{l,1}``
    (upper limit ``m <= l-1``) is covered by ``binom`` returning zero.
    """
    _check_order(N, max_order)
    return _closed_form(N)


def recursion_polynomials(N: int) -> tuple[LaurentPolynomial, LaurentPolynomial]:
    """``(p_1^(N), p_2^(N))`` from ``p^(N) = zt p^(N-1) + 2 p^(N-2)``."""
    results = []
    for first in (LaurentPolynomial.z(), LaurentPolynomial.ztilde()):
        prev, cur = LaurentPolynomial.constant(1), first
        if N == 0:
            results.append(prev)
            continue
        for _ in range(N - 1):
            prev, cur = cur, cur.times_ztilde() + prev * 2
        results.append(cur)
    return results[0], results[1]


@lru_cache(maxsize=None)
def _recursion(N: int) -> AnalyticCoefficients:
    p1, p2 = recursion_polynomials(N)
    return AnalyticCoefficients(N, tuple(p1.slots(N)), tuple(p2.slots(N)))


def coefficients_recursion(N: int, max_order: int = MAX_ORDER) -> AnalyticCoefficients:
    _check_order(N, max_order)
    return _recursion(N)


def coefficients_csv(orders) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "l", "a1", "a2"])
    for N in orders:
        c = coefficients_closed_form(N)
        for l, (x1, x2) in enumerate(zip(c.a1, c.a2)):
            w.writerow([N, l, f"{x1.numerator}/{x1.denominator}", f"{x2.numerator}/{x2.denominator}"])
    return buf.getvalue()


def _bessel_rows(orders: np.ndarray, x: float) -> np.ndarray:
    a = np.abs(orders)
    table = bessel_j_orders(int(a.max()), x)
    sign = np.where((orders < 0) & (a % 2 == 1), -1.0, 1.0)
    return sign * table[a]


def analytic_distribution(j: int, k: float, spec: RatchetSpec,
                          lattice: MomentumLattice) -> np.ndarray:
    """Total momentum distribution ``P(n)`` after ``j`` steps at ``beta = 0``.

    Sum of four squared Bessel sums over ``l = 0..N`` and the ratchet
    classes, weighted ``(-1)^s`` and normalized by ``2^(j+1) S``.
    """
    if j < 1:
        raise ValueError(f"analytic distribution needs j >= 1, got {j}")
    if not math.isfinite(k) or k < 0:
        raise ValueError(f"kick strength k must be finite and >= 0, got {k}")
    for s in spec.classes:
        lattice.index(s)
    N = j - 1
    coef = coefficients_closed_form(N)
    a1 = np.array([float(c) for c in coef.a1])
    a2 = np.array([float(c) for c in coef.a2])
    n = lattice.momenta
    classes = np.array(spec.classes)
    # orders n - s for every (s, n); signs (-1)^s
    orders = n[None, :] - classes[:, None]
    s_sign = np.where(classes % 2 == 0, 1.0, -1.0)

    def bessel_sum(coeffs, shift, flip):
        total = np.zeros(n.size)
        for l, c in enumerate(coeffs):
            if c == 0.0:
                continue
            x = flip * (N - 2 * l + shift) * k
            vals = _bessel_rows(orders.ravel(), x).reshape(orders.shape)
            total += c * (s_sign @ vals)
        return total

    terms = [
        bessel_sum(a1, -1, 1.0),
        bessel_sum(a2, +1, 1.0),
        bessel_sum(a1, -1, -1.0),
        bessel_sum(a2, +1, -1.0),
    ]
    P = sum(t * t for t in terms) / (2 ** (j + 1) * spec.size)
    missing = abs(1.0 - P.sum())
    if missing > NORM_TOL:
        raise TruncationError(
            f"analytic distribution loses {missing:.3g} outside lattice"
            f" [{lattice.n_min}, {lattice.n_max}] (Bessel arguments up to {(N + 1) * k:.3g})"
        )
    return P


def matrix_elements_on_grid(N: int, k: float, theta: np.ndarray) -> np.ndarray:
    """``A_1..A_4`` of ``(sqrt 2 G_H K)^(N+1)`` pointwise on an angle grid.

    Returns an array of shape ``(2, 2, len(theta))``.
    """
    em = np.exp(-1j * k * np.cos(theta))
    step = np.array([[em, em.conj()], [em, -em.conj()]])
    out = np.array([[np.ones_like(em), np.zeros_like(em)], [np.zeros_like(em), np.ones_like(em)]])
    for _ in range(N + 1):
        out = np.einsum("ijt,jkt->ikt", out, step)
    return out


def matrix_element_residuals(N: int, k: float, grid_points: int = 128) -> dict:
    """Residuals of the symmetry relations between the propagator entries.

    ``a1_a4``: ``A_1(k) - (-1)^(N+1) A_4(-k)``. ``a2_a3``:
    ``A_2(k) - (-1)^N A_3(-k)``. ``a2_a3_plus``: the same relation with
    ``(-1)^(N+1)``, which does not hold. Also checks ``A_1 = x^-1 p_1`` and
    ``A_2 = x p_2`` against the recursion polynomials.
    """
    theta = 2 * np.pi * np.arange(grid_points) / grid_points
    A = matrix_elements_on_grid(N, k, theta)
    B = matrix_elements_on_grid(N, -k, theta)
    sgn = -1.0 if N % 2 == 0 else 1.0  # (-1)^(N+1)
    x = np.exp(1j * k * np.cos(theta))
    p1, p2 = recursion_polynomials(N)
    return {
        "a1_a4": float(np.max(np.abs(A[0, 0] - sgn * B[1, 1]))),
        "a2_a3": float(np.max(np.abs(A[0, 1] + sgn * B[1, 0]))),
        "a2_a3_plus": float(np.max(np.abs(A[0, 1] - sgn * B[1, 0]))),
        "a1_poly": float(np.max(np.abs(A[0, 0] - p1.evaluate(x) / x))),
        "a2_poly": float(np.max(np.abs(A[0, 1] - p2.evaluate(x) * x))),
    }
