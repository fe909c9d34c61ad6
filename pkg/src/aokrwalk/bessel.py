"""Bessel functions of the first kind at integer order.

Values are produced by Miller's backward recurrence, normalized with the
Neumann sum ``J_0(x) + 2 * sum_k J_2k(x) = 1``. Backward recurrence is
stable for the minimal solution, so tail orders keep full relative
accuracy until they underflow.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

_BIG = 2.0 ** 664  # power of two: rescaling is exact


def _start_order(nmax: int, x: float) -> int:
    top = max(nmax, int(math.ceil(x)))
    start = top + 20 + int(math.sqrt(160.0 * max(top, 1)))
    return start + (start % 2)


@lru_cache(maxsize=1024)
def _orders_cached(nmax: int, x: float) -> np.ndarray:
    out = np.zeros(nmax + 1)
    if x == 0.0:
        out[0] = 1.0
        out.setflags(write=False)
        return out

    start = _start_order(nmax, x)
    vals = [0.0] * (start + 2)
    vals[start] = 1.0
    two_over_x = 2.0 / x
    for m in range(start, 0, -1):
        vals[m - 1] = m * two_over_x * vals[m] - vals[m + 1]
        if abs(vals[m - 1]) > _BIG:
            for i in range(m - 1, start + 1):
                vals[i] /= _BIG

    norm = vals[0] + 2.0 * math.fsum(vals[2:start + 1:2])
    out[:] = np.asarray(vals[: nmax + 1]) / norm
    out.setflags(write=False)
    return out


def bessel_j_orders(nmax: int, x: float) -> np.ndarray:
    """Return ``[J_0(x), ..., J_nmax(x)]`` for real ``x``.

    Negative arguments use ``J_n(-x) = (-1)^n J_n(x)``. The returned array
    is read-only and may be shared between callers.
    """
    if nmax < 0:
        raise ValueError(f"nmax must be non-negative, got {nmax}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"argument must be finite, got {x}")
    vals = _orders_cached(int(nmax), abs(x))
    if x < 0:
        signs = np.where(np.arange(nmax + 1) % 2 == 0, 1.0, -1.0)
        vals = vals * signs
        vals.setflags(write=False)
    return vals


def bessel_j(order, x: float):
    """``J_order(x)`` for integer (array-like) ``order`` of either sign."""
    order = np.asarray(order, dtype=int)
    a = np.abs(order)
    table = bessel_j_orders(int(a.max()) if a.size else 0, x)
    sign = np.where((order < 0) & (a % 2 == 1), -1.0, 1.0)
    res = sign * table[a]
    return res if res.ndim else float(res)
