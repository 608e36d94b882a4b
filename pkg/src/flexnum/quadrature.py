"""One-dimensional quadrature on a finite interval.

Two deliberately unrelated schemes are provided so that one can check the
other: a globally adaptive Gauss-Kronrod (7/15) bisection and a fixed-step
Romberg extrapolation on nested trapezoid grids.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

Integrand = Callable[[float], float]

# Kronrod 15-point nodes on [-1, 1] (non-negative half) and weights;
# every other node is a Gauss 7-point node.
_XK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


class QuadratureError(ArithmeticError):
    """Quadrature did not reach its tolerance within the iteration budget."""

    def __init__(self, message: str, previous: float, last: float):
        super().__init__(f"{message} (previous estimate {previous!r}, last estimate {last!r})")
        self.previous = previous
        self.last = last


@dataclass(frozen=True)
class QuadSettings:
    abs_tol: float = 1e-6
    rel_tol: float = 1e-10
    max_intervals: int = 2000
    romberg_max_level: int = 20
    romberg_rel_tol: float = 1e-9


def _gk15(f: Integrand, a: float, b: float) -> tuple[float, float]:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = h * _XK[j]
        pair = f(c - dx) + f(c + dx)
        kron += _WK[j] * pair
        if j % 2 == 1:
            gauss += _WG[j // 2] * pair
    return kron * h, abs((kron - gauss) * h)


def adaptive_gauss_kronrod(f: Integrand, a: float, b: float, settings: QuadSettings = QuadSettings()) -> float:
    """Integrate ``f`` over ``[a, b]``, always bisecting the worst subinterval."""
    if b == a:
        return 0.0
    value, err = _gk15(f, a, b)
    heap = [(-err, a, b, value)]
    total, total_err = value, err
    previous = math.nan
    while total_err > max(settings.abs_tol, settings.rel_tol * abs(total)):
        if len(heap) >= settings.max_intervals:
            raise QuadratureError(
                f"adaptive Gauss-Kronrod exceeded {settings.max_intervals} subintervals",
                previous,
                total,
            )
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        previous = total
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
    # re-sum to drop the drift of the running update
    return math.fsum(item[3] for item in heap)


def romberg(f: Integrand, a: float, b: float, settings: QuadSettings = QuadSettings()) -> float:
    """Romberg extrapolation on successively halved trapezoid grids."""
    if b == a:
        return 0.0
    h = b - a
    prev_row = [0.5 * h * (f(a) + f(b))]
    for level in range(1, settings.romberg_max_level + 1):
        h *= 0.5
        n_new = 2 ** (level - 1)
        mids = math.fsum(f(a + (2 * j + 1) * h) for j in range(n_new))
        row = [0.5 * prev_row[0] + h * mids]
        for j in range(1, level + 1):
            factor = 4.0**j
            row.append(row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0))
        if level >= 4 and abs(row[-1] - prev_row[-1]) <= settings.romberg_rel_tol * abs(row[-1]):
            return row[-1]
        prev_row = row
    raise QuadratureError(
        f"Romberg did not converge in {settings.romberg_max_level} levels",
        prev_row[-2] if len(prev_row) > 1 else math.nan,
        prev_row[-1],
    )
