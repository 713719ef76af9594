"""Closed-form ensemble theory: giant component, coverage, and state ratios.

All observables derive from fixed points of two coupled 2-d maps in the side
mean degrees (c1, c2): the double-exponential map for the edge coverage
requirement probabilities (identical to the uncovered-backbone fractions) and
the complementary map for the giant-component fractions.  Whole-graph values
mix the two sides with weights c2/(c1+c2) and c1/(c1+c2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

FIXED_POINT_TOL = 1e-12
MAX_ITERATIONS = 10**6


class FixedPointError(RuntimeError):
    """Fixed-point iteration failed to converge; carries the last residual."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"fixed point not converged; residual {residual:.3e}")


@dataclass(frozen=True)
class MeanFieldSolution:
    """Fixed-point observables for one (c1, c2)."""

    c1: float
    c2: float
    Q1: float
    Q2: float
    Q: float
    pi1: float
    pi2: float
    x1: float
    x2: float
    x: float
    q1_plus: float
    q2_plus: float
    q_plus: float
    q1_zero: float
    q2_zero: float
    q_zero: float
    residual: float


def poisson_pmf(c: float, k: int) -> float:
    """Poisson(c) probability of degree k."""
    if c < 0 or k < 0:
        raise ValueError("c and k must be non-negative")
    if c == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(c) - c - math.lgamma(k + 1))


def _solve_coupled(f1: Callable[[float], float], f2: Callable[[float], float],
                   d1: Callable[[float], float], d2: Callable[[float], float],
                   x0: float, y0: float) -> tuple[float, float, float]:
    """Fixed point of (x, y) = (f1(y), f2(x)) by damped iteration.

    Damping factor 0.5.  Near the percolation-critical manifold the damped
    map converges sublinearly, so once progress stalls a guarded 2x2 Newton
    polish finishes the job; it can only move toward the same fixed point.
    Returns (x, y, residual) with residual below FIXED_POINT_TOL.
    """

    def defect(x: float, y: float) -> float:
        return max(abs(f1(y) - x), abs(f2(x) - y))

    def newton(x: float, y: float) -> tuple[float, float]:
        # G = (f1(y) - x, f2(x) - y); J = [[-1, f1'(y)], [f2'(x), -1]]
        for _ in range(200):
            g1 = f1(y) - x
            g2 = f2(x) - y
            if max(abs(g1), abs(g2)) < FIXED_POINT_TOL:
                break
            b = d1(y)
            c = d2(x)
            det = 1.0 - b * c
            if det == 0.0 or not math.isfinite(det):
                break
            nx = min(max(x + (g1 + b * g2) / det, 0.0), 1.0)
            ny = min(max(y + (c * g1 + g2) / det, 0.0), 1.0)
            if defect(nx, ny) >= defect(x, y):
                break
            x, y = nx, ny
        return x, y

    x, y = x0, y0
    prev = math.inf
    for it in range(1, MAX_ITERATIONS + 1):
        fx = f1(y)
        fy = f2(x)
        d = max(abs(fx - x), abs(fy - y))
        if d < FIXED_POINT_TOL:
            return x, y, d
        x += 0.5 * (fx - x)
        y += 0.5 * (fy - y)
        if it % 512 == 0:
            if d > 0.5 * prev:  # stalled: linear rate too close to 1
                x, y = newton(x, y)
                d2_ = defect(x, y)
                if d2_ < FIXED_POINT_TOL:
                    return x, y, d2_
            prev = d
    raise FixedPointError(defect(x, y))


def solve_fixed_point(c1: float, c2: float) -> MeanFieldSolution:
    """Solve the coupled fixed points at side mean degrees (c1, c2).

    The coverage-requirement probabilities obey pi1 = exp(-c1 pi2),
    pi2 = exp(-c2 pi1) and coincide with the uncovered-backbone fractions;
    unfrozen fractions follow as q1_zero = c1 q2_plus exp(-c1 q2_plus) (and
    symmetrically), coverage as x = 1 - q_plus - q_zero / 2.
    """
    if c1 < 0 or c2 < 0:
        raise ValueError("mean degrees must be non-negative")
    pi1, pi2, r_pi = _solve_coupled(
        lambda y: math.exp(-c1 * y), lambda x: math.exp(-c2 * x),
        lambda y: -c1 * math.exp(-c1 * y), lambda x: -c2 * math.exp(-c2 * x),
        1.0, 1.0)
    Q1, Q2, r_q = _solve_coupled(
        lambda y: -math.expm1(-c1 * y), lambda x: -math.expm1(-c2 * x),
        lambda y: c1 * math.exp(-c1 * y), lambda x: c2 * math.exp(-c2 * x),
        0.5, 0.5)
    q1_plus, q2_plus = pi1, pi2
    q1_zero = c1 * q2_plus * math.exp(-c1 * q2_plus)
    q2_zero = c2 * q1_plus * math.exp(-c2 * q1_plus)
    x1 = 1.0 - math.exp(-c1 * pi2) - 0.5 * c1 * pi2 * math.exp(-c1 * pi2)
    x2 = 1.0 - math.exp(-c2 * pi1) - 0.5 * c2 * pi1 * math.exp(-c2 * pi1)
    if c1 + c2 > 0:
        w1 = c2 / (c1 + c2)
        w2 = c1 / (c1 + c2)
    else:
        w1 = w2 = 0.5
    return MeanFieldSolution(
        c1=c1, c2=c2,
        Q1=Q1, Q2=Q2, Q=w1 * Q1 + w2 * Q2,
        pi1=pi1, pi2=pi2,
        x1=x1, x2=x2, x=w1 * x1 + w2 * x2,
        q1_plus=q1_plus, q2_plus=q2_plus, q_plus=w1 * q1_plus + w2 * q2_plus,
        q1_zero=q1_zero, q2_zero=q2_zero, q_zero=w1 * q1_zero + w2 * q2_zero,
        residual=max(r_pi, r_q),
    )


def side_degrees(ratio: str | tuple[int, int], c: float) -> tuple[float, float]:
    """(c1, c2) for a node-count ratio n1:n2 at whole-graph mean degree c."""
    if isinstance(ratio, str):
        a_str, _, b_str = ratio.partition(":")
        a, b = float(a_str), float(b_str)
    else:
        a, b = ratio
    if a <= 0 or b <= 0:
        raise ValueError("ratio parts must be positive")
    r = a / b
    return c * (1 + r) / (2 * r), c * (1 + r) / 2


def theory_curve(ratio: str | tuple[int, int],
                 c_grid: Sequence[float]) -> list[MeanFieldSolution]:
    """Solved fixed points along a grid of whole-graph mean degrees."""
    out = []
    for c in c_grid:
        if c < 0:
            raise ValueError("mean degrees must be non-negative")
        c1, c2 = side_degrees(ratio, c)
        out.append(solve_fixed_point(c1, c2))
    return out


def theory_csv_rows(ratio: str, c_grid: Sequence[float]) -> list[str]:
    """CSV lines `ratio,c,c1,c2,Q,x,q_plus,q_zero,residual` (with header)."""
    rows = ["ratio,c,c1,c2,Q,x,q_plus,q_zero,residual"]
    for c, sol in zip(c_grid, theory_curve(ratio, c_grid)):
        rows.append(",".join([
            ratio,
            format(c, ".12g"),
            format(sol.c1, ".12g"),
            format(sol.c2, ".12g"),
            format(sol.Q, ".12g"),
            format(sol.x, ".12g"),
            format(sol.q_plus, ".12g"),
            format(sol.q_zero, ".12g"),
            format(sol.residual, ".3e"),
        ]))
    return rows
