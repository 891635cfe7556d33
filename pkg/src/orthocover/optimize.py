"""Deterministic derivative-free minimization on an interval.

A grid scan brackets the best valid grid point, then golden-section search
refines inside the bracket.  Points where the objective raises, returns a
non-finite value or fails the validity predicate are treated as ``+inf``, so
the minimizer is always a valid point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class NoValidPointError(ValueError):
    pass


@dataclass(frozen=True)
class Minimum:
    x: float
    fx: float
    evaluations: int


@dataclass(frozen=True)
class Minimum2D:
    x: float
    y: float
    fx: float


def _guarded(f: Callable[[float], float], valid: Optional[Callable[[float], bool]]):
    def g(x: float) -> float:
        try:
            if valid is not None and not valid(x):
                return math.inf
            v = float(f(x))
        except (ValueError, ArithmeticError):
            return math.inf
        return v if math.isfinite(v) else math.inf
    return g


def golden_section(g: Callable[[float], float], lo: float, hi: float, tol: float,
                   max_iter: int = 200) -> tuple[float, float, int]:
    """Golden-section search on ``[lo, hi]`` until the bracket is below ``tol``.

    Returns the best point seen, its value and the evaluation count.
    """
    best_x, best_f = lo, math.inf
    a, b = lo, hi
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = g(x1), g(x2)
    n = 2
    for x, fx in ((x1, f1), (x2, f2)):
        if fx < best_f:
            best_x, best_f = x, fx
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = g(x1)
            x, fx = x1, f1
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = g(x2)
            x, fx = x2, f2
        n += 1
        it += 1
        if fx < best_f:
            best_x, best_f = x, fx
    mid = 0.5 * (a + b)
    fm = g(mid)
    n += 1
    if fm < best_f:
        best_x, best_f = mid, fm
    return best_x, best_f, n


def minimize_1d(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10,
                valid: Optional[Callable[[float], bool]] = None, n_grid: int = 101) -> Minimum:
    if not lo < hi:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    g = _guarded(f, valid)
    xs = np.linspace(lo, hi, n_grid)
    vals = np.array([g(x) for x in xs])
    if not np.isfinite(vals).any():
        raise NoValidPointError(f"objective has no valid point on [{lo}, {hi}]")
    i = int(np.argmin(vals))
    left = xs[max(i - 1, 0)]
    right = xs[min(i + 1, n_grid - 1)]
    x, fx, n = golden_section(g, float(left), float(right), tol)
    if not fx < vals[i]:
        x, fx = float(xs[i]), float(vals[i])
    return Minimum(float(x), float(fx), n + n_grid)


def minimize_2d(f: Callable[[float, float], float],
                domains: tuple[tuple[float, float], tuple[float, float]],
                tol: float = 1e-8, inner_tol: Optional[float] = None,
                n_grid: int = 101, n_grid_inner: Optional[int] = None,
                valid: Optional[Callable[[float, float], bool]] = None) -> Minimum2D:
    """Nested minimization: outer over ``x``, inner over ``y`` for each ``x``."""
    (xlo, xhi), (ylo, yhi) = domains
    inner_tol = tol if inner_tol is None else inner_tol
    n_inner = n_grid if n_grid_inner is None else n_grid_inner

    def inner(x: float) -> Minimum:
        v = None if valid is None else (lambda y: valid(x, y))
        return minimize_1d(lambda y: f(x, y), ylo, yhi, inner_tol, v, n_inner)

    outer = minimize_1d(lambda x: inner(x).fx, xlo, xhi, tol, None, n_grid)
    best = inner(outer.x)
    return Minimum2D(outer.x, best.x, best.fx)
