"""Horoballs centred at the ideal point (1,0,...,0,1) and hyperballs over a plane.

In Euclidean model coordinates ``(h_1, ..., h_n)`` the horosphere through the
axis point ``(0, ..., 0, s)`` is the ellipsoid

    2 (h_1^2 + ... + h_{n-1}^2) / (1 - s) + 4 (h_n - (s + 1)/2)^2 / (1 - s)^2 = 1

tangent to the absolute at the centre.  The hyperball of height ``h`` over the
plane with covector ``u`` is ``{x : dist(x, u) <= h}`` on the side ``<x,u> >= 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import lorentz

EPS_MEM = 1e-12


def _model(points) -> np.ndarray:
    """Euclidean model coordinates from homogeneous row vector(s)."""
    P = np.asarray(points, dtype=float)
    return P[..., 1:] / P[..., :1]


@dataclass(frozen=True)
class Horoball:
    s: float
    n: int = 3

    def __post_init__(self):
        if not -1.0 < self.s < 1.0:
            raise ValueError(f"horoball type s must lie in (-1, 1), got {self.s!r}")

    @property
    def center(self) -> np.ndarray:
        c = np.zeros(self.n + 1)
        c[0] = c[-1] = 1.0
        return c

    @property
    def apex(self) -> np.ndarray:
        """The axis point (1, 0, ..., 0, s) where the horosphere is closest to O."""
        c = np.zeros(self.n + 1)
        c[0], c[-1] = 1.0, self.s
        return c

    def lhs(self, points) -> np.ndarray:
        """Left side of the horosphere equation; <= 1 inside the horoball."""
        X = _model(points)
        w = 1.0 - self.s
        rho2 = np.sum(X[..., :-1] ** 2, axis=-1)
        return 2.0 * rho2 / w + 4.0 * (X[..., -1] - (self.s + 1.0) / 2.0) ** 2 / (w * w)

    def contains(self, points, eps: float = EPS_MEM):
        return self.lhs(points) <= 1.0 + eps


@dataclass(frozen=True)
class Hyperball:
    base: np.ndarray
    h: float

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h >= 0.0):
            raise ValueError(f"hyperball height must be finite and >= 0, got {self.h!r}")
        if lorentz.norm2(self.base) <= 0.0:
            raise ValueError("hyperball base plane does not meet the model")

    def excess(self, points) -> np.ndarray:
        """``<x,u>^2 - sinh^2 h (-<x,x>) <u,u>`` on normalized x; <= 0 inside."""
        P = np.asarray(points, dtype=float)
        P = P / P[..., :1]
        xu = lorentz.bilinear(P, self.base)
        return xu * xu + math.sinh(self.h) ** 2 * lorentz.bilinear(P, P) * lorentz.norm2(self.base)

    def contains(self, points, eps: float = EPS_MEM):
        P = np.asarray(points, dtype=float)
        side = lorentz.bilinear(P / P[..., :1], self.base) >= -eps
        return (self.excess(points) <= eps) & side

    def distance(self, point) -> float:
        return lorentz.point_plane_distance(point, self.base)


def horoball_contains(ball: Horoball, point) -> bool:
    return bool(ball.contains(point))


def horoball_through(point) -> Horoball:
    """The horoball centred at (1,0,...,0,1) whose horosphere passes through ``point``.

    Substituting the point into the horosphere equation is linear in ``1 - s``::

        1 - s = 2 (1 - z)^2 / (2 (1 - z) - rho^2)

    where ``z`` is the last model coordinate and ``rho^2`` the squared distance
    from the axis; inside the model the denominator is positive, so the
    horosphere is unique.
    """
    X = _model(point)
    n = X.shape[-1]
    z = X[-1]
    rho2 = float(np.sum(X[:-1] ** 2))
    one_minus_z = 1.0 - z
    if one_minus_z <= 0.0 and rho2 == 0.0:
        raise ValueError("point coincides with the horoball centre")
    den = 2.0 * one_minus_z - rho2
    if den <= 0.0:
        raise ValueError(f"point {X.tolist()} lies outside the model")
    w = 2.0 * one_minus_z ** 2 / den
    if w <= 0.0:
        raise ValueError("point coincides with the horoball centre")
    return Horoball(1.0 - w, n)


def hyperball_through(point, base) -> Hyperball:
    return Hyperball(np.asarray(base, dtype=float), lorentz.point_plane_distance(point, base))


class Crossings(NamedTuple):
    """Parameters ``t`` where ``X(t) = (1-t) A + t B`` meets a ball boundary.

    ``degenerate`` marks a segment lying entirely on the boundary.
    """
    roots: tuple
    degenerate: bool = False


def _quadratic_roots(a2: float, a1: float, a0: float, scale: float, a0_err: float = 0.0) -> tuple:
    """Real roots, ascending.  A slightly negative discriminant within the
    round-off of the coefficients (``a0_err`` bounds the error of ``a0``) is a
    tangency and gives a double root."""
    tol = 1e-14 * scale
    if abs(a2) <= tol:
        if abs(a1) <= tol:
            return ()
        return (-a0 / a1,)
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        slack = 1e-12 * max(a1 * a1, abs(4 * a2 * a0), 1e-300) + 4.0 * abs(a2) * a0_err
        if disc > -slack:
            disc = 0.0
        else:
            return ()
    sq = math.sqrt(disc)
    # numerically stable pair
    qq = -0.5 * (a1 + math.copysign(sq, a1))
    r1 = qq / a2
    r2 = a0 / qq if qq != 0.0 else r1
    return tuple(sorted((r1, r2)))


def _line_coefficients(ball, A, B) -> tuple[float, float, float, float]:
    """Quadratic ``a2 t^2 + a1 t + a0`` (negative inside) and a round-off bound on ``a0``."""
    A = np.asarray(A, dtype=float) / A[0]
    B = np.asarray(B, dtype=float) / B[0]
    eps = np.finfo(float).eps
    if isinstance(ball, Horoball):
        a, d = _model(A), _model(B) - _model(A)
        w = 1.0 - ball.s
        c = (ball.s + 1.0) / 2.0
        a2 = 2.0 * np.dot(d[:-1], d[:-1]) / w + 4.0 * d[-1] ** 2 / (w * w)
        a1 = 4.0 * np.dot(a[:-1], d[:-1]) / w + 8.0 * (a[-1] - c) * d[-1] / (w * w)
        lhs = float(ball.lhs(A))
        # the rounding of s enters the equation through 1/w^2
        return float(a2), float(a1), lhs - 1.0, 8.0 * eps * max(lhs, 1.0) / w
    u = ball.base
    k = math.sinh(ball.h) ** 2 * lorentz.norm2(u)
    D = B - A
    au, du = lorentz.bilinear(A, u), lorentz.bilinear(D, u)
    a2 = du * du + k * lorentz.bilinear(D, D)
    a1 = 2.0 * au * du + 2.0 * k * lorentz.bilinear(A, D)
    a0 = au * au + k * lorentz.bilinear(A, A)
    return float(a2), float(a1), float(a0), 8.0 * eps * (au * au + abs(k * lorentz.bilinear(A, A)))


def line_intersection(ball, A, B) -> Crossings:
    """All real parameters where the line through A, B meets the ball boundary."""
    a2, a1, a0, a0_err = _line_coefficients(ball, A, B)
    scale = max(abs(a2), abs(a1), abs(a0), 1e-300)
    if max(abs(a2), abs(a1), abs(a0)) <= 1e-14:
        return Crossings((), True)
    return Crossings(_quadratic_roots(a2, a1, a0, scale, a0_err))


def ball_segment_intersection(ball, seg: Sequence) -> Crossings:
    """Boundary crossings of the segment ``seg = (A, B)``, restricted to ``[0, 1]``."""
    A, B = seg
    for P in (A, B):
        X = _model(P)
        if float(np.dot(X, X)) > 1.0 + 1e-12:
            raise ValueError("segment leaves the model")
    hits = line_intersection(ball, A, B)
    if hits.degenerate:
        return hits
    roots = []
    for t in hits.roots:
        if -1e-12 <= t <= 1.0 + 1e-12:
            # roots within round-off of an endpoint are the endpoint
            roots.append(0.0 if t < 1e-12 else 1.0 if t > 1.0 - 1e-12 else t)
    return Crossings(tuple(roots))


def point_at(A, B, t: float) -> np.ndarray:
    A = np.asarray(A, dtype=float) / A[0]
    B = np.asarray(B, dtype=float) / B[0]
    return (1.0 - t) * A + t * B


def intrinsic_chord_length(d: float) -> float:
    """Horospherical (Euclidean intrinsic) distance of two horosphere points
    at hyperbolic distance ``d``."""
    if d < 0.0:
        raise ValueError("distance must be non-negative")
    return 2.0 * math.sinh(d / 2.0)


def _on_horosphere(ball: Horoball, P, tol: float = 1e-10) -> bool:
    return abs(float(ball.lhs(P)) - 1.0) <= tol


def _hdist(P, Q) -> float:
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if np.allclose(P / P[0], Q / Q[0], rtol=0.0, atol=1e-15):
        return 0.0
    return lorentz.distance(P, Q)


def horoball_piece_volume_2d(ball: Horoball, P, Q) -> float:
    """Area of the horocyclic sector between ``P``, ``Q`` and the centre (arc length)."""
    for X in (P, Q):
        if not _on_horosphere(ball, X):
            raise ValueError("point is not on the horocycle")
    return intrinsic_chord_length(_hdist(P, Q))


def heron(a: float, b: float, c: float, tol: float = 1e-12) -> float:
    """Euclidean triangle area with Kahan's ordering for thin triangles."""
    a, b, c = sorted((a, b, c), reverse=True)
    f1 = c - (a - b)
    if f1 < 0.0:
        if f1 < -tol * max(a, 1.0):
            raise ValueError(f"side lengths ({a}, {b}, {c}) violate the triangle inequality")
        f1 = 0.0
    prod = (a + (b + c)) * f1 * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(max(prod, 0.0))


def horoball_piece_volume_3d(ball: Horoball, S, T, Q) -> float:
    """Volume of the horoball piece over the horospherical triangle S T Q.

    The triangle is Euclidean in the intrinsic metric; its area ``A`` gives
    the volume ``A / 2``.
    """
    for X in (S, T, Q):
        if not _on_horosphere(ball, X):
            raise ValueError("point is not on the horosphere")
    sides = [intrinsic_chord_length(_hdist(U, V)) for U, V in ((S, T), (T, Q), (Q, S))]
    return heron(*sides) / 2.0


def hyperball_piece_volume_2d(h: float, base_length: float) -> float:
    if h < 0.0 or base_length < 0.0:
        raise ValueError("height and base length must be non-negative")
    return base_length * math.sinh(h)


def hyperball_piece_volume_3d(h: float, base_area: float) -> float:
    if h < 0.0 or base_area < 0.0:
        raise ValueError("height and base area must be non-negative")
    return base_area / 4.0 * (math.sinh(2.0 * h) + 2.0 * h)
