"""Lorentzian linear algebra in the projective (Beltrami-Cayley-Klein) model.

Points and hyperplanes of H^n (n = 2, 3) are represented by homogeneous
coordinate vectors ``(x0, x1, ..., xn)`` in a real vector space carrying the
bilinear form of signature (1, n)::

    <x, y> = -x0*y0 + x1*y1 + ... + xn*yn

Everything here is a pure function of numpy arrays.
"""
from __future__ import annotations

import enum
import math

import numpy as np

EPS_CLASS = 1e-10
EPS_CLAMP = 1e-12


class PointClass(enum.Enum):
    PROPER = "proper"
    IDEAL = "ideal"
    OUTER = "outer"


def vec(*coords) -> np.ndarray:
    """Build a homogeneous coordinate vector of dimension 3 or 4."""
    v = np.asarray(coords if len(coords) > 1 else coords[0], dtype=float)
    if v.ndim != 1 or v.shape[0] not in (3, 4):
        raise ValueError(f"expected 3 or 4 homogeneous coordinates, got shape {v.shape}")
    if not np.any(v != 0.0):
        raise ValueError("zero vector does not represent a point")
    return v


def homogeneous(point) -> np.ndarray:
    """Lift Euclidean model coordinates ``(x1, ..., xn)`` to ``(1, x1, ..., xn)``."""
    p = np.asarray(point, dtype=float)
    return np.concatenate([np.ones(p.shape[:-1] + (1,)), p], axis=-1)


def normalize(x) -> np.ndarray:
    """Canonical representative with ``x0 = 1``."""
    x = np.asarray(x, dtype=float)
    if x[0] == 0.0:
        raise ValueError("point at infinity of the affine chart cannot be normalized")
    return x / x[0]


def euclidean(x) -> np.ndarray:
    """Euclidean model coordinates of a homogeneous point."""
    return normalize(x)[1:]


def bilinear(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    return -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def norm2(x) -> float:
    return bilinear(x, x)


def classify(x, eps: float = EPS_CLASS) -> PointClass:
    """Proper, ideal or outer, decided on the normalized representative."""
    x = np.asarray(x, dtype=float)
    if not np.any(x != 0.0):
        raise ValueError("zero vector does not represent a point")
    q = norm2(normalize(x)) if x[0] != 0.0 else norm2(x / np.max(np.abs(x)))
    if q < -eps:
        return PointClass.PROPER
    if q > eps:
        return PointClass.OUTER
    return PointClass.IDEAL


def _require_proper(x, name: str = "point") -> None:
    if classify(x) is not PointClass.PROPER:
        raise ValueError(f"{name} is not a proper point: {np.asarray(x).tolist()}")


def distance(x, y) -> float:
    """Hyperbolic distance of two proper points (curvature -1)."""
    _require_proper(x, "x")
    _require_proper(y, "y")
    x = normalize(x)
    y = normalize(y)
    c = -bilinear(x, y) / math.sqrt(norm2(x) * norm2(y))
    if c < 1.0 - EPS_CLAMP:
        raise ValueError(f"cosh argument {c!r} below 1; inputs inconsistent")
    # same value as arccosh(c), but without the loss of digits for short distances:
    # on the hyperboloid <X-Y, X-Y> = 2 (cosh d - 1) = 4 sinh^2(d/2)
    X = x / math.sqrt(-norm2(x))
    Y = y / math.sqrt(-norm2(y))
    D = X - Y
    q = max(0.0, float(norm2(D)))
    return 2.0 * math.asinh(0.5 * math.sqrt(q))


def polar(x) -> np.ndarray:
    """Polar hyperplane of ``x`` as a covector ``u`` with <x, y> = 0 on it.

    The form is diagonal, so the covector is returned in the same convention
    as points: ``y`` lies on ``polar(x)`` iff ``bilinear(polar(x), y) == 0``.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x != 0.0):
        raise ValueError("zero vector has no polar")
    return x.copy()


def on_plane(x, u, tol: float = 1e-12) -> bool:
    return abs(bilinear(normalize(x), u)) <= tol * max(1.0, float(np.max(np.abs(u))))


def point_plane_distance(x, u) -> float:
    """Distance of the proper point ``x`` from the hyperplane with covector ``u``.

    Uses ``sinh d = |<x,u>| / sqrt(-<x,x> <u,u>)``; ``u`` must be space-like
    (the plane meets the model).
    """
    _require_proper(x)
    x = normalize(x)
    uu = norm2(u)
    if uu <= 0.0:
        raise ValueError("hyperplane does not meet the model")
    return math.asinh(abs(bilinear(x, u)) / math.sqrt(-norm2(x) * uu))


def angle_at(vertex, b, c) -> float:
    """Angle at the proper point ``vertex`` between the geodesics to ``b`` and ``c``.

    Tangent directions are the components of ``b`` and ``c`` Lorentz-orthogonal
    to ``vertex``; their Lorentzian angle is the hyperbolic angle.
    """
    v = normalize(vertex)
    vv = norm2(v)
    tb = normalize(b) - bilinear(v, normalize(b)) / vv * v
    tc = normalize(c) - bilinear(v, normalize(c)) / vv * v
    cos = bilinear(tb, tc) / math.sqrt(norm2(tb) * norm2(tc))
    return math.acos(min(1.0, max(-1.0, cos)))
