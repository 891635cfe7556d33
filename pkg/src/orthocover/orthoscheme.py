"""Simply truncated Coxeter orthoschemes with one ideal principal vertex.

3D: the orthoscheme ``{p, q, r}`` with ``(q, r)`` in ``{(3,6), (4,4), (6,3)}``
has ideal vertex ``A0`` and outer vertex ``A3``; truncating by the polar plane
of ``A3`` gives the frustum ``A0 A1 A2 P0 P1 P2`` placed in the Klein model as

    P0(1,0,0,0)  P1(1,0,y,0)  P2(1,x,y,0)
    A0(1,0,0,1)  A1(1,0,y,z1) A2(1,x,y,z2)

so the truncating plane is ``x3 = 0``.

2D: the Lambert quadrilateral ``A0 A1 P1 P0`` with ``A0(1,0,1)``,
``A1(1,0,0)``, ``A2(1,1/a,0)`` outer and ``P0, P1`` on the polar of ``A2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lorentz
from .lobachevsky import lob

FAMILIES = ((3, 6), (4, 4), (6, 3))
# smallest integer p for which A3 is an outer point
P_MIN = {(3, 6): 7, (4, 4): 5, (6, 3): 4}
# real-p window admitted only for the non-extendable regime
REAL_P_WINDOW = {(3, 6): (6.0, 7.0)}

RESIDUAL_TOL = 1e-10


class ExistenceError(ValueError):
    """Parameters outside the range where the truncated orthoscheme exists."""


@dataclass(frozen=True)
class SchlafliContext:
    p: float
    q: int
    r: int
    C: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)

    @property
    def family(self) -> tuple[int, int]:
        return (self.q, self.r)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (math.pi / self.p, math.pi / self.q, math.pi / self.r)

    def vertex_cosh(self, i: int, j: int) -> float:
        """cosh d(P_i, P_j) of the truncation vertices, from ``H`` alone."""
        H = self.H
        num = H[i, 3] * H[j, 3] - H[i, j] * H[3, 3]
        den = math.sqrt((H[i, i] * H[3, 3] - H[i, 3] ** 2) * (H[j, j] * H[3, 3] - H[j, 3] ** 2))
        return num / den

    def edge_cosh(self, k: int) -> float:
        """cosh d(A_k, P_k) for k = 1, 2, from ``H`` alone."""
        H = self.H
        return math.sqrt((H[k, k] * H[3, 3] - H[k, 3] ** 2) / (H[k, k] * H[3, 3]))


def _is_integral(p: float) -> bool:
    return float(p).is_integer()


def build_schlafli(p: float, q: int, r: int, allow_nonextendable: bool = False) -> SchlafliContext:
    """Coxeter-Schlafli matrix of ``{p, q, r}`` and its inverse.

    Integer tilings need ``p >= 7, 5, 4`` for ``(q, r) = (3,6), (4,4), (6,3)``.
    With ``allow_nonextendable`` a real ``p`` in ``(6, 7)`` is admitted for the
    ``(3, 6)`` family; such a cell does not tile H^3.
    """
    fam = (int(q), int(r))
    if fam not in FAMILIES:
        raise ExistenceError(f"family (q,r)={fam} not one of {FAMILIES}")
    p = float(p)
    if not math.isfinite(p):
        raise ExistenceError(f"p must be finite, got {p!r}")
    window = REAL_P_WINDOW.get(fam)
    in_window = allow_nonextendable and window is not None and window[0] < p < window[1]
    if not in_window:
        if not _is_integral(p):
            raise ExistenceError(
                f"p={p} is not an integer; real p is only admitted in {window} for "
                f"family (3,6) with allow_nonextendable" if window else
                f"p={p} is not an integer")
        if p < P_MIN[fam]:
            raise ExistenceError(f"p={p:g} below existence bound p >= {P_MIN[fam]} for family {fam}")

    C = np.eye(4)
    C[0, 1] = C[1, 0] = -math.cos(math.pi / p)
    C[1, 2] = C[2, 1] = -math.cos(math.pi / fam[0])
    C[2, 3] = C[3, 2] = -math.cos(math.pi / fam[1])
    H = np.linalg.inv(C)
    ctx = SchlafliContext(p, fam[0], fam[1], C, H)
    _check_degree_one(ctx)
    return ctx


def _check_degree_one(ctx: SchlafliContext) -> None:
    H = ctx.H
    scale = float(np.max(np.abs(H)))
    problems = []
    if not np.linalg.det(ctx.C) < 0:
        problems.append("det(C) >= 0 (not hyperbolic)")
    if not H[3, 3] > 0:
        problems.append("h33 <= 0 (A3 not outer)")
    if abs(H[0, 0]) > 1e-9 * scale:
        problems.append("h00 != 0 (A0 not ideal)")
    if problems:
        # the stated bounds passed, so this is a disagreement worth flagging
        raise ExistenceError(
            f"{{{ctx.p:g},{ctx.q},{ctx.r}}} passes the parameter bounds but fails "
            "signature checks: " + "; ".join(problems))


@dataclass(frozen=True)
class TruncatedOrthoscheme:
    ctx: SchlafliContext
    x: float
    y: float
    z1: float
    z2: float

    @property
    def family(self) -> tuple[int, int]:
        return self.ctx.family

    @property
    def p(self) -> float:
        return self.ctx.p

    @property
    def P0(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 0.0])

    @property
    def P1(self) -> np.ndarray:
        return np.array([1.0, 0.0, self.y, 0.0])

    @property
    def P2(self) -> np.ndarray:
        return np.array([1.0, self.x, self.y, 0.0])

    @property
    def A0(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, 1.0])

    @property
    def A1(self) -> np.ndarray:
        return np.array([1.0, 0.0, self.y, self.z1])

    @property
    def A2(self) -> np.ndarray:
        return np.array([1.0, self.x, self.y, self.z2])

    @property
    def A3(self) -> np.ndarray:
        """Outer principal vertex, the pole of the truncating plane."""
        return np.array([0.0, 0.0, 0.0, 1.0])

    @property
    def truncating_plane(self) -> np.ndarray:
        return lorentz.polar(self.A3)

    def vertices(self) -> dict[str, np.ndarray]:
        return {"A0": self.A0, "A1": self.A1, "A2": self.A2,
                "P0": self.P0, "P1": self.P1, "P2": self.P2}

    def residuals(self) -> tuple[float, float, float, float]:
        """Left minus right sides of the four coordinate equations."""
        x, y, z1, z2 = self.x, self.y, self.z1, self.z2
        ctx = self.ctx
        r1 = ctx.vertex_cosh(0, 1) - 1.0 / math.sqrt(1.0 - y * y)
        r2 = ctx.vertex_cosh(0, 2) - 1.0 / math.sqrt(1.0 - y * y - x * x)
        r3 = ctx.edge_cosh(1) - (1 - y * y) / math.sqrt((y * y + z1 * z1 - 1) * (y * y - 1))
        r4 = ctx.edge_cosh(2) - (1 - y * y - x * x) / math.sqrt(
            (y * y + x * x + z2 * z2 - 1) * (y * y + x * x - 1))
        return (r1, r2, r3, r4)


def solve_coordinates(ctx: SchlafliContext) -> TruncatedOrthoscheme:
    """Model coordinates ``x, y, z1, z2``; the system is triangular, solved in order."""
    c01 = ctx.vertex_cosh(0, 1)
    c02 = ctx.vertex_cosh(0, 2)
    c1 = ctx.edge_cosh(1)
    c2 = ctx.edge_cosh(2)
    y2 = 1.0 - 1.0 / (c01 * c01)
    x2 = 1.0 - 1.0 / (c02 * c02) - y2
    # cosh d(A_k P_k) = sqrt(1-rho^2) / sqrt(1-rho^2-z^2) with rho the foot radius
    z1_2 = (1.0 - y2) * (1.0 - 1.0 / (c1 * c1))
    z2_2 = (1.0 - y2 - x2) * (1.0 - 1.0 / (c2 * c2))
    if min(y2, x2, z1_2, z2_2) <= 0.0:
        raise ExistenceError(
            f"no positive coordinate solution for {{{ctx.p:g},{ctx.q},{ctx.r}}}")
    orth = TruncatedOrthoscheme(ctx, math.sqrt(x2), math.sqrt(y2), math.sqrt(z1_2), math.sqrt(z2_2))
    worst = max(abs(v) for v in orth.residuals())
    if worst > RESIDUAL_TOL:
        raise ExistenceError(f"coordinate residual {worst:.3e} exceeds {RESIDUAL_TOL}")
    return orth


def truncated_orthoscheme(p: float, family: tuple[int, int],
                          allow_nonextendable: bool = False) -> TruncatedOrthoscheme:
    q, r = family
    return solve_coordinates(build_schlafli(p, q, r, allow_nonextendable))


def truncation_vertex(ctx: SchlafliContext, k: int) -> np.ndarray:
    """Coefficients of ``p_k = a_k h33 - a_3 h_k3`` in the basis ``a_0..a_3``."""
    coef = np.zeros(4)
    coef[k] += ctx.H[3, 3]
    coef[3] -= ctx.H[k, 3]
    return coef


def volume3(ctx: SchlafliContext) -> float:
    """Volume of the truncated orthoscheme from its essential angles."""
    a01, a12, a23 = ctx.angles
    disc = math.cos(a12) ** 2 - math.sin(a01) ** 2 * math.sin(a23) ** 2
    if disc < 0.0:
        raise ValueError(f"negative discriminant {disc:.3e}; angles do not give a complete orthoscheme")
    theta = math.atan(math.sqrt(disc) / (math.cos(a01) * math.cos(a23)))
    half = math.pi / 2
    total = (lob(a01 + theta) - lob(a01 - theta)
             + lob(half + a12 - theta) + lob(half - a12 - theta)
             + lob(a23 + theta) - lob(a23 - theta)
             + 2.0 * lob(half - theta))
    vol = total / 4.0
    if not vol > 0.0:
        raise ValueError(f"non-positive volume {vol!r}")
    return vol


def base_triangle_area(orth: TruncatedOrthoscheme) -> float:
    """Area of the triangle P0 P1 P2 in the truncating plane (angle defect)."""
    P0, P1, P2 = orth.P0, orth.P1, orth.P2
    angles = (lorentz.angle_at(P0, P1, P2), lorentz.angle_at(P1, P0, P2),
              lorentz.angle_at(P2, P0, P1))
    area = math.pi - sum(angles)
    if not area > 0.0:
        raise ValueError("degenerate base triangle")
    return area


def base_triangle_angles(orth: TruncatedOrthoscheme) -> tuple[float, float, float]:
    P0, P1, P2 = orth.P0, orth.P1, orth.P2
    return (lorentz.angle_at(P0, P1, P2), lorentz.angle_at(P1, P0, P2),
            lorentz.angle_at(P2, P0, P1))


@dataclass(frozen=True)
class LambertDomain:
    """Lambert quadrilateral with ideal vertex, parametrized by ``0 < a < 1``."""
    a: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ValueError(f"Lambert parameter a must lie in (0, 1), got {self.a!r}")

    @property
    def A0(self) -> np.ndarray:
        return np.array([1.0, 0.0, 1.0])

    @property
    def A1(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0])

    @property
    def A2(self) -> np.ndarray:
        return np.array([1.0, 1.0 / self.a, 0.0])

    @property
    def P0(self) -> np.ndarray:
        return np.array([1.0, self.a, 1.0 - self.a ** 2])

    @property
    def P1(self) -> np.ndarray:
        return np.array([1.0, self.a, 0.0])

    @property
    def truncating_line(self) -> np.ndarray:
        return lorentz.polar(self.A2)

    @property
    def base_length(self) -> float:
        """Length of the side A1 P1 (base of the hypercycle)."""
        return math.acosh(1.0 / math.sqrt(1.0 - self.a ** 2))

    def vertices(self) -> dict[str, np.ndarray]:
        return {"A0": self.A0, "A1": self.A1, "P1": self.P1, "P0": self.P0}


def area2(domain: LambertDomain) -> float:
    """Area of the Lambert quadrilateral: three right angles and one zero angle."""
    return math.pi / 2


def lambert_defect_area(domain: LambertDomain) -> float:
    """Area recomputed as ``2 pi - sum of angles`` from the vertex coordinates."""
    d = domain
    angles = (lorentz.angle_at(d.A1, d.A0, d.P1),
              lorentz.angle_at(d.P1, d.A1, d.P0),
              lorentz.angle_at(d.P0, d.P1, d.A0))
    # the angle at the ideal vertex A0 is zero
    return 2.0 * math.pi - sum(angles)
