"""Planar primitives: directed angles, circumcircles, and exact sign predicates.

Angles come in two flavours.  ``angccw(a, b)`` is the counterclockwise
rotation taking the direction of ``a`` onto the direction of ``b``, in
``[0, 2*pi)``.  ``signed_angle`` folds that into ``(-pi, pi)`` and refuses
exactly antiparallel inputs, because downstream angle calculus treats the
half-turn as an ambiguous boundary case.

Sign predicates (``orientation``, ``in_circumcircle``) are exact: a float
determinant with a conservative error bound, falling back to rational
arithmetic when the filter is inconclusive.  Metric quantities (lengths,
radii, angles) are plain doubles compared against ``EPS_GEOM``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi

#: Default metric tolerance, in disk diameters.  Overridable per call site
#: or globally through the KISSGEO_TOLERANCE environment variable.
EPS_GEOM = 1e-9


def tolerance() -> float:
    """Metric tolerance currently in effect."""
    env = os.environ.get("KISSGEO_TOLERANCE")
    return float(env) if env else EPS_GEOM


class GeometryError(ValueError):
    pass


class ZeroVector(GeometryError):
    pass


class AmbiguousAntiparallel(GeometryError):
    """Signed angle of exactly pi requested; the open range excludes it."""


class DegenerateTriangle(GeometryError):
    pass


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise GeometryError(f"expected a planar point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GeometryError(f"non-finite coordinates: {a}")
    return a


def norm(v) -> float:
    v = np.asarray(v, dtype=float)
    return float(math.hypot(v[0], v[1]))


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = norm(v)
    if n == 0.0:
        raise ZeroVector("cannot normalize the zero vector")
    return v / n


def direction(angle: float) -> np.ndarray:
    """Unit vector at the given polar angle."""
    return np.array([math.cos(angle), math.sin(angle)])


def polar_angle(v) -> float:
    """Polar angle of a nonzero vector, in [0, 2*pi)."""
    v = np.asarray(v, dtype=float)
    if v[0] == 0.0 and v[1] == 0.0:
        raise ZeroVector("zero vector has no direction")
    return math.atan2(v[1], v[0]) % TWO_PI


def angccw(a, b) -> float:
    """Counterclockwise rotation taking direction a to direction b, in [0, 2*pi)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if (a[0] == 0.0 and a[1] == 0.0) or (b[0] == 0.0 and b[1] == 0.0):
        raise ZeroVector("angccw needs nonzero vectors")
    ang = math.atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1])
    return ang % TWO_PI


def signed_angle(a, b, atol: float | None = None) -> float:
    """Signed rotation from a to b in the open range (-pi, pi).

    Raises AmbiguousAntiparallel when the vectors are opposite within
    ``atol`` (radians), since neither +pi nor -pi is representable.
    """
    if atol is None:
        atol = tolerance()
    ccw = angccw(a, b)
    if abs(ccw - math.pi) <= atol:
        raise AmbiguousAntiparallel(f"angle {ccw} is a half turn within {atol}")
    return ccw if ccw < math.pi else ccw - TWO_PI


def signed_angle_closed(a, b) -> float:
    """Signed rotation from a to b in (-pi, pi]; a half turn maps to +pi.

    Non-erroring companion of ``signed_angle`` for the region angle
    calculus, where radially aligned configurations (e.g. the corner
    disks of the hexagonal lattice) land exactly on the half turn and
    the +pi branch keeps the cross-angle identities exact.
    """
    ccw = angccw(a, b)
    return ccw if ccw <= math.pi else ccw - TWO_PI


@dataclass(frozen=True)
class Circle:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (self.radius > 0.0):
            raise GeometryError(f"radius must be positive, got {self.radius}")


# ---------------------------------------------------------------------------
# Exact sign predicates.
#
# The float filter uses a conservative relative error bound; if |det| is
# below the bound the determinant is re-evaluated in exact rationals
# (binary doubles convert to Fraction losslessly).

_ORIENT_REL = 4e-16
_INCIRCLE_REL = 2e-15


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def orientation(p, q, r) -> int:
    """+1 for counterclockwise pqr, -1 for clockwise, 0 for collinear.  Exact."""
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    rx, ry = float(r[0]), float(r[1])
    l = (qx - px) * (ry - py)
    rr = (qy - py) * (rx - px)
    det = l - rr
    bound = _ORIENT_REL * (abs(l) + abs(rr))
    if abs(det) > bound:
        return _sign(det)
    fp = (Fraction(qx) - Fraction(px)) * (Fraction(ry) - Fraction(py))
    fr = (Fraction(qy) - Fraction(py)) * (Fraction(rx) - Fraction(px))
    return _sign(fp - fr)


def in_circumcircle(p, q, r, s) -> int:
    """Sign of the incircle determinant: for ccw pqr, +1 iff s is strictly
    inside the circumcircle, 0 if cocircular, -1 if outside.  Exact.

    Antisymmetric under odd permutations of p, q, r.  Raises
    DegenerateTriangle when p, q, r are collinear.
    """
    if orientation(p, q, r) == 0:
        raise DegenerateTriangle("in_circumcircle of collinear triple")
    sx, sy = float(s[0]), float(s[1])
    rows = []
    mags = []
    for t in (p, q, r):
        ax = float(t[0]) - sx
        ay = float(t[1]) - sy
        w = ax * ax + ay * ay
        rows.append((ax, ay, w))
        mags.append(abs(ax * ay) * w)
    (ax, ay, aw), (bx, by, bw), (cx, cy, cw) = rows
    det = (
        aw * (bx * cy - by * cx)
        - bw * (ax * cy - ay * cx)
        + cw * (ax * by - ay * bx)
    )
    bound = _INCIRCLE_REL * (
        aw * (abs(bx * cy) + abs(by * cx))
        + bw * (abs(ax * cy) + abs(ay * cx))
        + cw * (abs(ax * by) + abs(ay * bx))
    )
    if abs(det) > bound:
        return _sign(det)
    fx = [Fraction(float(t[0])) - Fraction(sx) for t in (p, q, r)]
    fy = [Fraction(float(t[1])) - Fraction(sy) for t in (p, q, r)]
    fw = [x * x + y * y for x, y in zip(fx, fy)]
    fdet = (
        fw[0] * (fx[1] * fy[2] - fy[1] * fx[2])
        - fw[1] * (fx[0] * fy[2] - fy[0] * fx[2])
        + fw[2] * (fx[0] * fy[1] - fy[0] * fx[1])
    )
    return _sign(fdet)


def circumcircle(p, q, r) -> Circle:
    """Circle through three non-collinear points."""
    p = as_point(p)
    q = as_point(q)
    r = as_point(r)
    if orientation(p, q, r) == 0:
        raise DegenerateTriangle("circumcircle of collinear points")
    bx, by = q - p
    cx, cy = r - p
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = p + np.array([ux, uy])
    return Circle(center, math.hypot(ux, uy))


def circumradius(p, q, r) -> float:
    return circumcircle(p, q, r).radius


def circumradii(points: np.ndarray, triples: np.ndarray) -> np.ndarray:
    """Circumradii for many index triples at once; inf for degenerate ones."""
    a = points[triples[:, 0]]
    b = points[triples[:, 1]]
    c = points[triples[:, 2]]
    ab = np.linalg.norm(b - a, axis=1)
    bc = np.linalg.norm(c - b, axis=1)
    ca = np.linalg.norm(a - c, axis=1)
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
        c[:, 0] - a[:, 0]
    )
    area2 = np.abs(cross)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = ab * bc * ca / (2.0 * area2)
    r[area2 == 0.0] = np.inf
    return r


def circle_intersections(c1, c2) -> list[np.ndarray]:
    """Intersection points of the unit circles centered at c1 and c2.

    Ordered so the first point lies on the left of the directed line
    c1 -> c2.  Empty for concentric or too-distant centers; a single
    point at exact external tangency (distance 2).
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    d = norm(c2 - c1)
    if d == 0.0 or d > 2.0:
        return []
    mid = 0.5 * (c1 + c2)
    h2 = 1.0 - 0.25 * d * d
    if h2 <= 0.0:
        return [mid]
    h = math.sqrt(h2)
    u = (c2 - c1) / d
    n = np.array([-u[1], u[0]])
    return [mid + h * n, mid - h * n]
