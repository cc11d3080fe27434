"""Delaunay triangulations, the small-circumradius face complex E, and
its boundary walk.

E is the union of the parent-tree drawing with every Delaunay face of
circumradius strictly below 1.  Its counterclockwise boundary walk tells
which disks contribute to the boundary of the union of unit-radius disks
inside each region; that combinatorial answer is cross-validated against
a direct arc-coverage computation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.spatial
from shapely.geometry import Polygon

from . import arcs
from .geometry import (
    TWO_PI,
    DegenerateTriangle,
    angccw,
    circumradii,
    circumradius,
    in_circumcircle,
    orientation,
    polar_angle,
    tolerance,
)
from .packing import PTree, Region

__all__ = [
    "Triangulation",
    "EComplex",
    "AllCollinear",
    "NotConvex",
    "TreeEdgeNotInDelaunay",
    "NotSimplyConnected",
    "InvolvementMismatch",
    "CoverageViolation",
    "delaunay",
    "greedy_circumradius_triangulation",
    "no_obtuse_flip_check",
    "build_E",
    "simply_connected",
    "boundary_walk",
    "involved_disks",
    "arc_coverage_checks",
]


class DelaunayError(ValueError):
    pass


class AllCollinear(DelaunayError):
    pass


class NotConvex(DelaunayError):
    pass


class TreeEdgeNotInDelaunay(DelaunayError):
    pass


class NotSimplyConnected(DelaunayError):
    pass


class InvolvementMismatch(DelaunayError):
    def __init__(self, k, detail=""):
        super().__init__(f"involvement cross-validation failed at disk {k}: {detail}")
        self.k = k


class CoverageViolation(DelaunayError):
    pass


def _ccw_face(points: np.ndarray, face) -> tuple[int, int, int]:
    a, b, c = face
    if orientation(points[a], points[b], points[c]) < 0:
        a, b, c = a, c, b
    # Canonical rotation: smallest index first.
    k = int(np.argmin([a, b, c]))
    return tuple(np.roll([a, b, c], -k))


@dataclass
class Triangulation:
    points: np.ndarray
    faces: list[tuple[int, int, int]]

    @cached_property
    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.faces:
            for u, v in ((a, b), (b, c), (c, a)):
                out.add((min(u, v), max(u, v)))
        return out

    def face_set(self) -> set[tuple[int, int, int]]:
        return set(self.faces)


def delaunay(points) -> Triangulation:
    """Delaunay triangulation via the standard divide-and-conquer library
    routine; serves as an independent oracle for the greedy construction."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        raise AllCollinear("need at least 3 points")
    try:
        tri = scipy.spatial.Delaunay(pts)
    except scipy.spatial.QhullError as exc:
        raise AllCollinear(str(exc)) from exc
    faces = sorted(_ccw_face(pts, f) for f in tri.simplices)
    return Triangulation(points=pts, faces=faces)


def _hull_vertex_count(pts: np.ndarray) -> int:
    """Points on the convex hull boundary, including collinear ones (every
    triangulation of the set has 2n - 2 - h faces)."""
    hull = scipy.spatial.ConvexHull(pts).vertices
    k = len(hull)
    strictly_inside = 0
    for i in range(len(pts)):
        if i in hull:
            continue
        if all(
            orientation(pts[hull[t]], pts[hull[(t + 1) % k]], pts[i]) > 0
            for t in range(k)
        ):
            strictly_inside += 1
    return len(pts) - strictly_inside


def greedy_circumradius_triangulation(points) -> Triangulation:
    """Triangulate by admitting triangles in nondecreasing circumradius order.

    A candidate is added when no other point lies strictly inside it and
    its interior is disjoint from everything admitted so far.  The result
    satisfies the empty-circumcircle property; ties between equal radii
    break lexicographically on the vertex triple.
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 3:
        raise AllCollinear("need at least 3 points")
    triples = np.array(list(itertools.combinations(range(n), 3)))
    radii = circumradii(pts, triples)
    finite = np.isfinite(radii)
    if not finite.any():
        raise AllCollinear("all point triples are collinear")
    order = np.lexsort((triples[:, 2], triples[:, 1], triples[:, 0], radii))
    target = 2 * n - 2 - _hull_vertex_count(pts)
    faces: list[tuple[int, int, int]] = []
    union = None
    area_tol = 1e-12
    for k in order:
        if len(faces) == target:
            break
        if not finite[k]:
            break
        a, b, c = (int(i) for i in triples[k])
        face = _ccw_face(pts, (a, b, c))
        if _has_interior_point(pts, face):
            continue
        poly = Polygon([pts[face[0]], pts[face[1]], pts[face[2]]])
        if union is not None and union.intersection(poly).area > area_tol:
            continue
        faces.append(face)
        union = poly if union is None else union.union(poly)
    if len(faces) != target:
        raise DelaunayError(
            f"greedy construction produced {len(faces)} faces, expected {target}"
        )
    return Triangulation(points=pts, faces=sorted(faces))


def _has_interior_point(pts: np.ndarray, face) -> bool:
    a, b, c = (pts[i] for i in face)

    def cross(u, w):
        return u[0] * w[:, 1] - u[1] * w[:, 0]

    d1 = cross(b - a, pts - a)
    d2 = cross(c - b, pts - b)
    d3 = cross(a - c, pts - c)
    scale = max(1.0, float(np.max(np.abs(pts))))
    near = 1e-12 * scale * scale
    strict = (d1 > near) & (d2 > near) & (d3 > near)
    strict[list(face)] = False
    if strict.any():
        return True
    # Points in the ambiguity band: settle with the exact predicate.
    fuzzy = (d1 > -near) & (d2 > -near) & (d3 > -near) & ~strict
    fuzzy[list(face)] = False
    for i in np.nonzero(fuzzy)[0]:
        s = pts[i]
        if (
            orientation(a, b, s) > 0
            and orientation(b, c, s) > 0
            and orientation(c, a, s) > 0
        ):
            return True
    return False


def empty_circumcircle_violations(tri: Triangulation) -> list[tuple]:
    """All (face, point) pairs with a point strictly inside a circumcircle."""
    bad = []
    for face in tri.faces:
        a, b, c = (tri.points[i] for i in face)
        for s in range(len(tri.points)):
            if s in face:
                continue
            if in_circumcircle(a, b, c, tri.points[s]) > 0:
                bad.append((face, s))
    return bad


def no_obtuse_flip_check(p, q, r, s) -> bool:
    """For a convex quad pqrs split along pr into Delaunay faces pqr and rsp:
    if R(pqr) < 1 <= R(rsp), the angle at s must be acute."""
    quad = [np.asarray(t, float) for t in (p, q, r, s)]
    signs = [
        orientation(quad[i], quad[(i + 1) % 4], quad[(i + 2) % 4]) for i in range(4)
    ]
    if 0 in signs or len(set(signs)) != 1:
        raise NotConvex("pqrs is not strictly convex")
    r_pqr = circumradius(quad[0], quad[1], quad[2])
    r_rsp = circumradius(quad[2], quad[3], quad[0])
    if not (r_pqr < 1.0 <= r_rsp):
        return True
    angle_at_s = angccw(quad[2] - quad[3], quad[0] - quad[3])
    angle_at_s = min(angle_at_s, TWO_PI - angle_at_s)
    return angle_at_s < math.pi / 2.0


def _radius_lt1(pts: np.ndarray, face) -> bool:
    """Strict circumradius < 1, exact in the ambiguous band around 1."""
    a, b, c = (pts[i] for i in face)
    try:
        r = circumradius(a, b, c)
    except DegenerateTriangle:
        return False
    if abs(r - 1.0) > 1e-9:
        return r < 1.0
    # R^2 = (|ab| |bc| |ca|)^2 / (4 * cross)^2 compared to 1 in rationals.
    fa = [Fraction(float(x)) for x in a]
    fb = [Fraction(float(x)) for x in b]
    fc = [Fraction(float(x)) for x in c]
    ab2 = (fb[0] - fa[0]) ** 2 + (fb[1] - fa[1]) ** 2
    bc2 = (fc[0] - fb[0]) ** 2 + (fc[1] - fb[1]) ** 2
    ca2 = (fa[0] - fc[0]) ** 2 + (fa[1] - fc[1]) ** 2
    cross = (fb[0] - fa[0]) * (fc[1] - fa[1]) - (fb[1] - fa[1]) * (fc[0] - fa[0])
    return ab2 * bc2 * ca2 < 4 * cross * cross


@dataclass
class EComplex:
    """Tree edges plus small (circumradius < 1) Delaunay faces."""

    points: np.ndarray
    tree_edges: list[tuple[int, int]]
    small_faces: list[tuple[int, int, int]]
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        if not self.edges:
            es = {(min(u, v), max(u, v)) for u, v in self.tree_edges}
            for a, b, c in self.small_faces:
                for u, v in ((a, b), (b, c), (c, a)):
                    es.add((min(u, v), max(u, v)))
            self.edges = es

    @cached_property
    def vertices(self) -> list[int]:
        vs = set()
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return sorted(vs)

    @cached_property
    def boundary(self) -> tuple:
        return boundary_walk(self)


def build_E(tri: Triangulation, tree: PTree) -> EComplex:
    """Assemble E from the tree edges and the strict-radius-<1 faces."""
    tri_edges = tri.edges
    tree_edges = []
    for u, v in tree.edges:
        key = (min(u, v), max(u, v))
        if key not in tri_edges:
            raise TreeEdgeNotInDelaunay(f"tree edge {key} absent from triangulation")
        tree_edges.append(key)
    small = [f for f in tri.faces if _radius_lt1(tri.points, f)]
    small.sort(key=lambda f: (circumradius(*(tri.points[i] for i in f)), f))
    return EComplex(points=tri.points, tree_edges=tree_edges, small_faces=small)


def _components(vertices, edges) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in vertices})


def euler_characteristic(e: EComplex) -> int:
    return len(e.vertices) - len(e.edges) + len(e.small_faces)


def simply_connected(e: EComplex) -> bool:
    """Connected with Euler characteristic 1 (equivalently, the complement
    of E in the plane is connected)."""
    if not e.vertices:
        return True
    return _components(e.vertices, e.edges) == 1 and euler_characteristic(e) == 1


def boundary_walk(e: EComplex) -> tuple:
    """Counterclockwise traversal of the boundary of E.

    Tree-only edges are walked from both sides; edges of small faces are
    walked once with the filled face on the left.  Returns the cyclic
    vertex sequence, rotated to start at the lexicographically smallest
    boundary vertex.
    """
    face_left = set()
    for a, b, c in e.small_faces:
        face_left.update({(a, b), (b, c), (c, a)})
    boundary_edges = set()
    for u, v in e.edges:
        for d in ((u, v), (v, u)):
            if (d[1], d[0]) not in face_left:
                boundary_edges.add(d)
    if not boundary_edges:
        raise NotSimplyConnected("complex has no boundary edges")
    nbrs: dict[int, list[int]] = {}
    ang = {}
    for u, v in e.edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
        ang[(u, v)] = polar_angle(e.points[v] - e.points[u])
        ang[(v, u)] = polar_angle(e.points[u] - e.points[v])
    start = min(boundary_edges)
    walk = [start]
    seen = {start}
    cur = start
    while True:
        u, v = cur
        back = ang[(v, u)]
        best = None
        for w in nbrs[v]:
            if (v, w) not in boundary_edges:
                continue
            delta = (ang[(v, w)] - back) % TWO_PI
            if delta == 0.0:
                delta = TWO_PI
            key = (delta, w)
            if best is None or key < best[0]:
                best = (key, (v, w))
        if best is None:
            raise NotSimplyConnected("boundary walk reached a dead end")
        cur = best[1]
        if cur == start:
            break
        if cur in seen:
            raise NotSimplyConnected("boundary walk closed early")
        seen.add(cur)
        walk.append(cur)
    if len(walk) != len(boundary_edges):
        raise NotSimplyConnected(
            f"boundary walk covered {len(walk)} of {len(boundary_edges)} edges"
        )
    occ = [v for (_, v) in walk]
    k = min(
        range(len(occ)),
        key=lambda t: (e.points[occ[t]][0], e.points[occ[t]][1], occ[t]),
    )
    occ = occ[k:] + occ[:k]
    return tuple(occ)


def _walk_involved(region: Region, e: EComplex) -> list[int]:
    """Region's involved disks read off the boundary walk of E."""
    occ = e.boundary
    n = len(occ)
    members = set(region.members)
    vi, vj = region.members[0], region.members[-1]
    two_disks = {region.members[0], region.members[-1]}
    best = None
    for a in range(n):
        if occ[a] != vi:
            continue
        for ln in range(1, n + 1):
            b = (a + ln) % n
            if occ[b] == vj:
                stretch = [occ[(a + t) % n] for t in range(ln + 1)]
                interior = stretch[1:-1]
                if all(v in members for v in interior) and not any(
                    v in two_disks for v in interior
                ):
                    if best is None or ln < best[0]:
                        best = (ln, stretch)
                break
    if best is None:
        raise InvolvementMismatch(vi, "no boundary-walk stretch matches the region")
    # Keep duplicate occurrences: a disk exposed on both sides of the
    # source contributes two separate boundary arcs.
    return list(best[1])


def _direct_involved(region: Region, all_centers: np.ndarray) -> set[int]:
    """Disks whose boundary meets the disk-union boundary inside the region."""
    out = set()
    for v, c in zip(region.members, region.centers):
        others = np.array(
            [p for t, p in enumerate(all_centers) if not np.allclose(p, c)]
        )
        for s, ln in arcs.uncovered_intervals(c, others, min_length=1e-9):
            margin = min(ln / 4.0, 1e-7)
            pts = arcs.sample_interval(c, (s + margin, ln - 2 * margin), count=128)
            if region.contains(pts, tol=1e-9).any():
                out.add(v)
                break
    return out


def involved_disks(region: Region, e: EComplex, all_centers=None) -> list[int]:
    """Ordered involved-disk list for a region, computed from the boundary
    walk and cross-validated against direct arc-coverage sampling."""
    walk_list = _walk_involved(region, e)
    centers = e.points if all_centers is None else np.asarray(all_centers, float)
    direct = _direct_involved(region, centers)
    # The region endpoints always contribute boundary near f_i / f_j.
    direct |= {region.members[0], region.members[-1]}
    if set(walk_list) != direct:
        extra = direct - set(walk_list)
        missing = set(walk_list) - direct
        k = (extra | missing).pop()
        raise InvolvementMismatch(
            k, f"walk={sorted(set(walk_list))} direct={sorted(direct)}"
        )
    return walk_list


@dataclass
class CoverageReport:
    face_checks: int
    walk_checks: int
    witnesses: list  # (vertex, point) per boundary-walk position


def arc_coverage_checks(e: EComplex) -> CoverageReport:
    """Two sanity checks on the complex geometry.

    For every small face pqr and each vertex q, the unit-circle arc of the
    triangle's angular sector at q must be covered by the open unit disks
    at p and r.  For every boundary-walk vertex, some point of its outward
    arc must escape both neighbouring disks (the walk really does expose
    each listed disk).
    """
    face_checks = 0
    for face in e.small_faces:
        for t in range(3):
            q = face[t]
            p = face[(t + 1) % 3]
            r = face[(t + 2) % 3]
            cq, cp, cr = e.points[q], e.points[p], e.points[r]
            start = polar_angle(cp - cq)
            sweep = angccw(cp - cq, cr - cq)
            if sweep > math.pi:
                start = polar_angle(cr - cq)
                sweep = TWO_PI - sweep
            sector = (start, sweep)
            covered = []
            for other in (cp, cr):
                iv = arcs.coverage_interval(cq, other)
                if iv is not None:
                    covered.append(iv)
            for gap in arcs.complement(covered, min_length=1e-9):
                if arcs.intersect_interval(sector, gap):
                    overlap = arcs.intersect_interval(sector, gap)
                    if arcs.total_length(overlap) > 1e-9:
                        raise CoverageViolation(
                            f"sector arc at vertex {q} of face {face} "
                            f"not covered by its neighbours"
                        )
            face_checks += 1
    occ = e.boundary
    n = len(occ)
    witnesses = []
    for t in range(n):
        v = occ[t]
        prev_v = occ[(t - 1) % n]
        next_v = occ[(t + 1) % n]
        cv = e.points[v]
        d_prev = e.points[prev_v] - cv
        d_next = e.points[next_v] - cv
        sweep = angccw(d_prev, d_next)
        if sweep == 0.0:
            sweep = TWO_PI  # pendant edge: the full outward circle
        outward = (polar_angle(d_prev), sweep)
        covered = []
        for other in (e.points[prev_v], e.points[next_v]):
            iv = arcs.coverage_interval(cv, other)
            if iv is not None:
                covered.append(iv)
        best = None
        for gap in arcs.complement(covered, min_length=1e-9):
            for s, ln in arcs.intersect_interval(outward, gap):
                if best is None or ln > best[0]:
                    best = (ln, s + ln / 2.0)
        if best is None:
            raise CoverageViolation(
                f"boundary vertex {v} (walk position {t}) fully covered "
                f"by its walk neighbours"
            )
        theta = best[1]
        witnesses.append((v, cv + np.array([math.cos(theta), math.sin(theta)])))
    return CoverageReport(face_checks=face_checks, walk_checks=n, witnesses=witnesses)
