"""Packings of unit-diameter disks: tangency layers, the parent tree,
its plane-tree boundary traversal, and the traversal's regions.

Conventions: coordinates are in disk diameters and the designated source
disk sits at the origin (the certification pipeline translates inputs
accordingly).  Two disks touch when their center distance falls in the
band ``[1 - eps, 1 + eps]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.prepared import prep

from .geometry import TWO_PI, angccw, as_point, norm, polar_angle, tolerance

INF = math.inf


class PackingError(ValueError):
    pass


class Overlap(PackingError):
    def __init__(self, i: int, j: int, distance: float):
        super().__init__(f"disks {i} and {j} overlap: center distance {distance}")
        self.i, self.j, self.distance = i, j, distance


class DuplicateCenter(PackingError):
    pass


class BadIndex(PackingError):
    pass


class RadiusTooLarge(PackingError):
    pass


class Orphan(PackingError):
    pass


class EmptyTree(PackingError):
    pass


class TooFewTwoDisks(PackingError):
    pass


class AtOrigin(PackingError):
    pass


@dataclass(frozen=True)
class PackingInstance:
    """Finite set of unit-diameter disk centers, optionally with a source."""

    centers: np.ndarray
    source: int | None = None

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float)
        if c.ndim != 2 or c.shape[1] != 2:
            raise PackingError(f"centers must be (n, 2), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise PackingError("non-finite center coordinates")
        object.__setattr__(self, "centers", c)
        if self.source is not None and not (0 <= self.source < len(c)):
            raise BadIndex(f"source index {self.source} out of range")

    def __len__(self) -> int:
        return len(self.centers)

    def translated(self, offset) -> "PackingInstance":
        return PackingInstance(self.centers - np.asarray(offset, float), self.source)


def pairwise_distances(centers: np.ndarray) -> np.ndarray:
    diff = centers[:, None, :] - centers[None, :, :]
    return np.linalg.norm(diff, axis=2)


def validate_packing(p: PackingInstance, eps: float | None = None) -> PackingInstance:
    """Check the packing condition: pairwise center distances >= 1 - eps."""
    if eps is None:
        eps = tolerance()
    d = pairwise_distances(p.centers)
    n = len(p)
    iu = np.triu_indices(n, k=1)
    if n > 1:
        bad = np.argwhere(d[iu] < 1.0 - eps)
        if len(bad):
            k = int(bad[0][0])
            i, j = int(iu[0][k]), int(iu[1][k])
            if d[i, j] <= eps:
                raise DuplicateCenter(f"disks {i} and {j} share a center")
            raise Overlap(i, j, float(d[i, j]))
    return p


def tangent_pairs(p: PackingInstance, eps: float | None = None) -> list[tuple[int, int]]:
    if eps is None:
        eps = tolerance()
    d = pairwise_distances(p.centers)
    n = len(p)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if 1.0 - eps <= d[i, j] <= 1.0 + eps:
                out.append((i, j))
    return out


def adjacency(p: PackingInstance, eps: float | None = None) -> list[list[int]]:
    nbrs: list[list[int]] = [[] for _ in range(len(p))]
    for i, j in tangent_pairs(p, eps):
        nbrs[i].append(j)
        nbrs[j].append(i)
    return nbrs


@dataclass(frozen=True)
class KissingProfile:
    """BFS layers of the tangency graph from the source disk."""

    source: int
    dist: tuple
    layers: tuple
    radius: float  # integer-valued, or inf when some disk is unreachable

    def two_disks(self) -> list[int]:
        return list(self.layers[2]) if len(self.layers) > 2 else []


def kissing_profile(p: PackingInstance, source: int) -> KissingProfile:
    if not (0 <= source < len(p)):
        raise BadIndex(f"source {source} out of range")
    nbrs = adjacency(p)
    dist = [INF] * len(p)
    dist[source] = 0
    frontier = [source]
    layers = [[source]]
    while frontier:
        nxt = []
        for v in frontier:
            for w in nbrs[v]:
                if dist[w] is INF:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        if nxt:
            layers.append(sorted(nxt))
        frontier = nxt
    radius = INF if any(d is INF for d in dist) else float(max(dist))
    return KissingProfile(source, tuple(dist), tuple(tuple(l) for l in layers), radius)


def choose_source(p: PackingInstance) -> int:
    """Index minimizing the kissing radius, ties broken by lowest index."""
    best, best_r = 0, INF
    for i in range(len(p)):
        r = kissing_profile(p, i).radius
        if r < best_r:
            best, best_r = i, r
    return best


def parent_map(p: PackingInstance, prof: KissingProfile) -> list[int | None]:
    """Deterministic parent per non-source disk: among tangent previous-layer
    candidates, the one whose center direction is the smallest ccw rotation
    onto the child's direction; ties by lowest index."""
    nbrs = adjacency(p)
    parent: list[int | None] = [None] * len(p)
    for v in range(len(p)):
        d = prof.dist[v]
        if d in (0, INF):
            continue
        cands = [u for u in nbrs[v] if prof.dist[u] == d - 1]
        if not cands:
            raise Orphan(f"disk {v} has no tangent disk in layer {d - 1}")
        if len(cands) == 1:
            parent[v] = cands[0]
        else:
            cv = p.centers[v]
            parent[v] = min(
                cands, key=lambda u: (angccw(p.centers[u], cv), u)
            )
    return parent


@dataclass
class PruneResult:
    packing: PackingInstance
    removed_centers: np.ndarray
    kept_indices: list[int]


def prune(p: PackingInstance, prof: KissingProfile) -> PruneResult:
    """Drop all 3-disks and childfree 1-disks, keeping everything else.

    Child relations come from the deterministic parent assignment; the
    removed centers are recorded because they must later land on the
    boundary curve of the remaining packing.
    """
    if prof.radius > 3:
        raise RadiusTooLarge(f"kissing radius {prof.radius} exceeds 3")
    parent = parent_map(p, prof)
    has_child = [False] * len(p)
    for v, u in enumerate(parent):
        if u is not None and prof.dist[v] <= 2:
            has_child[u] = True
    keep = []
    for v in range(len(p)):
        d = prof.dist[v]
        if d == 3 or (d == 1 and not has_child[v]):
            continue
        keep.append(v)
    removed = [v for v in range(len(p)) if v not in set(keep)]
    new_source = keep.index(prof.source)
    return PruneResult(
        packing=PackingInstance(p.centers[keep], new_source),
        removed_centers=p.centers[removed].copy(),
        kept_indices=keep,
    )


@dataclass
class PTree:
    """Plane tree on disk centers with unit parent->child edges."""

    packing: PackingInstance
    root: int
    parent: list[int | None]
    depth: list[int]

    @property
    def centers(self) -> np.ndarray:
        return self.packing.centers

    @cached_property
    def neighbors(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(len(self.parent))]
        for v, u in enumerate(self.parent):
            if u is not None:
                nbrs[v].append(u)
                nbrs[u].append(v)
        return nbrs

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v, u in enumerate(self.parent) if u is not None]

    def leaves(self) -> list[int]:
        return [v for v in range(len(self.parent)) if len(self.neighbors[v]) == 1]


def assign_parents(p: PackingInstance, prof: KissingProfile) -> PTree:
    """Parent tree of a pruned packing (kissing radius at most 2)."""
    if prof.radius > 2:
        raise RadiusTooLarge(f"expected a pruned packing, radius {prof.radius}")
    parent = parent_map(p, prof)
    depth = [int(d) if d is not INF else -1 for d in prof.dist]
    tree = PTree(packing=p, root=prof.source, parent=parent, depth=depth)
    for u, v in tree.edges:
        d = norm(p.centers[u] - p.centers[v])
        if abs(d - 1.0) > 10 * tolerance():
            raise PackingError(f"tree edge ({u},{v}) has length {d}")
    return tree


@dataclass(frozen=True)
class PTraversal:
    """Cyclic vertex-occurrence sequence of the plane-tree face walk."""

    occ: tuple
    tree: PTree

    @property
    def n(self) -> int:
        return len(self.occ)

    def positions_of(self, v: int) -> list[int]:
        return [k for k, w in enumerate(self.occ) if w == v]


def _walk_directed_edges(
    starts: dict, edge_angles: dict, nbrs: list[list[int]]
) -> list[tuple[int, int]]:
    """Chase directed edges, always turning as far counterclockwise as
    possible, which walks the outer boundary of the tree ccw."""
    first = min(starts)
    walk = [first]
    seen = {first}
    cur = first
    while True:
        u, v = cur
        back = edge_angles[(v, u)]
        best = None
        for w in nbrs[v]:
            delta = (edge_angles[(v, w)] - back) % TWO_PI
            if delta == 0.0:
                delta = TWO_PI
            key = (delta, w)
            if best is None or key < best[0]:
                best = (key, (v, w))
        cur = best[1]
        if cur == first:
            break
        if cur in seen:
            raise PackingError("face walk revisited a directed edge prematurely")
        seen.add(cur)
        walk.append(cur)
    return walk


def boundary_traversal(tree: PTree) -> PTraversal:
    """Counterclockwise face walk of the plane tree.

    Each vertex occurs once per incident edge; the cycle is rotated so it
    starts at the deepest-layer leaf with lexicographically smallest center.
    """
    if not tree.edges:
        raise EmptyTree("tree has no edges")
    nbrs = tree.neighbors
    edge_angles = {}
    for u in range(len(nbrs)):
        for v in nbrs[u]:
            edge_angles[(u, v)] = polar_angle(tree.centers[v] - tree.centers[u])
    directed = {e: None for e in edge_angles}
    walk = _walk_directed_edges(directed, edge_angles, nbrs)
    if len(walk) != len(edge_angles):
        raise PackingError("plane tree face walk did not close over all edges")
    occ = [v for (_, v) in walk]
    # Canonical start: deepest-layer vertex, lexicographic center order.
    max_depth = max(tree.depth)
    cands = [v for v in set(occ) if tree.depth[v] == max_depth]
    start_v = min(cands, key=lambda v: (tree.centers[v][0], tree.centers[v][1], v))
    k = occ.index(start_v)
    occ = occ[k:] + occ[:k]
    return PTraversal(occ=tuple(occ), tree=tree)


def farthest_point(c) -> np.ndarray:
    """Farthest point of the unit disk at c from the origin: c * (1 + 1/|c|)."""
    c = as_point(c)
    r = norm(c)
    if r <= tolerance():
        raise AtOrigin("farthest point undefined for a disk at the origin")
    return c * (1.0 + 1.0 / r)


@dataclass
class Region:
    """Closed region between two consecutive 2-disk occurrences.

    Bounded by the polyline c_i .. c_j (clockwise as seen from inside)
    and the two outward rays through the farthest points f_i, f_j.
    """

    occ_i: int
    occ_j: int
    members: list[int]  # vertex ids, traversal order c_i .. c_j
    centers: np.ndarray  # (m, 2) matching members
    k01: int  # source occurrences in the subsegment (0 or 1)
    source_vertex: int

    _poly_cache: dict = field(default_factory=dict, repr=False)

    @property
    def c_i(self) -> np.ndarray:
        return self.centers[0]

    @property
    def c_j(self) -> np.ndarray:
        return self.centers[-1]

    @property
    def f_i(self) -> np.ndarray:
        return farthest_point(self.centers[0])

    @property
    def f_j(self) -> np.ndarray:
        return farthest_point(self.centers[-1])

    @property
    def parent_i(self) -> np.ndarray:
        return self.centers[1]

    @property
    def parent_j(self) -> np.ndarray:
        return self.centers[-2]

    def polygon(self, tol: float = 0.0):
        key = round(tol, 15)
        if key not in self._poly_cache:
            far = 10.0 + float(np.max(np.linalg.norm(self.centers, axis=1)))
            ci, cj = self.centers[0], self.centers[-1]
            ti, tj = polar_angle(ci), polar_angle(cj)
            alpha = (tj - ti) % TWO_PI
            if alpha == 0.0:
                alpha = TWO_PI
            steps = max(2, int(math.ceil(alpha / 0.05)))
            theta = ti + np.linspace(0.0, alpha, steps)
            arc = far * np.stack([np.cos(theta), np.sin(theta)], axis=1)
            shell = [ci, ci + far * ci / norm(ci)]
            shell += list(arc[1:-1])
            shell += [cj + far * cj / norm(cj)]
            shell += [self.centers[k] for k in range(len(self.centers) - 1, 0, -1)]
            poly = Polygon(shell)
            if not poly.is_valid:
                poly = poly.buffer(0)
            if tol > 0.0:
                poly = poly.buffer(tol)
            self._poly_cache[key] = (poly, prep(poly))
        return self._poly_cache[key]

    def contains(self, points, tol: float | None = None) -> np.ndarray:
        """Closed-region membership for an (m, 2) array of points."""
        if tol is None:
            tol = 1e-9
        poly, _ = self.polygon(tol)
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return shapely.contains_xy(poly, pts[:, 0], pts[:, 1])

    def contains_point(self, point, tol: float | None = None) -> bool:
        return bool(self.contains(np.asarray(point, float)[None, :], tol)[0])


def region_contains(region: Region, point, tol: float | None = None) -> bool:
    return region.contains_point(point, tol)


def subsegments(traversal: PTraversal, prof: KissingProfile | None = None) -> list[Region]:
    """One region per consecutive pair of 2-disk occurrences in the walk."""
    tree = traversal.tree
    occ = list(traversal.occ)
    two_positions = [k for k, v in enumerate(occ) if tree.depth[v] == 2]
    if len(two_positions) < 2:
        raise TooFewTwoDisks(
            f"need at least two 2-disks, found {len(two_positions)}"
        )
    n = len(occ)
    regions = []
    for a, b in zip(two_positions, two_positions[1:] + [two_positions[0] + n]):
        idx = [k % n for k in range(a, b + 1)]
        members = [occ[k] for k in idx]
        if len(members) not in (3, 5):
            raise PackingError(
                f"subsegment between occurrences {a} and {b % n} has "
                f"{len(members)} disks; expected 3 or 5"
            )
        k01 = sum(1 for v in members if v == tree.root)
        regions.append(
            Region(
                occ_i=a,
                occ_j=b % n,
                members=members,
                centers=tree.centers[members].copy(),
                k01=k01,
                source_vertex=tree.root,
            )
        )
    return regions
