"""End-to-end certification pipeline for packings of kissing radius 3.

Given a valid packing, prune the outer layer, build the parent tree and
its traversal, decompose the plane into regions, derive the boundary
curve of the disk union, and verify every length/angle inequality down
to the final certificate  1 + C1 + C2 + |gamma| / (pi/3) <= 37.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import curves, delaunay, packing
from .curves import PI_3, InequalityViolation
from .geometry import tolerance
from .packing import PackingInstance

FALLBACK_BOUND = 25  # rough bound when fewer than two 2-disks survive
MAX_COUNT = 37
LEMMA_BOUND = 36.0
SLACK = 1e-6


class GenerationTimeout(RuntimeError):
    pass


def hex_packing(n: int) -> PackingInstance:
    """Triangular-lattice packing of all points within lattice distance n
    of the origin; 1 + 3n(n+1) disks of kissing radius exactly n."""
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.5, math.sqrt(3.0) / 2.0])
    pts = []
    for a in range(-n, n + 1):
        for b in range(-n, n + 1):
            if (abs(a) + abs(b) + abs(a + b)) // 2 <= n:
                pts.append(a * e1 + b * e2)
    pts.sort(key=lambda p: (round(p[0], 9), round(p[1], 9)))
    centers = np.array(pts)
    source = int(np.argmin(np.linalg.norm(centers, axis=1)))
    return PackingInstance(centers=centers, source=source)


@dataclass
class RegionRecord:
    region: packing.Region
    involved: list[int]
    curve: curves.SparseCurve
    angles: curves.RegionAngles
    jumps: curves.JumpProfile
    verdict: curves.RegionVerdict

    @property
    def length(self) -> float:
        return self.curve.length


@dataclass
class CertReport:
    count: int
    n: int
    c1: int = 0
    c2: int = 0
    removed: int = 0
    fallback_used: bool = False
    gamma_length: float = 0.0
    lemma_value: float = 0.0
    sum_phi: float = 0.0
    sum_alpha: float = 0.0
    sum_psi: float = 0.0
    total_bound: int = MAX_COUNT
    bound_ok: bool = False
    regions: list = field(default_factory=list)  # RegionRecord
    spacing: curves.SpacingVerdict | None = None
    gamma: curves.SparseCurve | None = None
    pruned: PackingInstance | None = None
    removed_centers: np.ndarray | None = None
    complex: delaunay.EComplex | None = None
    coverage: delaunay.CoverageReport | None = None

    @property
    def c0(self) -> int:
        return 1

    @property
    def total_value(self) -> float:
        return 1.0 + self.lemma_value


def certify(p: PackingInstance, n: int = 3) -> CertReport:
    """Run the full pipeline and return the certificate report.

    Inequality violations (which would contradict the count bound) are
    raised as InequalityViolation, never clamped or repaired.
    """
    packing.validate_packing(p)
    source = p.source if p.source is not None else packing.choose_source(p)
    p = PackingInstance(p.centers, source).translated(p.centers[source])
    prof = packing.kissing_profile(p, source)
    if prof.radius > 3:
        raise packing.RadiusTooLarge(
            f"kissing radius {prof.radius} is beyond the certified range"
        )
    pruned = packing.prune(p, prof)
    prof2 = packing.kissing_profile(pruned.packing, pruned.packing.source)
    report = CertReport(count=len(p), n=n)
    report.pruned = pruned.packing
    report.removed_centers = pruned.removed_centers
    report.removed = len(pruned.removed_centers)
    report.c1 = len(prof2.layers[1]) if len(prof2.layers) > 1 else 0
    report.c2 = len(prof2.layers[2]) if len(prof2.layers) > 2 else 0
    if report.c2 < 2:
        report.fallback_used = True
        report.total_bound = FALLBACK_BOUND
        report.bound_ok = report.count <= FALLBACK_BOUND
        if not report.bound_ok:
            raise InequalityViolation("fallback_count", FALLBACK_BOUND - report.count)
        return report
    tree = packing.assign_parents(pruned.packing, prof2)
    traversal = packing.boundary_traversal(tree)
    regions = packing.subsegments(traversal, prof2)
    ecomplex = _build_complex(tree)
    report.complex = ecomplex
    report.coverage = delaunay.arc_coverage_checks(ecomplex)
    centers_all = pruned.packing.centers
    records = []
    for region in regions:
        involved = delaunay.involved_disks(region, ecomplex, centers_all)
        curve = curves.construct_gamma_ij(region, involved)
        curves.validate_curve(curve)
        jumps = curves.direction_jumps(curve)
        angles = curves.region_angles(region)
        verdict = curves.check_region_inequality(
            region, angles, jumps, involved, curve.length
        )
        # The rotation identity |gamma_ij| = Delta + alpha, exact.
        ident = abs(curve.length - (jumps.delta + angles.alpha))
        verdict.add("length_identity", -ident)
        bad = verdict.violations()
        if bad:
            raise InequalityViolation(bad[0].name, bad[0].slack)
        records.append(
            RegionRecord(
                region=region, involved=involved, curve=curve,
                angles=angles, jumps=jumps, verdict=verdict,
            )
        )
    report.regions = records
    gamma = curves.concatenate([r.curve for r in records])
    curves.validate_curve(gamma)
    report.gamma = gamma
    report.gamma_length = gamma.length
    report.sum_phi = float(sum(r.angles.phi for r in records))
    report.sum_alpha = float(sum(r.angles.alpha for r in records))
    report.sum_psi = float(
        sum(r.angles.psi for r in records if r.angles.psi is not None)
    )
    report.spacing = curves.excluded_disk_count_bound(gamma, pruned.removed_centers)
    if not report.spacing.ok:
        raise InequalityViolation("removed_center_spacing", report.spacing.min_gap - PI_3)
    report.lemma_value = report.c1 + report.c2 + gamma.length / PI_3
    report.bound_ok = (
        report.lemma_value <= LEMMA_BOUND + SLACK and report.count <= MAX_COUNT
    )
    if not report.bound_ok:
        raise InequalityViolation("lemma_value", LEMMA_BOUND - report.lemma_value)
    return report


def _build_complex(tree: packing.PTree) -> delaunay.EComplex:
    """Delaunay-based complex of the pruned packing; degenerate (collinear)
    packings fall back to the bare tree drawing."""
    pts = tree.centers
    try:
        tri = delaunay.greedy_circumradius_triangulation(pts)
    except delaunay.AllCollinear:
        edges = [(min(u, v), max(u, v)) for u, v in tree.edges]
        return delaunay.EComplex(points=pts, tree_edges=edges, small_faces=[])
    e = delaunay.build_E(tri, tree)
    if not delaunay.simply_connected(e):
        raise delaunay.NotSimplyConnected(
            "complex of small faces and tree edges is not simply connected"
        )
    return e


# ---------------------------------------------------------------------------
# Random test-data generators.


def _try_layered(rng, n_layer1, children, max_depth) -> PackingInstance | None:
    """One attempt at a layered packing: 1-disks on the unit circle, each
    deeper disk tangent to its parent, everything else kept clear."""
    min_sep = 1.02  # non-tangent pairs stay clear of the tangency band
    centers = [np.zeros(2)]
    depths = [0]
    parents = [-1]
    # Layer 1: angular positions with enough spread to stay 1.02 apart.
    angles = np.sort(rng.uniform(0.0, 2 * math.pi, n_layer1))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
    if np.any(gaps < 2 * math.asin(min_sep / 2.0)):
        return None
    for a in angles:
        centers.append(np.array([math.cos(a), math.sin(a)]))
        depths.append(1)
        parents.append(0)
    for depth in range(2, max_depth + 1):
        parent_ids = [i for i, d in enumerate(depths) if d == depth - 1]
        if children.get(depth, 0) and not parent_ids:
            return None
        for _ in range(children.get(depth, 0)):
            placed = False
            order = list(parent_ids)
            rng.shuffle(order)
            for pid in order:
                for _ in range(20):
                    theta = rng.uniform(0.0, 2 * math.pi)
                    cand = centers[pid] + np.array(
                        [math.cos(theta), math.sin(theta)]
                    )
                    ok = True
                    for i, c in enumerate(centers):
                        if i == pid:
                            continue
                        if float(np.hypot(*(cand - c))) < min_sep:
                            ok = False
                            break
                    if ok:
                        centers.append(cand)
                        depths.append(depth)
                        parents.append(pid)
                        placed = True
                        break
                if placed:
                    break
            if not placed:
                return None
    return PackingInstance(np.array(centers), source=0)


def _random_layered(seed, size, max_depth, max_attempts=2000) -> PackingInstance:
    rng = np.random.default_rng(seed)
    if size < 3:
        raise GenerationTimeout(f"cannot build a layered packing of size {size}")
    for _ in range(max_attempts):
        budget = size - 1
        # Inner layers are the bottleneck, so bias the split towards them.
        lo1 = max(1, min(6, -(-budget // 5)))
        n1 = int(rng.integers(lo1, min(6, budget) + 1))
        rest = budget - n1
        children = {}
        if max_depth >= 2:
            if max_depth == 2:
                n2 = rest
            else:
                n3 = int(rng.integers(0, rest // 2 + 1))
                n2 = rest - n3
            children[2] = n2
            if max_depth >= 3:
                children[3] = rest - n2
        p = _try_layered(rng, n1, children, max_depth)
        if p is None:
            continue
        prof = packing.kissing_profile(p, 0)
        if prof.radius <= max_depth:
            return p
    raise GenerationTimeout(
        f"failed to generate a size-{size} packing within {max_attempts} attempts"
    )


def random_radius2_packing(seed: int, size: int) -> PackingInstance:
    """Seeded random valid packing of kissing radius at most 2."""
    return _random_layered(seed, size, max_depth=2)


def random_radius3_packing(seed: int, size: int) -> PackingInstance:
    """Seeded random valid packing of kissing radius at most 3."""
    return _random_layered(seed, size, max_depth=3)
