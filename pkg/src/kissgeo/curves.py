"""Sparse-centered curves: chains of counterclockwise unit-radius arcs
whose distinct centers stay at least one diameter apart.

Provides curve validation, the per-region boundary curve construction,
direction jumps, the region angle calculus (phi, psi, alpha), the
inequality verdicts that certify the length bound, and a numeric
minimizer for the shortest-curve lower bound pi/3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.optimize

from .geometry import (
    TWO_PI,
    angccw,
    as_point,
    circle_intersections,
    direction,
    norm,
    polar_angle,
    signed_angle_closed,
    tolerance,
)
from .packing import Region

PI_3 = math.pi / 3.0


class CurveError(ValueError):
    pass


class NotUnitRadiusChain(CurveError):
    pass


class ClockwiseArc(CurveError):
    pass


class CentersTooClose(CurveError):
    def __init__(self, i: int, j: int, distance: float):
        super().__init__(f"arc centers {i} and {j} are {distance} apart")
        self.i, self.j, self.distance = i, j, distance


class NoIntersection(CurveError):
    pass


class EndpointMismatch(CurveError):
    pass


class DegenerateAngle(CurveError):
    pass


class InequalityViolation(CurveError):
    def __init__(self, which: str, slack: float):
        super().__init__(f"inequality {which} violated with slack {slack}")
        self.which, self.slack = which, slack


class CentersInvalid(CurveError):
    pass


class CenterNotOnCurve(CurveError):
    pass


@dataclass(frozen=True)
class Arc:
    """Unit-radius circle arc, counterclockwise, of angular length `sweep`."""

    center: np.ndarray
    start_angle: float
    sweep: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))

    @property
    def end_angle(self) -> float:
        return self.start_angle + self.sweep

    @property
    def start_point(self) -> np.ndarray:
        return self.center + direction(self.start_angle)

    @property
    def end_point(self) -> np.ndarray:
        return self.center + direction(self.end_angle)

    @property
    def start_dir(self) -> np.ndarray:
        """Unit tangent at the start (ccw travel)."""
        return direction(self.start_angle + math.pi / 2.0)

    @property
    def end_dir(self) -> np.ndarray:
        return direction(self.end_angle + math.pi / 2.0)

    def point_at(self, s: float) -> np.ndarray:
        """Point after arc length s from the start (radius 1)."""
        return self.center + direction(self.start_angle + s)

    def sample(self, count: int = 64) -> np.ndarray:
        theta = self.start_angle + np.linspace(0.0, self.sweep, count)
        return self.center + np.stack([np.cos(theta), np.sin(theta)], axis=1)


@dataclass
class SparseCurve:
    arcs: list[Arc]
    closed: bool = False

    @cached_property
    def length(self) -> float:
        return float(sum(a.sweep for a in self.arcs))

    @property
    def start_point(self) -> np.ndarray:
        return self.arcs[0].start_point

    @property
    def end_point(self) -> np.ndarray:
        return self.arcs[-1].end_point

    def distinct_centers(self, eps: float | None = None) -> np.ndarray:
        if eps is None:
            eps = tolerance()
        out: list[np.ndarray] = []
        for a in self.arcs:
            if not any(norm(a.center - c) <= eps for c in out):
                out.append(a.center)
        return np.array(out)

    def sample(self, per_arc: int = 64) -> np.ndarray:
        return np.concatenate([a.sample(per_arc) for a in self.arcs])


def curve_length(c: SparseCurve) -> float:
    return c.length


@dataclass
class CurveReport:
    ok: bool
    n_arcs: int
    length: float
    n_centers: int


def validate_curve(c: SparseCurve, eps: float | None = None) -> CurveReport:
    """Check the four defining conditions of a sparse-centered curve:
    unit radius, natural ccw parametrization, chained endpoints, and
    pairwise-separated distinct centers."""
    if eps is None:
        eps = tolerance()
    if not c.arcs:
        return CurveReport(ok=True, n_arcs=0, length=0.0, n_centers=0)
    for k, a in enumerate(c.arcs):
        if a.sweep < 0.0:
            raise ClockwiseArc(f"arc {k} has negative sweep {a.sweep}")
    pairs = zip(c.arcs, c.arcs[1:] + ([c.arcs[0]] if c.closed else []))
    for k, (a, b) in enumerate(pairs):
        gap = norm(b.start_point - a.end_point)
        if gap > 10 * eps:
            raise NotUnitRadiusChain(
                f"arcs {k} and {(k + 1) % len(c.arcs)} meet with gap {gap}"
            )
    centers = c.distinct_centers(eps)
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            d = norm(centers[i] - centers[j])
            if d < 1.0 - eps:
                raise CentersTooClose(i, j, d)
    return CurveReport(
        ok=True, n_arcs=len(c.arcs), length=c.length, n_centers=len(centers)
    )


def construct_gamma_ij(region: Region, involved: list[int]) -> SparseCurve:
    """Region boundary curve from f_i to f_j.

    Follows the involved disks' unit circles counterclockwise, switching
    to the next circle at the first intersection point encountered that
    lies inside the (closed) region.
    """
    id_to_center = dict(zip(region.members, region.centers))
    centers = [id_to_center[k] for k in involved]
    arcs_out: list[Arc] = []
    theta = polar_angle(centers[0])  # pointing at f_i
    for t in range(len(centers) - 1):
        cur, nxt = centers[t], centers[t + 1]
        candidates = [
            p for p in circle_intersections(cur, nxt) if region.contains_point(p, 1e-7)
        ]
        if not candidates:
            raise NoIntersection(
                f"circles of involved disks {involved[t]} and {involved[t + 1]} "
                f"do not meet inside the region"
            )
        deltas = [(polar_angle(p - cur) - theta) % TWO_PI for p in candidates]
        # A zero delta is the point we just switched in at: wrapping all
        # the way around is meant (the disk's exposed arc has positive
        # length), so read it as a full turn.
        deltas = [d if d > 1e-12 else TWO_PI for d in deltas]
        k = int(np.argmin(deltas))
        arcs_out.append(Arc(center=cur, start_angle=theta, sweep=deltas[k]))
        theta = polar_angle(candidates[k] - nxt)
    final = (polar_angle(centers[-1]) - theta) % TWO_PI
    arcs_out.append(Arc(center=centers[-1], start_angle=theta, sweep=final))
    return SparseCurve(arcs=arcs_out, closed=False)


def concatenate(curves: list[SparseCurve]) -> SparseCurve:
    """Join region curves end to start into one closed curve."""
    if not curves:
        raise EndpointMismatch("nothing to concatenate")
    eps = tolerance()
    arcs_all: list[Arc] = []
    for k, cur in enumerate(curves):
        nxt = curves[(k + 1) % len(curves)]
        gap = norm(nxt.start_point - cur.end_point)
        if gap > 10 * eps:
            raise EndpointMismatch(
                f"curve {k} ends {gap} away from the start of curve "
                f"{(k + 1) % len(curves)}"
            )
        arcs_all.extend(cur.arcs)
    return SparseCurve(arcs=arcs_all, closed=True)


@dataclass
class JumpProfile:
    jumps: list  # (position: Point, value: float)
    delta: float


def direction_jumps(c: SparseCurve) -> JumpProfile:
    """Angular defects at the switches between consecutive arcs."""
    out = []
    arcs_seq = list(c.arcs)
    pairs = list(zip(arcs_seq, arcs_seq[1:]))
    if c.closed:
        pairs.append((arcs_seq[-1], arcs_seq[0]))
    for a, b in pairs:
        dj = angccw(b.start_dir, a.end_dir)
        out.append((a.end_point, dj))
    return JumpProfile(jumps=out, delta=float(sum(v for _, v in out)))


@dataclass
class RegionAngles:
    """Directed-angle bookkeeping of a region.

    All tree-edge vectors point away from the source: u is the edge into
    a 1-disk, v the edge from a 1-disk into a 2-disk.  The only primitive
    signed angle is the one between an edge pair (u, v) at the same
    1-disk, in (-pi, pi); every other angle is defined additively from
    those and the ccw angle psi between the parent edges, so values are
    plain reals with no re-wrapping.
    """

    phi: float
    alpha: float
    psi: float | None
    v_i: np.ndarray
    v_j: np.ndarray
    u_i: np.ndarray
    u_j: np.ndarray
    ang_ui_vi: float
    ang_uj_vj: float
    c_prime: np.ndarray | None

    @property
    def cross_vi_uj(self) -> float:
        """Additive angle from v_i to u_j (source regions only)."""
        return -self.ang_ui_vi + self.psi

    @property
    def cross_ui_vj(self) -> float:
        """Additive angle from u_i to v_j (source regions only)."""
        return self.psi + self.ang_uj_vj


def region_angles(region: Region) -> RegionAngles:
    """The angle data (phi, alpha, and psi for source regions).

    psi reads as a full turn when both 2-disks hang off the same 1-disk;
    alpha is the ccw angle between the 2-disk directions from the source.
    """
    ci, cj = region.c_i, region.c_j
    alpha = angccw(ci, cj)
    if region.k01 == 0:
        p = region.centers[1]
        u = p  # the 1-disk's parent edge; source sits at the origin
        v_i, v_j = ci - p, cj - p
        a_i = signed_angle_closed(u, v_i)
        a_j = signed_angle_closed(u, v_j)
        return RegionAngles(
            phi=-a_i + a_j, alpha=alpha, psi=None, v_i=v_i, v_j=v_j,
            u_i=u, u_j=u, ang_ui_vi=a_i, ang_uj_vj=a_j, c_prime=None,
        )
    pi_, s, pj = region.centers[1], region.centers[2], region.centers[3]
    u_i, u_j = pi_ - s, pj - s
    v_i, v_j = ci - pi_, cj - pj
    a_i = signed_angle_closed(u_i, v_i)
    a_j = signed_angle_closed(u_j, v_j)
    if region.members[1] == region.members[3]:
        psi = TWO_PI  # single shared parent: the full turn, not zero
    else:
        psi = angccw(u_i, u_j)
    phi = -a_i + psi + a_j
    c_prime = pi_ + pj - s
    return RegionAngles(
        phi=phi, alpha=alpha, psi=psi, v_i=v_i, v_j=v_j,
        u_i=u_i, u_j=u_j, ang_ui_vi=a_i, ang_uj_vj=a_j, c_prime=c_prime,
    )


@dataclass
class CheckResult:
    name: str
    slack: float  # >= 0 means satisfied; violation below -1e-6

    @property
    def ok(self) -> bool:
        return self.slack >= -1e-6


@dataclass
class RegionVerdict:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def violations(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def add(self, name: str, slack: float):
        self.checks.append(CheckResult(name, float(slack)))


def _wrap_pi(x: float) -> float:
    return (x + math.pi) % TWO_PI - math.pi


def check_region_inequality(
    region: Region,
    angles: RegionAngles,
    jumps: JumpProfile,
    involved: list[int],
    gamma_len: float,
) -> RegionVerdict:
    """All per-region inequality predicates behind the length certificate.

    Each check records its slack (satisfied when >= 0 up to 1e-6); the
    caller decides whether a violation is fatal.
    """
    v = RegionVerdict()
    phi, alpha, psi = angles.phi, angles.alpha, angles.psi
    k1 = region.k01 == 1
    delta = jumps.delta
    bound_delta = (3 * psi - 2 * math.pi / 3 + 2 * phi) if k1 else phi
    v.add("length_bound", bound_delta + alpha - gamma_len)
    v.add("delta_bound", bound_delta - delta)
    # Direction jumps are bounded by pi/3 per skipped position.  The
    # involved disks form an ordered subsequence of the member chain (a
    # disk may occur twice when the region wraps around the source), so
    # match occurrences in order rather than by disk id.
    positions = []
    t = 0
    for idx, m in enumerate(region.members):
        if t < len(involved) and m == involved[t]:
            positions.append(idx)
            t += 1
    if t != len(involved):
        raise DegenerateAngle("involved disks are not a subsequence of the region")
    for t, (_, dj) in enumerate(jumps.jumps):
        span = positions[t + 1] - positions[t]
        v.add(f"jump_bound_{t}", span * PI_3 - dj)
    # An involved middle disk must open at least 2*pi/3 towards its
    # neighbours in the member chain; when both neighbours are the same
    # disk the boundary wraps all the way around it (a full turn).
    for idx in positions[1:-1]:
        if region.members[idx - 1] == region.members[idx + 1]:
            opening = TWO_PI
        else:
            opening = angccw(
                region.centers[idx - 1] - region.centers[idx],
                region.centers[idx + 1] - region.centers[idx],
            )
        v.add(f"opening_{idx}", opening - 2 * math.pi / 3)
    # The edge pair (u, v) at a 1-disk opens at most 2*pi/3; beyond that
    # the 2-disk would come within one radius of the source.
    v.add("edge_pair_range_i", 2 * math.pi / 3 - abs(angles.ang_ui_vi))
    v.add("edge_pair_range_j", 2 * math.pi / 3 - abs(angles.ang_uj_vj))
    if not k1:
        v.add("phi_floor", phi - PI_3)
        return v
    v.add("delta_le_4pi3", 4 * math.pi / 3 - delta)
    v.add("psi_floor", psi - PI_3)
    source_center = region.centers[2]
    source_involved = 2 in positions[1:-1]
    if source_involved:
        v.add("source_involved_phi", phi)
        side = angccw(region.c_i - region.parent_i, source_center - region.parent_i)
        side += angccw(source_center - region.parent_j, region.c_j - region.parent_j)
        v.add("side_angles_bound", bound_delta - side)
    if psi < math.pi:
        v.add("psi_plus_phi_floor", psi + phi - PI_3)
        cross1, cross2 = angles.cross_vi_uj, angles.cross_ui_vj
        v.add("cross_angle_i", cross1)
        v.add("cross_angle_j", cross2)
        v.add("cross_angle_sum", -abs(cross1 + cross2 - (psi + phi)))
        # The same sum read off the rhombus spanned by the parent edges.
        cp = angles.c_prime
        rhs = angccw(region.c_i - region.parent_i, cp - region.parent_i)
        rhs += angccw(cp - region.parent_j, region.c_j - region.parent_j)
        v.add("rhombus_identity", -abs(_wrap_pi(rhs - (psi + phi))))
    if len(involved) == 2:
        dj = jumps.jumps[0][1]
        chord = norm(region.c_i - region.c_j)
        rhs = 2 * math.sin(psi / 2) + 2 * abs(math.sin(phi / 2))
        v.add("single_jump_chord_eq", -abs(2 * math.sin(dj / 2) - chord))
        v.add("single_jump_chord_bound", rhs - 2 * math.sin(dj / 2))
    return v


# ---------------------------------------------------------------------------
# Shortest-curve search.


def _single_arc_length(gap: float) -> float:
    return 2.0 * math.asin(min(gap, 2.0) / 2.0)


def min_curve_search(
    centers, min_endpoint_gap: float, max_arcs: int = 4
) -> tuple[float, SparseCurve]:
    """Numerically minimize curve length over admissible arc chains.

    Enumerates center sequences whose consecutive circles intersect, with
    switch points restricted to circle intersections; the free start and
    end angles are optimized under the endpoint-separation constraint.
    The result is an upper bound on the true minimum (every candidate is
    verified feasible), so it can certify but never undercut pi/3.
    """
    pts = np.atleast_2d(np.asarray(centers, dtype=float))
    gap = float(min_endpoint_gap)
    if gap <= 0.0 or gap > 2.0 + 1e-12:
        raise CentersInvalid(f"endpoint gap {gap} not achievable on a unit circle")
    eps = tolerance()
    uniq: list[np.ndarray] = []
    for p in pts:
        if not any(norm(p - q) <= eps for q in uniq):
            uniq.append(p)
    for i in range(len(uniq)):
        for j in range(i + 1, len(uniq)):
            if norm(uniq[i] - uniq[j]) < 1.0 - eps:
                raise CentersInvalid(
                    f"centers {i} and {j} are closer than one diameter"
                )
    best_len = None
    best_curve = None
    for c in uniq:
        ln = _single_arc_length(gap)
        if best_len is None or ln < best_len:
            start = polar_angle(np.array([1.0, 0.0]))
            best_len = ln
            best_curve = SparseCurve([Arc(c, start, ln)])
    n = len(uniq)
    adj = [
        [j for j in range(n) if j != i and norm(uniq[i] - uniq[j]) <= 2.0]
        for i in range(n)
    ]
    for m in range(2, max_arcs + 1):
        for seq in _center_sequences(n, adj, m):
            for choice in itertools.product([0, 1], repeat=m - 1):
                res = _optimize_chain(uniq, seq, choice, gap, best_len)
                if res is not None and res[0] < best_len:
                    best_len, best_curve = res
    return best_len, best_curve


def _center_sequences(n, adj, m):
    def rec(seq):
        if len(seq) == m:
            yield list(seq)
            return
        for j in adj[seq[-1]]:
            if len(seq) < 2 or j != seq[-2]:
                seq.append(j)
                yield from rec(seq)
                seq.pop()

    for i in range(n):
        yield from rec([i])


def _optimize_chain(uniq, seq, choice, gap, best_len):
    """Minimal total length for a fixed circle sequence and switch choice."""
    switches = []
    for t in range(len(seq) - 1):
        inter = circle_intersections(uniq[seq[t]], uniq[seq[t + 1]])
        if len(inter) <= choice[t]:
            return None
        switches.append(inter[choice[t]])
    # Interior arcs are fully determined by the switch points.
    mid = 0.0
    for t in range(1, len(seq) - 1):
        c = uniq[seq[t]]
        mid += (polar_angle(switches[t] - c) - polar_angle(switches[t - 1] - c)) % TWO_PI
    if best_len is not None and mid >= best_len:
        return None
    c0, cm = uniq[seq[0]], uniq[seq[-1]]
    in0 = polar_angle(switches[0] - c0)
    outm = polar_angle(switches[-1] - cm)

    def endpoints(x):
        a, b = x
        s = c0 + direction(in0 - a)
        e = cm + direction(outm + b)
        return s, e

    def objective(x):
        return x[0] + x[1]

    def constraint(x):
        s, e = endpoints(x)
        return float(np.dot(s - e, s - e)) - gap * gap

    best = None
    for a0, b0 in ((0.1, 0.1), (math.pi / 2, math.pi / 2), (0.01, math.pi)):
        res = scipy.optimize.minimize(
            objective,
            x0=np.array([a0, b0]),
            method="SLSQP",
            bounds=[(0.0, TWO_PI), (0.0, TWO_PI)],
            constraints=[{"type": "ineq", "fun": constraint}],
            options={"maxiter": 200, "ftol": 1e-12},
        )
        if not res.success:
            continue
        x = res.x
        if constraint(x) < -1e-9:
            continue  # infeasible numeric artifact: reject, stay conservative
        total = mid + float(x[0] + x[1])
        if best is None or total < best[0]:
            best = (total, x)
    if best is None:
        return None
    total, x = best
    arcs_out = [Arc(c0, in0 - x[0], x[0])]
    theta = None
    for t in range(1, len(seq) - 1):
        c = uniq[seq[t]]
        a = polar_angle(switches[t - 1] - c)
        sweep = (polar_angle(switches[t] - c) - a) % TWO_PI
        arcs_out.append(Arc(c, a, sweep))
    arcs_out.append(Arc(cm, outm, x[1]))
    return total, SparseCurve(arcs_out)


# ---------------------------------------------------------------------------
# Points on curves and the excluded-center spacing bound.


def point_position_on_curve(c: SparseCurve, p, eps: float | None = None):
    """Arc-length position of the first spot of the curve within eps of p,
    or None."""
    if eps is None:
        eps = tolerance()
    p = as_point(p)
    offset = 0.0
    for a in c.arcs:
        r = norm(p - a.center)
        if abs(r - 1.0) <= 10 * eps and r > 0:
            t = (polar_angle(p - a.center) - a.start_angle) % TWO_PI
            if t <= a.sweep + 10 * eps:
                return offset + min(t, a.sweep)
        offset += a.sweep
    return None


@dataclass
class SpacingVerdict:
    count: int
    min_gap: float
    curve_length: float

    @property
    def bound(self) -> float:
        return self.curve_length / PI_3

    @property
    def ok(self) -> bool:
        return self.count == 0 or (
            self.min_gap >= PI_3 - 1e-6 and self.count <= self.bound + 1e-6
        )


def excluded_disk_count_bound(gamma: SparseCurve, removed_centers) -> SpacingVerdict:
    """Verify the removed-disk centers sit on the closed curve with arc
    spacing at least pi/3, so their count is at most |gamma| / (pi/3)."""
    removed = np.atleast_2d(np.asarray(removed_centers, dtype=float))
    if removed.size == 0:
        return SpacingVerdict(count=0, min_gap=math.inf, curve_length=gamma.length)
    positions = []
    for idx, p in enumerate(removed):
        t = point_position_on_curve(gamma, p, eps=1e-7)
        if t is None:
            raise CenterNotOnCurve(f"removed center {idx} at {p} is not on the curve")
        positions.append(t)
    positions.sort()
    total = gamma.length
    gaps = [
        (positions[(k + 1) % len(positions)] - positions[k]) % total
        for k in range(len(positions))
    ]
    if len(positions) == 1:
        gaps = [total]
    return SpacingVerdict(
        count=len(positions), min_gap=float(min(gaps)), curve_length=total
    )
