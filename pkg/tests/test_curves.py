"""Sparse-centered curves: validation, region curves, angles, search."""

import math

import numpy as np
import pytest

from kissgeo import curves as cv
from kissgeo import packing as pk
from kissgeo.curves import Arc, SparseCurve
from kissgeo.geometry import TWO_PI, direction, norm
from kissgeo.pipeline import hex_packing

PI_3 = math.pi / 3.0


# ---------------------------------------------------------------------------
# Arcs and validation.


def test_arc_endpoints_and_tangents():
    a = Arc(center=np.array([2.0, 1.0]), start_angle=0.3, sweep=1.1)
    assert np.allclose(a.start_point, a.center + direction(0.3))
    assert np.allclose(a.end_point, a.center + direction(1.4))
    # Tangent is perpendicular to the radius, pointing ccw.
    assert abs(np.dot(a.start_dir, a.start_point - a.center)) < 1e-12
    assert np.allclose(a.point_at(0.0), a.start_point)
    assert np.allclose(a.point_at(1.1), a.end_point)


def test_validate_rejects_clockwise():
    c = SparseCurve([Arc(np.zeros(2), 0.0, -0.5)])
    with pytest.raises(cv.ClockwiseArc):
        cv.validate_curve(c)


def test_validate_rejects_broken_chain():
    c = SparseCurve(
        [Arc(np.zeros(2), 0.0, 1.0), Arc(np.array([5.0, 0.0]), 0.0, 1.0)]
    )
    with pytest.raises(cv.NotUnitRadiusChain):
        cv.validate_curve(c)


def test_validate_rejects_close_centers():
    c1 = np.zeros(2)
    c2 = np.array([0.5, 0.0])
    pt = cv.circle_intersections(c1, c2)[0]
    a1 = Arc(c1, cv.polar_angle(pt - c1) - 0.4, 0.4)
    a2 = Arc(c2, cv.polar_angle(pt - c2), 0.4)
    with pytest.raises(cv.CentersTooClose):
        cv.validate_curve(SparseCurve([a1, a2]))


def test_validate_accepts_tangent_chain():
    # Figure-eight-free chain across two tangent circles.
    c1, c2 = np.zeros(2), np.array([2.0, 0.0])
    a1 = Arc(c1, -1.0, 1.0)  # ends at angle 0: the tangency point side
    a2 = Arc(c2, math.pi, 1.0)
    rep = cv.validate_curve(SparseCurve([a1, a2]))
    assert rep.ok and rep.n_arcs == 2 and rep.n_centers == 2


def test_clockwise_shortcut_curve_is_rejected():
    # An S-shaped pair of arcs, one clockwise, of total angular measure
    # 4*asin(1/4) < pi/3 whose endpoints are one diameter apart.  Valid
    # curves must refuse it: the second arc runs clockwise.
    t = math.asin(0.25)
    c1, c2 = np.zeros(2), np.array([2.0, 0.0])
    a1 = Arc(c1, -2.0 * t, 2.0 * t)  # ends at (1, 0), tangent (0, 1)
    a2 = Arc(c2, math.pi, -2.0 * t)  # clockwise continuation
    curve = SparseCurve([a1, a2])
    gap = norm(a2.end_point - a1.start_point)
    assert gap == pytest.approx(1.0, abs=1e-12)
    assert 4.0 * t < PI_3
    with pytest.raises(cv.ClockwiseArc):
        cv.validate_curve(curve)


# ---------------------------------------------------------------------------
# Region curves and angles on the hexagonal packing.


@pytest.fixture(scope="module")
def hex3_regions(hex_reports):
    return hex_reports[3].regions


def test_hex3_region_curves(hex3_regions):
    for rec in hex3_regions:
        assert len(rec.curve.arcs) == 2
        assert rec.curve.length == pytest.approx(math.pi / 2.0, abs=1e-9)
        assert len(rec.jumps.jumps) == 1
        assert rec.jumps.delta == pytest.approx(PI_3, abs=1e-9)
        assert np.allclose(rec.curve.start_point, rec.region.f_i)
        assert np.allclose(rec.curve.end_point, rec.region.f_j)


def test_hex3_region_angles(hex3_regions):
    for rec in hex3_regions:
        ang = rec.angles
        assert ang.alpha == pytest.approx(math.pi / 6.0, abs=1e-9)
        if rec.region.k01 == 0:
            assert ang.phi == pytest.approx(PI_3, abs=1e-9)
            assert ang.psi is None
        else:
            assert ang.phi == pytest.approx(0.0, abs=1e-9)
            assert ang.psi == pytest.approx(PI_3, abs=1e-9)
            # Both cross angles nonnegative and summing to psi + phi.
            assert ang.cross_vi_uj >= -1e-9
            assert ang.cross_ui_vj >= -1e-9
            assert ang.cross_vi_uj + ang.cross_ui_vj == pytest.approx(
                ang.psi + ang.phi, abs=1e-9
            )


def test_hex3_sums(hex_reports):
    rep = hex_reports[3]
    assert rep.sum_phi == pytest.approx(TWO_PI, abs=1e-9)
    assert rep.sum_alpha == pytest.approx(TWO_PI, abs=1e-9)
    assert rep.sum_psi == pytest.approx(TWO_PI, abs=1e-9)


def test_length_identity_everywhere(random3_reports):
    for rep in random3_reports:
        if rep.fallback_used:
            continue
        for rec in rep.regions:
            assert rec.curve.length == pytest.approx(
                rec.jumps.delta + rec.angles.alpha, abs=1e-9
            )


def test_concatenate_closes(hex_reports):
    gamma = hex_reports[3].gamma
    assert gamma.closed
    assert gamma.length == pytest.approx(6.0 * math.pi, abs=1e-9)
    rep = cv.validate_curve(gamma)
    assert rep.n_centers == 12


def test_concatenate_mismatch():
    c1 = SparseCurve([Arc(np.zeros(2), 0.0, 1.0)])
    c2 = SparseCurve([Arc(np.array([10.0, 0.0]), 0.0, 1.0)])
    with pytest.raises(cv.EndpointMismatch):
        cv.concatenate([c1, c2])


# ---------------------------------------------------------------------------
# Inequality verdicts.


def test_verdicts_on_corpus(random3_reports):
    names_seen = set()
    for rep in random3_reports:
        if rep.fallback_used:
            continue
        for rec in rep.regions:
            assert rec.verdict.ok
            names_seen |= {c.name for c in rec.verdict.checks}
    assert "length_bound" in names_seen
    assert "delta_bound" in names_seen
    assert "psi_floor" in names_seen


def test_verdict_slack_semantics():
    v = cv.RegionVerdict()
    v.add("fine", 0.5)
    v.add("hairline", -1e-8)
    assert v.ok and not v.violations()
    v.add("broken", -1e-3)
    assert not v.ok
    assert [c.name for c in v.violations()] == ["broken"]


# ---------------------------------------------------------------------------
# Shortest-curve search.


def test_min_curve_single_center_analytic():
    for gap in (0.3, 1.0, 1.7, 2.0):
        L, w = cv.min_curve_search(np.array([[0.0, 0.0]]), gap)
        assert L == pytest.approx(2.0 * math.asin(gap / 2.0), abs=1e-9)
        cv.validate_curve(w)
        assert norm(w.end_point - w.start_point) >= gap - 1e-9


def test_min_curve_two_centers_not_below_pi_3():
    for d in (1.0, 1.3, 2.0):
        pts = np.array([[0.0, 0.0], [d, 0.0]])
        L, w = cv.min_curve_search(pts, 1.0)
        assert L >= PI_3 - 1e-9
        cv.validate_curve(w)
        s, e = w.start_point, w.end_point
        assert norm(s - e) >= 1.0 - 1e-7


def test_min_curve_invalid_inputs():
    with pytest.raises(cv.CentersInvalid):
        cv.min_curve_search(np.array([[0.0, 0.0], [0.4, 0.0]]), 1.0)
    with pytest.raises(cv.CentersInvalid):
        cv.min_curve_search(np.array([[0.0, 0.0]]), 0.0)
    with pytest.raises(cv.CentersInvalid):
        cv.min_curve_search(np.array([[0.0, 0.0]]), 2.5)


def test_min_curve_random_sets_floor():
    rng = np.random.default_rng(3)
    for _ in range(25):
        k = int(rng.integers(1, 4))
        pts = [np.zeros(2)]
        while len(pts) < k:
            cand = rng.uniform(-2.0, 2.0, 2)
            if all(norm(cand - q) >= 1.0 for q in pts):
                pts.append(cand)
        L, w = cv.min_curve_search(np.array(pts), 1.0)
        assert L >= PI_3 - 1e-6
        cv.validate_curve(w)


# ---------------------------------------------------------------------------
# Points on curves and the spacing bound.


def test_point_position_on_curve():
    c = SparseCurve([Arc(np.zeros(2), 0.0, math.pi)])
    p = direction(1.0)
    assert cv.point_position_on_curve(c, p) == pytest.approx(1.0, abs=1e-9)
    assert cv.point_position_on_curve(c, [5.0, 5.0]) is None


def test_excluded_count_bound_circle():
    gamma = SparseCurve([Arc(np.zeros(2), 0.0, TWO_PI)], closed=True)
    marked = [direction(t) for t in (0.0, 1.2, 2.8, 4.6)]
    verdict = cv.excluded_disk_count_bound(gamma, np.array(marked))
    assert verdict.count == 4
    assert verdict.min_gap == pytest.approx(1.2, abs=1e-9)
    assert verdict.ok
    # Two markers closer than pi/3 break the verdict.
    bad = cv.excluded_disk_count_bound(
        gamma, np.array([direction(0.0), direction(0.2)])
    )
    assert not bad.ok


def test_excluded_center_off_curve_raises():
    gamma = SparseCurve([Arc(np.zeros(2), 0.0, TWO_PI)], closed=True)
    with pytest.raises(cv.CenterNotOnCurve):
        cv.excluded_disk_count_bound(gamma, np.array([[3.0, 3.0]]))


def test_hex3_spacing(hex_reports):
    spacing = hex_reports[3].spacing
    assert spacing.count == 18
    assert spacing.min_gap == pytest.approx(PI_3, abs=1e-9)
    assert spacing.ok
