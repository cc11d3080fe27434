"""End-to-end certification pipeline."""

import math

import numpy as np
import pytest

from kissgeo import curves as cv
from kissgeo import packing as pk
from kissgeo.packing import PackingInstance
from kissgeo.pipeline import (
    FALLBACK_BOUND,
    GenerationTimeout,
    certify,
    hex_packing,
    random_radius2_packing,
    random_radius3_packing,
)

PI_3 = math.pi / 3.0


def test_hex_packing_sizes():
    assert len(hex_packing(1)) == 7
    assert len(hex_packing(2)) == 19
    assert len(hex_packing(3)) == 37
    assert len(hex_packing(4)) == 61


def test_hex_packing_is_valid_with_central_source():
    for n in (1, 2, 3):
        p = hex_packing(n)
        pk.validate_packing(p)
        assert np.allclose(p.centers[p.source], 0.0)
        prof = pk.kissing_profile(p, p.source)
        assert prof.radius == n


def test_certify_hex_counts(hex_reports):
    assert hex_reports[1].count == 7
    assert hex_reports[2].count == 19
    assert hex_reports[3].count == 37
    for n in (1, 2, 3):
        assert hex_reports[n].bound_ok


def test_certify_hex3_certificate(hex_reports):
    rep = hex_reports[3]
    assert (rep.c1, rep.c2, rep.removed) == (6, 12, 18)
    assert rep.gamma_length == pytest.approx(6.0 * math.pi, abs=1e-6)
    assert rep.lemma_value == pytest.approx(36.0, abs=1e-6)
    assert rep.total_value == pytest.approx(37.0, abs=1e-6)
    assert rep.spacing.min_gap == pytest.approx(PI_3, abs=1e-6)
    assert len(rep.regions) == 12


def test_certify_hex2_certificate(hex_reports):
    rep = hex_reports[2]
    assert (rep.c1, rep.c2, rep.removed) == (6, 12, 0)
    assert rep.gamma_length == pytest.approx(6.0 * math.pi, abs=1e-6)
    assert rep.lemma_value == pytest.approx(36.0, abs=1e-6)


def test_certify_hex1_uses_fallback(hex_reports):
    rep = hex_reports[1]
    assert rep.fallback_used
    assert rep.total_bound == FALLBACK_BOUND
    assert rep.count == 7 and rep.bound_ok


def test_certify_random_corpus(random3_reports):
    for rep in random3_reports:
        assert rep.bound_ok
        assert rep.count <= 37
        if not rep.fallback_used:
            assert rep.lemma_value <= 36.0 + 1e-6
            assert rep.sum_phi == pytest.approx(2 * math.pi, abs=1e-9)
            assert rep.sum_alpha == pytest.approx(2 * math.pi, abs=1e-9)
            assert rep.sum_psi == pytest.approx(2 * math.pi, abs=1e-9)


def test_certify_radius2_corpus(random2_packings):
    for p in random2_packings:
        rep = certify(p, 2)
        assert rep.bound_ok
        # Only childfree 1-disks can have been pruned at radius 2.
        for c in rep.removed_centers:
            assert abs(np.linalg.norm(c) - 1.0) < 1e-9


def test_certify_rejects_overlap():
    with pytest.raises(pk.Overlap):
        certify(PackingInstance(np.array([[0.0, 0.0], [0.3, 0.0]])), 3)


def test_certify_rejects_radius_4():
    with pytest.raises(pk.RadiusTooLarge):
        certify(hex_packing(4), 3)


def test_certify_chooses_source_when_missing():
    p = hex_packing(2)
    rep = certify(PackingInstance(p.centers, source=None), 2)
    assert rep.count == 19 and rep.bound_ok


def test_removed_centers_land_on_gamma(hex_reports, random3_reports):
    for rep in [hex_reports[3]] + random3_reports[:20]:
        if rep.fallback_used or rep.removed == 0:
            continue
        for c in rep.removed_centers:
            assert cv.point_position_on_curve(rep.gamma, c, eps=1e-7) is not None


def test_generators_are_deterministic():
    a = random_radius3_packing(123, 12)
    b = random_radius3_packing(123, 12)
    assert np.array_equal(a.centers, b.centers)
    c = random_radius2_packing(9, 8)
    prof = pk.kissing_profile(c, c.source)
    assert prof.radius <= 2
    with pytest.raises(GenerationTimeout):
        random_radius3_packing(0, 2)


def test_generator_radius_and_validity():
    rng = np.random.default_rng(77)
    for k in range(25):
        p = random_radius3_packing(500 + k, int(rng.integers(5, 20)))
        pk.validate_packing(p)
        prof = pk.kissing_profile(p, p.source)
        assert prof.radius <= 3
