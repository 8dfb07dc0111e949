"""The curvature numerator in its three forms, plus force and stress."""

import numpy as np
import pytest

from cometric import charts
from cometric.curvature import (
    force,
    numerator_coordinate,
    numerator_covariant,
    numerator_force_stress,
    stress,
)
from cometric.errors import ConfigurationError
from cometric.validation import random_cometric


def test_euclidean_everything_zero():
    jet = charts.cometric_jet(charts.euclidean(3), np.array([1.0, -2.0, 0.5]))
    br = numerator_coordinate(jet, np.array([1.0, 0.0, 2.0]), np.array([0.0, 1.0, -1.0]))
    assert br.r11 == 0.0 and br.r12 == 0.0 and br.r2 == 0.0 and br.r3 == 0.0
    assert br.total == 0.0
    assert br.sectional == 0.0


def test_hyperbolic_breakdown_frozen():
    """At (0,1) with coforms dx1, dx2 the four terms are 1, 2, -1, -3."""
    jet = charts.cometric_jet(charts.hyperbolic_half_plane(), np.array([0.0, 1.0]))
    alpha = np.array([1.0, 0.0])
    beta = np.array([0.0, 1.0])
    br = numerator_coordinate(jet, alpha, beta)
    assert br.r11 == pytest.approx(1.0, abs=1e-14)
    assert br.r12 == pytest.approx(2.0, abs=1e-14)
    assert br.r2 == pytest.approx(-1.0, abs=1e-14)
    assert br.r3 == pytest.approx(-3.0, abs=1e-14)
    assert br.total == pytest.approx(-1.0, abs=1e-14)
    assert br.sectional == pytest.approx(-1.0, abs=1e-13)
    # r1 is the sum of its two halves
    assert br.r1 == pytest.approx(br.r11 + br.r12, abs=1e-15)


def test_sphere_origin_numerator():
    """Unit-sphere chart at the origin: numerator 1/16, sectional +1."""
    jet = charts.cometric_jet(charts.sphere_stereographic(2), np.zeros(2))
    br = numerator_coordinate(jet, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert br.total == pytest.approx(1.0 / 16.0, abs=1e-15)
    assert br.denominator == pytest.approx(1.0 / 16.0, abs=1e-15)
    assert br.sectional == pytest.approx(1.0, abs=1e-13)


def test_three_forms_agree_on_random_cometrics():
    rng = np.random.default_rng(12)
    for _ in range(30):
        dim = int(rng.integers(2, 5))
        defn, x = random_cometric(rng, dim)
        jet = charts.cometric_jet(defn, x)
        alpha = rng.standard_normal(dim)
        beta = rng.standard_normal(dim)
        coord = numerator_coordinate(jet, alpha, beta)
        cov = numerator_covariant(jet, alpha, beta)
        fs = numerator_force_stress(jet, alpha, beta)
        scale = 1.0 + abs(coord.total)
        assert abs(coord.total - cov) / scale < 1e-11
        assert abs(coord.total - fs.total) / scale < 1e-11
        assert abs(coord.r11 - fs.r11) / scale < 1e-11
        assert abs(coord.r12 - fs.r12) / scale < 1e-11
        assert abs(coord.r2 - fs.r2) / scale < 1e-11
        assert abs(coord.r3 - fs.r3) / scale < 1e-11


def test_numerator_symmetries():
    """R(u,v,v,u)-type symmetry and quadratic scaling in each argument."""
    rng = np.random.default_rng(14)
    defn, x = random_cometric(rng, 3)
    jet = charts.cometric_jet(defn, x)
    alpha = rng.standard_normal(3)
    beta = rng.standard_normal(3)
    ab = numerator_coordinate(jet, alpha, beta).total
    ba = numerator_coordinate(jet, beta, alpha).total
    assert ab == pytest.approx(ba, rel=1e-12, abs=1e-12)
    scaled = numerator_coordinate(jet, 2.0 * alpha, beta).total
    assert scaled == pytest.approx(4.0 * ab, rel=1e-12)
    # adding a multiple of alpha to beta leaves the numerator unchanged
    sheared = numerator_coordinate(jet, alpha, beta + 0.7 * alpha).total
    assert sheared == pytest.approx(ab, rel=1e-10, abs=1e-12)


def test_degenerate_plane_gives_none_sectional():
    rng = np.random.default_rng(15)
    defn, x = random_cometric(rng, 3)
    jet = charts.cometric_jet(defn, x)
    alpha = rng.standard_normal(3)
    br = numerator_coordinate(jet, alpha, -2.0 * alpha)
    assert br.sectional is None
    assert br.denominator == pytest.approx(0.0, abs=1e-12)


def test_force_is_gradient_of_pairing():
    """F(α,β) = ½ d⟨α,β⟩ against central differences of the cometric pairing."""
    rng = np.random.default_rng(16)
    defn = charts.sphere_stereographic(2)
    x = np.array([0.3, -0.5])
    alpha = rng.standard_normal(2)
    beta = rng.standard_normal(2)
    jet = charts.cometric_jet(defn, x)
    f = force(jet, alpha, beta)
    h = 1e-6
    for s in range(2):
        xp = x.copy(); xp[s] += h
        xm = x.copy(); xm[s] -= h
        pp = alpha @ charts.cometric_jet(defn, xp).ginv @ beta
        pm = alpha @ charts.cometric_jet(defn, xm).ginv @ beta
        assert f[s] == pytest.approx(0.5 * (pp - pm) / (2 * h), rel=1e-8, abs=1e-9)


def test_stress_contraction_identity():
    """α_i g^{is} g^{kt}_{,s} β_k — checked directly against jet arrays."""
    rng = np.random.default_rng(18)
    defn, x = random_cometric(rng, 3)
    jet = charts.cometric_jet(defn, x)
    alpha = rng.standard_normal(3)
    beta = rng.standard_normal(3)
    d = stress(jet, alpha, beta)
    want = np.zeros(3)
    for t in range(3):
        for i in range(3):
            for s in range(3):
                for k in range(3):
                    want[t] += alpha[i] * jet.ginv[i, s] * jet.dginv[s, k, t] * beta[k]
    assert np.allclose(d, want, rtol=1e-12, atol=1e-12)


def test_coform_validation():
    jet = charts.cometric_jet(charts.euclidean(2), np.zeros(2))
    with pytest.raises(ConfigurationError):
        numerator_coordinate(jet, np.array([1.0, 2.0, 3.0]), np.array([1.0, 0.0]))
    with pytest.raises(ConfigurationError):
        numerator_coordinate(jet, np.array([np.nan, 0.0]), np.array([1.0, 0.0]))
