"""Riemannian submersions: metric-quotient check and curvature bookkeeping."""

import numpy as np
import pytest

from cometric import submersion
from cometric.errors import ConfigurationError, GeometryError, MetricDegeneracyError


def test_flat_case_projection():
    case = submersion.flat_case()
    x = np.array([0.3, -0.8])
    assert np.allclose(case.project(x), np.array([0.3]))
    jac = case.jacobian(x)
    assert jac.shape == (1, 2)
    assert np.allclose(jac, np.array([[1.0, 0.0]]))
    rec = submersion.oneill_check(case, x, np.array([1.0]), np.array([0.5]))
    assert rec.residual == pytest.approx(0.0, abs=1e-15)
    assert rec.base_numerator == 0.0 and rec.total_numerator == 0.0


def test_check_case_metric_quotient():
    rng = np.random.default_rng(30)
    for name in ("flat", "product", "hopf"):
        case = submersion.catalog_case(name)
        for _ in range(5):
            if name == "hopf":
                d = rng.standard_normal(3)
                x = d / np.linalg.norm(d) * rng.uniform(0.1, 0.6)
            else:
                x = rng.uniform(-0.7, 0.7, size=case.total.dim)
            submersion.check_case(case, x)  # raises on failure


def test_check_case_rejects_degenerate_points():
    from cometric import charts, dsl

    # the chart seam |x| = 1, x3 = 0 is singular for the two-to-one sphere map:
    # the projection expressions themselves blow up there
    case = submersion.hopf_case()
    with pytest.raises(GeometryError):
        submersion.check_case(case, np.array([1.0, 0.0, 0.0]))
    # a synthetic projection whose differential loses rank at the origin
    bad = submersion.SubmersionCase(
        name="pinch",
        total=charts.euclidean(2),
        base=charts.euclidean(1),
        proj=(dsl.parse("x1 * x2"),),
    )
    with pytest.raises(MetricDegeneracyError):
        submersion.check_case(bad, np.zeros(2))


def test_product_case_vertical_term_vanishes():
    rng = np.random.default_rng(31)
    case = submersion.product_case()
    for _ in range(5):
        x = rng.uniform(-0.8, 0.8, size=3)
        alpha = rng.standard_normal(2)
        beta = rng.standard_normal(2)
        rec = submersion.oneill_check(case, x, alpha, beta)
        assert rec.vertical_term == pytest.approx(0.0, abs=1e-14)
        assert rec.residual == pytest.approx(0.0, abs=1e-10)
        assert rec.base_numerator == pytest.approx(rec.total_numerator, rel=1e-10, abs=1e-12)


def test_hopf_sectionals():
    """Base 4 = total 1 + vertical 3, pointwise, in chart coordinates."""
    rng = np.random.default_rng(32)
    case = submersion.hopf_case()
    for _ in range(5):
        d = rng.standard_normal(3)
        x = d / np.linalg.norm(d) * rng.uniform(0.1, 0.55)
        alpha = rng.standard_normal(2)
        beta = rng.standard_normal(2)
        rec = submersion.oneill_check(case, x, alpha, beta)
        assert rec.base_sectional == pytest.approx(4.0, abs=1e-9)
        assert rec.total_sectional == pytest.approx(1.0, abs=1e-9)
        assert rec.residual == pytest.approx(0.0, abs=1e-9)
        # the vertical term accounts for the full gap: 3 = 4 - 1 after scaling
        assert 0.75 * rec.vertical_term == pytest.approx(
            rec.base_numerator - rec.total_numerator, rel=1e-9, abs=1e-12
        )


def test_pullback_sharp_is_horizontal():
    """Lifted coforms produce horizontal vectors: J maps them onto the base sharp."""
    rng = np.random.default_rng(34)
    case = submersion.hopf_case()
    from cometric import charts

    for _ in range(5):
        d = rng.standard_normal(3)
        x = d / np.linalg.norm(d) * 0.4
        alpha = rng.standard_normal(2)
        lift = submersion.pullback_sharp(case, x, alpha)
        y = case.project(x)
        base_jet = charts.cometric_jet(case.base, y)
        assert np.allclose(case.jacobian(x) @ lift, base_jet.ginv @ alpha, atol=1e-12)


def test_exact_and_fd_brackets_agree():
    rng = np.random.default_rng(35)
    case = submersion.hopf_case()
    d = rng.standard_normal(3)
    x = d / np.linalg.norm(d) * 0.45
    alpha = rng.standard_normal(2)
    beta = rng.standard_normal(2)
    exact = submersion.oneill_check(case, x, alpha, beta, mode="exact")
    fd = submersion.oneill_check(case, x, alpha, beta, mode="fd")
    assert exact.vertical_term == pytest.approx(fd.vertical_term, rel=1e-6, abs=1e-8)
    with pytest.raises(ConfigurationError):
        submersion.oneill_check(case, x, alpha, beta, mode="bogus")


def test_catalog_case_names():
    assert submersion.catalog_case("product").name == "product"
    with pytest.raises(ConfigurationError):
        submersion.catalog_case("torus")
