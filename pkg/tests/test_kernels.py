"""Kernel closed forms, jets, and the Fourier quadrature oracle."""

import numpy as np
import pytest

from cometric.errors import (
    ConfigurationError,
    DegenerateConfigurationError,
    UnsupportedError,
)
from cometric.kernels import (
    KernelSpec,
    check_distinct,
    gram_matrix,
    kernel_fourier_oracle,
    kernel_grad,
    kernel_hess,
    kernel_jet,
    kernel_value,
    spec_from_json,
    spec_to_json,
)


def test_frozen_values_one_dimensional():
    """Hand-derived reference points for the n=1 closed forms."""
    # n=1, l=1: K(r) = (1/2) exp(-|r|)
    spec = KernelSpec("sobolev_bessel", n=1, l=1)
    assert float(kernel_value(spec, np.array([0.0]))) == pytest.approx(0.5, rel=1e-15)
    assert float(kernel_value(spec, np.array([1.0]))) == pytest.approx(
        0.5 * np.exp(-1.0), rel=1e-15
    )
    # n=1, l=2: K(r) = (1/4)(1+|r|) exp(-|r|); K(1) = e^{-1}/2
    spec2 = KernelSpec("sobolev_bessel", n=1, l=2)
    assert float(kernel_value(spec2, np.array([0.0]))) == pytest.approx(0.25, rel=1e-15)
    assert float(kernel_value(spec2, np.array([1.0]))) == pytest.approx(
        0.18393972058572117, rel=1e-15
    )


def test_gaussian_values():
    spec = KernelSpec("gaussian", n=2, A=2.0, c=1.0)
    assert float(kernel_value(spec, np.zeros(2))) == pytest.approx(1.0)
    r = np.array([1.0, 1.0])
    assert float(kernel_value(spec, r)) == pytest.approx(np.exp(-1.0), rel=1e-15)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        KernelSpec("nope", n=1, l=2)
    with pytest.raises(ConfigurationError):
        KernelSpec("sobolev_bessel", n=2, l=3)  # even n has no closed form here
    with pytest.raises(ConfigurationError):
        KernelSpec("sobolev_bessel", n=3, l=1)  # 2l <= n: not even continuous
    with pytest.raises(ConfigurationError):
        KernelSpec("sobolev_bessel", n=1, l=2, A=-1.0)
    with pytest.raises(ConfigurationError):
        KernelSpec("sobolev_bessel", n=1, l=2, c=0.0)
    with pytest.raises(ConfigurationError):
        KernelSpec("gaussian", n=2, l=3)


def test_curvature_grade():
    assert KernelSpec("sobolev_bessel", n=3, l=3).is_curvature_grade
    assert KernelSpec("sobolev_bessel", n=1, l=2).is_curvature_grade
    rough = KernelSpec("sobolev_bessel", n=3, l=2)  # continuous but not C^2
    assert not rough.is_curvature_grade
    with pytest.raises(ConfigurationError):
        rough.require_curvature_grade()
    assert KernelSpec("gaussian", n=2).is_curvature_grade


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    specs = [
        KernelSpec("sobolev_bessel", n=1, l=3, A=0.7, c=2.0),
        KernelSpec("sobolev_bessel", n=3, l=3, A=1.3),
        KernelSpec("sobolev_bessel", n=3, l=4, A=0.5),
        KernelSpec("gaussian", n=2, A=1.1, c=0.7),
    ]
    h = 1e-6
    for spec in specs:
        for _ in range(25):
            r = rng.uniform(-1.5, 1.5, size=spec.n)
            if np.linalg.norm(r) < 0.05:
                continue
            grad = kernel_grad(spec, r)
            for i in range(spec.n):
                rp = r.copy(); rp[i] += h
                rm = r.copy(); rm[i] -= h
                fd = (kernel_value(spec, rp) - kernel_value(spec, rm)) / (2 * h)
                assert grad[i] == pytest.approx(float(fd), rel=5e-8, abs=5e-10)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(4)
    spec = KernelSpec("sobolev_bessel", n=3, l=3, A=0.9)
    h = 1e-5
    for _ in range(10):
        r = rng.uniform(-1.2, 1.2, size=3)
        if np.linalg.norm(r) < 0.1:
            continue
        hess = kernel_hess(spec, r)
        assert np.allclose(hess, hess.T, atol=1e-15)
        for i in range(3):
            rp = r.copy(); rp[i] += h
            rm = r.copy(); rm[i] -= h
            fd = (kernel_grad(spec, rp) - kernel_grad(spec, rm)) / (2 * h)
            assert np.allclose(hess[:, i], fd, rtol=2e-6, atol=2e-8)


def test_jets_at_origin():
    """The radial kink cancels at 0: gradient 0, Hessian a finite multiple of I."""
    spec = KernelSpec("sobolev_bessel", n=3, l=3, A=0.8, c=1.5)
    jet = kernel_jet(spec, np.zeros(3))
    assert jet.gradient is not None and jet.hessian is not None
    assert np.all(jet.gradient == 0.0)
    assert np.isfinite(jet.hessian).all()
    # isotropic: H(0) = h * I with h < 0 (the kernel peaks at 0)
    diag = np.diag(jet.hessian)
    assert np.allclose(jet.hessian, diag[0] * np.eye(3), atol=1e-18)
    assert diag[0] < 0


def test_kernel_jet_orders():
    spec = KernelSpec("sobolev_bessel", n=1, l=2)
    j0 = kernel_jet(spec, np.array([0.4]), order=0)
    assert j0.gradient is None and j0.hessian is None
    j1 = kernel_jet(spec, np.array([0.4]), order=1)
    assert j1.gradient is not None and j1.hessian is None
    with pytest.raises(ConfigurationError):
        kernel_jet(spec, np.array([0.4]), order=3)


def test_fourier_oracle_matches_closed_form():
    spec = KernelSpec("sobolev_bessel", n=3, l=3, A=1.0, c=1.0)
    for r in (0.0, 0.3, 1.0, 2.5):
        closed = float(kernel_value(spec, np.array([r, 0.0, 0.0])))
        quad = kernel_fourier_oracle(spec, r)
        assert closed == pytest.approx(quad, abs=1e-8)


def test_fourier_oracle_rejects_gaussian_and_tiny_grids():
    with pytest.raises(UnsupportedError):
        kernel_fourier_oracle(KernelSpec("gaussian", n=2), 1.0)
    with pytest.raises(ConfigurationError):
        kernel_fourier_oracle(KernelSpec("sobolev_bessel", n=1, l=2), 1.0, quad_points=10)


def test_check_distinct():
    good = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    check_distinct(good)
    bad = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1e-14]])
    with pytest.raises(DegenerateConfigurationError):
        check_distinct(bad)


def test_gram_matrix_is_spd():
    rng = np.random.default_rng(9)
    spec = KernelSpec("sobolev_bessel", n=3, l=3, A=0.6)
    for _ in range(10):
        pts = rng.uniform(-1, 1, size=(5, 3))
        pts[:, 0] += np.arange(5)  # keep them apart
        gram = gram_matrix(spec, pts)
        assert np.allclose(gram, gram.T, atol=1e-16)
        assert np.linalg.eigvalsh(gram)[0] > 0


def test_spec_json_round_trip():
    spec = KernelSpec("sobolev_bessel", n=3, l=4, A=0.25, c=2.5)
    again = spec_from_json(spec_to_json(spec))
    assert again == spec
    gauss = KernelSpec("gaussian", n=2, A=1.5)
    assert spec_from_json(spec_to_json(gauss)) == gauss
    with pytest.raises(ConfigurationError):
        spec_from_json({"family": "sobolev_bessel"})
    with pytest.raises(ConfigurationError):
        spec_from_json({"family": "sobolev_bessel", "n": 1, "l": 2, "width": 3})
