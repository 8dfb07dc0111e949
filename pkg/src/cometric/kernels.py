"""Radial reproducing kernels and their jets.

Two families:

* ``sobolev_bessel`` — the kernel whose Fourier transform is
  ``(1 + A |xi|^2)^(-l)`` on R^n.  For odd ``n`` (half-integer Matern order
  ``nu = l - n/2``) it has the closed form

      K(r) = c * A^(-n/2) / ((2 pi)^(n/2) 2^(l-1) (l-1)!) * E_nu(|r|/sqrt(A))

  with ``E_nu(t) = t^nu K_nu(t)`` (modified Bessel of the second kind), which
  for half-integer ``nu = k + 1/2`` collapses to ``sqrt(pi/2) e^(-t) P_k(t)``
  with the polynomial ``P_k(t) = sum_j (k+j)! / (j! (k-j)! 2^j) t^(k-j)``.
  Even ``n`` would need integer-order Bessel functions and is rejected.

* ``gaussian`` — ``K(r) = c * exp(-|r|^2 / A)``.  Test-only family: it is not
  the transform of any ``(1+A|xi|^2)^(-l)`` symbol, so the Fourier oracle
  refuses it.

Gradients and Hessians use the recurrence ``d/dt E_nu = -t E_(nu-1)``, which is
free of cancellation; nothing here evaluates a Bessel function numerically.
The only scipy dependency is ``scipy.special.jv`` inside the quadrature oracle.

Smoothness grades: a spec is *value-grade* when ``2l > n`` (continuous kernel)
and *curvature-grade* when ``2l > n + 2`` (C^2 kernel, i.e. Matern order
``nu >= 3/2``).  Jets of order >= 1, and every differential operation built on
top of them, demand curvature grade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateConfigurationError,
    UnsupportedError,
)

BESSEL_FAMILY = "sobolev_bessel"
GAUSSIAN_FAMILY = "gaussian"


@dataclass(frozen=True)
class KernelSpec:
    """Validated kernel parameters.

    ``n`` is the ambient dimension the kernel's symbol lives in, ``l`` the
    symbol exponent (Bessel family only), ``A`` the squared length scale and
    ``c`` a positive amplitude.
    """

    family: str
    n: int
    l: int | None = None
    A: float = 1.0
    c: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in (BESSEL_FAMILY, GAUSSIAN_FAMILY):
            raise ConfigurationError(f"unknown kernel family {self.family!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"kernel dimension n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.A, (int, float)) and math.isfinite(self.A) and self.A > 0):
            raise ConfigurationError(f"kernel scale A must be positive and finite, got {self.A!r}")
        if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0):
            raise ConfigurationError(f"kernel amplitude c must be positive and finite, got {self.c!r}")
        if self.family == BESSEL_FAMILY:
            if not isinstance(self.l, int) or self.l < 1:
                raise ConfigurationError(f"Bessel kernel needs an integer exponent l >= 1, got {self.l!r}")
            if self.n % 2 == 0:
                raise ConfigurationError(
                    f"Bessel kernel closed form needs odd n (half-integer Matern order); got n={self.n}"
                )
            if 2 * self.l <= self.n:
                raise ConfigurationError(
                    f"Bessel kernel with 2l <= n is not continuous (n={self.n}, l={self.l})"
                )
        else:
            if self.l is not None:
                raise ConfigurationError("gaussian kernel takes no exponent l")

    @property
    def is_curvature_grade(self) -> bool:
        """True when second-order jets exist everywhere (C^2 kernel)."""
        if self.family == GAUSSIAN_FAMILY:
            return True
        return 2 * self.l > self.n + 2

    def require_curvature_grade(self) -> None:
        if not self.is_curvature_grade:
            raise ConfigurationError(
                f"kernel (n={self.n}, l={self.l}) is not C^2; differential operations need 2l > n+2"
            )


@dataclass(frozen=True)
class KernelJet:
    """Value/gradient/Hessian of the kernel at one displacement."""

    value: float
    gradient: np.ndarray | None
    hessian: np.ndarray | None


def _bessel_poly(k: int) -> np.ndarray:
    """Coefficients (decreasing powers) of P_k(t) = sum_j (k+j)!/(j!(k-j)!2^j) t^(k-j)."""
    return np.array(
        [math.factorial(k + j) / (math.factorial(j) * math.factorial(k - j) * 2.0**j) for j in range(k + 1)]
    )


def _reduced_profile(k: int, t: np.ndarray) -> np.ndarray:
    """E_(k+1/2)(t) / sqrt(pi/2), i.e. exp(-t) P_k(t); for k = -1 this is exp(-t)/t (t > 0 only)."""
    if k < -1:
        raise ValueError(f"reduced profile undefined for k={k}")
    if k == -1:
        return np.exp(-t) / t
    return np.exp(-t) * np.polyval(_bessel_poly(k), t)


def _bessel_order_k(spec: KernelSpec) -> int:
    """The integer k with Matern order nu = k + 1/2."""
    return spec.l - (spec.n + 1) // 2


def _bessel_const(spec: KernelSpec) -> float:
    """Overall factor c * A^(-n/2) * sqrt(pi/2) / ((2 pi)^(n/2) 2^(l-1) (l-1)!)."""
    return (
        spec.c
        * spec.A ** (-spec.n / 2)
        * math.sqrt(math.pi / 2)
        / ((2 * math.pi) ** (spec.n / 2) * 2 ** (spec.l - 1) * math.factorial(spec.l - 1))
    )


def kernel_value(spec: KernelSpec, r: np.ndarray) -> np.ndarray:
    """K(r) for displacements ``r`` of shape (..., d).  Returns shape (...)."""
    r = np.asarray(r, dtype=float)
    rho2 = np.einsum("...i,...i->...", r, r)
    if spec.family == GAUSSIAN_FAMILY:
        return spec.c * np.exp(-rho2 / spec.A)
    t = np.sqrt(rho2) / math.sqrt(spec.A)
    return _bessel_const(spec) * _reduced_profile(_bessel_order_k(spec), t)


def kernel_grad(spec: KernelSpec, r: np.ndarray) -> np.ndarray:
    """grad K at displacements ``r`` of shape (..., d).  Returns shape (..., d)."""
    r = np.asarray(r, dtype=float)
    if spec.family == GAUSSIAN_FAMILY:
        rho2 = np.einsum("...i,...i->...", r, r)
        return (-2.0 * spec.c / spec.A) * np.exp(-rho2 / spec.A)[..., None] * r
    spec.require_curvature_grade()
    t = np.linalg.norm(r, axis=-1) / math.sqrt(spec.A)
    k = _bessel_order_k(spec)
    return (-_bessel_const(spec) / spec.A) * _reduced_profile(k - 1, t)[..., None] * r


def kernel_hess(spec: KernelSpec, r: np.ndarray) -> np.ndarray:
    """Hessian of K at displacements ``r`` of shape (..., d).  Returns (..., d, d)."""
    r = np.asarray(r, dtype=float)
    d = r.shape[-1]
    eye = np.eye(d)
    if spec.family == GAUSSIAN_FAMILY:
        rho2 = np.einsum("...i,...i->...", r, r)
        e = np.exp(-rho2 / spec.A)
        return (-2.0 * spec.c / spec.A) * e[..., None, None] * eye + (
            4.0 * spec.c / spec.A**2
        ) * e[..., None, None] * np.einsum("...i,...j->...ij", r, r)
    spec.require_curvature_grade()
    cst = _bessel_const(spec)
    k = _bessel_order_k(spec)
    t = np.linalg.norm(r, axis=-1) / math.sqrt(spec.A)
    iso = (-cst / spec.A) * _reduced_profile(k - 1, t)[..., None, None] * eye
    # The rr^T coefficient uses E_(nu-2); at t=0 it is multiplied by rr^T = 0,
    # and for nu = 3/2 the reduced profile itself diverges there, so the
    # coincident rows are handled separately (their radial term vanishes in
    # the limit t rr^T / t^2 -> 0).
    out = np.array(np.broadcast_to(iso, r.shape[:-1] + (d, d)))
    at_zero = t == 0.0
    if np.any(~at_zero):
        tt = np.where(at_zero, 1.0, t)
        radial = (cst / spec.A**2) * _reduced_profile(k - 2, tt)
        radial = np.where(at_zero, 0.0, radial)
        out += radial[..., None, None] * np.einsum("...i,...j->...ij", r, r)
    return out


def kernel_jet(spec: KernelSpec, r: np.ndarray, order: int = 2) -> KernelJet:
    """Pointwise jet of K at a single displacement ``r`` (shape (d,))."""
    r = np.asarray(r, dtype=float)
    if r.ndim != 1:
        raise ConfigurationError(f"kernel_jet takes a single displacement vector, got shape {r.shape}")
    if order not in (0, 1, 2):
        raise ConfigurationError(f"jet order must be 0, 1 or 2, got {order}")
    value = float(kernel_value(spec, r))
    grad = kernel_grad(spec, r) if order >= 1 else None
    hess = kernel_hess(spec, r) if order >= 2 else None
    return KernelJet(value=value, gradient=grad, hessian=hess)


def spec_from_json(obj: dict) -> KernelSpec:
    """Read ``{"family": ..., "n": ..., "l": ..., "A": ..., "c": ...}``."""
    if not isinstance(obj, dict) or "family" not in obj or "n" not in obj:
        raise ConfigurationError("kernel spec JSON needs at least 'family' and 'n'")
    known = {"family", "n", "l", "A", "c"}
    extra = set(obj) - known
    if extra:
        raise ConfigurationError(f"unknown kernel spec field(s): {sorted(extra)}")
    l = obj.get("l")
    return KernelSpec(
        family=obj["family"],
        n=int(obj["n"]),
        l=None if l is None else int(l),
        A=float(obj.get("A", 1.0)),
        c=float(obj.get("c", 1.0)),
    )


def spec_to_json(spec: KernelSpec) -> dict:
    obj: dict = {"family": spec.family, "n": spec.n}
    if spec.l is not None:
        obj["l"] = spec.l
    obj["A"] = spec.A
    obj["c"] = spec.c
    return obj


def check_distinct(points: np.ndarray, *, what: str = "points") -> None:
    """Reject configurations with coincident rows (tolerance 1e-10 * diameter)."""
    pts = np.asarray(points, dtype=float)
    p = pts.shape[0]
    if p < 2:
        return
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    diam = float(dist.max())
    tol = 1e-10 * max(diam, 1e-300)
    off = dist + np.eye(p) * (diam + 1.0)
    if float(off.min()) <= tol:
        a, b = np.unravel_index(int(np.argmin(off)), off.shape)
        raise DegenerateConfigurationError(f"coincident {what} {a} and {b} (separation {off[a, b]:.3e})")


def gram_matrix(spec: KernelSpec, points: np.ndarray) -> np.ndarray:
    """Matrix K(q_a - q_b) for rows of ``points`` (pairwise distinct).

    Symmetric exactly (the profile sees only squared coordinates), positive
    definite for distinct points by Bochner's theorem.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ConfigurationError(f"points must be a (p, d) array, got shape {pts.shape}")
    check_distinct(pts)
    return kernel_value(spec, pts[:, None, :] - pts[None, :, :])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def kernel_fourier_oracle(spec: KernelSpec, r: np.ndarray, quad_points: int = 100_000) -> float:
    """Independent evaluation of the Bessel kernel straight from its Fourier form.

    Radial n-dimensional inverse transform of ``(1 + A s^2)^(-l)``:

        K(0)   = (2 pi)^(-n) vol(S^(n-1)) * int_0^inf s^(n-1) (1+A s^2)^(-l) ds
        K(rho) = (2 pi)^(-n/2) rho^(1-n/2) * int_0^inf s^(n/2) (1+A s^2)^(-l) J_(n/2-1)(rho s) ds

    evaluated with composite 16-point Gauss-Legendre panels on [0, S], S chosen
    so the analytic tail bound is below 1e-10.  Slow by design; this is the
    measurement the closed form is validated against, not a production path.
    """
    from scipy.special import jv

    if spec.family != BESSEL_FAMILY:
        raise UnsupportedError(f"kernel family {spec.family!r} has no Fourier-integral definition")
    if quad_points < 1_000:
        raise ConfigurationError("quad_points must be at least 1000")
    r = np.asarray(r, dtype=float)
    rho = float(np.linalg.norm(r))
    n, l, A, c = spec.n, spec.l, spec.A, spec.c

    if rho < 1e-12:
        pref = c * (2 * math.pi) ** (-n) * (2 * math.pi ** (n / 2) / math.gamma(n / 2))
        # tail: pref * A^-l * S^(n-2l) / (2l-n) <= 1e-10
        expo = 2 * l - n
        s_max = (pref * A ** (-l) / (expo * 1e-10)) ** (1.0 / expo)
        s_max = max(s_max, 50.0 / math.sqrt(A))

        def integrand(s: np.ndarray) -> np.ndarray:
            return pref * s ** (n - 1) * (1.0 + A * s * s) ** (-l)

    else:
        mu = n / 2 - 1
        pref = c * (2 * math.pi) ** (-n / 2) * rho ** (1 - n / 2)
        if mu >= 0:
            # |J_mu| <= 1: tail pref * A^-l S^(n/2+1-2l) / (2l - n/2 - 1)
            expo = 2 * l - n / 2 - 1
            s_max = (pref * A ** (-l) / (expo * 1e-10)) ** (1.0 / expo)
        else:
            # n = 1, mu = -1/2: |J_mu(z)| <= sqrt(2/(pi z))
            expo = 2 * l - n / 2 - 0.5
            amp = pref * math.sqrt(2 / (math.pi * rho))
            s_max = (amp * A ** (-l) / (expo * 1e-10)) ** (1.0 / expo)
        s_max = max(s_max, 50.0 / math.sqrt(A))

        def integrand(s: np.ndarray) -> np.ndarray:
            return pref * s ** (n / 2) * (1.0 + A * s * s) ** (-l) * jv(mu, rho * s)

    panels = max(4, quad_points // 16)
    edges = np.linspace(0.0, s_max, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    weights = half[:, None] * _GL_WEIGHTS[None, :]
    return float(np.sum(integrand(nodes.ravel()) * weights.ravel()))
