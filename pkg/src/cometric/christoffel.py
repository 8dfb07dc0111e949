"""Christoffel-symbol route to the sectional-curvature numerator.

This is the cross-oracle for the jet-contraction forms in
:mod:`cometric.curvature`: it converts the cometric jet into a metric jet,
builds Christoffel symbols and the full (1,3) Riemann tensor, and contracts.
Everything classical, nothing shared with the other forms.

Two modes for the Christoffel derivative:

* ``exact``  — ``dGamma`` from the same 2-jet via the inversion identities
  (zero truncation error; the right choice whenever exact jets exist, which
  covers symbolic charts and landmark configurations alike).
* ``fd``     — central differences of ``Gamma`` with step
  ``h = eps^(1/3) (1 + |x|)``, needing only a jet provider ``x -> jet``.
Convention: ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``
and the numerator is ``g(R(u,v)v, u)``, positive on round spheres.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DegeneratePlaneError
from .jets import CometricJet

_EPS_CBRT = float(np.finfo(float).eps) ** (1.0 / 3.0)


@dataclass(frozen=True)
class MetricJet:
    """2-jet of the covariant metric, derived exactly from a cometric jet via
    ``dg = -g (d g^{-1}) g`` and its derivative."""

    x: np.ndarray
    gcov: np.ndarray    # (d, d)
    dgcov: np.ndarray   # (d, d, d): [s, i, j] = d_s g_ij
    ddgcov: np.ndarray  # (d, d, d, d): [s, t, i, j]
    ginv: np.ndarray


def metric_jet_from_cometric(jet: CometricJet) -> MetricJet:
    g = jet.gcov
    dGi = jet.dginv
    dg = -np.einsum("ip,spq,qj->sij", g, dGi, g)
    ddg = -(
        np.einsum("tip,spq,qj->stij", dg, dGi, g)
        + np.einsum("ip,stpq,qj->stij", g, jet.ddginv, g)
        + np.einsum("ip,spq,tqj->stij", g, dGi, dg)
    )
    return MetricJet(x=jet.x, gcov=g, dgcov=dg, ddgcov=ddg, ginv=jet.ginv)


def christoffel(mj: MetricJet) -> np.ndarray:
    """``Gamma[k, i, j]`` of the Levi-Civita connection (symmetric in i, j)."""
    dg = mj.dgcov
    koszul = np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg  # [l, i, j]
    return 0.5 * np.einsum("kl,lij->kij", mj.ginv, koszul)


def christoffel_derivative_exact(jet: CometricJet, mj: MetricJet) -> np.ndarray:
    """``dGamma[s, k, i, j] = d_s Gamma^k_ij`` from exact jet data."""
    dg, ddg = mj.dgcov, mj.ddgcov
    koszul = np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    dkoszul = np.einsum("sijl->slij", ddg) + np.einsum("sjil->slij", ddg) - ddg
    return 0.5 * (
        np.einsum("skl,lij->skij", jet.dginv, koszul)
        + np.einsum("kl,slij->skij", mj.ginv, dkoszul)
    )


def christoffel_derivative_fd(
    jet_fn: Callable[[np.ndarray], CometricJet], x: np.ndarray, h: float | None = None
) -> np.ndarray:
    """Central differences of ``Gamma`` around ``x`` using a jet provider."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    if h is None:
        h = _EPS_CBRT * (1.0 + float(np.linalg.norm(x)))
    out = np.empty((d, d, d, d))
    for s in range(d):
        step = np.zeros(d)
        step[s] = h
        gp = christoffel(metric_jet_from_cometric(jet_fn(x + step)))
        gm = christoffel(metric_jet_from_cometric(jet_fn(x - step)))
        out[s] = (gp - gm) / (2.0 * h)
    return out


def riemann(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """``R[l, i, j, k]`` with ``R(e_i, e_j) e_k = R^l_{ijk} e_l``."""
    return (
        np.einsum("iljk->lijk", dgamma)
        - np.einsum("jlik->lijk", dgamma)
        + np.einsum("lis,sjk->lijk", gamma, gamma)
        - np.einsum("ljs,sik->lijk", gamma, gamma)
    )


def sectional_numerator_oracle(
    jet: CometricJet,
    u: np.ndarray,
    v: np.ndarray,
    *,
    mode: str = "exact",
    jet_fn: Callable[[np.ndarray], CometricJet] | None = None,
    h: float | None = None,
) -> float:
    """``g(R(u,v)v, u)`` for chart *vectors* ``u``, ``v``.

    ``mode="exact"`` differentiates the Christoffel symbols from the jet's own
    second-order data; ``mode="fd"`` uses central differences and requires
    ``jet_fn``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = jet.dim
    if u.shape != (d,) or v.shape != (d,):
        raise ConfigurationError(f"vectors must have shape ({d},), got {u.shape} and {v.shape}")
    mj = metric_jet_from_cometric(jet)
    gamma = christoffel(mj)
    if mode == "exact":
        dgamma = christoffel_derivative_exact(jet, mj)
    elif mode == "fd":
        if jet_fn is None:
            raise ConfigurationError("mode='fd' needs a jet provider jet_fn")
        dgamma = christoffel_derivative_fd(jet_fn, jet.x, h)
    else:
        raise ConfigurationError(f"unknown oracle mode {mode!r} (want 'exact' or 'fd')")
    rm = riemann(gamma, dgamma)
    return float(np.einsum("lijk,l,i,j,k->", rm, mj.gcov @ u, u, v, v))


def sectional_curvature(jet: CometricJet, u: np.ndarray, v: np.ndarray, numerator: float) -> float:
    """Divide a numerator by the Gram determinant of the plane (vectors)."""
    g = jet.gcov
    guu = float(u @ g @ u)
    gvv = float(v @ g @ v)
    guv = float(u @ g @ v)
    den = guu * gvv - guv * guv
    scale = max(guu * gvv, 1e-300)
    if den <= 1e-12 * scale:
        raise DegeneratePlaneError(f"plane is degenerate (gram determinant {den:.3e}, scale {scale:.3e})")
    return numerator / den
