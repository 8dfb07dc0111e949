"""Landmark configurations under a kernel cometric.

``p`` labeled points in ``R^D`` carry the cometric
``g^{(a,i)(b,j)}(q) = K(q_a - q_b) delta^{ij}`` on the flattened chart
``x_{(a-1)D + i} = q_a^i``.  This module assembles exact jets of that cometric
straight from kernel derivatives, and specializes the Hamiltonian flow, the
force/stress primitives, and every curvature term so each double loop runs
over landmark pairs instead of the flattened chart.

Sign convention: the force and stress here live on the *induced* side, i.e.
``force(metric, q, a, a) == pdot`` of the geodesic flow exactly; they are the
negatives of the chart-level :func:`cometric.curvature.force` /
:func:`cometric.curvature.stress`.  Curvature terms are insensitive to the
flip because force and stress always enter in pairs; the ``m = 0`` reduction
test pins this down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import PLANE_TOL, CurvatureBreakdown
from .errors import ConditioningError, ConfigurationError
from .jets import CometricJet, assemble_jet
from .kernels import KernelSpec, check_distinct, kernel_grad, kernel_hess, kernel_value

# Above this condition number the kernel Gram solve in the bracket term is
# not trustworthy and the curvature routine refuses.
GRAM_COND_LIMIT = 1e12


@dataclass(frozen=True)
class LandmarkMetric:
    """Kernel + landmark count + ambient dimension.

    Differential operations need a curvature-grade kernel (``2l > n + 2``)
    whose dimension dominates the ambient one (``D <= n``); restricting a
    positive-definite radial profile to a subspace keeps it positive definite,
    extending it does not.
    """

    kernel: KernelSpec
    p: int
    D: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ConfigurationError(f"need at least one landmark, got p={self.p}")
        if self.D < 1:
            raise ConfigurationError(f"ambient dimension must be >= 1, got D={self.D}")
        if self.D > self.kernel.n:
            raise ConfigurationError(
                f"ambient dimension D={self.D} exceeds the kernel dimension n={self.kernel.n}"
            )

    @property
    def dim(self) -> int:
        return self.p * self.D


def _check_q(metric: LandmarkMetric, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (metric.p, metric.D):
        raise ConfigurationError(f"landmark positions must have shape ({metric.p}, {metric.D}), got {q.shape}")
    check_distinct(q, what="landmarks")
    return q


def _check_mom(metric: LandmarkMetric, a: np.ndarray, name: str = "momenta") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (metric.p, metric.D):
        raise ConfigurationError(f"{name} must have shape ({metric.p}, {metric.D}), got {a.shape}")
    return a


def landmark_cometric_jet(metric: LandmarkMetric, q: np.ndarray) -> CometricJet:
    """Exact 2-jet of the landmark cometric at ``q`` (flattened chart)."""
    metric.kernel.require_curvature_grade()
    q = _check_q(metric, q)
    p, D = metric.p, metric.D
    diff = q[:, None, :] - q[None, :, :]
    kv = kernel_value(metric.kernel, diff)        # (p, p)
    kg = kernel_grad(metric.kernel, diff)         # (p, p, D)
    kh = kernel_hess(metric.kernel, diff)         # (p, p, D, D)

    eye_d = np.eye(D)
    delta = np.eye(p)
    fac = delta[:, :, None] - delta[:, None, :]   # fac[c, a, b] = d_ca - d_cb

    ginv = np.einsum("ab,ij->aibj", kv, eye_d).reshape(p * D, p * D)
    dginv = np.einsum("cab,abm,ij->cmaibj", fac, kg, eye_d).reshape(p * D, p * D, p * D)
    fac2 = np.einsum("cab,dab->cdab", fac, fac)
    ddginv = np.einsum("cdab,abmn,ij->cmdnaibj", fac2, kh, eye_d).reshape(
        p * D, p * D, p * D, p * D
    )
    return assemble_jet(q.reshape(-1), ginv, dginv, ddginv)


def hamiltonian(metric: LandmarkMetric, q: np.ndarray, mom: np.ndarray) -> float:
    """``H(q, p) = 1/2 sum_ab (p_a . p_b) K(q_a - q_b)``."""
    q = _check_q(metric, q)
    mom = _check_mom(metric, mom)
    kv = kernel_value(metric.kernel, q[:, None, :] - q[None, :, :])
    dots = mom @ mom.T
    return 0.5 * float(np.einsum("ab,ab->", dots, kv))


def geodesic_rhs(metric: LandmarkMetric, q: np.ndarray, mom: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hamilton's equations:
    ``qdot_a = sum_b K(q_a-q_b) p_b``, ``pdot_a = -sum_b (p_a.p_b) grad K(q_a-q_b)``."""
    q = _check_q(metric, q)
    mom = _check_mom(metric, mom)
    diff = q[:, None, :] - q[None, :, :]
    kv = kernel_value(metric.kernel, diff)
    kg = kernel_grad(metric.kernel, diff)
    dots = mom @ mom.T
    qdot = kv @ mom
    pdot = -np.einsum("ab,abm->am", dots, kg)
    return qdot, pdot


def velocity(metric: LandmarkMetric, q: np.ndarray, mom: np.ndarray) -> np.ndarray:
    """Raised momenta ``u_a = sum_b K(q_a - q_b) p_b`` (the landmark sharp)."""
    q = _check_q(metric, q)
    mom = _check_mom(metric, mom)
    kv = kernel_value(metric.kernel, q[:, None, :] - q[None, :, :])
    return kv @ mom


def force(metric: LandmarkMetric, q: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Induced-side force:
    ``F(a,b)_c = -1/2 sum_t [(a_c.b_t) + (a_t.b_c)] grad K(q_c - q_t)``;
    in particular ``force(q, p, p)`` is exactly the geodesic ``pdot``."""
    q = _check_q(metric, q)
    a = _check_mom(metric, a)
    b = _check_mom(metric, b)
    kg = kernel_grad(metric.kernel, q[:, None, :] - q[None, :, :])
    mixed = a @ b.T  # mixed[c, t] = a_c . b_t
    return -0.5 * (np.einsum("ct,ctm->cm", mixed, kg) + np.einsum("tc,ctm->cm", mixed, kg))


def stress(metric: LandmarkMetric, q: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Induced-side stress:
    ``D(a,b)_d = -sum_t [(u_d - u_t) . grad K(q_d - q_t)] b_t`` with ``u``
    the raised field of ``a``."""
    q = _check_q(metric, q)
    a = _check_mom(metric, a)
    b = _check_mom(metric, b)
    diff = q[:, None, :] - q[None, :, :]
    kv = kernel_value(metric.kernel, diff)
    kg = kernel_grad(metric.kernel, diff)
    u = kv @ a
    du = u[:, None, :] - u[None, :, :]
    coeff = np.einsum("dtm,dtm->dt", du, kg)
    return -coeff @ b


def _gram_solve(kv: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Solve ``K xi = w`` per column, guarding against ill-conditioning."""
    cond = float(np.linalg.cond(kv))
    if not np.isfinite(cond) or cond > GRAM_COND_LIMIT:
        raise ConditioningError(f"kernel Gram matrix condition number {cond:.3e} exceeds {GRAM_COND_LIMIT:.0e}")
    return np.linalg.solve(kv, w)


def curvature(metric: LandmarkMetric, q: np.ndarray, a: np.ndarray, b: np.ndarray) -> CurvatureBreakdown:
    """Sectional-curvature numerator terms over landmark pairs.

    Same values as running the chart-level forms on
    :func:`landmark_cometric_jet`, but with every contraction collapsed to
    sums over landmark pairs; a single landmark yields exact zeros.
    """
    metric.kernel.require_curvature_grade()
    q = _check_q(metric, q)
    a = _check_mom(metric, a)
    b = _check_mom(metric, b)
    diff = q[:, None, :] - q[None, :, :]
    kv = kernel_value(metric.kernel, diff)
    kg = kernel_grad(metric.kernel, diff)
    kh = kernel_hess(metric.kernel, diff)

    u = kv @ a
    v = kv @ b
    du = u[:, None, :] - u[None, :, :]
    dv = v[:, None, :] - v[None, :, :]
    dots_aa = a @ a.T
    dots_bb = b @ b.T
    dots_ab = a @ b.T  # [s, t] = a_s . b_t

    r11 = 0.5 * (
        float(np.einsum("st,stm,stmn,stn->", dots_bb, du, kh, du))
        - 2.0 * float(np.einsum("st,stm,stmn,stn->", dots_ab, du, kh, dv))
        + float(np.einsum("st,stm,stmn,stn->", dots_aa, dv, kh, dv))
    )

    mixed_ab = dots_ab
    f_aa = -0.5 * (np.einsum("ct,ctm->cm", dots_aa, kg) + np.einsum("tc,ctm->cm", dots_aa, kg))
    f_bb = -0.5 * (np.einsum("ct,ctm->cm", dots_bb, kg) + np.einsum("tc,ctm->cm", dots_bb, kg))
    f_ab = -0.5 * (np.einsum("ct,ctm->cm", mixed_ab, kg) + np.einsum("tc,ctm->cm", mixed_ab, kg))
    coeff_a = np.einsum("dtm,dtm->dt", du, kg)
    coeff_b = np.einsum("dtm,dtm->dt", dv, kg)
    d_aa = -coeff_a @ a
    d_bb = -coeff_b @ b
    d_ab = -coeff_a @ b
    d_ba = -coeff_b @ a

    r12 = float(np.einsum("cm,cm->", f_aa, d_bb) + np.einsum("cm,cm->", f_bb, d_aa)
                - np.einsum("cm,cm->", f_ab, d_ab + d_ba))

    r2 = float(np.einsum("sm,st,tm->", f_ab, kv, f_ab) - np.einsum("sm,st,tm->", f_aa, kv, f_bb))

    w = d_ab - d_ba
    if float(np.abs(w).max()) == 0.0:
        r3 = 0.0
    else:
        xi = _gram_solve(kv, w)
        r3 = -0.75 * float(np.einsum("sm,sm->", xi, w))

    paa = float(np.einsum("st,st->", dots_aa, kv))
    pbb = float(np.einsum("st,st->", dots_bb, kv))
    pab = float(np.einsum("st,st->", dots_ab, kv))
    den = paa * pbb - pab * pab
    total = r11 + r12 + r2 + r3
    sectional = total / den if den > PLANE_TOL * max(paa * pbb, 1e-300) else None
    return CurvatureBreakdown(r11=r11, r12=r12, r2=r2, r3=r3, total=total,
                              denominator=den, sectional=sectional)


# --- state serialization ------------------------------------------------------

def state_from_json(obj: dict) -> tuple[int, np.ndarray, np.ndarray]:
    """Read ``{"D": D, "q": [[...]], "p": [[...]]}``; returns ``(D, q, p)``."""
    if not isinstance(obj, dict) or "D" not in obj or "q" not in obj:
        raise ConfigurationError("landmark state JSON needs 'D' and 'q'")
    D = obj["D"]
    if not isinstance(D, int) or D < 1:
        raise ConfigurationError(f"bad ambient dimension {D!r}")
    q = np.asarray(obj["q"], dtype=float)
    if q.ndim != 2 or q.shape[1] != D:
        raise ConfigurationError(f"positions must be a (p, {D}) array, got shape {q.shape}")
    if "p" in obj:
        mom = np.asarray(obj["p"], dtype=float)
        if mom.shape != q.shape:
            raise ConfigurationError(f"momenta shape {mom.shape} does not match positions {q.shape}")
    else:
        mom = np.zeros_like(q)
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(mom))):
        raise ConfigurationError("landmark state contains non-finite entries")
    check_distinct(q, what="landmarks")
    return D, q, mom


def state_to_json(q: np.ndarray, mom: np.ndarray) -> dict:
    q = np.asarray(q, dtype=float)
    mom = np.asarray(mom, dtype=float)
    return {"D": int(q.shape[1]), "q": q.tolist(), "p": mom.tolist()}
