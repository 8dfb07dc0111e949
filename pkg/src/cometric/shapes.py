"""Discrete submanifolds: weighted samples with tangent frames and normal
momenta, moved horizontally by a kernel velocity field.

A shape is ``S`` samples ``x_s`` in ``R^n`` with quadrature weights ``w_s``,
orthonormal tangent frames (``m`` rows per sample; ``m = 0`` makes the shape a
plain landmark cloud with unit weights), and normal projectors
``P_s = I - sum_r t_r t_r^T``.  Momenta are covector *values* ``a_s`` (the
measure sits in the weights); everything pairs through the kernel:

    pairing(a, b)   = sum_st w_s w_t (a_s . b_t) K(x_s - x_t)
    u_a(y)          = sum_t K(y - x_t) a_t w_t

The geodesic system transports samples by the full field values and momenta by
minus the transposed velocity Jacobian; with ``m = 0`` it reduces bit-for-bit
(or to 1e-12) to the landmark system, which is the identity the acceptance
suite enforces.  Force, stress and curvature terms mirror the landmark
formulas with weights and normal projection; the bracket term restricts the
kernel Gram solve to the normal bundle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curvature import PLANE_TOL, CurvatureBreakdown
from .errors import ConditioningError, ConfigurationError, DegenerateConfigurationError
from .kernels import KernelSpec, check_distinct, kernel_grad, kernel_hess, kernel_value

GRAM_COND_LIMIT = 1e12


@dataclass(frozen=True)
class DiscreteSubmanifold:
    """Samples (S, n), weights (S,), orthonormal tangent frames (S, m, n),
    normal projectors (S, n, n)."""

    x: np.ndarray
    w: np.ndarray
    tangents: np.ndarray
    projectors: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2:
            raise ConfigurationError(f"samples must form a (S, n) array, got shape {x.shape}")
        s, n = x.shape
        w = np.asarray(self.w, dtype=float)
        t = np.asarray(self.tangents, dtype=float)
        pr = np.asarray(self.projectors, dtype=float)
        if w.shape != (s,):
            raise ConfigurationError(f"weights must have shape ({s},), got {w.shape}")
        if np.any(w <= 0.0):
            raise ConfigurationError("weights must be positive")
        if t.ndim != 3 or t.shape[0] != s or t.shape[2] != n:
            raise ConfigurationError(f"tangent frames must have shape ({s}, m, {n}), got {t.shape}")
        if t.shape[1] >= n:
            raise ConfigurationError(f"tangent dimension m={t.shape[1]} must be < n={n}")
        if pr.shape != (s, n, n):
            raise ConfigurationError(f"projectors must have shape ({s}, {n}, {n}), got {pr.shape}")
        check_distinct(x, what="samples")

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def m(self) -> int:
        return self.tangents.shape[1]

    @property
    def samples(self) -> int:
        return self.x.shape[0]


def landmark_shape(q: np.ndarray) -> DiscreteSubmanifold:
    """A landmark cloud as the ``m = 0`` shape: unit weights, empty frames,
    identity projectors."""
    q = np.asarray(q, dtype=float)
    s, n = q.shape
    return DiscreteSubmanifold(
        x=q,
        w=np.ones(s),
        tangents=np.zeros((s, 0, n)),
        projectors=np.broadcast_to(np.eye(n), (s, n, n)).copy(),
    )


def _closed_curve_frames(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Unit tangents by centered differences around a closed polygon, plus the
    normal projectors and a frame-quality indicator (min chord / max chord)."""
    s, n = x.shape
    if s < 3:
        raise ConfigurationError("a closed curve needs at least 3 samples")
    chord = np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)
    norms = np.linalg.norm(chord, axis=1)
    scale = float(np.abs(x).max()) + 1.0
    if float(norms.min()) <= 1e-13 * scale:
        raise DegenerateConfigurationError("curve samples collapsed: centered difference vanished")
    t = chord / norms[:, None]
    proj = np.broadcast_to(np.eye(n), (s, n, n)) - np.einsum("si,sj->sij", t, t)
    quality = float(norms.min() / norms.max())
    return t[:, None, :], np.ascontiguousarray(proj), quality


def closed_curve(x: np.ndarray, w: np.ndarray | None = None) -> DiscreteSubmanifold:
    """Shape from ordered samples of a closed curve (m = 1).

    Weights default to the polygon arc-length trapezoid rule.
    """
    x = np.asarray(x, dtype=float)
    tangents, projectors, _ = _closed_curve_frames(x)
    if w is None:
        seg = np.linalg.norm(np.roll(x, -1, axis=0) - x, axis=1)
        w = 0.5 * (seg + np.roll(seg, 1))
    return DiscreteSubmanifold(x=x, w=np.asarray(w, dtype=float), tangents=tangents, projectors=projectors)


def rederive_frames(shape: DiscreteSubmanifold) -> tuple[DiscreteSubmanifold, float]:
    """Refresh tangent frames/projectors from the current samples.

    Returns the refreshed shape and a quality number in (0, 1] (ratio of the
    smallest to the largest centered chord; 1.0 for ``m = 0`` where there is
    nothing to derive).  Callers flag degradation instead of failing hard.
    """
    if shape.m == 0:
        return shape, 1.0
    if shape.m != 1:
        raise ConfigurationError(f"frame re-derivation implemented for curves (m=1), got m={shape.m}")
    tangents, projectors, quality = _closed_curve_frames(shape.x)
    return replace(shape, tangents=tangents, projectors=projectors), quality


def make_circle(samples: int, radius: float = 1.0, center: tuple[float, float] = (0.0, 0.0)) -> DiscreteSubmanifold:
    """Uniformly sampled circle in R^2 with exact uniform weights ``2 pi r / S``."""
    if samples < 3:
        raise ConfigurationError("a circle needs at least 3 samples")
    if radius <= 0:
        raise ConfigurationError("circle radius must be positive")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    x = np.stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)], axis=1)
    t = np.stack([-np.sin(theta), np.cos(theta)], axis=1)[:, None, :]
    proj = np.broadcast_to(np.eye(2), (samples, 2, 2)) - np.einsum("smi,smj->sij", t, t)
    w = np.full(samples, 2.0 * np.pi * radius / samples)
    return DiscreteSubmanifold(x=x, w=w, tangents=t, projectors=np.ascontiguousarray(proj))


def _check_mom(shape: DiscreteSubmanifold, a: np.ndarray, name: str = "momenta") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != shape.x.shape:
        raise ConfigurationError(f"{name} must have shape {shape.x.shape}, got {a.shape}")
    return a


def normality_defect(shape: DiscreteSubmanifold, a: np.ndarray) -> float:
    """``max_s |tangential part of a_s| / |a_s|`` (0 when every row is zero)."""
    a = _check_mom(shape, a)
    if shape.m == 0:
        return 0.0
    normal = np.einsum("sij,sj->si", shape.projectors, a)
    resid = np.linalg.norm(a - normal, axis=1)
    norms = np.linalg.norm(a, axis=1)
    mask = norms > 0.0
    if not np.any(mask):
        return 0.0
    return float((resid[mask] / norms[mask]).max())


def project_normal(shape: DiscreteSubmanifold, a: np.ndarray) -> np.ndarray:
    """Project covector values onto the normal bundle row by row."""
    a = _check_mom(shape, a)
    return np.einsum("sij,sj->si", shape.projectors, a)


def induced_pairing(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, b: np.ndarray) -> float:
    """``sum_st w_s w_t (a_s . b_t) K(x_s - x_t)``."""
    a = _check_mom(shape, a)
    b = _check_mom(shape, b)
    kv = kernel_value(spec, shape.x[:, None, :] - shape.x[None, :, :])
    dots = (a @ b.T) * shape.w[:, None] * shape.w[None, :]
    return float(np.einsum("st,st->", dots, kv))


def horizontal_velocity(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Field values ``u_a(y) = sum_t K(y - x_t) a_t w_t`` at query points ``y``
    (shape (n,) or (Q, n))."""
    a = _check_mom(shape, a)
    y = np.asarray(y, dtype=float)
    single = y.ndim == 1
    ys = y[None, :] if single else y
    kv = kernel_value(spec, ys[:, None, :] - shape.x[None, :, :])
    u = (kv * shape.w[None, :]) @ a
    return u[0] if single else u


def velocity_jacobian(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Jacobians ``J[i, m] = d_m u_a^i`` of the field at query points."""
    a = _check_mom(shape, a)
    y = np.asarray(y, dtype=float)
    single = y.ndim == 1
    ys = y[None, :] if single else y
    kg = kernel_grad(spec, ys[:, None, :] - shape.x[None, :, :])
    jac = np.einsum("qtm,t,ti->qim", kg, shape.w, a)
    return jac[0] if single else jac


def geodesic_rhs(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Horizontal geodesic system:
    ``xdot_s = u_a(x_s)`` (full field values) and
    ``adot_s = -(Du(x_s))^T a_s`` (Jacobian-transpose transport; weights stay
    fixed).  With ``m = 0`` this is exactly the landmark system."""
    a = _check_mom(shape, a)
    diff = shape.x[:, None, :] - shape.x[None, :, :]
    kv = kernel_value(spec, diff)
    kg = kernel_grad(spec, diff)
    xdot = (kv * shape.w[None, :]) @ a
    dots = (a @ a.T) * shape.w[None, :]
    adot = -np.einsum("st,stm->sm", dots, kg)
    return xdot, adot


def force_normal(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Projected induced-side force:
    ``F_N(a,b)_s = -1/2 P_s sum_t w_t [(a_s.b_t) + (a_t.b_s)] grad K(x_s-x_t)``;
    ``force_normal(a, a)`` matches the normal part of the geodesic ``adot``."""
    a = _check_mom(shape, a)
    b = _check_mom(shape, b)
    kg = kernel_grad(spec, shape.x[:, None, :] - shape.x[None, :, :])
    mixed = a @ b.T
    raw = -0.5 * (
        np.einsum("st,t,stm->sm", mixed, shape.w, kg)
        + np.einsum("ts,t,stm->sm", mixed, shape.w, kg)
    )
    return np.einsum("sij,sj->si", shape.projectors, raw)


def stress_normal(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Projected induced-side stress:
    ``D_N(a,b)_s = -P_s sum_t w_t [(u_a(x_s) - u_a(x_t)) . grad K(x_s-x_t)] b_t``."""
    a = _check_mom(shape, a)
    b = _check_mom(shape, b)
    diff = shape.x[:, None, :] - shape.x[None, :, :]
    kv = kernel_value(spec, diff)
    kg = kernel_grad(spec, diff)
    u = (kv * shape.w[None, :]) @ a
    du = u[:, None, :] - u[None, :, :]
    coeff = np.einsum("stm,stm->st", du, kg)
    raw = -np.einsum("st,t,tm->sm", coeff, shape.w, b)
    return np.einsum("sij,sj->si", shape.projectors, raw)


def _normal_basis(shape: DiscreteSubmanifold) -> np.ndarray:
    """Orthonormal normal frames (S, n-m, n) from the projectors."""
    s, n = shape.x.shape
    m = shape.m
    if m == 0:
        return np.broadcast_to(np.eye(n), (s, n, n)).copy()
    if m == 1 and n == 2:
        t = shape.tangents[:, 0, :]
        nu = np.stack([-t[:, 1], t[:, 0]], axis=1)
        return nu[:, None, :]
    vals, vecs = np.linalg.eigh(shape.projectors)
    basis = vecs[:, :, m:]  # eigenvalue ~1 block
    return np.ascontiguousarray(np.swapaxes(basis, 1, 2))


def _normal_gram_solve(spec: KernelSpec, shape: DiscreteSubmanifold, w_field: np.ndarray) -> np.ndarray:
    """Solve ``sum_t K_st w_t xi_t = W_s`` for a normal covector field ``xi``.

    With ``m = 0`` this is the plain per-component kernel Gram solve; otherwise
    the system is reduced to normal coordinates so the solution stays normal.
    """
    kv = kernel_value(spec, shape.x[:, None, :] - shape.x[None, :, :])
    if shape.m == 0:
        mat = kv * shape.w[None, :]
        cond = float(np.linalg.cond(mat))
        if not np.isfinite(cond) or cond > GRAM_COND_LIMIT:
            raise ConditioningError(f"kernel Gram matrix condition number {cond:.3e} exceeds {GRAM_COND_LIMIT:.0e}")
        return np.linalg.solve(mat, w_field)
    basis = _normal_basis(shape)  # (S, n-m, n)
    s, r, n = basis.shape
    w_hat = np.einsum("sri,si->sr", basis, w_field)
    cross = np.einsum("sri,tqi->srtq", basis, basis)  # V_s V_t^T blocks
    mat = (kv[:, None, :, None] * shape.w[None, None, :, None] * cross).reshape(s * r, s * r)
    cond = float(np.linalg.cond(mat))
    if not np.isfinite(cond) or cond > GRAM_COND_LIMIT:
        raise ConditioningError(f"normal-bundle Gram matrix condition number {cond:.3e} exceeds {GRAM_COND_LIMIT:.0e}")
    xi_hat = np.linalg.solve(mat, w_hat.reshape(-1)).reshape(s, r)
    return np.einsum("sri,sr->si", basis, xi_hat)


def curvature_terms(spec: KernelSpec, shape: DiscreteSubmanifold, a: np.ndarray, b: np.ndarray) -> CurvatureBreakdown:
    """Curvature numerator terms for normal momenta on a discrete shape.

    Mirrors the landmark formulas with weights and normal projection; reduces
    to them when ``m = 0``.
    """
    spec.require_curvature_grade()
    a = _check_mom(shape, a)
    b = _check_mom(shape, b)
    w = shape.w
    diff = shape.x[:, None, :] - shape.x[None, :, :]
    kv = kernel_value(spec, diff)
    kg = kernel_grad(spec, diff)
    kh = kernel_hess(spec, diff)

    u = (kv * w[None, :]) @ a
    v = (kv * w[None, :]) @ b
    du = u[:, None, :] - u[None, :, :]
    dv = v[:, None, :] - v[None, :, :]
    ww = w[:, None] * w[None, :]
    dots_aa = (a @ a.T) * ww
    dots_bb = (b @ b.T) * ww
    dots_ab = (a @ b.T) * ww

    r11 = 0.5 * (
        float(np.einsum("st,stm,stmn,stn->", dots_bb, du, kh, du))
        - 2.0 * float(np.einsum("st,stm,stmn,stn->", dots_ab, du, kh, dv))
        + float(np.einsum("st,stm,stmn,stn->", dots_aa, dv, kh, dv))
    )

    f_aa = force_normal(spec, shape, a, a)
    f_bb = force_normal(spec, shape, b, b)
    f_ab = force_normal(spec, shape, a, b)
    d_aa = stress_normal(spec, shape, a, a)
    d_bb = stress_normal(spec, shape, b, b)
    d_ab = stress_normal(spec, shape, a, b)
    d_ba = stress_normal(spec, shape, b, a)

    r12 = float(np.einsum("s,sm,sm->", w, f_aa, d_bb) + np.einsum("s,sm,sm->", w, f_bb, d_aa)
                - np.einsum("s,sm,sm->", w, f_ab, d_ab + d_ba))

    kw = kv * ww
    r2 = float(np.einsum("sm,st,tm->", f_ab, kw, f_ab) - np.einsum("sm,st,tm->", f_aa, kw, f_bb))

    w_br = d_ab - d_ba
    if float(np.abs(w_br).max()) == 0.0:
        r3 = 0.0
    else:
        xi = _normal_gram_solve(spec, shape, w_br)
        r3 = -0.75 * float(np.einsum("sm,sm->", xi * w[:, None], w_br))

    paa = float(np.einsum("st,st->", dots_aa, kv))
    pbb = float(np.einsum("st,st->", dots_bb, kv))
    pab = float(np.einsum("st,st->", dots_ab, kv))
    den = paa * pbb - pab * pab
    total = r11 + r12 + r2 + r3
    sectional = total / den if den > PLANE_TOL * max(paa * pbb, 1e-300) else None
    return CurvatureBreakdown(r11=r11, r12=r12, r2=r2, r3=r3, total=total,
                              denominator=den, sectional=sectional)


# --- serialization -----------------------------------------------------------

def shape_from_json(obj: dict) -> tuple[DiscreteSubmanifold, np.ndarray | None]:
    """Read ``{"n":..,"m":..,"samples":..,"weights":..,"tangents":..,"momenta":..}``;
    momenta are optional."""
    for key in ("n", "m", "samples", "weights", "tangents"):
        if key not in obj:
            raise ConfigurationError(f"shape JSON is missing {key!r}")
    n, m = obj["n"], obj["m"]
    x = np.asarray(obj["samples"], dtype=float)
    w = np.asarray(obj["weights"], dtype=float)
    t = np.asarray(obj["tangents"], dtype=float)
    if x.ndim != 2 or x.shape[1] != n:
        raise ConfigurationError(f"samples must be (S, {n}), got {x.shape}")
    if t.shape != (x.shape[0], m, n):
        raise ConfigurationError(f"tangents must be ({x.shape[0]}, {m}, {n}), got {t.shape}")
    proj = np.broadcast_to(np.eye(n), (x.shape[0], n, n)) - np.einsum("smi,smj->sij", t, t)
    shape = DiscreteSubmanifold(x=x, w=w, tangents=t, projectors=np.ascontiguousarray(proj))
    mom = None
    if obj.get("momenta") is not None:
        mom = np.asarray(obj["momenta"], dtype=float)
        if mom.shape != x.shape:
            raise ConfigurationError(f"momenta must be {x.shape}, got {mom.shape}")
    return shape, mom


def shape_to_json(shape: DiscreteSubmanifold, momenta: np.ndarray | None = None) -> dict:
    out = {
        "n": int(shape.n),
        "m": int(shape.m),
        "samples": shape.x.tolist(),
        "weights": shape.w.tolist(),
        "tangents": shape.tangents.tolist(),
    }
    if momenta is not None:
        out["momenta"] = np.asarray(momenta, dtype=float).tolist()
    return out
