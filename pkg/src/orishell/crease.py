"""Fold angle between panel directors and the barrier crease energy.

A crease segment is described locally by six current vectors::

    y = [x_o1, x_o2, p1, p2, q1, q2]

the two endpoint positions and the deformed end directors of panel a (p)
and panel b (q).  Derivatives are taken w.r.t. the corresponding 18 DOFs;
the translations enter through the unit crease axis about which the angle is measured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BarrierOverflow, CreaseError, ZeroDirector

# closest approach to +-pi before a state counts as a barrier overflow
PHI_MIN = float(np.arccos(1.0 - 1e-15))
GAUSS_S = np.array([-1.0, 1.0]) / np.sqrt(3.0)


@dataclass(frozen=True)
class CreaseParams:
    """Folding parameters; every field may be a scalar or an array over creases."""

    k_f: np.ndarray
    theta0: np.ndarray
    theta_L: np.ndarray
    theta_R: np.ndarray
    length: np.ndarray

    @classmethod
    def from_segments(cls, segments):
        f = lambda name: np.array([getattr(s, name) for s in segments], dtype=float)
        return cls(f("k_f"), f("theta0"), f("theta_L"), f("theta_R"), f("length"))


@dataclass(frozen=True)
class FoldAngleState:
    theta: np.ndarray
    p: np.ndarray
    q: np.ndarray
    axis: np.ndarray


def _skew(v):
    z = np.zeros(v.shape[:-1])
    return np.stack(
        [np.stack([z, -v[..., 2], v[..., 1]], -1), np.stack([v[..., 2], z, -v[..., 0]], -1), np.stack([-v[..., 1], v[..., 0], z], -1)],
        -2,
    )


def fold_angle(p, q, axis):
    """Signed angle from p to q about the crease axis, in (-pi, pi].

    Equals +-acos(p.q / |p||q|) with the sign of (p x q).axis whenever p x q is
    along the axis, and stays smooth through theta = 0.
    """
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    axis = np.asarray(axis, float)
    e = axis / np.linalg.norm(axis, axis=-1, keepdims=True)
    return np.arctan2(np.einsum("...d,...d->...", e, np.cross(p, q)), np.einsum("...d,...d->...", p, q))


def interpolate_directors(y, s):
    L1, L2 = 0.5 * (1 - s), 0.5 * (1 + s)
    p = L1 * y[..., 2, :] + L2 * y[..., 3, :]
    q = L1 * y[..., 4, :] + L2 * y[..., 5, :]
    return p, q


def fold_angle_at(y, s) -> FoldAngleState:
    """Fold angle at crease coordinate s in [-1, 1]; y is (..., 6, 3)."""
    y = np.asarray(y, float)
    p, q = interpolate_directors(y, s)
    axis = y[..., 1, :] - y[..., 0, :]
    return FoldAngleState(fold_angle(p, q, axis), p, q, axis)


def fold_angle_derivatives(p, q, axis, h=None):
    """theta with its gradient (..., 9) and Hessian (..., 9, 9) w.r.t. (axis, p, q)."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    t = np.asarray(axis, float)
    if h is not None and (
        np.any(np.linalg.norm(p, axis=-1) < 1e-12 * h) or np.any(np.linalg.norm(q, axis=-1) < 1e-12 * h)
    ):
        raise ZeroDirector("interpolated director has vanishing length")
    lt = np.linalg.norm(t, axis=-1)
    if np.any(lt <= 0):
        raise CreaseError("crease axis has zero length")
    e = t / lt[..., None]
    w = np.cross(p, q)
    s = np.einsum("...d,...d->...", e, w)
    c = np.einsum("...d,...d->...", p, q)
    theta = np.arctan2(s, c)
    if np.any(np.abs(theta) >= np.pi - PHI_MIN):
        raise BarrierOverflow("fold angle reached +-pi")

    ex = lambda v: v[..., None]
    outer = lambda u, v: u[..., :, None] * v[..., None, :]
    eye = np.broadcast_to(np.eye(3), e.shape[:-1] + (3, 3))
    Pt = eye - outer(e, e)
    ds = np.concatenate([np.einsum("...ij,...j->...i", Pt, w) / ex(lt), np.cross(q, e), np.cross(e, p)], -1)
    dc = np.concatenate([np.zeros_like(t), q, p], -1)

    zero = np.zeros(e.shape[:-1] + (3, 3))
    lt3 = ex(ex(lt**3))
    tw = ex(ex(np.einsum("...d,...d->...", t, w)))
    s_tt = -(outer(w, t) + outer(t, w) + tw * eye) / lt3 + 3 * tw * outer(t, t) / (lt3 * ex(ex(lt**2)))
    s_tp = -Pt @ _skew(q) / ex(ex(lt))
    s_tq = Pt @ _skew(p) / ex(ex(lt))
    s_pq = -_skew(e)
    d2s = np.concatenate(
        [
            np.concatenate([s_tt, s_tp, s_tq], -1),
            np.concatenate([np.swapaxes(s_tp, -1, -2), zero, s_pq], -1),
            np.concatenate([np.swapaxes(s_tq, -1, -2), np.swapaxes(s_pq, -1, -2), zero], -1),
        ],
        -2,
    )
    d2c = np.concatenate(
        [
            np.concatenate([zero, zero, zero], -1),
            np.concatenate([zero, zero, eye], -1),
            np.concatenate([zero, eye, zero], -1),
        ],
        -2,
    )
    r2 = s * s + c * c
    dtheta = (ex(c) * ds - ex(s) * dc) / ex(r2)
    g = ex(ex(1.0 / r2))
    d2theta = g * (
        ex(ex(c)) * d2s - ex(ex(s)) * d2c + outer(ds, dc) - outer(dc, ds)
    ) - 2 * g * outer(dtheta, ex(s) * ds + ex(c) * dc)
    d2theta = 0.5 * (d2theta + np.swapaxes(d2theta, -1, -2))
    return theta, dtheta, d2theta


def _density_all(theta, params: CreaseParams):
    shape = np.shape(theta)
    theta = np.atleast_1d(np.asarray(theta, float))
    if np.any(np.abs(theta) >= np.pi):
        raise BarrierOverflow("|theta| >= pi: barrier energy is infinite")
    k, t0, tl, tr = params.k_f, params.theta0, params.theta_L, params.theta_R
    k, t0, tl, tr = np.broadcast_arrays(*(np.asarray(v, float) for v in (k, t0, tl, tr)), theta)[:4]

    psi = 0.5 * k * (theta - t0) ** 2
    d1 = k * (theta - t0)
    d2 = np.array(k, dtype=float, copy=True)

    right = theta > tr
    if np.any(right):
        kr, t0r, trr, th = k[right], t0[right], tr[right], theta[right]
        u = np.pi * (th - trr) / (2 * (np.pi - trr))
        cu = np.cos(u)
        psi[right] = (
            0.5 * kr * (trr - t0r) ** 2 + kr * (trr - t0r) * (th - trr) - 4 * kr * (np.pi - trr) ** 2 / np.pi**2 * np.log(np.abs(cu))
        )
        d1[right] = kr * (trr - t0r) + 2 * kr * (np.pi - trr) / np.pi * np.tan(u)
        d2[right] = kr / cu**2
    left = theta < tl
    if np.any(left):
        kl, t0l, tll, th = k[left], t0[left], tl[left], theta[left]
        v = np.pi * (tll - th) / (2 * (tll + np.pi))
        cv = np.cos(v)
        psi[left] = (
            0.5 * kl * (t0l - tll) ** 2 + kl * (t0l - tll) * (tll - th) - 4 * kl * (tll + np.pi) ** 2 / np.pi**2 * np.log(np.abs(cv))
        )
        d1[left] = -kl * (t0l - tll) - 2 * kl * (tll + np.pi) / np.pi * np.tan(v)
        d2[left] = kl / cv**2
    if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(d1))):
        raise BarrierOverflow("barrier energy overflowed")
    if not shape and psi.shape == (1,):
        return psi[0], d1[0], d2[0]
    return psi, d1, d2


def crease_energy_density(theta, params: CreaseParams):
    """Folding energy per unit crease length (quadratic core, log barriers outside)."""
    return _density_all(theta, params)[0]


def crease_density_derivatives(theta, params: CreaseParams):
    """(psi, d psi / d theta, d^2 psi / d theta^2)."""
    return _density_all(theta, params)


def crease_contribution(y, params: CreaseParams, h=None, hessian=True):
    """Energy, gradient (C, 18) and Hessian (C, 18, 18) of a batch of creases.

    The angle is integrated along the segment with 2-point Gauss quadrature,
    ``energy = l/2 * sum_g psi(theta(s_g))``.
    """
    y = np.asarray(y, float).reshape(-1, 6, 3)
    n = len(y)
    axis = y[:, 1] - y[:, 0]
    energy = np.zeros(n)
    grad = np.zeros((n, 18))
    hess = np.zeros((n, 18, 18)) if hessian else None
    half_l = 0.5 * np.broadcast_to(np.asarray(params.length, float), (n,))
    # (axis, p, q) -> 18 local DOFs: axis = x_o2 - x_o1, p and q blend the end directors
    for s in GAUSS_S:
        L1, L2 = 0.5 * (1 - s), 0.5 * (1 + s)
        p, q = interpolate_directors(y, s)
        theta, dth, d2th = fold_angle_derivatives(p, q, axis, h)
        psi, d1, d2 = _density_all(theta, params)
        energy += half_l * psi
        P = np.zeros((9, 18))
        P[0:3, 0:3] = -np.eye(3)
        P[0:3, 3:6] = np.eye(3)
        P[3:6, 6:9] = L1 * np.eye(3)
        P[3:6, 9:12] = L2 * np.eye(3)
        P[6:9, 12:15] = L1 * np.eye(3)
        P[6:9, 15:18] = L2 * np.eye(3)
        g18 = dth @ P
        grad += (half_l * d1)[:, None] * g18
        if hessian:
            H18 = np.einsum("ia,nij,jb->nab", P, d2th, P)
            hess += half_l[:, None, None] * (d2[:, None, None] * g18[:, :, None] * g18[:, None, :] + d1[:, None, None] * H18)
    return energy, grad, hess
