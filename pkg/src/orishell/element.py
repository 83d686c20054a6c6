"""Bilinear solid-shell element: kinematics, ANS strains, constitutive law, energy.

Every strain component used by the element is a linear combination of
scalar *atoms*::

    atom_j = c_j * (a_j . b_j - A_j . B_j)

with ``a_j = sum_s alpha_js y_s`` and ``b_j = sum_s beta_js y_s`` linear in
the current slot vectors ``y`` (four mid-surface positions followed by four
directors) and capital letters denoting the same combinations of the initial
slot vectors.  Each atom is exactly quadratic in the displacement, so its
gradient is ``c_j (alpha_js b_j + beta_js a_j)`` and its Hessian is a constant
matrix.  The strain transformation and ANS blending are linear and frozen at
the initial configuration, so the element energy collapses to
``0.5 * atoms^T Q atoms`` with one precomputed ``Q`` per element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateElement, SingularTransform
from .mesh import GAUSS_POINTS, Material, shape_functions

# ANS sampling points: gamma_zeta_xi at (0, -1), (0, +1); gamma_zeta_eta at (-1, 0), (+1, 0)
SHEAR_SAMPLES = np.array([[0.0, -1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]])
NODE_COORDS = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])

N_ATOMS = 36
N_PER_GP = 7
STRAIN_ROWS = 9  # membrane(3), bending(3), shear(2), thickness(1)


def _atom_tables():
    A = np.zeros((N_ATOMS, 8))
    B = np.zeros((N_ATOMS, 8))
    c = np.zeros(N_ATOMS)
    o, n = slice(0, 4), slice(4, 8)
    for g, (xi, eta) in enumerate(GAUSS_POINTS):
        _, dxi, deta = shape_functions(xi, eta)
        k = N_PER_GP * g
        # membrane: eps_xixi, eps_etaeta, 2 eps_xieta
        A[k, o], B[k, o], c[k] = dxi, dxi, 0.5
        A[k + 1, o], B[k + 1, o], c[k + 1] = deta, deta, 0.5
        A[k + 2, o], B[k + 2, o], c[k + 2] = dxi, deta, 1.0
        # bending: eps_b_xixi, eps_b_etaeta, and the two halves of 2 eps_b_xieta
        A[k + 3, o], B[k + 3, n], c[k + 3] = dxi, dxi, 1.0
        A[k + 4, o], B[k + 4, n], c[k + 4] = deta, deta, 1.0
        A[k + 5, o], B[k + 5, n], c[k + 5] = dxi, deta, 1.0
        A[k + 6, o], B[k + 6, n], c[k + 6] = deta, dxi, 1.0
    for i, (xi, eta) in enumerate(SHEAR_SAMPLES):
        N, dxi, deta = shape_functions(xi, eta)
        k = 28 + i
        A[k, o] = dxi if i < 2 else deta
        B[k, n] = N
        c[k] = 1.0
    for i in range(4):
        k = 32 + i
        A[k, 4 + i] = B[k, 4 + i] = 1.0
        c[k] = 0.5
    return A, B, c


ATOM_A, ATOM_B, ATOM_C = _atom_tables()
# constant Hessian of each atom w.r.t. the 8 slot vectors (per Cartesian component)
ATOM_S = ATOM_C[:, None, None] * (ATOM_A[:, :, None] * ATOM_B[:, None, :] + ATOM_B[:, :, None] * ATOM_A[:, None, :])


@dataclass(frozen=True)
class LocalFrame:
    e_x: np.ndarray
    e_y: np.ndarray
    e_z: np.ndarray
    cosines: np.ndarray  # rows x, y, z; columns xi, eta, zeta


@dataclass(frozen=True)
class IntegratedConstitutive:
    C_m: np.ndarray
    C_b: np.ndarray
    C_S: np.ndarray
    C_T: float


def integrated_constitutive(material: Material) -> IntegratedConstitutive:
    """Plane-stress law pre-integrated over zeta in [-1, 1]."""
    E, nu = material.E, material.nu
    C_eps = E / (1 - nu**2) * np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, (1 - nu) / 2]])
    C_gam = 5.0 / 6.0 * E / (2 * (1 + nu)) * np.eye(2)
    return IntegratedConstitutive(2.0 * C_eps, (2.0 / 3.0) * C_eps, 2.0 * C_gam, 2.0 * E)


def _frame_axes(X_o):
    ex = X_o[1] - X_o[0]
    nx = np.linalg.norm(ex)
    e4 = X_o[3] - X_o[0]
    n4 = np.linalg.norm(e4)
    if nx == 0 or n4 == 0:
        raise DegenerateElement("zero-length element edge")
    ex = ex / nx
    ez = np.cross(ex, e4 / n4)
    nz = np.linalg.norm(ez)
    if nz < 1e-14:
        raise DegenerateElement("edges 1-2 and 1-4 are parallel")
    ez = ez / nz
    return ex, np.cross(ez, ex), ez


def local_basis(X_o: np.ndarray, X_n: np.ndarray, xi: float = 0.0, eta: float = 0.0) -> LocalFrame:
    """Local Cartesian frame of an element plus its cosine table at (xi, eta).

    ``X_n`` holds the four nodal directors of the element.
    """
    ex, ey, ez = _frame_axes(np.asarray(X_o, float))
    N, dxi, deta = shape_functions(xi, eta)
    nat = np.stack([dxi @ X_o, deta @ X_o, N @ X_n], axis=1)  # columns e_xi, e_eta, e_zeta
    cos = np.stack([ex, ey, ez]) @ nat
    return LocalFrame(ex, ey, ez, cos)


def transform_matrices(frame: LocalFrame):
    """(T_eps, T_gamma, T_zeta) mapping natural strain vectors to the local frame."""
    c = frame.cosines
    cxx, cxy = c[0, 0], c[1, 0]  # e_xi . e_x, e_xi . e_y
    cex, cey = c[0, 1], c[1, 1]  # e_eta . e_x, e_eta . e_y
    czz = c[2, 2]
    M = np.array(
        [
            [cxx * cxx, cxy * cxy, cxx * cxy],
            [cex * cex, cey * cey, cex * cey],
            [2 * cxx * cex, 2 * cxy * cey, cxx * cey + cxy * cex],
        ]
    )
    Mg = czz * np.array([[cxx, cxy], [cex, cey]])
    scale = max(np.abs(M).max(), 1e-300)
    if abs(np.linalg.det(M)) <= 1e-12 * scale**3 or abs(czz) < 1e-300:
        raise SingularTransform("cosine-product matrix is rank deficient")
    try:
        T_eps = np.linalg.inv(M)
        T_gam = np.linalg.inv(Mg)
    except np.linalg.LinAlgError as exc:
        raise SingularTransform(str(exc)) from exc
    return T_eps, T_gam, 1.0 / (czz * czz)


class NaturalStrains(NamedTuple):
    membrane: np.ndarray  # (eps_xixi, eps_etaeta, 2 eps_xieta) at the point
    bending: np.ndarray  # same layout
    shear_samples: np.ndarray  # gamma_zxi at (0,-1), (0,1); gamma_zeta at (-1,0), (1,0)
    thickness_nodal: np.ndarray  # eps_zetazeta at the 4 nodes


def natural_strains(X_o, X_n, u_e, xi, eta) -> NaturalStrains:
    """Direct evaluation of the expanded natural Green-Lagrange strains.

    Written in terms of the displacement (X . U form) rather than atoms, so it
    doubles as an independent check of :class:`ElementBatch`.
    """
    u = np.asarray(u_e, float).reshape(8, 3)
    U_o, U_n = u[:4], u[4:]
    N, dxi, deta = shape_functions(xi, eta)
    Xo = {"xi": dxi @ X_o, "eta": deta @ X_o}
    Xn = {"xi": dxi @ X_n, "eta": deta @ X_n}
    Uo = {"xi": dxi @ U_o, "eta": deta @ U_o}
    Un = {"xi": dxi @ U_n, "eta": deta @ U_n}

    def em(f, g):
        return 0.5 * (Xo[f] @ Uo[g] + Xo[g] @ Uo[f] + Uo[f] @ Uo[g])

    def eb(f, g):
        return 0.5 * (Xo[f] @ Un[g] + Xn[f] @ Uo[g] + Xo[g] @ Un[f] + Xn[g] @ Uo[f] + Uo[f] @ Un[g] + Uo[g] @ Un[f])

    membrane = np.array([em("xi", "xi"), em("eta", "eta"), 2 * em("xi", "eta")])
    bending = np.array([eb("xi", "xi"), eb("eta", "eta"), 2 * eb("xi", "eta")])
    shear = np.empty(4)
    for i, (sx, se) in enumerate(SHEAR_SAMPLES):
        Ns, dxs, des = shape_functions(sx, se)
        d = dxs if i < 2 else des
        Xod, Uod = d @ X_o, d @ U_o
        Xns, Uns = Ns @ X_n, Ns @ U_n
        shear[i] = Xod @ Uns + Xns @ Uod + Uod @ Uns
    thick = np.einsum("id,id->i", X_n, U_n) + 0.5 * np.einsum("id,id->i", U_n, U_n)
    return NaturalStrains(membrane, bending, shear, thick)


def ans_interpolate(shear_samples, thickness_nodal, xi, eta):
    """Assumed-natural-strain blends of the sampled shear and nodal thickness strains."""
    s = np.asarray(shear_samples, float)
    g_xi = 0.5 * (1 - eta) * s[0] + 0.5 * (1 + eta) * s[1]
    g_eta = 0.5 * (1 - xi) * s[2] + 0.5 * (1 + xi) * s[3]
    N, _, _ = shape_functions(xi, eta)
    return g_xi, g_eta, float(N @ np.asarray(thickness_nodal, float))


def _strain_maps(X_o, X_n):
    """Per-Gauss-point maps from the 36 atoms to the 9 local strains, and J_o."""
    maps = np.zeros((4, STRAIN_ROWS, N_ATOMS))
    jac = np.empty(4)
    for g, (xi, eta) in enumerate(GAUSS_POINTS):
        frame = local_basis(X_o, X_n, xi, eta)
        T_eps, T_gam, T_z = transform_matrices(frame)
        N, dxi, deta = shape_functions(xi, eta)
        jac[g] = np.dot(np.cross(dxi @ X_o, deta @ X_o), N @ X_n)
        k = N_PER_GP * g
        Mg = maps[g]
        Mg[0:3, k : k + 3] = T_eps
        Mg[3:6, k + 3 : k + 5] = T_eps[:, 0:2]
        Mg[3:6, k + 5] = T_eps[:, 2]
        Mg[3:6, k + 6] = T_eps[:, 2]
        blend = np.array([[0.5 * (1 - eta), 0.5 * (1 + eta), 0, 0], [0, 0, 0.5 * (1 - xi), 0.5 * (1 + xi)]])
        Mg[6:8, 28:32] = T_gam @ blend
        Mg[8, 32:36] = T_z * N
    if np.any(jac <= 0):
        raise DegenerateElement(f"J_o <= 0 at a quadrature point (min {jac.min():.3e})")
    return maps, jac


BLOCKS = {"membrane": slice(0, 3), "bending": slice(3, 6), "shear": slice(6, 8), "thickness": slice(8, 9)}


class ElementBatch:
    """Vectorized evaluation of a set of elements sharing one material.

    Parameters
    ----------
    X_o : (E, 4, 3) initial nodal mid-surface positions
    X_n : (E, 4, 3) initial nodal directors
    material : Material
    """

    def __init__(self, X_o: np.ndarray, X_n: np.ndarray, material: Material):
        self.X_o = np.asarray(X_o, float).reshape(-1, 4, 3)
        self.X_n = np.asarray(X_n, float).reshape(-1, 4, 3)
        self.material = material
        C = integrated_constitutive(material)
        D = np.zeros((STRAIN_ROWS, STRAIN_ROWS))
        D[0:3, 0:3] = C.C_m
        D[3:6, 3:6] = C.C_b
        D[6:8, 6:8] = C.C_S
        D[8, 8] = C.C_T
        n = len(self.X_o)
        self.maps = np.empty((n, 4, STRAIN_ROWS, N_ATOMS))
        self.jac = np.empty((n, 4))
        for e in range(n):
            self.maps[e], self.jac[e] = _strain_maps(self.X_o[e], self.X_n[e])
        # 2x2 Gauss weights are all one
        self.Q_parts = {}
        for name, sl in BLOCKS.items():
            Dp = np.zeros_like(D)
            Dp[sl, sl] = D[sl, sl]
            self.Q_parts[name] = np.einsum("eg,egri,rs,egsj->eij", self.jac, self.maps, Dp, self.maps)
        self.Q = sum(self.Q_parts.values())
        self.area = np.zeros(n)  # mid-surface area by the same 2x2 rule
        for g in GAUSS_POINTS:
            _, dxi, deta = shape_functions(*g)
            t1 = np.einsum("i,eid->ed", dxi, self.X_o)
            t2 = np.einsum("i,eid->ed", deta, self.X_o)
            self.area += np.linalg.norm(np.cross(t1, t2), axis=-1)
        self.Y0 = np.concatenate([self.X_o, self.X_n], axis=1)  # (E, 8, 3)
        a0, b0 = self._ab(self.Y0)
        self.atoms0 = ATOM_C * np.einsum("ejd,ejd->ej", a0, b0)

    def __len__(self):
        return len(self.X_o)

    @staticmethod
    def _ab(Y):
        return np.einsum("js,esd->ejd", ATOM_A, Y), np.einsum("js,esd->ejd", ATOM_B, Y)

    def atoms(self, u: np.ndarray) -> np.ndarray:
        Y = self.Y0 + np.asarray(u, float).reshape(-1, 8, 3)
        a, b = self._ab(Y)
        return ATOM_C * np.einsum("ejd,ejd->ej", a, b) - self.atoms0

    def local_strains(self, u: np.ndarray) -> np.ndarray:
        """(E, 4, 9) local strains at the Gauss points."""
        return np.einsum("egri,ei->egr", self.maps, self.atoms(u))

    def energy(self, u: np.ndarray) -> np.ndarray:
        at = self.atoms(u)
        return 0.5 * np.einsum("ei,eij,ej->e", at, self.Q, at)

    def energy_parts(self, u: np.ndarray) -> dict:
        at = self.atoms(u)
        return {k: 0.5 * np.einsum("ei,eij,ej->e", at, Qp, at) for k, Qp in self.Q_parts.items()}

    def force_stiffness(self, u: np.ndarray, hessian: bool = True):
        """Per-element energy, gradient (E, 24) and optionally Hessian (E, 24, 24)."""
        Y = self.Y0 + np.asarray(u, float).reshape(-1, 8, 3)
        a, b = self._ab(Y)
        at = ATOM_C * np.einsum("ejd,ejd->ej", a, b) - self.atoms0
        # d atom_j / d y_s = c_j (alpha_js b_j + beta_js a_j)
        Jm = ATOM_C[None, :, None, None] * (
            ATOM_A[None, :, :, None] * b[:, :, None, :] + ATOM_B[None, :, :, None] * a[:, :, None, :]
        )
        Jm = Jm.reshape(len(Y), N_ATOMS, 24)
        sigma = np.einsum("eij,ej->ei", self.Q, at)
        energy = 0.5 * np.einsum("ei,ei->e", at, sigma)
        grad = np.einsum("eij,ei->ej", Jm, sigma)
        if not hessian:
            return energy, grad, None
        H = np.matmul(Jm.transpose(0, 2, 1), np.matmul(self.Q, Jm))
        S = np.einsum("ej,jst->est", sigma, ATOM_S)
        H += np.einsum("est,dk->esdtk", S, np.eye(3)).reshape(len(Y), 24, 24)
        return energy, grad, H


def element_energy(X_o, X_n, u_e, material: Material) -> float:
    return float(ElementBatch(X_o, X_n, material).energy(np.asarray(u_e, float)[None])[0])


def element_force_stiffness(X_o, X_n, u_e, material: Material):
    """Analytic gradient (24,) and Hessian (24, 24) of the element energy."""
    _, g, H = ElementBatch(X_o, X_n, material).force_stiffness(np.asarray(u_e, float)[None])
    return g[0], H[0]
