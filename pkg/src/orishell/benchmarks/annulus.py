"""Curved-crease annulus sector folded into two cone segments.

The flat sheet is the sector R - a <= rho <= R + a, |phi - pi/2| <= alpha/2,
with the crease on the middle arc rho = R.  Lifting the middle arc by a/sqrt(2)
while both rims stay at z = 0 tilts each strip by 45 degrees, so the fold angle
is 90 degrees and each strip becomes an exact cone segment with its apex above
the sector centre.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from ..crease import fold_angle
from ..mesh import CreaseSpec, Material
from ..scene import DofSpec, LoadSpec, OutputSpec, Scene
from ..solver import SolverConfig


@dataclass(frozen=True)
class AnnulusParams:
    R: float = 0.1
    a: float = 0.005
    alpha: float = np.pi / 4
    n: int = 32  # circumferential divisions
    m: int = 4  # radial divisions per side of the crease
    phi: float = np.pi / 2  # fold angle of the target cone

    def __post_init__(self):
        if not self.R > self.a > 0:
            raise ValueError("R > a > 0 required")
        if self.n < 1 or self.m < 1:
            raise ValueError("n, m >= 1 required")
        if not 0 < self.alpha < 2 * np.pi:
            raise ValueError("0 < alpha < 2 pi required")

    @property
    def lift(self) -> float:
        """Crease lift that produces the fold angle phi with both rims on the ground."""
        return self.a * np.cos(self.phi / 2)


ANNULUS_MATERIAL = Material(4e9, 0.0, 1e-4)


def annulus_grid(p: AnnulusParams):
    """Flat node positions (2m+1, n+1, 3) plus the radii and angles used."""
    rho = np.linspace(p.R - p.a, p.R + p.a, 2 * p.m + 1)
    ang = np.linspace(np.pi / 2 - p.alpha / 2, np.pi / 2 + p.alpha / 2, p.n + 1)
    X = np.stack([rho[:, None] * np.cos(ang), rho[:, None] * np.sin(ang), np.zeros((len(rho), len(ang)))], axis=-1)
    return X, rho, ang


def cone_map(p: AnnulusParams, X: np.ndarray) -> np.ndarray:
    """Isometric image of flat points on the folded pair of cone segments.

    Both strips share the apex axis through the sector centre; the outer one
    descends from the crease to its rim and the inner one mirrors it.  The
    result is translated so that the outer rim's first node keeps its position.
    """
    X = np.asarray(X, float)
    psi = p.phi / 2
    rho = np.hypot(X[..., 0], X[..., 1])
    ang = np.arctan2(X[..., 1], X[..., 0])
    ang3 = np.pi / 2 + (ang - np.pi / 2) / np.sin(psi)
    z = np.where(rho >= p.R, p.R + p.a - rho, rho - p.R + p.a) * np.cos(psi)
    Y = np.stack([rho * np.sin(psi) * np.cos(ang3), rho * np.sin(psi) * np.sin(ang3), z], axis=-1)
    A = np.array([(p.R + p.a) * np.cos(np.pi / 2 - p.alpha / 2), (p.R + p.a) * np.sin(np.pi / 2 - p.alpha / 2), 0.0])
    anchor = cone_map_point(p, A)
    return Y - anchor + A


def cone_map_point(p, x):
    psi = p.phi / 2
    rho = np.hypot(x[0], x[1])
    ang3 = np.pi / 2 + (np.arctan2(x[1], x[0]) - np.pi / 2) / np.sin(psi)
    z = (p.R + p.a - rho if rho >= p.R else rho - p.R + p.a) * np.cos(psi)
    return np.array([rho * np.sin(psi) * np.cos(ang3), rho * np.sin(psi) * np.sin(ang3), z])


def gen_annulus_sector(
    p: AnnulusParams = AnnulusParams(),
    material: Material = ANNULUS_MATERIAL,
    k_f: float = 1.0,
    increments: int = 20,
) -> Scene:
    X, rho, ang = annulus_grid(p)
    nr, nc = X.shape[:2]
    nid = lambda k, j: k * nc + j
    quads, panels = [], []
    for k in range(nr - 1):
        for j in range(nc - 1):
            quads.append((nid(k, j), nid(k + 1, j), nid(k + 1, j + 1), nid(k, j + 1)))
            panels.append(0 if k < p.m else 1)
    nodes = X.reshape(-1, 3)

    # rest angle of each crease segment read off the exact cone configuration
    Y = cone_map(p, X).reshape(-1, 3)
    quads_arr = np.array(quads)
    creases = []
    for j in range(nc - 1):
        n1, n2 = nid(p.m, j), nid(p.m, j + 1)
        ea = (p.m - 1) * (nc - 1) + j
        eb = p.m * (nc - 1) + j
        na = np.cross(*(Y[quads_arr[ea][[1, 3]]] - Y[quads_arr[ea][[0, 0]]]))
        nb = np.cross(*(Y[quads_arr[eb][[1, 3]]] - Y[quads_arr[eb][[0, 0]]]))
        theta0 = float(fold_angle(na, nb, Y[n2] - Y[n1]))
        theta0 = np.sign(theta0) * p.phi
        creases.append(CreaseSpec(n1, n2, k_f, float(theta0)))

    inner = [nid(0, j) for j in range(nc)]
    outer = [nid(nr - 1, j) for j in range(nc)]
    middle = [nid(p.m, j) for j in range(nc)]
    A, B = outer[0], outer[-1]
    return Scene(
        name=f"annulus_{p.n}x{p.m}",
        nodes=nodes,
        quads=quads,
        panels=panels,
        creases=creases,
        material=material,
        bcs=[
            DofSpec([A], ["u", "v", "w"]),
            DofSpec([B], ["v", "w"]),
            DofSpec(inner + outer[1:-1], ["w"]),
        ],
        prescribed=[LoadSpec(middle, "w", p.lift)],
        solver=SolverConfig(max_increments=increments),
        outputs=OutputSpec(track_nodes=middle),
        meta={"benchmark": "annulus", "R": p.R, "a": p.a, "alpha": p.alpha, "n": p.n, "m": p.m, "k_f": k_f},
    )


def principal_curvature(d, phi):
    """Curvature of a cone of apex angle phi at height d above the apex."""
    t = np.tan(phi / 2)
    return 1.0 / (t * np.sqrt(1 + t * t) * d)


def cone_theory_energy(p: AnnulusParams = AnnulusParams(), material: Material = ANNULUS_MATERIAL, samples: int = 2001):
    """Bending energy of the outer strip on its exact cone, by composite Simpson in the slant radius."""
    psi = p.phi / 2
    rho = np.linspace(p.R, p.R + p.a, samples)
    d = rho * np.cos(psi)
    integrand = principal_curvature(d, p.phi) ** 2 * rho * p.alpha
    return 0.5 * material.bending_rigidity * float(simpson(integrand, x=rho))


def cone_theory_energy_closed(p: AnnulusParams = AnnulusParams(), material: Material = ANNULUS_MATERIAL) -> float:
    return 0.5 * material.bending_rigidity * p.alpha * np.log((p.R + p.a) / p.R) / np.tan(p.phi / 2) ** 2


def outer_elements(p: AnnulusParams, skip_crease_row: bool = False) -> np.ndarray:
    """Element ids of the outer strip; optionally without the row touching the crease."""
    first = p.m + (1 if skip_crease_row else 0)
    return np.array([k * p.n + j for k in range(first, 2 * p.m) for j in range(p.n)], dtype=np.int64)


def measure_bending_energy(scene: Scene, U: np.ndarray, elements=None) -> float:
    return scene.model.bending_energy(U, elements)


def cone_state(scene: Scene, p: AnnulusParams) -> np.ndarray:
    """Global displacement placing mid-surface and directors exactly on the folded cones."""
    model = scene.model
    dm = model.dofmap
    U = np.zeros(model.total_dofs)
    U[dm.trans] = cone_map(p, scene.nodes) - scene.nodes
    psi = p.phi / 2
    half = 0.5 * scene.material.h
    for (panel, node), i in dm.slot_index.items():
        x = scene.nodes[node]
        a3 = np.pi / 2 + (np.arctan2(x[1], x[0]) - np.pi / 2) / np.sin(psi)
        sgn = 1.0 if panel == 1 else -1.0  # panel 1 is the outer strip
        normal = np.array([sgn * np.cos(psi) * np.cos(a3), sgn * np.cos(psi) * np.sin(a3), np.sin(psi)])
        U[dm.dirs[i]] = half * normal - model.directors.vectors[i]
    return U
