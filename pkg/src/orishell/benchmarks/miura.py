"""Miura-ori unit cell: rigid-folding kinematics, scene generator and measurements.

Frame: x runs along the zigzag b-edges (extent L), y along the a-edges
(extent W), z is the fold height.  Nodes form a 3 x 3 grid indexed (row, col)
with rows along x and cols along y; cols 0 and 2 lie in z = 0 and col 1 at
z = H.  Labels used for the boundary conditions::

    row 0:  O  A  B
    row 1:  C  .  D
    row 2:  E  F  G
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mesh import CreaseSpec, Material
from ..scene import DofSpec, LoadSpec, OutputSpec, Scene
from ..solver import SolverConfig
from .common import rest_angles

LABELS = {"O": 0, "A": 1, "B": 2, "C": 3, "center": 4, "D": 5, "E": 6, "F": 7, "G": 8}


@dataclass(frozen=True)
class MiuraParams:
    a: float = 2.0
    b: float = 2.0
    gamma: float = np.deg2rad(60.0)
    beta: float = np.deg2rad(15.0)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("a, b > 0 required")
        if not 0 < self.gamma < np.pi / 2:
            raise ValueError("0 < gamma < pi/2 required")
        if not 0 <= self.beta <= np.pi / 2:
            raise ValueError("0 <= beta <= pi/2 required")


def _zigzag_offset(b, gamma, beta):
    return b * np.cos(gamma) / np.sqrt(1.0 - np.sin(gamma) ** 2 * np.sin(beta) ** 2)


def miura_analytic(p: MiuraParams, beta=None):
    """Rigid-folding extents (H, L, W) of the unit cell; beta may be an array."""
    beta = p.beta if beta is None else np.asarray(beta, float)
    sg = np.sin(p.gamma)
    H = p.a * np.sin(beta) * sg
    L = 2 * p.b * np.cos(beta) * np.tan(p.gamma) / np.sqrt(1 + np.cos(beta) ** 2 * np.tan(p.gamma) ** 2)
    W = 2 * p.a * np.sqrt(1 - sg**2 * np.sin(beta) ** 2)
    return H, L, W


def flat_length(p: MiuraParams) -> float:
    """Extent L of the unfolded cell (beta = 0)."""
    return float(miura_analytic(p, 0.0)[1])


def miura_nodes(p: MiuraParams) -> np.ndarray:
    H, L, W = miura_analytic(p)
    s = _zigzag_offset(p.b, p.gamma, p.beta)
    X = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            X[i, j] = (0.5 * L * i, 0.5 * W * j + (s if i == 1 else 0.0), H if j == 1 else 0.0)
    return X.reshape(-1, 3)


def gen_miura_unit(
    p: MiuraParams = MiuraParams(),
    material: Material = Material(12e9, 0.3, 0.01),
    k_f: float = 0.01,
    prescribed: float = 3.44,
    increments: int = 100,
) -> Scene:
    nodes = miura_nodes(p)
    nid = lambda i, j: 3 * i + j
    quads = [(nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)) for i in range(2) for j in range(2)]
    panels = np.arange(4)
    c = LABELS["center"]
    edges = [(LABELS["A"], c), (c, LABELS["F"]), (LABELS["C"], c), (c, LABELS["D"])]
    theta0 = rest_angles(nodes, quads, panels, edges, material)
    creases = [CreaseSpec(n1, n2, k_f, float(t)) for (n1, n2), t in zip(edges, theta0)]
    ids = lambda names: [LABELS[n] for n in names]
    return Scene(
        name="miura_unit",
        nodes=nodes,
        quads=quads,
        panels=panels,
        creases=creases,
        material=material,
        bcs=[
            DofSpec(ids("O"), ["u", "v", "w"]),
            DofSpec(ids("AB"), ["u"]),
            DofSpec(ids("BCDEG"), ["w"]),
        ],
        prescribed=[LoadSpec(ids("EFG"), "u", -prescribed)],
        solver=SolverConfig(max_increments=increments),
        outputs=OutputSpec(track_nodes=list(range(9))),
        meta={"benchmark": "miura", "a": p.a, "b": p.b, "gamma": p.gamma, "beta": p.beta},
    )


@dataclass(frozen=True)
class MiuraMeasure:
    H: float
    L: float
    W: float
    beta: float


def measure_miura(x: np.ndarray, p: MiuraParams = MiuraParams()) -> MiuraMeasure:
    """Extents of a (deformed) unit cell from its 9 node positions, independent of rigid motion."""
    g = np.asarray(x, float).reshape(3, 3, 3)
    W = float(np.linalg.norm(g[:, 2] - g[:, 0], axis=-1).mean())
    L = float(np.linalg.norm(g[2] - g[0], axis=-1).mean())
    low = g[:, [0, 2]].reshape(-1, 3)
    c = low.mean(axis=0)
    normal = np.linalg.svd(low - c)[2][-1]
    H = float(np.abs((g[:, 1] - c) @ normal).mean())
    beta = float(np.arcsin(np.clip(H / (p.a * np.sin(p.gamma)), -1.0, 1.0)))
    return MiuraMeasure(H, L, W, beta)
