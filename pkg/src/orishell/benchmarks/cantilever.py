"""Tip-loaded cantilever strip and its inextensible-elastica oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..mesh import Material
from ..scene import DofSpec, LoadSpec, OutputSpec, Scene
from ..solver import SolverConfig


@dataclass(frozen=True)
class CantileverConfig:
    length: float = 10.0
    width: float = 1.0
    h: float = 0.1
    E: float = 1.2e9
    nu: float = 0.0
    total_load: float = 4000.0
    nx: int = 10
    ny: int = 1
    increments: int = 10

    @property
    def EI(self) -> float:
        return self.E * self.width * self.h**3 / 12.0


def gen_cantilever(cfg: CantileverConfig = CantileverConfig()) -> Scene:
    """Strip along x, clamped at x = 0, tip shear in +z distributed consistently over the tip edge."""
    xs = np.linspace(0.0, cfg.length, cfg.nx + 1)
    ys = np.linspace(0.0, cfg.width, cfg.ny + 1)
    nid = lambda i, j: j * (cfg.nx + 1) + i
    nodes = [(x, y, 0.0) for y in ys for x in xs]
    quads = [
        (nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)) for j in range(cfg.ny) for i in range(cfg.nx)
    ]
    root = [nid(0, j) for j in range(cfg.ny + 1)]
    tip = [nid(cfg.nx, j) for j in range(cfg.ny + 1)]
    # consistent nodal loads for a uniform edge traction
    weights = np.full(cfg.ny + 1, 1.0 / cfg.ny)
    weights[[0, -1]] *= 0.5
    forces = [LoadSpec([n], "w", float(cfg.total_load * wgt)) for n, wgt in zip(tip, weights)]
    return Scene(
        name=f"cantilever_{cfg.nx}x{cfg.ny}",
        nodes=nodes,
        quads=quads,
        panels=np.zeros(len(quads), dtype=int),
        creases=[],
        material=Material(cfg.E, cfg.nu, cfg.h),
        bcs=[DofSpec(root, ["u", "v", "w", "un", "vn", "wn"])],
        forces=forces,
        solver=SolverConfig(max_increments=cfg.increments),
        outputs=OutputSpec(track_nodes=tip),
        meta={"benchmark": "cantilever", "total_load": cfg.total_load, "length": cfg.length, "EI": cfg.EI},
    )


def _shoot(kappa0, P, EI, L, rtol):
    # state (x, z, theta, theta'); theta'' = -(P/EI) cos(theta)
    rhs = lambda s, y: [np.cos(y[2]), np.sin(y[2]), y[3], -(P / EI) * np.cos(y[2])]
    return solve_ivp(rhs, (0.0, L), [0.0, 0.0, 0.0, kappa0], method="DOP853", rtol=rtol, atol=rtol * 1e-3)


def elastica_oracle(P: float, EI: float = 1e5, L: float = 10.0, rtol: float = 1e-12) -> tuple[float, float]:
    """Tip displacements (u, w) of an inextensible clamped-free elastica under a dead vertical tip load.

    Shoots on the root curvature so that the tip moment vanishes.
    """
    if P == 0:
        return 0.0, 0.0
    miss = lambda k0: _shoot(k0, P, EI, L, rtol).y[3, -1]
    k0 = brentq(miss, 0.0, P * L / EI * (1 + 1e-9), xtol=1e-15, rtol=4 * np.finfo(float).eps)
    sol = _shoot(k0, P, EI, L, rtol)
    return float(sol.y[0, -1] - L), float(sol.y[1, -1])


def tip_displacements(scene: Scene, U: np.ndarray) -> tuple[float, float]:
    dm = scene.model.dofmap
    tip = scene.outputs.track_nodes
    d = U[dm.trans[tip]]
    return float(d[:, 0].mean()), float(d[:, 2].mean())
