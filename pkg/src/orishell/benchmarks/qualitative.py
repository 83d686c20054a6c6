"""Scenes without a quantitative reference: a Miura sheet and a fully closed creased annulus."""

from __future__ import annotations

import numpy as np

from ..errors import UnknownScene
from ..mesh import CreaseSpec, Material
from ..scene import DofSpec, LoadSpec, OutputSpec, Scene
from ..solver import SolverConfig
from .common import rest_angles
from .miura import MiuraParams, _zigzag_offset, miura_analytic

QUALITATIVE = ("miura_sheet", "full_annulus")


def miura_sheet(
    cells: tuple[int, int] = (5, 5),
    p: MiuraParams = MiuraParams(),
    beta_end: float = np.deg2rad(45.0),
    material: Material = Material(12e9, 0.3, 0.01),
    k_f: float = 0.01,
    increments: int = 50,
) -> Scene:
    """Tessellation of cells[0] x cells[1] unit cells compressed along x from beta to beta_end."""
    H, L, W = miura_analytic(p)
    s = _zigzag_offset(p.b, p.gamma, p.beta)
    nr, nc = 2 * cells[0] + 1, 2 * cells[1] + 1
    nid = lambda i, j: i * nc + j
    nodes = [(0.5 * L * i, 0.5 * W * j + (s if i % 2 else 0.0), H if j % 2 else 0.0) for i in range(nr) for j in range(nc)]
    quads = [(nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)) for i in range(nr - 1) for j in range(nc - 1)]
    panels = np.arange(len(quads))
    edges = [(nid(i, j), nid(i + 1, j)) for i in range(nr - 1) for j in range(1, nc - 1)]
    edges += [(nid(i, j), nid(i, j + 1)) for i in range(1, nr - 1) for j in range(nc - 1)]
    theta0 = rest_angles(nodes, quads, panels, edges, material)
    creases = [CreaseSpec(a, b, k_f, float(t)) for (a, b), t in zip(edges, theta0)]
    shortening = cells[0] * (L - miura_analytic(p, beta_end)[1])
    low = [nid(i, j) for i in range(nr) for j in range(0, nc, 2)]
    return Scene(
        name=f"miura_sheet_{cells[0]}x{cells[1]}",
        nodes=nodes,
        quads=quads,
        panels=panels,
        creases=creases,
        material=material,
        bcs=[
            DofSpec([nid(0, 0)], ["v"]),
            DofSpec([nid(0, j) for j in range(nc)], ["u"]),
            DofSpec(low, ["w"]),
        ],
        prescribed=[LoadSpec([nid(nr - 1, j) for j in range(nc)], "u", -float(shortening))],
        solver=SolverConfig(max_increments=increments),
        outputs=OutputSpec(track_nodes=[nid(nr - 1, 0), nid(nr // 2, nc // 2)]),
        meta={"scene": "miura_sheet", "cells": list(cells)},
    )


def full_annulus(
    R: float = 0.1,
    a: float = 0.01,
    n: int = 64,
    m: int = 3,
    lift_ratio: float = 0.99,
    material: Material = Material(4e9, 0.0, 1e-4),
    k_f: float = 0.01,
    increments: int = 50,
    theta_R: float | None = None,
) -> Scene:
    """Closed ring R - a <= rho <= R + a with a flat-rest circular crease at rho = R, whose lift folds it."""
    if n % 4:
        raise ValueError("n must be divisible by 4")
    rho = np.linspace(R - a, R + a, 2 * m + 1)
    ang = 2 * np.pi * np.arange(n) / n
    nid = lambda k, j: k * n + (j % n)
    nodes = [(r * np.cos(t), r * np.sin(t), 0.0) for r in rho for t in ang]
    quads, panels = [], []
    for k in range(2 * m):
        for j in range(n):
            quads.append((nid(k, j), nid(k + 1, j), nid(k + 1, j + 1), nid(k, j + 1)))
            panels.append(0 if k < m else 1)
    creases = [CreaseSpec(nid(m, j), nid(m, j + 1), k_f, 0.0, theta_R=theta_R) for j in range(n)]
    inner = [nid(0, j) for j in range(n)]
    outer = [nid(2 * m, j) for j in range(n)]
    return Scene(
        name="full_annulus",
        nodes=nodes,
        quads=quads,
        panels=panels,
        creases=creases,
        material=material,
        bcs=[
            DofSpec(inner + outer, ["w"]),
            DofSpec([outer[0], outer[n // 2]], ["v"]),
            DofSpec([outer[n // 4]], ["u"]),
        ],
        prescribed=[LoadSpec([nid(m, j) for j in range(n)], "w", lift_ratio * a)],
        solver=SolverConfig(max_increments=increments),
        outputs=OutputSpec(track_nodes=[nid(m, 0), nid(m, n // 4)]),
        meta={"scene": "full_annulus"},
    )


def gen_qualitative(name: str, **kwargs) -> Scene:
    if name == "miura_sheet":
        return miura_sheet(**kwargs)
    if name == "full_annulus":
        return full_annulus(**kwargs)
    raise UnknownScene(f"unknown scene {name!r}; expected one of {', '.join(QUALITATIVE)}")
