"""Helpers shared by the scene generators."""

from __future__ import annotations

import numpy as np

from ..crease import fold_angle
from ..mesh import CreaseSpec, Material, build_mesh, init_directors


def rest_angles(nodes, quads, panels, edges, material: Material) -> np.ndarray:
    """Fold angle of each crease edge in the given (flat-panel) configuration."""
    specs = [CreaseSpec(int(a), int(b), 0.0) for a, b in edges]
    mesh = build_mesh(nodes, quads, panels, specs, material)
    dirs = init_directors(mesh)
    idx = dirs.index()
    out = []
    for c in mesh.creases:
        pa, pb = int(mesh.panels[c.elem_a]), int(mesh.panels[c.elem_b])
        p = dirs.vectors[idx[(pa, c.node1)]]
        q = dirs.vectors[idx[(pb, c.node1)]]
        out.append(float(fold_angle(p, q, mesh.nodes[c.node2] - mesh.nodes[c.node1])))
    return np.array(out)
