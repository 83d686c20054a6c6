"""Scene files (JSON), VTK legacy snapshots and CSV result tables."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import OrishellError, ParseError, ValidationError
from .mesh import CreaseSpec, Material
from .scene import DOF_NAMES, DofSpec, LoadSpec, OutputSpec, Scene
from .solver import SolverConfig

CURVE_COLUMNS = {
    "miura": ["lambda", "L/L_flat", "H", "W", "H_analytic", "W_analytic"],
    "annulus": ["mesh_density", "k_f", "E_bend", "E_theory", "rel_error"],
    "cantilever": ["P", "u_tip", "w_tip", "u_oracle", "w_oracle"],
}

_SOLVER_KEYS = {"max_increments", "max_iterations", "tolerance", "max_recoveries"}


class IoError(OrishellError):
    pass


def _require(d, key, where):
    if key not in d:
        raise ValidationError(f"{where}.{key}: missing")
    return d[key]


def _num(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{where}: finite number required")
    return float(v)


def _ids(v, where):
    if not isinstance(v, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in v):
        raise ValidationError(f"{where}: list of node ids required")
    return list(v)


def _dof(v, where):
    if v not in DOF_NAMES:
        raise ValidationError(f"{where}: dof must be one of {', '.join(DOF_NAMES)}")
    return v


def scene_from_dict(d: dict) -> Scene:
    """Validate a decoded scene document and build the Scene."""
    if not isinstance(d, dict):
        raise ValidationError("scene: object required")
    nodes = _require(d, "nodes", "scene")
    if not isinstance(nodes, list) or not nodes:
        raise ValidationError("scene.nodes: non-empty list required")
    X = []
    for i, x in enumerate(nodes):
        if not isinstance(x, list) or len(x) != 3:
            raise ValidationError(f"nodes[{i}]: three coordinates required")
        X.append([_num(c, f"nodes[{i}]") for c in x])

    elements = _require(d, "elements", "scene")
    if not isinstance(elements, list) or not elements:
        raise ValidationError("scene.elements: non-empty list required")
    quads, panels = [], []
    for i, e in enumerate(elements):
        where = f"elements[{i}]"
        if not isinstance(e, dict):
            raise ValidationError(f"{where}: object required")
        q = _ids(_require(e, "nodes", where), f"{where}.nodes")
        if len(q) != 4:
            raise ValidationError(f"{where}.nodes: four node ids required")
        quads.append(q)
        p = e.get("panel", 0)
        if not isinstance(p, int) or isinstance(p, bool) or p < 0:
            raise ValidationError(f"{where}.panel: non-negative integer required")
        panels.append(p)

    m = _require(d, "material", "scene")
    if not isinstance(m, dict):
        raise ValidationError("scene.material: object required")
    material = Material(*(_num(_require(m, k, "material"), f"material.{k}") for k in ("E", "nu", "h")))

    creases = []
    for i, c in enumerate(d.get("creases", [])):
        where = f"creases[{i}]"
        n = _ids(_require(c, "nodes", where), f"{where}.nodes")
        if len(n) != 2:
            raise ValidationError(f"{where}.nodes: two node ids required")
        opt = lambda k: None if c.get(k) is None else _num(c[k], f"{where}.{k}")
        t0 = _num(c.get("theta0", 0.0), f"{where}.theta0")
        tl, tr = opt("theta_L"), opt("theta_R")
        if tl is not None and tr is not None and not tl <= tr:
            raise ValidationError(f"{where}: θL ≤ θR required")
        creases.append(CreaseSpec(n[0], n[1], _num(_require(c, "k_f", where), f"{where}.k_f"), t0, tl, tr))

    bcs = []
    for i, b in enumerate(d.get("bcs", [])):
        where = f"bcs[{i}]"
        dofs = _require(b, "dofs", where)
        if not isinstance(dofs, list):
            raise ValidationError(f"{where}.dofs: list required")
        bcs.append(DofSpec(_ids(_require(b, "nodes", where), f"{where}.nodes"), [_dof(x, f"{where}.dofs") for x in dofs]))

    def loads(key):
        out = []
        for i, b in enumerate(d.get(key, [])):
            where = f"{key}[{i}]"
            out.append(
                LoadSpec(
                    _ids(_require(b, "nodes", where), f"{where}.nodes"),
                    _dof(_require(b, "dof", where), f"{where}.dof"),
                    _num(_require(b, "value", where), f"{where}.value"),
                )
            )
        return out

    s = d.get("solver", {})
    unknown = set(s) - _SOLVER_KEYS
    if unknown:
        raise ValidationError(f"solver.{sorted(unknown)[0]}: unknown setting")
    try:
        solver = SolverConfig(**s)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"solver: {exc}") from exc
    o = d.get("outputs", {})
    outputs = OutputSpec(_ids(o.get("track_nodes", []), "outputs.track_nodes"), int(o.get("every", 1)))
    if outputs.every < 1:
        raise ValidationError("outputs.every: positive integer required")
    solver.output_every = outputs.every

    scene = Scene(
        str(d.get("name", "scene")), X, quads, panels, creases, material, bcs, loads("prescribed"), loads("forces"),
        solver, outputs, dict(d.get("meta", {})),
    )
    n_nodes = len(X)
    for spec in [*bcs, *scene.prescribed, *scene.forces]:
        for nd in spec.nodes:
            if not 0 <= nd < n_nodes:
                raise ValidationError(f"node id {nd} out of range")
    scene.mesh  # topology validation
    return scene


def scene_to_dict(scene: Scene) -> dict:
    solver = {k: getattr(scene.solver, k) for k in sorted(_SOLVER_KEYS) if getattr(scene.solver, k) is not None}
    return {
        "name": scene.name,
        "nodes": scene.nodes.tolist(),
        "elements": [{"nodes": q.tolist(), "panel": int(p)} for q, p in zip(scene.quads, scene.panels)],
        "creases": [
            {"nodes": [c.node1, c.node2], "k_f": c.k_f, "theta0": c.theta0, "theta_L": c.theta_L, "theta_R": c.theta_R}
            for c in scene.creases
        ],
        "material": {"E": scene.material.E, "nu": scene.material.nu, "h": scene.material.h},
        "bcs": [{"nodes": list(map(int, b.nodes)), "dofs": list(b.dofs)} for b in scene.bcs],
        "prescribed": [{"nodes": list(map(int, p.nodes)), "dof": p.dof, "value": p.value} for p in scene.prescribed],
        "forces": [{"nodes": list(map(int, p.nodes)), "dof": p.dof, "value": p.value} for p in scene.forces],
        "solver": solver,
        "outputs": {"track_nodes": list(map(int, scene.outputs.track_nodes)), "every": scene.outputs.every},
        "meta": scene.meta,
    }


def parse_scene(path) -> Scene:
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"{path}: file not found")
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scene_from_dict(d)


def dumps_scene(scene: Scene) -> str:
    """JSON text with one node, element, crease or condition per line."""
    d = scene_to_dict(scene)
    parts = []
    for k, v in d.items():
        if isinstance(v, list) and v:
            body = ",\n".join("  " + json.dumps(item) for item in v)
            parts.append(f" {json.dumps(k)}: [\n{body}\n ]")
        else:
            parts.append(f" {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def serialize(scene: Scene, path) -> Path:
    path = Path(path)
    path.write_text(dumps_scene(scene))
    return path


def _fmt(v) -> str:
    return repr(float(v)) if math.isfinite(v) else "0.0"


def write_snapshot(scene: Scene, U: np.ndarray, increment: int, directory) -> Path:
    """Legacy ASCII VTK unstructured grid of the deformed mid-surface."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        model = scene.model
        disp = np.asarray(U)[model.dofmap.trans]
        x = scene.nodes + disp
        parts = model.elements.energy_parts(np.asarray(U)[model.elem_dofs])
        area = model.elements.area
        density = parts["bending"] / area
        lines = ["# vtk DataFile Version 3.0", f"{scene.name} increment {increment}", "ASCII", "DATASET UNSTRUCTURED_GRID"]
        lines.append(f"POINTS {len(x)} double")
        lines += [" ".join(_fmt(c) for c in p) for p in x]
        lines.append(f"CELLS {len(scene.quads)} {5 * len(scene.quads)}")
        lines += ["4 " + " ".join(str(int(i)) for i in q) for q in scene.quads]
        lines.append(f"CELL_TYPES {len(scene.quads)}")
        lines += ["9"] * len(scene.quads)
        lines += [f"CELL_DATA {len(scene.quads)}", "SCALARS panel_id int 1", "LOOKUP_TABLE default"]
        lines += [str(int(p)) for p in scene.panels]
        lines += ["SCALARS bending_energy_density double 1", "LOOKUP_TABLE default"]
        lines += [_fmt(v) for v in density]
        lines += [f"POINT_DATA {len(x)}", "VECTORS displacement double"]
        lines += [" ".join(_fmt(c) for c in d) for d in disp]
        path = directory / f"step_{increment:04d}.vtk"
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return path


def read_vtk_points(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points, cells and cell types of a file written by write_snapshot."""
    tok = Path(path).read_text().split("\n")
    i = next(k for k, line in enumerate(tok) if line.startswith("POINTS"))
    n = int(tok[i].split()[1])
    pts = np.array([[float(v) for v in tok[i + 1 + k].split()] for k in range(n)])
    j = next(k for k, line in enumerate(tok) if line.startswith("CELLS"))
    m = int(tok[j].split()[1])
    cells = np.array([[int(v) for v in tok[j + 1 + k].split()[1:]] for k in range(m)])
    t = next(k for k, line in enumerate(tok) if line.startswith("CELL_TYPES"))
    types = np.array([int(tok[t + 1 + k]) for k in range(m)])
    return pts, cells, types


def write_curves(rows, kind: str, path) -> Path:
    """CSV table for one benchmark kind; non-finite values are rejected."""
    if kind not in CURVE_COLUMNS:
        raise IoError(f"unknown curve kind {kind!r}")
    cols = CURVE_COLUMNS[kind]
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                vals = [r[c] for c in cols] if isinstance(r, dict) else list(r)
                if len(vals) != len(cols):
                    raise IoError(f"row has {len(vals)} values, expected {len(cols)}")
                if not all(math.isfinite(float(v)) for v in vals):
                    raise IoError("non-finite value in curve row")
                w.writerow([repr(float(v)) for v in vals])
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return path


def read_curves(path) -> tuple[list[str], np.ndarray]:
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, len(rows[0]))


def write_summary(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(payload, indent=1, sort_keys=True, default=str) + "\n")
    return path
