"""Scene: mesh, material, creases, boundary conditions and solver settings in one object."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import BoundaryConditions, Model
from .errors import ValidationError
from .mesh import CreaseSpec, Material, Mesh, build_mesh
from .solver import SolverConfig

DOF_NAMES = ("u", "v", "w", "un", "vn", "wn")


@dataclass
class DofSpec:
    """Homogeneous Dirichlet condition on the named DOFs of a node set."""

    nodes: list[int]
    dofs: list[str]


@dataclass
class LoadSpec:
    """Total prescribed displacement or total force on one DOF of a node set."""

    nodes: list[int]
    dof: str
    value: float


@dataclass
class OutputSpec:
    track_nodes: list[int] = field(default_factory=list)
    every: int = 1


@dataclass
class Scene:
    name: str
    nodes: np.ndarray
    quads: np.ndarray
    panels: np.ndarray
    creases: list[CreaseSpec]
    material: Material
    bcs: list[DofSpec] = field(default_factory=list)
    prescribed: list[LoadSpec] = field(default_factory=list)
    forces: list[LoadSpec] = field(default_factory=list)
    solver: SolverConfig = field(default_factory=SolverConfig)
    outputs: OutputSpec = field(default_factory=OutputSpec)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float).reshape(-1, 3)
        self.quads = np.asarray(self.quads, dtype=np.int64).reshape(-1, 4)
        self.panels = np.asarray(self.panels, dtype=np.int64).reshape(-1)
        self._mesh: Mesh | None = None
        self._model: Model | None = None

    @property
    def mesh(self) -> Mesh:
        if self._mesh is None:
            self._mesh = build_mesh(self.nodes, self.quads, self.panels, self.creases, self.material)
        return self._mesh

    @property
    def model(self) -> Model:
        if self._model is None:
            self._model = Model(self.mesh)
        return self._model

    def dof_indices(self, node: int, dof: str) -> np.ndarray:
        """Global DOF ids for one named component; director names expand over all panel slots."""
        if dof not in DOF_NAMES:
            raise ValidationError(f"unknown dof {dof!r}; expected one of {DOF_NAMES}")
        if not 0 <= node < len(self.nodes):
            raise ValidationError(f"node {node} out of range")
        dm = self.model.dofmap
        k = DOF_NAMES.index(dof)
        if k < 3:
            return np.array([dm.trans[node, k]])
        return dm.node_director_dofs(node)[:, k - 3]

    def boundary_conditions(self) -> BoundaryConditions:
        n = self.model.total_dofs
        fixed = [self.dof_indices(nd, d) for spec in self.bcs for nd in spec.nodes for d in spec.dofs]
        presc_idx, presc_val = [], []
        for spec in self.prescribed:
            for nd in spec.nodes:
                idx = self.dof_indices(nd, spec.dof)
                presc_idx.append(idx)
                presc_val.append(np.full(len(idx), float(spec.value)))
        F = np.zeros(n)
        for spec in self.forces:
            for nd in spec.nodes:
                F[self.dof_indices(nd, spec.dof)] += float(spec.value)
        cat = lambda xs, dt: np.concatenate(xs).astype(dt) if xs else np.zeros(0, dtype=dt)
        fixed = np.unique(cat(fixed, np.int64))
        presc = cat(presc_idx, np.int64)
        vals = cat(presc_val, float)
        if len(np.unique(presc)) != len(presc):
            raise ValidationError("a DOF is prescribed more than once")
        return BoundaryConditions(fixed, presc, vals, F if self.forces else None)

    def with_solver(self, **changes) -> "Scene":
        """Copy sharing geometry with selected solver settings replaced."""
        cfg = SolverConfig(**{**self.solver.__dict__, **changes})
        out = Scene(
            self.name, self.nodes, self.quads, self.panels, list(self.creases), self.material,
            list(self.bcs), list(self.prescribed), list(self.forces), cfg, self.outputs, dict(self.meta),
        )
        out._mesh, out._model = self._mesh, self._model
        return out

    def run(self, callback=None, linear_solver=None):
        from .solver import linear_solve, run

        return run(self.model, self.boundary_conditions(), self.solver, linear_solver or linear_solve, callback)
