"""Global assembly of shell elements and creases, and boundary-condition bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .crease import GAUSS_S, CreaseParams, crease_contribution, fold_angle_at
from .element import ElementBatch
from .errors import CreaseError, OverlappingBCs
from .mesh import Directors, DofMap, Mesh, build_dof_map, init_directors


@dataclass
class GlobalSystem:
    energy: float
    F_int: np.ndarray
    K: sp.csr_matrix | None
    element_energy: float = 0.0
    crease_energy: float = 0.0


@dataclass
class BoundaryConditions:
    fixed: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    prescribed: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    prescribed_values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    F_ext: np.ndarray | None = None

    def loaded_disp(self, total_dofs: int) -> np.ndarray:
        v = np.zeros(total_dofs)
        v[self.prescribed] = self.prescribed_values
        return v

    def external_force(self, total_dofs: int) -> np.ndarray:
        return np.zeros(total_dofs) if self.F_ext is None else np.asarray(self.F_ext, float)


def partition_free_dofs(bcs: BoundaryConditions, total_dofs: int) -> np.ndarray:
    fixed = np.unique(bcs.fixed)
    presc = np.unique(bcs.prescribed)
    overlap = np.intersect1d(fixed, presc)
    if overlap.size:
        raise OverlappingBCs(f"DOFs both fixed and prescribed: {overlap[:10].tolist()}")
    mask = np.ones(total_dofs, dtype=bool)
    mask[fixed] = False
    mask[presc] = False
    return np.flatnonzero(mask)


class Model:
    """A mesh with directors, DOF map, element geometry cache and sparsity pattern."""

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        self.directors: Directors = init_directors(mesh)
        self.dofmap: DofMap = build_dof_map(mesh)
        dm = self.dofmap
        n = dm.total_dofs
        self.reference = np.zeros(n)
        self.reference[dm.trans.ravel()] = mesh.nodes.ravel()
        self.reference[dm.dirs.ravel()] = self.directors.vectors.ravel()

        slot = dm.slot_index
        dir_slots = np.array([[slot[(int(p), int(nd))] for nd in q] for q, p in zip(mesh.quads, mesh.panels)]).reshape(-1, 4)
        self.elem_dofs = np.concatenate(
            [dm.trans[mesh.quads].reshape(-1, 12), dm.dirs[dir_slots].reshape(-1, 12)], axis=1
        )
        self.elements = ElementBatch(
            mesh.nodes[mesh.quads], self.directors.vectors[dir_slots], mesh.material
        )

        cd = []
        for c in mesh.creases:
            pa, pb = int(mesh.panels[c.elem_a]), int(mesh.panels[c.elem_b])
            cd.append(
                np.concatenate(
                    [
                        dm.trans[c.node1],
                        dm.trans[c.node2],
                        dm.dir_dof(pa, c.node1),
                        dm.dir_dof(pa, c.node2),
                        dm.dir_dof(pb, c.node1),
                        dm.dir_dof(pb, c.node2),
                    ]
                )
            )
        self.crease_dofs = np.array(cd, dtype=np.int64).reshape(-1, 18)
        self.crease_params = CreaseParams.from_segments(mesh.creases)
        self._build_pattern()

    @property
    def total_dofs(self) -> int:
        return self.dofmap.total_dofs

    def _build_pattern(self):
        n = self.total_dofs
        er = np.repeat(self.elem_dofs, 24, axis=1).ravel()
        ec = np.tile(self.elem_dofs, (1, 24)).ravel()
        cr = np.repeat(self.crease_dofs, 18, axis=1).ravel()
        cc = np.tile(self.crease_dofs, (1, 18)).ravel()
        keys = np.concatenate([er * n + ec, cr * n + cc])
        uniq, inv = np.unique(keys, return_inverse=True)
        rows = uniq // n
        self._indices = (uniq % n).astype(np.int64)
        self._indptr = np.searchsorted(rows, np.arange(n + 1)).astype(np.int64)
        self._scatter = inv
        self._nnz = len(uniq)
        self._n_elem_entries = er.size

    def crease_vectors(self, U: np.ndarray) -> np.ndarray:
        """Current (C, 6, 3) crease vectors [x_o1, x_o2, p1, p2, q1, q2]."""
        x = self.reference + U
        return x[self.crease_dofs].reshape(-1, 6, 3)

    def element_displacements(self, U: np.ndarray) -> np.ndarray:
        return np.asarray(U)[self.elem_dofs]

    def assemble(self, U: np.ndarray, hessian: bool = True) -> GlobalSystem:
        """Internal force (energy gradient), tangent stiffness and total energy at U."""
        U = np.asarray(U, float)
        n = self.total_dofs
        ee, eg, eH = self.elements.force_stiffness(U[self.elem_dofs], hessian=hessian)
        F = np.bincount(self.elem_dofs.ravel(), weights=eg.ravel(), minlength=n)
        energy_e = float(ee.sum())
        energy_c = 0.0
        vals = [eH.ravel()] if hessian else []
        if len(self.crease_dofs):
            try:
                ce, cg, cH = crease_contribution(
                    self.crease_vectors(U), self.crease_params, h=self.mesh.material.h, hessian=hessian
                )
            except CreaseError as exc:
                raise type(exc)(f"{exc} (crease batch)") from exc
            F += np.bincount(self.crease_dofs.ravel(), weights=cg.ravel(), minlength=n)
            energy_c = float(ce.sum())
            if hessian:
                vals.append(cH.ravel())
        K = None
        if hessian:
            data = np.bincount(self._scatter, weights=np.concatenate(vals), minlength=self._nnz)
            K = sp.csr_matrix((data, self._indices, self._indptr), shape=(n, n))
        return GlobalSystem(energy_e + energy_c, F, K, energy_e, energy_c)

    def energy(self, U: np.ndarray) -> float:
        return self.assemble(U, hessian=False).energy

    def bending_energy(self, U: np.ndarray, elements=None) -> float:
        parts = self.elements.energy_parts(np.asarray(U)[self.elem_dofs])
        b = parts["bending"]
        return float(b.sum() if elements is None else b[np.asarray(elements)].sum())

    def fold_angles(self, U: np.ndarray, s=(-1.0, *GAUSS_S, 1.0)) -> np.ndarray:
        """(C, len(s)) fold angles at crease coordinates s."""
        y = self.crease_vectors(np.asarray(U, float))
        return np.stack([fold_angle_at(y, si).theta for si in s], axis=-1)

    def node_positions(self, U: np.ndarray) -> np.ndarray:
        return self.mesh.nodes + np.asarray(U)[self.dofmap.trans]


def assemble(model: Model, U: np.ndarray) -> GlobalSystem:
    return model.assemble(U)
