"""Quasi-static origami simulation with solid-shell panels and director-angle creases."""

from .assembly import BoundaryConditions, GlobalSystem, Model, assemble, partition_free_dofs
from .crease import CreaseParams, crease_contribution, crease_energy_density, fold_angle, fold_angle_at
from .element import ElementBatch, element_energy, element_force_stiffness
from .errors import OrishellError
from .mesh import CreaseSpec, Material, Mesh, build_dof_map, build_mesh, init_directors
from .scene import DofSpec, LoadSpec, OutputSpec, Scene
from .solver import SolverConfig, Trajectory, linear_solve, run

__version__ = "0.1.0"

__all__ = [
    "BoundaryConditions",
    "CreaseParams",
    "CreaseSpec",
    "DofSpec",
    "ElementBatch",
    "GlobalSystem",
    "LoadSpec",
    "Material",
    "Mesh",
    "Model",
    "OrishellError",
    "OutputSpec",
    "Scene",
    "SolverConfig",
    "Trajectory",
    "assemble",
    "build_dof_map",
    "build_mesh",
    "crease_contribution",
    "crease_energy_density",
    "element_energy",
    "element_force_stiffness",
    "fold_angle",
    "fold_angle_at",
    "init_directors",
    "linear_solve",
    "partition_free_dofs",
    "run",
]
