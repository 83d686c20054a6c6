"""Scene generators, analytical references and measurement helpers."""

from .annulus import (
    AnnulusParams,
    cone_map,
    cone_state,
    cone_theory_energy,
    cone_theory_energy_closed,
    gen_annulus_sector,
    measure_bending_energy,
    outer_elements,
)
from .cantilever import CantileverConfig, elastica_oracle, gen_cantilever, tip_displacements
from .miura import MiuraParams, flat_length, gen_miura_unit, measure_miura, miura_analytic
from .qualitative import gen_qualitative

__all__ = [
    "AnnulusParams",
    "CantileverConfig",
    "MiuraParams",
    "cone_map",
    "cone_state",
    "cone_theory_energy",
    "cone_theory_energy_closed",
    "elastica_oracle",
    "flat_length",
    "gen_annulus_sector",
    "gen_cantilever",
    "gen_miura_unit",
    "gen_qualitative",
    "measure_bending_energy",
    "measure_miura",
    "miura_analytic",
    "outer_elements",
    "tip_displacements",
]
