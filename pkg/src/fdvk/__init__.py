"""Lattice laboratory for unit-vector fields on the flat periodic box.

S2-valued maps on the 3-torus carry three slice fluxes, a Hopf charge
when the fluxes vanish, and a framing degree; the quartic sigma-model
energy couples to all of them.  This package computes the energies and
invariants, canonicalizes the circle gauge freedom of flat framing
connections, and descends the energy while guarding the homotopy data.
"""

from .ansatz import KINDS, PROFILES, AnsatzSpec, generate, s1_winding
from .errors import (
    ChargeDrift,
    ClassViolation,
    ConfigError,
    FdvkError,
    FluxChange,
    GridMismatch,
    NonExactForm,
    NonIntegralFlux,
    NontrivialHolonomy,
    NotFlat,
    SnapshotError,
    UnderResolved,
    UnresolvableField,
)
from .fields import (
    Connection,
    Energy,
    GroupField,
    SphereField,
    conjugate_field,
    connection_of,
    constant_group,
    constant_sphere,
    covariant_derivative,
    decompose,
    energy,
    energy_conn,
    flatness_residuals,
    plaquette_curvature,
    pullback_area,
)
from .flow import FlowConfig, FlowRow, FlowTrace, grad_energy, minimize, relax_step
from .gauge import (
    GaugeFixReport,
    Holonomy,
    circle_field,
    develop,
    fix_gauge,
    gauge_transform,
    holonomy,
)
from .invariants import (
    HomotopyRecord,
    chern_simons,
    degree,
    fluxes,
    homotopy_record,
    hopf_charge,
    modulus,
)
from .lattice import Grid

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "ChargeDrift",
    "ClassViolation",
    "ConfigError",
    "Connection",
    "Energy",
    "FdvkError",
    "FlowConfig",
    "FlowRow",
    "FlowTrace",
    "FluxChange",
    "GaugeFixReport",
    "Grid",
    "GridMismatch",
    "GroupField",
    "Holonomy",
    "HomotopyRecord",
    "KINDS",
    "NonExactForm",
    "NonIntegralFlux",
    "NontrivialHolonomy",
    "NotFlat",
    "PROFILES",
    "SnapshotError",
    "SphereField",
    "UnderResolved",
    "UnresolvableField",
    "chern_simons",
    "circle_field",
    "conjugate_field",
    "connection_of",
    "constant_group",
    "constant_sphere",
    "covariant_derivative",
    "decompose",
    "degree",
    "develop",
    "energy",
    "energy_conn",
    "fix_gauge",
    "flatness_residuals",
    "fluxes",
    "gauge_transform",
    "generate",
    "grad_energy",
    "holonomy",
    "homotopy_record",
    "hopf_charge",
    "minimize",
    "modulus",
    "plaquette_curvature",
    "pullback_area",
    "relax_step",
    "s1_winding",
]
