"""fluxcat: microscopic cat-size bounds for superconducting flux-qubit superpositions.

The number of electrons that behave differently in the two circulating-current
branches of a flux qubit is bounded by the total change of single-electron
mode occupations, delta_N_tot = 3 L dI_p / (4 e v_F).  The package computes it
for real devices and checks the formula against a q-space quadrature and a
brute-force lattice sum over boosted BCS Fermi seas.
"""

from .bcs import (
    Material,
    condensation_amplitude,
    mode_quantities,
    occupation,
    quasiparticle_energy,
    xi,
)
from .constants import PhysicalConstants, constants
from .device import (
    CatalogError,
    CatSizeReport,
    Device,
    delta_mu,
    delta_N_tot,
    full_report,
    load_catalog,
    measurement_bound,
)
from .mode_shift import (
    BranchPair,
    ValidityError,
    delta_n_q,
    occupation_boosted,
    occupation_boosted_exact,
    pair_occupation_bcs,
    validity,
)
from .qspace import (
    QuadratureSpec,
    delta_j_from_delta_v,
    delta_n_density_analytic,
    delta_n_density_numeric,
    verify_local_relation,
)

__version__ = "0.1.0"

__all__ = [
    "BranchPair",
    "CatSizeReport",
    "CatalogError",
    "Device",
    "Material",
    "PhysicalConstants",
    "QuadratureSpec",
    "ValidityError",
    "condensation_amplitude",
    "constants",
    "delta_N_tot",
    "delta_j_from_delta_v",
    "delta_mu",
    "delta_n_density_analytic",
    "delta_n_density_numeric",
    "delta_n_q",
    "full_report",
    "load_catalog",
    "measurement_bound",
    "mode_quantities",
    "occupation",
    "occupation_boosted",
    "occupation_boosted_exact",
    "pair_occupation_bcs",
    "quasiparticle_energy",
    "validity",
    "verify_local_relation",
    "xi",
]
