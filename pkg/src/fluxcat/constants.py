"""Physical constants (CODATA 2018, SI units).

Every module reads constants from here.  Values are hard-coded so that
golden outputs do not drift with library updates.
"""

from dataclasses import dataclass

CODATA_VERSION = "CODATA 2018"


@dataclass(frozen=True)
class PhysicalConstants:
    elementary_charge: float = 1.602176634e-19  # C, exact
    reduced_planck: float = 1.054571817e-34  # J s, h/2pi
    electron_mass: float = 9.1093837015e-31  # kg
    bohr_magneton: float = 9.2740100783e-24  # J/T
    electron_volt: float = 1.602176634e-19  # J, exact

    def __post_init__(self):
        for name in ("elementary_charge", "reduced_planck", "electron_mass", "bohr_magneton"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


_CONSTANTS = PhysicalConstants()


def constants() -> PhysicalConstants:
    """Return the shared immutable constants instance."""
    return _CONSTANTS


# Module-level shorthands used throughout the package.
E_CHARGE = _CONSTANTS.elementary_charge
HBAR = _CONSTANTS.reduced_planck
M_E = _CONSTANTS.electron_mass
MU_B = _CONSTANTS.bohr_magneton
EV = _CONSTANTS.electron_volt
MEV = 1e-3 * EV
