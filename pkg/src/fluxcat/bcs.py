"""Zero-temperature BCS single-mode quantities.

The normal-state dispersion measured from the Fermi energy is called ``xi``
here; the quasiparticle energy is ``sqrt(xi**2 + gap**2)``.  All functions
are vectorised over the wavenumber argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, M_E, MEV

# Near-Fermi-surface approximations degrade above this gap ratio.
GAP_RATIO_WARN = 0.05
GAP_RATIO_MAX = 0.5


class GapRatioWarning(UserWarning):
    """The gap is not small compared with the Fermi energy."""


@dataclass(frozen=True)
class Material:
    """A superconductor described by its Fermi velocity and gap.

    The Fermi momentum, Fermi energy and electron density follow from the
    free-electron relations with the bare electron mass.  ``electron_density``
    may be overridden; it only enters current <-> velocity conversions.
    """

    name: str
    fermi_velocity: float  # m/s
    gap: float  # J
    electron_density_override: float | None = None  # 1/m^3
    provenance: str = ""

    def __post_init__(self):
        if not self.fermi_velocity > 0:
            raise ValueError(f"{self.name}: fermi_velocity must be positive")
        if not self.gap > 0:
            raise ValueError(f"{self.name}: gap must be positive")
        if self.electron_density_override is not None and not self.electron_density_override > 0:
            raise ValueError(f"{self.name}: electron density must be positive")
        ratio = self.gap_ratio
        if ratio >= GAP_RATIO_MAX:
            raise ValueError(f"{self.name}: gap/fermi_energy = {ratio:.3g} >= {GAP_RATIO_MAX}")
        if ratio > GAP_RATIO_WARN:
            warnings.warn(
                f"{self.name}: gap/fermi_energy = {ratio:.3g} exceeds {GAP_RATIO_WARN}; "
                "near-Fermi-surface approximations degrade",
                GapRatioWarning,
                stacklevel=3,
            )

    @classmethod
    def from_gap_ratio(cls, name: str, fermi_velocity: float, gap_over_fermi: float, **kw) -> "Material":
        """Build a material whose gap is a given fraction of its Fermi energy."""
        fermi_energy = 0.5 * M_E * fermi_velocity**2
        return cls(name, fermi_velocity, gap_over_fermi * fermi_energy, **kw)

    @property
    def fermi_momentum(self) -> float:
        return M_E * self.fermi_velocity / HBAR

    @property
    def fermi_energy(self) -> float:
        return 0.5 * M_E * self.fermi_velocity**2

    @property
    def electron_density(self) -> float:
        if self.electron_density_override is not None:
            return self.electron_density_override
        return self.fermi_momentum**3 / (3 * math.pi**2)

    @property
    def gap_ratio(self) -> float:
        return self.gap / self.fermi_energy

    @property
    def critical_velocity(self) -> float:
        """Velocity scale gap/(m v_F) of the first-order expansion."""
        return self.gap / (M_E * self.fermi_velocity)

    @property
    def gap_meV(self) -> float:
        return self.gap / MEV


@dataclass(frozen=True)
class ModeQuantities:
    xi: np.ndarray
    quasiparticle_energy: np.ndarray
    occupation: np.ndarray
    condensation_amplitude: np.ndarray


def _check_k(k):
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wavenumber must be non-negative")
    return k


def xi(material: Material, k):
    """Normal-state energy hbar^2 k^2 / 2m - E_F (J)."""
    k = _check_k(k)
    return (HBAR * k) ** 2 / (2 * M_E) - material.fermi_energy


def wavenumber_for_xi(material: Material, xi_value):
    """Inverse of :func:`xi` on k >= 0."""
    xi_value = np.asarray(xi_value, dtype=float)
    if np.any(xi_value < -material.fermi_energy):
        raise ValueError("xi below -E_F has no real wavenumber")
    return np.sqrt(2 * M_E * (material.fermi_energy + xi_value)) / HBAR


# xi-level kernels, shared with the oracles and the quadrature.

def quasiparticle_energy_xi(xi_value, gap):
    return np.hypot(xi_value, gap)


def occupation_xi(xi_value, gap):
    xi_value = np.asarray(xi_value, dtype=float)
    return 0.5 * (1.0 - xi_value / np.hypot(xi_value, gap))


def condensation_amplitude_xi(xi_value, gap):
    return gap / (2.0 * np.hypot(xi_value, gap))


def quasiparticle_energy(material: Material, k):
    """sqrt(xi^2 + gap^2), never below the gap."""
    return quasiparticle_energy_xi(xi(material, k), material.gap)


def occupation(material: Material, k):
    """Ground-state occupation (1 - xi/Omega)/2 of a single-electron mode."""
    return occupation_xi(xi(material, k), material.gap)


def condensation_amplitude(material: Material, k):
    """Pair amplitude <c+_{k up} c+_{-k down}> = gap/(2 Omega).

    Peaks at 1/2 on the Fermi surface; half maximum at |xi| = sqrt(3) gap.
    """
    return condensation_amplitude_xi(xi(material, k), material.gap)


def mode_quantities(material: Material, k) -> ModeQuantities:
    e = xi(material, k)
    return ModeQuantities(
        xi=e,
        quasiparticle_energy=quasiparticle_energy_xi(e, material.gap),
        occupation=occupation_xi(e, material.gap),
        condensation_amplitude=condensation_amplitude_xi(e, material.gap),
    )
