"""Continuum q-space integral of |delta n_q| and its closed-form reduction.

The density of electrons changing modes between the branches is

    dn = (1/2) * sum_sigma  int d^3q/(2 pi)^3 |delta n_q|

which near the Fermi surface reduces to 3 |dj| / (4 e v_F) with
dj = e rho_e dv.  The numeric route integrates in (xi, cos theta) with
Gauss-Legendre rules; the angular axis is aligned with dv and the
azimuthal integral is done analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bcs import Material
from .constants import E_CHARGE, HBAR
from .mode_shift import _vec, require_valid

SPIN_DEGENERACY = 2


class QuadratureError(RuntimeError):
    """Radial refinement did not converge."""


@dataclass(frozen=True)
class QuadratureSpec:
    xi_cutoff: float = 50.0  # integrate |xi| <= xi_cutoff * gap
    radial_points: int = 2048
    angular_points: int = 64
    tail_correction: bool = True
    jacobian: str = "leading"  # "leading" | "exact"
    convergence_tol: float = 1e-3

    def __post_init__(self):
        if self.xi_cutoff < 10:
            raise ValueError("xi_cutoff must be >= 10")
        if self.radial_points < 16 or self.angular_points < 16:
            raise ValueError("point counts must be >= 16")
        if self.jacobian not in ("leading", "exact"):
            raise ValueError("jacobian must be 'leading' or 'exact'")


@dataclass(frozen=True)
class LocalDifference:
    delta_n_density: float  # 1/m^3
    delta_j_density: float  # A/m^2


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _mapped_rule(n: int, a: float, b: float):
    x, w = _gauss_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _antiderivative(x, r):
    """Antiderivative of (1 + r x) / (1 + x^2)^(3/2)."""
    return (x - r) / math.sqrt(1.0 + x * x)


def tail_weight(c: float, x_min: float, r: float) -> float:
    """int (1 + r x)/(1 + x^2)^(3/2) dx over [x_min, -c] and [c, inf).

    ``r = 0`` is the leading-order weight; x_min = -E_F/gap is the bottom of
    the band.  As x_min -> -inf with r = 0 this tends to 2 (1 - c/sqrt(1+c^2)).
    """
    # (x - r)/sqrt(1 + x^2) -> 1 as x -> inf
    upper = 1.0 - _antiderivative(c, r)
    lower = 0.0
    if x_min < -c:
        lower = _antiderivative(-c, r) - _antiderivative(x_min, r)
    return upper + lower


def _radial_integral(material: Material, spec: QuadratureSpec, n_radial: int) -> float:
    """Dimensionless int dxi w(xi) gap^2 / (2 Omega^3); tends to 1 for a small gap."""
    gap = material.gap
    x_min = -material.fermi_energy / gap
    r = gap / material.fermi_energy if spec.jacobian == "exact" else 0.0
    lo = max(-spec.xi_cutoff, x_min)
    x, w = _mapped_rule(n_radial, lo, spec.xi_cutoff)
    # exact Jacobian: q^2 dq * q = k_F^4 (1 + xi/E_F) dxi / (2 E_F)
    weight = 1.0 + r * x
    integral = float(np.dot(w, weight / (1.0 + x * x) ** 1.5))
    if spec.tail_correction:
        integral += tail_weight(spec.xi_cutoff, x_min, r)
    return 0.5 * integral


def _angular_integral(delta_v: np.ndarray, n_angular: int) -> float:
    """int dOmega |qhat . dv| with a grid aligned to dv."""
    speed = float(np.linalg.norm(delta_v))
    if speed == 0.0:
        return 0.0
    axis = delta_v / speed
    trial = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    perp = np.cross(axis, trial)
    perp /= np.linalg.norm(perp)
    mu, w = _mapped_rule(n_angular, 0.0, 1.0)
    qhat = np.outer(np.sqrt(1.0 - mu * mu), perp) + np.outer(mu, axis)
    # both hemispheres, azimuth analytic
    return 2.0 * 2.0 * math.pi * float(np.dot(w, np.abs(qhat @ delta_v)))


def _density(material, delta_v, spec, n_radial, spin_degeneracy, double_count_factor):
    k_f = material.fermi_momentum
    # q^2 dq * hbar q -> (k_F^2 / hbar v_F) * hbar k_F * w(xi) dxi
    prefactor = k_f**2 / (HBAR * material.fermi_velocity) * HBAR * k_f
    radial = _radial_integral(material, spec, n_radial)
    angular = _angular_integral(delta_v, spec.angular_points)
    single_spin = prefactor * radial * angular / (2 * math.pi) ** 3
    return double_count_factor * spin_degeneracy * single_spin


def delta_n_density_numeric(material: Material, delta_v, spec: QuadratureSpec | None = None,
                            strict: bool = True, spin_degeneracy: int = SPIN_DEGENERACY,
                            double_count_factor: float = 0.5) -> float:
    """Quadrature of (1/2) sum_sigma int d^3q/(2pi)^3 |delta n_q| (1/m^3).

    ``strict`` raises :class:`QuadratureError` when halving the radial points
    changes the result by more than ``spec.convergence_tol``.
    """
    spec = spec or QuadratureSpec()
    delta_v = _vec(delta_v)
    require_valid(material, delta_v, "delta_v")
    value = _density(material, delta_v, spec, spec.radial_points, spin_degeneracy, double_count_factor)
    if strict and value != 0.0:
        coarse = _density(material, delta_v, spec, spec.radial_points // 2,
                          spin_degeneracy, double_count_factor)
        change = abs(value - coarse) / abs(value)
        if change > spec.convergence_tol:
            raise QuadratureError(
                f"radial quadrature not converged: relative change {change:.3g} "
                f"between {spec.radial_points // 2} and {spec.radial_points} points"
            )
    return value


def delta_n_density_analytic(material: Material, delta_j_magnitude: float) -> float:
    """3 |dj| / (4 e v_F), electrons per unit volume changing modes."""
    if delta_j_magnitude < 0:
        raise ValueError("delta_j_magnitude must be non-negative")
    return 3.0 * delta_j_magnitude / (4.0 * E_CHARGE * material.fermi_velocity)


def delta_j_from_delta_v(material: Material, delta_v) -> float:
    """Current-density difference e rho_e |dv| (A/m^2)."""
    return E_CHARGE * material.electron_density * float(np.linalg.norm(_vec(delta_v)))


def closed_form_density(material: Material, delta_v) -> float:
    """k_F^3 |dv| / (4 pi^2 v_F); the small-gap limit of the q-space integral."""
    speed = float(np.linalg.norm(_vec(delta_v)))
    return material.fermi_momentum**3 * speed / (4 * math.pi**2 * material.fermi_velocity)


def local_difference(material: Material, delta_v, spec: QuadratureSpec | None = None) -> LocalDifference:
    return LocalDifference(
        delta_n_density=delta_n_density_numeric(material, delta_v, spec),
        delta_j_density=delta_j_from_delta_v(material, delta_v),
    )


def verify_local_relation(material: Material, delta_v, spec: QuadratureSpec | None = None) -> float:
    """Relative error between the quadrature and 3|dj|/(4 e v_F)."""
    numeric = delta_n_density_numeric(material, delta_v, spec, strict=False)
    analytic = delta_n_density_analytic(material, delta_j_from_delta_v(material, delta_v))
    if analytic == 0.0:
        return 0.0 if numeric == 0.0 else math.inf
    return abs(numeric - analytic) / analytic
