"""Occupations of current-carrying modes and the branch occupation difference.

A mode is labelled by its lab-frame wavevector ``q``; the internal (pair)
momentum is ``k = q - m v_s / hbar``.  Two evaluations are provided:

* the first-order expansion in ``|v_s| / v_crit`` used for the cat-size
  bound (:func:`occupation_boosted`, :func:`delta_n_q`);
* the exact Galilean-boosted BCS occupation (:func:`occupation_boosted_exact`),
  with the gap held fixed, which serves as the oracle for the expansion.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bcs import Material, occupation, occupation_xi, xi
from .constants import HBAR, M_E

RATIO_WARN = 0.1
RATIO_INVALID = 0.5


class ValidityError(ValueError):
    """Superfluid velocity too large for the first-order expansion."""


class ValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ValidityDiagnostics:
    expansion_ratio: float
    status: str  # "ok" | "warn" | "invalid"

    def to_dict(self) -> dict:
        return {
            "expansion_ratio": self.expansion_ratio,
            "status": self.status,
            "thresholds": {"warn": RATIO_WARN, "invalid": RATIO_INVALID},
        }


def validity(material: Material, v_s) -> ValidityDiagnostics:
    """Expansion parameter |v_s| v_F m / gap and its status band."""
    speed = float(np.linalg.norm(np.atleast_1d(np.asarray(v_s, dtype=float))))
    ratio = speed * material.fermi_velocity * M_E / material.gap
    if ratio < RATIO_WARN:
        status = "ok"
    elif ratio < RATIO_INVALID:
        status = "warn"
    else:
        status = "invalid"
    return ValidityDiagnostics(ratio, status)


def require_valid(material: Material, v_s, what: str = "v_s") -> ValidityDiagnostics:
    diag = validity(material, v_s)
    if diag.status == "invalid":
        raise ValidityError(
            f"|{what}|/v_crit = {diag.expansion_ratio:.3g} >= {RATIO_INVALID}: "
            "first-order expansion is not valid"
        )
    if diag.status == "warn":
        warnings.warn(
            f"|{what}|/v_crit = {diag.expansion_ratio:.3g}: first-order error may exceed 1%",
            ValidityWarning,
            stacklevel=3,
        )
    return diag


def _vec(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape == ():
        v = np.array([0.0, 0.0, float(v)])
    if v.shape[-1] != 3:
        raise ValueError("expected 3-vectors")
    return v


@dataclass(frozen=True)
class BranchPair:
    """Mean superfluid velocities (3-vectors, m/s) of the two branches.

    Scalars are read as velocities along z.
    """

    v_left: np.ndarray
    v_right: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v_left", _vec(self.v_left))
        object.__setattr__(self, "v_right", _vec(self.v_right))

    @classmethod
    def symmetric(cls, delta_v) -> "BranchPair":
        """Branches at +delta_v/2 and -delta_v/2."""
        dv = _vec(delta_v)
        return cls(0.5 * dv, -0.5 * dv)

    @property
    def delta_v(self) -> np.ndarray:
        return self.v_left - self.v_right

    def swapped(self) -> "BranchPair":
        return BranchPair(self.v_right, self.v_left)

    def boosted(self, u) -> "BranchPair":
        u = _vec(u)
        return BranchPair(self.v_left + u, self.v_right + u)

    def check(self, material: Material) -> tuple[ValidityDiagnostics, ValidityDiagnostics]:
        return (
            require_valid(material, self.v_left, "v_left"),
            require_valid(material, self.v_right, "v_right"),
        )


def occupation_boosted(material: Material, q, v_s, return_clamped: bool = False):
    """First-order occupation of lab-frame mode q in a state with mean velocity v_s.

    n_q = (1 - xi_q/Omega_q)/2 + (gap^2 / 2 Omega_q^3) hbar q.v_s, clamped to
    [0, 1].  With ``return_clamped`` a boolean mask of clamped entries is
    returned as well.
    """
    q = _vec(q)
    v_s = _vec(v_s)
    require_valid(material, v_s)
    qn = np.linalg.norm(q, axis=-1)
    e = xi(material, qn)
    omega = np.hypot(e, material.gap)
    n = 0.5 * (1.0 - e / omega) + 0.5 * material.gap**2 / omega**3 * HBAR * (q @ v_s)
    clamped = (n < 0.0) | (n > 1.0)
    n = np.clip(n, 0.0, 1.0)
    if return_clamped:
        return n, clamped
    return n


def occupation_boosted_exact(material: Material, q, v_s):
    """BCS occupation at the Galilean-shifted internal momentum q - m v_s/hbar."""
    q = _vec(q)
    v_s = _vec(v_s)
    k = np.linalg.norm(q - M_E * v_s / HBAR, axis=-1)
    return occupation(material, k)


def delta_n_q(material: Material, q, branches: BranchPair):
    """First-order occupation difference (L minus R) of lab-frame mode q."""
    branches.check(material)
    q = _vec(q)
    e = xi(material, np.linalg.norm(q, axis=-1))
    omega = np.hypot(e, material.gap)
    return material.gap**2 / (2.0 * omega**3) * HBAR * (q @ branches.delta_v)


def delta_n_q_exact(material: Material, q, branches: BranchPair):
    """Occupation difference from the exact boosted occupations."""
    return (occupation_boosted_exact(material, q, branches.v_left)
            - occupation_boosted_exact(material, q, branches.v_right))


def pair_occupation_bcs(material: Material, k):
    """Cooper-pair mode occupation <C+_k C_k> in the BCS product state.

    In the pair subspace {|0>, |k up, -k down>} the BCS state has weights
    (u^2, v^2); the pair number operator is diag(0, 1).  The identity with
    :func:`~fluxcat.bcs.occupation` is exact for this product state only;
    corrections from correlations beyond it are not modelled.
    """
    e = xi(material, k)
    u2 = 0.5 * (1.0 + e / np.hypot(e, material.gap))
    v2 = occupation_xi(e, material.gap)
    return 0.0 * u2 + 1.0 * v2
