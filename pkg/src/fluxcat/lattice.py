"""Brute-force oracle on a finite periodic momentum lattice.

Modes are q = dk * n with n in {-M..M}^3 and dk = 2 pi / box_length.  Two
BCS Fermi seas, Galilean-boosted by the branch velocities, are filled
exactly and the occupation differences are summed over every mode.  The
result is compared with the continuum prediction V k_F^3 |dv| / (4 pi^2 v_F).

Real materials have gap/E_F ~ 1e-4, which no desk-size grid resolves, so
the oracle is run with an exaggerated gap (see :meth:`LatticeSpec.default`).
The quantities checked (the 1/(4 pi^2) coefficient, linearity in dv, the
quadratic error of the first-order formula) do not depend on the gap ratio
at leading order.

The sums are streamed through numba kernels, so memory use is O(M) even for
grids of 10^10 modes.  When every velocity lies along one lattice axis the
transverse plane is folded by its 8-fold symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .bcs import Material
from .constants import HBAR, M_E
from .mode_shift import BranchPair

DEFAULT_MEMORY_LIMIT = 1.6e9  # bytes; ~2e8 modes if materialised as float64
SPIN_DEGENERACY = 2


class LatticeError(ValueError):
    """Lattice specification cannot be built."""


@dataclass(frozen=True)
class LatticeSpec:
    box_length: float  # m
    max_mode_index: int
    material: Material
    branch_pair: BranchPair
    memory_limit: float = DEFAULT_MEMORY_LIMIT

    @property
    def mode_spacing(self) -> float:
        return 2 * math.pi / self.box_length

    @property
    def volume(self) -> float:
        return self.box_length**3

    def refined(self) -> "LatticeSpec":
        """Twice the box and twice the index range: same k extent, half the spacing."""
        return replace(self, box_length=2 * self.box_length, max_mode_index=2 * self.max_mode_index)

    @classmethod
    def default(cls, gap_over_fermi: float = 0.02, delta_v_ratio: float = 0.01,
                fermi_velocity: float = 2.02e6, spacing_fraction: float = 0.25,
                face_margin: float = 10.0, direction=(0.0, 0.0, 1.0), **kw) -> "LatticeSpec":
        """Symmetric branches +-dv/2 on a grid just resolving the coherence peak.

        ``spacing_fraction`` is the mode spacing in xi near the Fermi surface in
        units of the gap; ``face_margin`` places the cube faces at
        xi = face_margin * gap so the truncated tail is below ~0.3%.
        """
        material = Material.from_gap_ratio("lattice", fermi_velocity, gap_over_fermi)
        hv = HBAR * material.fermi_velocity
        k_f = material.fermi_momentum
        # integer number of modes per Fermi radius keeps refinement levels nested
        per_radius = math.ceil(k_f * hv / (spacing_fraction * material.gap) * (1 - 1e-12))
        dk = k_f / per_radius
        k_face = k_f * math.sqrt(1.0 + face_margin * gap_over_fermi)
        direction = np.asarray(direction, dtype=float)
        direction = direction / np.linalg.norm(direction)
        pair = BranchPair.symmetric(delta_v_ratio * material.critical_velocity * direction)
        return cls(2 * math.pi / dk, math.ceil(k_face / dk), material, pair, **kw)


@dataclass(frozen=True)
class LatticeResult:
    delta_N_lattice: float
    delta_N_continuum_prediction: float
    relative_deviation: float
    mode_count: int
    single_spin_sum: float = 0.0
    max_mode_index: int = 0
    box_length: float = 0.0

    def to_dict(self) -> dict:
        return {
            "delta_N_lattice": self.delta_N_lattice,
            "delta_N_continuum_prediction": self.delta_N_continuum_prediction,
            "relative_deviation": self.relative_deviation,
            "mode_count": self.mode_count,
            "single_spin_sum": self.single_spin_sum,
            "max_mode_index": self.max_mode_index,
            "box_length": self.box_length,
        }


@dataclass(frozen=True)
class Lattice:
    """Immutable handle on a validated lattice; modes are generated on the fly."""

    spec: LatticeSpec
    axis: int | None  # lattice axis carrying every velocity, if any
    memory_estimate: float  # bytes used by the streaming kernels
    dense_memory: float = field(default=0.0)  # bytes to materialise all occupations

    @property
    def modes_per_spin(self) -> int:
        return (2 * self.spec.max_mode_index + 1) ** 3

    @property
    def mode_count(self) -> int:
        return SPIN_DEGENERACY * self.modes_per_spin

    def indices(self) -> np.ndarray:
        """Mode indices along one axis, in kernel order."""
        M = self.spec.max_mode_index
        return np.arange(-M, M + 1)

    def _reduced(self):
        mat = self.spec.material
        dk = self.spec.mode_spacing
        c = (HBAR * dk) ** 2 / (2 * M_E * mat.gap)
        mu = mat.fermi_energy / mat.gap
        return c, mu

    def _shift(self, v) -> np.ndarray:
        return M_E * np.asarray(v, dtype=float) / (HBAR * self.spec.mode_spacing)


def _common_axis(*vectors) -> int | None:
    axes = set()
    for v in vectors:
        nz = np.flatnonzero(np.asarray(v) != 0.0)
        if len(nz) > 1:
            return None
        axes.update(nz.tolist())
    if len(axes) > 1:
        return None
    return axes.pop() if axes else 2


def build_lattice(spec: LatticeSpec) -> Lattice:
    """Validate the grid against the resolution, containment and memory guards."""
    M = spec.max_mode_index
    if M < 1:
        raise LatticeError("max_mode_index must be >= 1")
    mat = spec.material
    dk = spec.mode_spacing
    xi_step = HBAR * mat.fermi_velocity * dk
    if xi_step > 0.25 * mat.gap * (1 + 1e-12):
        raise LatticeError(
            f"grid does not resolve the coherence peak: hbar v_F dk = {xi_step / mat.gap:.3g} gap "
            "> gap/4 (increase box_length)"
        )
    pair = spec.branch_pair
    v_max = max(np.linalg.norm(pair.v_left), np.linalg.norm(pair.v_right))
    k_reach = mat.fermi_momentum + M_E * v_max / HBAR
    if not k_reach < M * dk:
        raise LatticeError(
            f"boosted Fermi sphere (k = {k_reach:.4g}/m) is clipped by the grid edge "
            f"{M * dk:.4g}/m (increase max_mode_index)"
        )
    axis = _common_axis(pair.v_left, pair.v_right)
    n = 2 * M + 1
    memory = 8.0 * (7 * n if axis is None else 2 * n + M + 1)
    if memory > spec.memory_limit:
        raise LatticeError(f"memory estimate {memory:.3g} B exceeds limit {spec.memory_limit:.3g} B")
    return Lattice(spec, axis, memory, dense_memory=8.0 * n**3)


def continuum_prediction(spec: LatticeSpec) -> float:
    mat = spec.material
    dv = float(np.linalg.norm(spec.branch_pair.delta_v))
    return spec.volume * mat.fermi_momentum**3 * dv / (4 * math.pi**2 * mat.fermi_velocity)


def _result(lattice: Lattice, single_spin: float) -> LatticeResult:
    total = 0.5 * (SPIN_DEGENERACY * single_spin)
    prediction = continuum_prediction(lattice.spec)
    if prediction == 0.0:
        deviation = 0.0 if total == 0.0 else math.inf
    else:
        deviation = abs(total - prediction) / prediction
    return LatticeResult(total, prediction, deviation, lattice.mode_count, single_spin,
                         lattice.spec.max_mode_index, lattice.spec.box_length)


def exact_delta_N(lattice: Lattice) -> LatticeResult:
    """(1/2) sum_sigma sum_q |n(q; v_L) - n(q; v_R)| with exact boosted occupations."""
    spec = lattice.spec
    M = spec.max_mode_index
    c, mu = lattice._reduced()
    s_l = lattice._shift(spec.branch_pair.v_left)
    s_r = lattice._shift(spec.branch_pair.v_right)
    if lattice.axis is not None:
        parts = _kernels.exact_axial(M, c, mu, float(s_l[lattice.axis]), float(s_r[lattice.axis]))
    else:
        parts = _kernels.exact_general(M, c, mu, s_l, s_r)
    return _result(lattice, math.fsum(parts))


def first_order_delta_N(lattice: Lattice) -> float:
    """Same mode sum using the first-order difference delta_n_q."""
    spec = lattice.spec
    spec.branch_pair.check(spec.material)
    M = spec.max_mode_index
    c, mu = lattice._reduced()
    dv = spec.branch_pair.delta_v
    # gap^2/(2 Omega^3) hbar q.dv = (hbar dk dv / 2 gap) . n / (1 + x^2)^(3/2)
    g = HBAR * spec.mode_spacing * dv / (2 * spec.material.gap)
    axis = _common_axis(dv)
    if axis is not None:
        parts = _kernels.first_order_axial(M, c, mu, float(g[axis]))
    else:
        parts = _kernels.first_order_general(M, c, mu, g)
    single_spin = math.fsum(parts)
    return 0.5 * (SPIN_DEGENERACY * single_spin)


def convergence_study(base_spec: LatticeSpec, levels: int) -> list[LatticeResult]:
    """Exact sums on successively refined lattices (box and index range doubled)."""
    if levels < 2:
        raise ValueError("convergence_study needs at least 2 levels")
    lattices = []
    spec = base_spec
    for _ in range(levels):
        lattices.append(build_lattice(spec))  # fail before any long run
        spec = spec.refined()
    return [exact_delta_N(lat) for lat in lattices]

