import math
import warnings
from dataclasses import replace

import numpy as np
import pytest

from fluxcat import _kernels
from fluxcat.lattice import (
    LatticeError,
    LatticeSpec,
    build_lattice,
    continuum_prediction,
    convergence_study,
    exact_delta_N,
    first_order_delta_N,
)
from fluxcat.mode_shift import BranchPair, delta_n_q, delta_n_q_exact


@pytest.fixture(autouse=True)
def _quiet_gap_warning():
    # the oracle deliberately runs at gap/E_F >= 0.1
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*gap/fermi_energy.*")
        yield


def small(ratio=0.1, **kw):
    return LatticeSpec.default(gap_over_fermi=ratio, **kw)


def with_pair(spec, v_left, v_right):
    return replace(spec, branch_pair=BranchPair(v_left, v_right))


def test_mode_counting():
    lat = build_lattice(replace(small(0.2), max_mode_index=64))
    assert lat.modes_per_spin == 129**3
    assert lat.mode_count == 2 * 129**3
    assert lat.indices().tolist() == list(range(-64, 65))


def test_default_grid_resolves_peak():
    spec = small()
    mat = spec.material
    from fluxcat.constants import HBAR

    assert HBAR * mat.fermi_velocity * spec.mode_spacing <= 0.25 * mat.gap * (1 + 1e-12)
    # Fermi radius is an integer number of spacings
    per_radius = mat.fermi_momentum / spec.mode_spacing
    assert per_radius == pytest.approx(round(per_radius), abs=1e-6)


def test_peak_resolution_guard():
    with pytest.raises(LatticeError, match="gap/4"):
        build_lattice(small(spacing_fraction=0.5))


def test_containment_guard():
    with pytest.raises(LatticeError, match="clipped"):
        build_lattice(replace(small(), max_mode_index=40))


def test_memory_guard():
    with pytest.raises(LatticeError, match="memory"):
        build_lattice(small(memory_limit=100.0))


def test_index_guard():
    with pytest.raises(LatticeError):
        build_lattice(replace(small(), max_mode_index=0))


def test_zero_velocity_handle_is_valid():
    spec = with_pair(small(), 0.0, 0.0)
    lat = build_lattice(spec)
    assert lat.axis == 2
    res = exact_delta_N(lat)
    assert res.delta_N_lattice == 0.0
    assert res.relative_deviation == 0.0
    assert first_order_delta_N(lat) == 0.0


def test_identical_nonzero_branches_give_zero():
    spec = small()
    v = 0.02 * spec.material.critical_velocity
    assert exact_delta_N(build_lattice(with_pair(spec, v, v))).delta_N_lattice == 0.0


def test_swap_invariance():
    spec = small()
    lat = build_lattice(spec)
    swapped = build_lattice(replace(spec, branch_pair=spec.branch_pair.swapped()))
    assert exact_delta_N(swapped).delta_N_lattice == exact_delta_N(lat).delta_N_lattice


def test_small_grid_agrees_with_continuum():
    res = exact_delta_N(build_lattice(small()))
    assert res.relative_deviation < 5e-3
    assert res.delta_N_continuum_prediction == continuum_prediction(small())


def test_continuum_prediction_formula():
    spec = small()
    mat = spec.material
    dv = np.linalg.norm(spec.branch_pair.delta_v)
    expected = spec.box_length**3 * mat.fermi_momentum**3 * dv / (4 * math.pi**2 * mat.fermi_velocity)
    assert continuum_prediction(spec) == pytest.approx(expected, rel=1e-15)


def test_axis_choice_does_not_matter():
    z = exact_delta_N(build_lattice(small(direction=(0, 0, 1)))).delta_N_lattice
    x = exact_delta_N(build_lattice(small(direction=(1, 0, 0)))).delta_N_lattice
    assert x == pytest.approx(z, rel=1e-12)


def test_oblique_direction_within_two_percent():
    """Rotating dv off the lattice axes only changes the sum by discretisation error."""
    z = build_lattice(small(direction=(0, 0, 1)))
    oblique = build_lattice(small(direction=(1, 1, 0)))
    assert oblique.axis is None
    a = exact_delta_N(z).delta_N_lattice
    b = exact_delta_N(oblique).delta_N_lattice
    assert abs(b - a) / a < 0.02


def test_general_and_axial_kernels_agree():
    spec = small(0.2)
    lat = build_lattice(spec)
    c, mu = lat._reduced()
    s_l = lat._shift(spec.branch_pair.v_left)
    s_r = lat._shift(spec.branch_pair.v_right)
    M = spec.max_mode_index
    axial = math.fsum(_kernels.exact_axial(M, c, mu, s_l[2], s_r[2]))
    general = math.fsum(_kernels.exact_general(M, c, mu, s_l, s_r))
    assert general == pytest.approx(axial, rel=1e-12)
    g = np.array([0.0, 0.0, 1e-3])
    assert math.fsum(_kernels.first_order_general(M, c, mu, g)) == pytest.approx(
        math.fsum(_kernels.first_order_axial(M, c, mu, 1e-3)), rel=1e-12)


def test_common_boost_invariance():
    spec = small()
    u = 0.05 * spec.material.critical_velocity
    base = exact_delta_N(build_lattice(spec)).delta_N_lattice
    boosted = exact_delta_N(build_lattice(replace(spec, branch_pair=spec.branch_pair.boosted(u)))).delta_N_lattice
    assert boosted == pytest.approx(base, rel=1e-3)


def _numpy_oracle(spec):
    """Dense evaluation of the same mode sums with the mode_shift functions."""
    M = spec.max_mode_index
    n = np.arange(-M, M + 1, dtype=float)
    grid = np.stack(np.meshgrid(n, n, n, indexing="ij"), -1).reshape(-1, 3) * spec.mode_spacing
    exact = np.abs(delta_n_q_exact(spec.material, grid, spec.branch_pair)).sum()
    first = np.abs(delta_n_q(spec.material, grid, spec.branch_pair)).sum()
    # spin sum (x2) and double-count factor (x1/2) cancel
    return exact, first


def test_brute_force_numpy_oracle():
    spec = small(0.2)
    exact, first = _numpy_oracle(spec)
    lat = build_lattice(spec)
    assert exact_delta_N(lat).delta_N_lattice == pytest.approx(exact, rel=1e-9)
    assert first_order_delta_N(lat) == pytest.approx(first, rel=1e-9)


def test_brute_force_oracle_oblique():
    spec = small(0.2, direction=(1, 2, 2))
    exact, first = _numpy_oracle(spec)
    lat = build_lattice(spec)
    assert lat.axis is None
    assert exact_delta_N(lat).delta_N_lattice == pytest.approx(exact, rel=1e-9)
    assert first_order_delta_N(lat) == pytest.approx(first, rel=1e-9)


def test_first_order_matches_exact_quadratically():
    spec = small()
    vc = spec.material.critical_velocity
    errors = []
    for ratio in (0.04, 0.02, 0.01):
        lat = build_lattice(with_pair(spec, ratio * vc, 0.0))
        errors.append(abs(exact_delta_N(lat).delta_N_lattice - first_order_delta_N(lat)))
    for a, b in zip(errors, errors[1:]):
        assert a / b == pytest.approx(4.0, rel=0.15)


def test_first_order_is_linear():
    spec = small()
    vc = spec.material.critical_velocity
    one = first_order_delta_N(build_lattice(with_pair(spec, 0.01 * vc, 0.0)))
    two = first_order_delta_N(build_lattice(with_pair(spec, 0.02 * vc, 0.0)))
    assert two == pytest.approx(2 * one, rel=1e-12)


def test_spin_bookkeeping():
    res = exact_delta_N(build_lattice(small()))
    # two spin species, each counted once per branch pair
    assert res.delta_N_lattice == pytest.approx(res.single_spin_sum, rel=1e-15)
    assert res.mode_count == 2 * (2 * res.max_mode_index + 1) ** 3


def test_convergence_study_two_levels():
    results = convergence_study(small(), 2)
    assert [r.max_mode_index for r in results] == [114, 228]
    assert results[1].box_length == 2 * results[0].box_length
    assert results[1].relative_deviation < 1.1 * results[0].relative_deviation


def test_convergence_study_guards():
    with pytest.raises(ValueError, match="at least 2"):
        convergence_study(small(), 1)
    spec = small()
    level_one = build_lattice(spec).memory_estimate
    # the second level is built (and rejected) before anything runs
    with pytest.raises(LatticeError, match="memory"):
        convergence_study(replace(spec, memory_limit=level_one * 1.5), 2)


def test_convergence_study_exact_zero():
    results = convergence_study(with_pair(small(0.2), 0.0, 0.0), 2)
    assert all(r.delta_N_lattice == 0.0 and r.relative_deviation == 0.0 for r in results)


def test_result_serialises():
    d = exact_delta_N(build_lattice(small(0.2))).to_dict()
    assert set(d) >= {"delta_N_lattice", "delta_N_continuum_prediction", "relative_deviation", "mode_count"}
