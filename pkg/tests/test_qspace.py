import math
import warnings

import mpmath as mp
import numpy as np
import pytest
import sympy as sp
from scipy.spatial.transform import Rotation

from fluxcat.bcs import GapRatioWarning, Material
from fluxcat.constants import E_CHARGE, HBAR
from fluxcat.mode_shift import ValidityError
from fluxcat.qspace import (
    QuadratureError,
    QuadratureSpec,
    closed_form_density,
    delta_j_from_delta_v,
    delta_n_density_analytic,
    delta_n_density_numeric,
    local_difference,
    tail_weight,
    verify_local_relation,
)

from .conftest import wide_gap


def _dv(material, ratio, direction=(0.0, 0.0, 1.0)):
    d = np.asarray(direction, dtype=float)
    return ratio * material.critical_velocity * d / np.linalg.norm(d)


def test_symbolic_reduction_to_closed_form():
    """Small-gap limit of the mode integral equals 3 dj / (4 e v_F)."""
    x, mu = sp.symbols("x mu", real=True)
    k_f, v_f, dv, e, hbar = sp.symbols("k_F v_F dv e hbar", positive=True)
    radial = sp.integrate(1 / (2 * (1 + x**2) ** sp.Rational(3, 2)), (x, -sp.oo, sp.oo))
    assert radial == 1
    # int dOmega |cos theta| = 2 pi int_{-1}^{1} |mu| dmu
    angular = 2 * sp.pi * 2 * sp.integrate(mu, (mu, 0, 1))
    # q^2 dq = (k_F^2 / hbar v_F) dxi near the surface; the mode carries hbar k_F dv
    per_spin = (k_f**2 / (hbar * v_f)) * hbar * k_f * dv * radial * angular / (2 * sp.pi) ** 3
    density = sp.Rational(1, 2) * 2 * per_spin
    rho = k_f**3 / (3 * sp.pi**2)
    analytic = 3 * (e * rho * dv) / (4 * e * v_f)
    assert sp.simplify(density - analytic) == 0
    assert sp.simplify(density - k_f**3 * dv / (4 * sp.pi**2 * v_f)) == 0


def test_tail_antiderivative_symbolic():
    x, r = sp.symbols("x r", real=True)
    F = (x - r) / sp.sqrt(1 + x**2)
    assert sp.simplify(sp.diff(F, x) - (1 + r * x) / (1 + x**2) ** sp.Rational(3, 2)) == 0
    assert sp.limit(F, x, sp.oo) == 1


def test_tail_weight_limits():
    c = 50.0
    assert tail_weight(c, -1e12, 0.0) == pytest.approx(2 * (1 - c / math.sqrt(1 + c * c)), rel=1e-9)
    # a band bottom inside the cutoff leaves only the upper tail
    assert tail_weight(c, -20.0, 0.0) == pytest.approx(1 - c / math.sqrt(1 + c * c), rel=1e-12)


def _mp_oracle(material, dv):
    """Full-band integral of the first-order |delta n_q| in q, at 30 digits."""
    mp.mp.dps = 30
    r = mp.mpf(material.gap_ratio)

    def f(s):  # q = k_F s, xi/gap = (s^2 - 1)/r
        return s**3 / (2 * (1 + ((s * s - 1) / r) ** 2) ** 1.5)

    radial = mp.quad(f, [0, 1 - 20 * r, 1 - r, 1, 1 + r, 1 + 20 * r, mp.inf])
    k_f = material.fermi_momentum
    # spin sum and double-count factor cancel; int dOmega |cos| = 2 pi
    return float(radial) * k_f**4 * HBAR * dv / material.gap * 2 * math.pi / (2 * math.pi) ** 3


@pytest.mark.parametrize("ratio", [1e-3, 0.02, 0.1])
def test_exact_jacobian_matches_high_precision_oracle(ratio):
    m = wide_gap(ratio)
    dv = 1e-3 * m.critical_velocity
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GapRatioWarning)
        got = delta_n_density_numeric(m, [0, 0, dv], QuadratureSpec(jacobian="exact"))
    assert got == pytest.approx(_mp_oracle(m, dv), rel=1e-9)


@pytest.mark.parametrize("ratio", [0.02, 0.1])
def test_closed_form_correction_is_second_order_in_gap(ratio):
    m = wide_gap(ratio)
    dv = _dv(m, 1e-3)
    exact = delta_n_density_numeric(m, dv, QuadratureSpec(jacobian="exact"))
    deficit = 1 - closed_form_density(m, dv) / exact
    assert deficit == pytest.approx(ratio**2 / 4, rel=0.05)


def test_default_quadrature_matches_closed_form(al, nb):
    for m in (al, nb):
        assert verify_local_relation(m, _dv(m, 1e-3)) < 5e-3


def test_thin_gap_agreement(thin_gap):
    err = verify_local_relation(thin_gap, _dv(thin_gap, 1e-3))
    assert err < 1e-6


def test_zero_and_linearity(al):
    assert delta_n_density_numeric(al, np.zeros(3)) == 0.0
    one = delta_n_density_numeric(al, _dv(al, 1e-3))
    two = delta_n_density_numeric(al, _dv(al, 2e-3))
    assert two == pytest.approx(2 * one, rel=1e-14)


def test_isotropy(al):
    base = delta_n_density_numeric(al, _dv(al, 1e-3))
    for rot in Rotation.random(8, random_state=1234):
        dv = rot.apply(_dv(al, 1e-3))
        assert delta_n_density_numeric(al, dv) == pytest.approx(base, rel=1e-9)


def test_refinement_reduces_error(al):
    dv = _dv(al, 1e-3)
    default = verify_local_relation(al, dv)
    errors = [verify_local_relation(al, dv, QuadratureSpec(radial_points=n)) for n in (64, 128, 512)]
    assert errors[0] >= default - 1e-4
    assert errors[0] > errors[1] > errors[2] >= default - 1e-4


def test_tail_correction_matters(al):
    dv = _dv(al, 1e-3)
    assert verify_local_relation(al, dv, QuadratureSpec(tail_correction=False)) > verify_local_relation(al, dv)


def test_spin_and_double_count_bookkeeping(al):
    dv = _dv(al, 1e-3)
    default = delta_n_density_numeric(al, dv)
    single = delta_n_density_numeric(al, dv, spin_degeneracy=1, double_count_factor=1.0)
    assert default == pytest.approx(single, rel=1e-15)
    both = delta_n_density_numeric(al, dv, double_count_factor=1.0)
    assert both == pytest.approx(2 * default, rel=1e-15)


def test_small_gap_more_accurate_than_large_gap():
    thin = Material.from_gap_ratio("thin", 2.02e6, 1e-3)
    with pytest.warns(GapRatioWarning):
        thick = Material.from_gap_ratio("thick", 2.02e6, 1e-1)
    assert verify_local_relation(thin, _dv(thin, 1e-3)) < verify_local_relation(thick, _dv(thick, 1e-3))


def test_strict_mode_detects_unconverged_rule(al):
    spec = QuadratureSpec(radial_points=64, convergence_tol=1e-3)
    with pytest.raises(QuadratureError, match="not converged"):
        delta_n_density_numeric(al, _dv(al, 1e-3), spec)
    # non-strict returns the coarse value
    assert delta_n_density_numeric(al, _dv(al, 1e-3), spec, strict=False) > 0


def test_spec_guards():
    with pytest.raises(ValueError):
        QuadratureSpec(xi_cutoff=5)
    with pytest.raises(ValueError):
        QuadratureSpec(radial_points=8)
    with pytest.raises(ValueError):
        QuadratureSpec(jacobian="other")


def test_invalid_velocity_refused(al):
    with pytest.raises(ValidityError):
        delta_n_density_numeric(al, _dv(al, 0.9))


def test_analytic_examples(al):
    assert delta_n_density_analytic(al, 0.0) == 0.0
    # 3 / (4 e v_F) = 2.3174e12; the commonly quoted 2.318e12 is within 3e-4
    assert delta_n_density_analytic(al, 1.0) == pytest.approx(2.318e12, rel=5e-4)
    assert delta_n_density_analytic(al, 1.0) == 3 / (4 * E_CHARGE * 2.02e6)
    assert delta_n_density_analytic(al, 2.0) == 2 * delta_n_density_analytic(al, 1.0)
    with pytest.raises(ValueError):
        delta_n_density_analytic(al, -1.0)


def test_current_density_examples(al):
    assert delta_j_from_delta_v(al, np.zeros(3)) == 0.0
    k_f = al.fermi_momentum
    assert delta_j_from_delta_v(al, [0, 0, 1.0]) == pytest.approx(E_CHARGE * k_f**3 / (3 * math.pi**2), rel=1e-15)
    assert delta_j_from_delta_v(al, [0, 0, 3.0]) == pytest.approx(3 * delta_j_from_delta_v(al, [0, 0, 1.0]),
                                                                 rel=1e-15)


def test_closed_form_equals_analytic(al):
    dv = _dv(al, 1e-3)
    assert closed_form_density(al, dv) == pytest.approx(
        delta_n_density_analytic(al, delta_j_from_delta_v(al, dv)), rel=1e-14)


def test_local_difference_bundle(al):
    dv = _dv(al, 1e-3)
    ld = local_difference(al, dv)
    assert ld.delta_n_density == delta_n_density_numeric(al, dv)
    assert ld.delta_j_density == delta_j_from_delta_v(al, dv)
