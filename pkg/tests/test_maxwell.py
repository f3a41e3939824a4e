import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qwgauge.checks import SmoothPotential
from qwgauge.dirac_walk import build_dirac_walk, evolve, walk_step
from qwgauge.errors import ConfigError, ConstraintError, SaturationError
from qwgauge.gauge import GaugeField, GaugeTransformation, apply_gauge_transformation, plaquettes_01
from qwgauge.lattice import FieldHistory, LatticeSpec, gaussian_packet
from qwgauge.maxwell import (
    GaugeLattice,
    action_prefactor,
    ampere_update,
    coupled_evolve,
    electric_field,
    field_strengths,
    flux_prefactor,
    gauge_action,
    gauge_action_gradient_numeric,
    gauge_el_residual_numeric,
    gauss_residual,
    gauss_solve,
    maxwell_closed_form,
    sin_maxwell_term,
    walk_flux_current,
)

from qwgauge.noether import closed_form_u1_current

from conftest import cfield

SPEC = LatticeSpec(sites=12, steps=8, epsilon=0.5, mass=0.7, charge=0.9)


def _random_gauge(rng, spec=SPEC, scale=0.3):
    J, P = spec.steps, spec.sites
    return GaugeField(scale * rng.normal(size=(J, P)), scale * rng.normal(size=(J, P)), spec)


def _gauge_transform_nd(A, phi, eps):
    """``A_mu - d^R_mu phi`` on a grid periodic in space; the last time row of A_0 is left alone."""
    out = np.array(A)
    d0 = np.zeros_like(phi)
    d0[:-1] = (phi[1:] - phi[:-1]) / eps
    out[0] -= d0
    for k in range(1, A.shape[0]):
        out[k] -= (np.roll(phi, -1, axis=k) - phi) / eps
    return out


def test_prefactors():
    assert action_prefactor(3, 0.5) == 1.0
    assert action_prefactor(1, 0.5) == 4.0
    assert flux_prefactor(1, 0.5) == 1.0
    assert flux_prefactor(3, 0.5) == 0.25
    with pytest.raises(ValueError):
        action_prefactor(2, 0.5)


def test_gauge_lattice_validation():
    with pytest.raises(ValueError):
        GaugeLattice(np.zeros((2, 4)), 0.5, 1.0)
    with pytest.raises(ValueError):
        GaugeLattice(np.zeros((3, 4, 4, 4)), 0.5, 1.0)  # 2+1D is not supported
    with pytest.raises(ValueError):
        GaugeLattice(np.zeros((2, 4, 4)), 0.0, 1.0)


@pytest.mark.parametrize("shape", [(2, 5, 6), (4, 4, 3, 3, 3)])
def test_zero_potential_has_zero_action(shape):
    assert gauge_action(GaugeLattice(np.zeros(shape), 0.5, 1.0)) == 0.0


def test_1p1_action_from_plaquettes(rng):
    g = _random_gauge(rng)
    lat = GaugeLattice.from_gauge_field(g)
    q, eps = SPEC.charge, SPEC.epsilon
    expected = np.sum(1 - plaquettes_01(g).real) / (q ** 2 * eps ** 2)
    assert gauge_action(lat) == pytest.approx(expected, rel=1e-12)


def test_field_strength_antisymmetric(rng):
    lat = GaugeLattice(rng.normal(size=(4, 3, 3, 3, 3)), 0.5, 1.0)
    F = field_strengths(lat)
    np.testing.assert_allclose(F[:, :, :-1], -np.swapaxes(F, 0, 1)[:, :, :-1])
    assert np.all(np.isnan(F[0, 1, -1]))


@pytest.mark.parametrize("shape", [(2, 6, 7), (4, 4, 3, 4, 3)])
def test_pure_gauge_and_gauge_invariance(rng, shape):
    eps, q = 0.4, 1.3
    phi = rng.normal(size=shape[1:])
    pure = GaugeLattice(_gauge_transform_nd(np.zeros(shape), phi, eps), eps, q)
    assert abs(gauge_action(pure)) <= 1e-12
    A = rng.normal(size=shape)
    s = gauge_action(GaugeLattice(A, eps, q))
    s2 = gauge_action(GaugeLattice(_gauge_transform_nd(A, phi, eps), eps, q))
    assert abs(s - s2) <= 1e-12 * (1 + abs(s))


def test_zero_charge_limit_is_quadratic(rng):
    A = 0.2 * rng.normal(size=(2, 5, 6))
    s0 = gauge_action(GaugeLattice(A, 0.5, 0.0))
    s_small = gauge_action(GaugeLattice(A, 0.5, 1e-4))
    assert s_small == pytest.approx(s0, rel=1e-7)
    F = field_strengths(GaugeLattice(A, 0.5, 0.0))[0, 1]
    assert s0 == pytest.approx(0.5 * 0.5 ** 2 * np.nansum(F ** 2), rel=1e-12)


@pytest.mark.parametrize("mu", [0, 1])
def test_sin_term_is_gauge_action_gradient_1p1(rng, mu):
    lat = GaugeLattice.from_gauge_field(_random_gauge(rng))
    for site in [(2, 3), (4, 0), (5, 11)]:
        assert gauge_action_gradient_numeric(lat, site, mu) == pytest.approx(
            sin_maxwell_term(lat, site, mu), abs=1e-8)


@pytest.mark.parametrize("mu", [0, 1, 2, 3])
def test_sin_term_is_gauge_action_gradient_3p1(rng, mu):
    lat = SmoothPotential.random(rng, 3).sample(8, 2 * np.pi, 3 * np.pi / 4, 1.3)
    site = (1, 1, 2, 3)
    assert gauge_action_gradient_numeric(lat, site, mu) == pytest.approx(
        sin_maxwell_term(lat, site, mu), abs=1e-8)


def test_sin_term_rejects_edge_sites(rng):
    lat = GaugeLattice.from_gauge_field(_random_gauge(rng))
    with pytest.raises(IndexError):
        sin_maxwell_term(lat, (0, 3), 1)
    with pytest.raises(IndexError):
        sin_maxwell_term(lat, (7, 3), 1)


def test_el_residual_trivial_and_vacuum(rng):
    zero_hist = FieldHistory(np.zeros((8, 12, 2)), SPEC)
    assert gauge_el_residual_numeric(zero_hist, GaugeField.zeros(SPEC, 8), (3, 4), 0) == pytest.approx(0, abs=1e-14)
    g = _random_gauge(rng)
    lat = GaugeLattice.from_gauge_field(g)
    for mu in (0, 1):
        assert gauge_el_residual_numeric(zero_hist, g, (3, 4), mu) == pytest.approx(
            sin_maxwell_term(lat, (3, 4), mu), abs=1e-8)


@settings(max_examples=10)
@given(seed=st.integers(0, 2**16), mu=st.sampled_from([0, 1]))
def test_el_residual_matches_closed_form(seed, mu):
    rng = np.random.default_rng(seed)
    hist = FieldHistory(cfield(rng, (8, 12, 2)), SPEC)
    g = _random_gauge(rng)
    for site in [(1, 1), (3, 6), (6, 10)]:
        assert gauge_el_residual_numeric(hist, g, site, mu, background=0.2) == pytest.approx(
            maxwell_closed_form(hist, g, site, mu, background=0.2), abs=1e-8)


def test_el_residual_rejects_boundary_site(rng):
    with pytest.raises(IndexError):
        gauge_el_residual_numeric(FieldHistory(cfield(rng, (8, 12, 2)), SPEC), _random_gauge(rng), (0, 3), 0)


def test_gauss_solve_examples():
    np.testing.assert_array_equal(gauss_solve(np.zeros(6), 0.0, 1.0, 0.1), 0.0)
    np.testing.assert_allclose(gauss_solve(np.zeros(6), 0.7, 1.0, 0.1), 0.7, rtol=1e-12)
    charge = np.zeros(8)
    charge[2], charge[5] = 1.5, -1.5
    q, eps = 2.0, 0.3
    E = gauss_solve(charge, 0.0, q, eps)
    # direct summation oracle: sin-flux is q^2 eps^2 times the enclosed charge
    s = np.array([0, 0, 1.5, 1.5, 1.5, 0, 0, 0]) * q * q * eps ** 2
    np.testing.assert_allclose(np.sin(q * eps ** 2 * E), s, atol=1e-15)
    assert np.all(E[[0, 1, 5, 6, 7]] == 0) and np.all(E[2:5] > 0)
    assert gauss_solve(charge, 0.3, 0.0, eps) == pytest.approx(np.full(8, 0.3))


def test_gauss_solve_errors():
    with pytest.raises(ConstraintError):
        gauss_solve(np.array([1.0, 0.0, 0.0]), 0.0, 1.0, 0.1)
    gauss_solve(np.array([1.0, 0.0, 0.0]), 0.0, 1.0, 0.1, periodic=False)
    with pytest.raises(SaturationError) as info:
        gauss_solve(np.array([0.0, 80.0, 0.0, -80.0]), 0.0, 1.0, 0.12)
    assert info.value.site == 1


def test_gauss_residual_of_solution():
    spec = LatticeSpec(sites=16, steps=3, epsilon=0.3, mass=0.5, charge=1.1)
    rng = np.random.default_rng(3)
    hist = FieldHistory(cfield(rng, (3, 16, 2)), spec)
    g = GaugeField.zeros(spec, 3)
    j0 = closed_form_u1_current(hist, g).j0[0]
    bg = -j0.mean()
    E = gauss_solve(j0 + bg, 0.2, spec.charge, spec.epsilon)
    assert np.max(np.abs(gauss_residual(hist, g, E, 0, background=bg))) <= 1e-12
    zero = FieldHistory(np.zeros((3, 16, 2)), spec)
    assert np.max(np.abs(gauss_residual(zero, g, np.zeros(16), 0))) == 0
    assert np.max(np.abs(gauss_residual(zero, g, np.full(16, 0.4), 0))) <= 1e-16


def test_electric_field_in_temporal_gauge(rng):
    g = GaugeField(np.zeros((8, 12)), rng.normal(size=(8, 12)), SPEC)
    np.testing.assert_allclose(electric_field(g), np.diff(g.a1, axis=0) / SPEC.epsilon, atol=1e-14)


def test_ampere_update_examples():
    E = np.array([0.0, 0.3, -1.0])
    np.testing.assert_array_equal(ampere_update(E, np.zeros(3), 1.0, 0.5), E)
    # q eps^2 = 0.1, q^2 eps^2 J1 = 0.05
    q, eps = 1.0, np.sqrt(0.1)
    out = ampere_update(np.zeros(1), np.array([0.5]), q, eps)
    assert out[0] == pytest.approx(-0.50020856805770, rel=1e-12)
    assert out[0] == pytest.approx(np.arcsin(-0.05) / 0.1, rel=1e-14)
    before = E.copy()
    with pytest.raises(SaturationError) as info:
        ampere_update(E, np.array([0.0, 0.0, 50.0]), q, eps, step=7)
    assert info.value.site == 2 and info.value.step == 7
    np.testing.assert_array_equal(E, before)


def test_ampere_continuum_rate():
    # -d0 E = q J1 for small eps
    q, J1 = 1.0, 0.3
    for eps in (0.1, 0.01):
        E = ampere_update(np.zeros(1), np.array([J1]), q, eps)
        assert abs((0 - E[0]) / 1.0 - q * J1) <= 10 * (q * eps) ** 4 + 1e-12


def _packet_spec(sites=64, charge=1.0):
    return LatticeSpec(sites=sites, steps=2, epsilon=0.1, mass=1.0, charge=charge)


def test_coupled_zero_charge_decouples():
    spec = _packet_spec(charge=0.0)
    psi0 = gaussian_packet(spec, 3.2, 0.8, k0=2.0)
    tr = coupled_evolve(spec, psi0, 60)
    assert np.max(np.abs(tr.gauge.a1)) == 0
    free = evolve(build_dirac_walk(spec), psi0, 60, spec)
    np.testing.assert_allclose(tr.history.values, free.values, atol=1e-13)
    assert tr.norm_drift <= 1e-12
    assert np.ptp(tr.charges) <= 1e-12


def test_coupled_vacuum_constant_field():
    spec = _packet_spec()
    tr = coupled_evolve(spec, np.zeros((64, 2)), 20, e0=0.4, neutralize=False)
    np.testing.assert_allclose(tr.efield, 0.4, rtol=1e-14)
    np.testing.assert_allclose(tr.gauge.a1[:, 0], 0.1 * 0.4 * np.arange(21), rtol=1e-12)
    assert np.max(tr.gauss_residuals) == 0


def test_coupled_requires_periodic_and_known_current():
    spec = _packet_spec()
    with pytest.raises(ConfigError):
        coupled_evolve(spec.with_(boundary="fixed-zero"), np.zeros((64, 2)), 3)
    with pytest.raises(ConfigError):
        coupled_evolve(spec, np.zeros((64, 2)), 3, current="other")


@pytest.mark.parametrize("current", ["noether", "walk"])
def test_coupled_norm_preserved(current):
    spec = _packet_spec()
    tr = coupled_evolve(spec, gaussian_packet(spec, 3.2, 0.8, k0=2.0), 100, current=current)
    assert tr.norm_drift <= 1e-12
    assert tr.background == pytest.approx(-tr.j0[0].mean())


def test_walk_current_preserves_gauss_exactly():
    spec = _packet_spec()
    tr = coupled_evolve(spec, gaussian_packet(spec, 3.2, 0.8, k0=2.0), 200, current="walk")
    assert np.max(tr.gauss_residuals) <= 1e-12
    assert np.ptp(tr.charges) <= 1e-12


def test_noether_current_gauss_drift_is_small_but_nonzero():
    # The U(1) current of the gauged walk is not conserved once A1 varies in time,
    # so the Gauss constraint is only approximately maintained.
    spec = _packet_spec()
    tr = coupled_evolve(spec, gaussian_packet(spec, 3.2, 0.8, k0=2.0), 200)
    assert tr.gauss_residuals[0] <= 1e-12
    assert 1e-12 < np.max(tr.gauss_residuals) < 1e-3


def test_walk_flux_current_continuity(rng):
    spec = _packet_spec(sites=10)
    w = build_dirac_walk(spec)
    a = cfield(rng, (10, 2))
    b = walk_step(w, a)
    c = walk_step(w, b)
    rho1, flux1 = walk_flux_current(a, b, spec)
    rho2, flux2 = walk_flux_current(b, c, spec)
    np.testing.assert_allclose(rho2 - rho1 + (flux2 - np.roll(flux2, 1)), 0, atol=1e-14)
