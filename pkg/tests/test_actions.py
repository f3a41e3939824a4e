import numpy as np
import pytest
from hypothesis import given, strategies as st

from qwgauge.actions import (
    action_asymmetric,
    action_symmetric,
    boundary_terms,
    dqw_density,
    euler_lagrange_residual,
    kinetic_matrices,
    site_arguments,
)
from qwgauge.dirac_walk import ALPHA0, ALPHA1, build_dirac_walk, evolve, mu_eps, two_step_residual
from qwgauge.gauge import GaugeField, GaugeTransformation, apply_gauge_transformation, gauged_evolve
from qwgauge.lattice import FieldHistory, LatticeSpec

from conftest import cfield


def _random_history(rng, J=7, P=9, eps=0.6, mass=0.8, charge=0.7, boundary="periodic"):
    spec = LatticeSpec(sites=P, steps=J, epsilon=eps, mass=mass, charge=charge, boundary=boundary)
    return FieldHistory(cfield(rng, (J, P, 2)), spec)


def test_kinetic_matrices():
    k0, k1, mm = kinetic_matrices(0.5)
    np.testing.assert_allclose(k0, np.eye(2))
    np.testing.assert_allclose(k1, 0.5 * ALPHA1)
    np.testing.assert_allclose(mm, 0.5 * ALPHA0)


@pytest.mark.parametrize("chi", [(1.0, 0.0), (1.0, 1.0), (0.3 + 0.2j, -0.5j)])
def test_constant_field_actions_closed_form(chi):
    J, P, eps, m = 6, 7, 0.5, 1.2
    spec = LatticeSpec(sites=P, steps=J, epsilon=eps, mass=m)
    chi = np.asarray(chi, dtype=complex)
    hist = FieldHistory(np.broadcast_to(chi, (J, P, 2)).copy(), spec)
    mu = mu_eps(eps * m)
    expected = -(eps ** 2) * m * mu * (np.conj(chi) @ ALPHA0 @ chi) * (J - 2) * (P - 2)
    assert action_asymmetric(hist).value == pytest.approx(expected, abs=1e-14)
    assert action_symmetric(hist).value == pytest.approx(expected, abs=1e-14)
    assert boundary_terms(hist) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_static_plane_wave_asymmetric_action(n):
    J, P, eps, m = 5, 12, 0.4, 0.9
    spec = LatticeSpec(sites=P, steps=J, epsilon=eps, mass=m)
    chi = np.array([0.6, 0.8j])
    k = 2 * np.pi * n / (P * eps)
    x = np.arange(P) * eps
    vals = np.exp(1j * k * x)[None, :, None] * chi[None, None, :] * np.ones((J, 1, 1))
    mu = mu_eps(eps * m)
    per_site = eps ** 2 * (
        -mu * np.sin(k * eps) / eps * (np.conj(chi) @ ALPHA1 @ chi) - m * mu * (np.conj(chi) @ ALPHA0 @ chi)
    )
    value = action_asymmetric(FieldHistory(vals, spec)).value
    assert value == pytest.approx(per_site * (J - 2) * (P - 2), abs=1e-13)


@given(seed=st.integers(0, 2**16))
def test_symmetric_action_is_real(seed):
    hist = _random_history(np.random.default_rng(seed))
    s = action_symmetric(hist)
    assert s.is_real_expected
    assert abs(s.imag) <= 1e-12 * (1 + abs(s.real))


@pytest.mark.parametrize("boundary", ["periodic", "fixed-zero"])
def test_actions_differ_by_boundary_terms(rng, boundary):
    for _ in range(5):
        hist = _random_history(rng, boundary=boundary)
        a = action_asymmetric(hist).value
        s = action_symmetric(hist).value
        assert abs(a - s - boundary_terms(hist)) <= 1e-12 * abs(a)


def test_actions_reject_small_histories():
    spec = LatticeSpec(sites=2, steps=3)
    with pytest.raises(ValueError):
        action_symmetric(FieldHistory(np.zeros((3, 2, 2)), spec))


def test_density_sums_to_symmetric_action(rng):
    hist = _random_history(rng)
    dens = dqw_density(hist.spec)
    J, P = hist.values.shape[:2]
    total = sum(dens(*site_arguments(hist, (j, p))) for j in range(1, J - 1) for p in range(1, P - 1))
    assert total == pytest.approx(action_symmetric(hist).value, abs=1e-12)


def test_gauged_density_sums_to_gauged_action(rng):
    hist = _random_history(rng)
    J, P = hist.values.shape[:2]
    gauge = GaugeField(rng.normal(size=(J, P)), rng.normal(size=(J, P)), hist.spec)
    dens = dqw_density(hist.spec, gauge)
    assert dens.needs_gauge
    total = sum(dens(*site_arguments(hist, (j, p))) for j in range(1, J - 1) for p in range(1, P - 1))
    assert total == pytest.approx(action_symmetric(hist, gauge).value, abs=1e-12)


def test_symmetric_action_gauge_invariant(rng):
    hist = _random_history(rng, J=8, P=10)
    gauge = GaugeField(rng.normal(size=(8, 10)), rng.normal(size=(8, 10)), hist.spec)
    phi = GaugeTransformation(rng.normal(size=(8, 10)))
    h2, g2 = apply_gauge_transformation(hist, gauge, phi)
    s1 = action_symmetric(hist, gauge).value
    s2 = action_symmetric(h2, g2).value
    assert abs(s1 - s2) <= 1e-12 * (1 + abs(s1))
    assert abs(action_symmetric(hist).value - s1) > 1e-6


def test_action_symmetric_rejects_non_gauge(rng):
    with pytest.raises(TypeError):
        action_symmetric(_random_history(rng), gauge=np.zeros((7, 9)))


@pytest.mark.parametrize("em", [0.0, 0.4, 1.0])
def test_walk_solutions_extremize_action(rng, em):
    spec = LatticeSpec(sites=10, steps=8, epsilon=0.5, mass=em / 0.5)
    hist = evolve(build_dirac_walk(spec), cfield(rng, (10, 2)), 7, spec)
    dens = dqw_density(spec)
    worst = 0.0
    for j in range(1, 7):
        for p in range(10):
            d, s = euler_lagrange_residual(dens, hist, (j, p))
            worst = max(worst, np.max(np.abs(d)), np.max(np.abs(s)))
    assert worst <= 1e-8


def test_dag_branch_is_scaled_two_step_residual(rng):
    hist = _random_history(rng)
    dens = dqw_density(hist.spec)
    for site in [(1, 0), (3, 4), (5, 8)]:
        d, s = euler_lagrange_residual(dens, hist, site)
        expected = hist.spec.epsilon ** 2 * two_step_residual(hist, site[0])[site[1]]
        np.testing.assert_allclose(d, expected, atol=1e-8)
        # psi branch is the conjugate of the dag branch for a real density
        np.testing.assert_allclose(s, np.conj(d), atol=1e-8)


def test_constant_field_residual():
    # Frozen: for constant psi only the mass term survives, giving -eps^2 m mu alpha0 psi.
    eps, m = 0.5, 1.0
    spec = LatticeSpec(sites=5, steps=5, epsilon=eps, mass=m)
    chi = np.array([1.0, 2.0j])
    hist = FieldHistory(np.broadcast_to(chi, (5, 5, 2)).copy(), spec)
    d, _ = euler_lagrange_residual(dqw_density(spec), hist, (2, 2))
    np.testing.assert_allclose(d, -0.25 * 0.8944271909999159 * (ALPHA0 @ chi), atol=1e-9)


def test_el_rejects_boundary_sites(rng):
    hist = _random_history(rng, boundary="fixed-zero")
    dens = dqw_density(hist.spec)
    with pytest.raises(IndexError):
        euler_lagrange_residual(dens, hist, (0, 3))
    with pytest.raises(IndexError):
        euler_lagrange_residual(dens, hist, (2, 0))


def test_gauged_walk_solutions_extremize_gauged_action(rng):
    spec = LatticeSpec(sites=10, steps=8, epsilon=0.5, mass=1.0, charge=0.8)
    a1 = np.outer(np.ones(8), rng.normal(size=10))
    gauge = GaugeField(np.zeros((8, 10)), a1, spec)
    hist = gauged_evolve(build_dirac_walk(spec), gauge, cfield(rng, (10, 2)), 7)
    dens = dqw_density(spec, gauge)
    worst = max(np.max(np.abs(euler_lagrange_residual(dens, hist, (j, p))[0]))
                for j in range(1, 7) for p in range(10))
    assert worst <= 1e-8


def test_fixed_zero_walk_boundary_terms(rng):
    # Support kept away from the ends, so the spatial boundary sum vanishes.  The
    # temporal sum vanishes too: psi_{j+1}^dag psi_j = <W psi_j, psi_j> is the
    # same for every j along a unitary walk.
    spec = LatticeSpec(sites=16, steps=6, epsilon=0.5, mass=1.0, boundary="fixed-zero")
    psi0 = np.zeros((16, 2), dtype=complex)
    psi0[6:10] = cfield(rng, (4, 2))
    hist = evolve(build_dirac_walk(spec), psi0, 5, spec)
    v = hist.values
    k1 = kinetic_matrices(mu_eps(0.5))[1]
    b1 = np.sum(np.conj(v[1:-1, 1]) * (v[1:-1, 0] @ k1.T)) - np.sum(np.conj(v[1:-1, -1]) * (v[1:-1, -2] @ k1.T))
    assert b1 == 0
    assert abs(boundary_terms(hist)) <= 1e-14
    v = np.array(v)
    v[-1] *= 1j  # no longer a walk history: temporal boundary sum appears
    hist = FieldHistory(v, spec)
    assert abs(boundary_terms(hist)) > 1e-3
    a, s = action_asymmetric(hist).value, action_symmetric(hist).value
    assert abs(a - s - boundary_terms(hist)) <= 1e-12 * abs(a)


def test_boundary_terms_vanish_for_field_zero_on_index_boundary(rng):
    hist = _random_history(rng)
    v = np.array(hist.values)
    v[0] = v[-1] = 0
    v[:, 0] = v[:, -1] = 0
    assert boundary_terms(FieldHistory(v, hist.spec)) == 0
