"""Real-time lattice gauge action, sin-Maxwell equations and coupled 1+1D dynamics.

Gauge action on a ``(d+1)``-dimensional lattice (``d`` in {1, 3}):

    S_G = c_d sum_n [ sum_l (1 - cos(q eps^2 F_0l)) - sum_{k<l} (1 - cos(q eps^2 F_kl)) ] / q^2

with ``c_d = eps^(d-3)``, i.e. ``1/q^2`` in 3+1D and ``1/(q^2 eps^2)`` in 1+1D.
Its variation with respect to ``A_mu(n)`` together with the minimally coupled
matter action gives

    dS/dA_mu(n) = -q eps J^mu_n + eps^(d-1) sum_nu d^L_nu [ (1/q) sin(q eps^2 F^{nu mu}) ]_n,

whose ``mu = 0`` component is the Gauss constraint and whose spatial
components are the sin-Maxwell-Ampere equations.  All ``eps`` bookkeeping
for the two supported dimensions is done in :func:`action_prefactor` and
:func:`flux_prefactor`.

In 1+1D temporal gauge the electric field on the temporal link ``j -> j+1`` is
``E_j = F_01 = (A1_{j+1} - A1_j)/eps`` and the two field equations reduce to

    Gauss:   sin(q eps^2 E_{j,p}) - sin(q eps^2 E_{j,p-1}) = q^2 eps^2 J^0_{j,p}
    Ampere:  sin(q eps^2 E_j) = sin(q eps^2 E_{j-1}) - q^2 eps^2 J^1_j
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .actions import action_symmetric
from .dirac_walk import build_dirac_walk
from .errors import ConfigError, ConstraintError, SaturationError
from .gauge import GaugeField, gauged_walk_step
from .lattice import FieldHistory, LatticeSpec, norm
from .noether import closed_form_u1_current

__all__ = [
    "GaugeLattice",
    "CoupledTrajectory",
    "action_prefactor",
    "flux_prefactor",
    "field_strengths",
    "gauge_action",
    "sin_maxwell_term",
    "gauge_action_gradient_numeric",
    "total_action",
    "gauge_el_residual_numeric",
    "maxwell_closed_form",
    "electric_field",
    "gauss_residual",
    "gauss_solve",
    "ampere_update",
    "walk_flux_current",
    "coupled_evolve",
]


def action_prefactor(dim: int, epsilon: float) -> float:
    """Factor ``c_d`` multiplying ``(1 - cos)/q^2`` in the gauge action."""
    _check_dim(dim)
    return float(epsilon) ** (dim - 3)


def flux_prefactor(dim: int, epsilon: float) -> float:
    """Factor multiplying ``d^L [(1/q) sin(q eps^2 F)]`` in the field equations."""
    _check_dim(dim)
    return float(epsilon) ** (dim - 1)


def _check_dim(dim):
    if dim not in (1, 3):
        raise ValueError(f"unsupported spatial dimension {dim}; expected 1 or 3")


def _one_minus_cos(F, q, eps):
    """``(1 - cos(q eps^2 F)) / q^2``, with its ``q -> 0`` limit."""
    if q == 0:
        return 0.5 * (eps ** 2 * F) ** 2
    return 2.0 * np.sin(0.5 * q * eps ** 2 * F) ** 2 / q ** 2


def _sin_flux(F, q, eps):
    """``(1/q) sin(q eps^2 F)``, with its ``q -> 0`` limit."""
    if q == 0:
        return eps ** 2 * F
    return np.sin(q * eps ** 2 * F) / q


@dataclass(frozen=True)
class GaugeLattice:
    """Potentials ``A[mu]`` on a ``(d+1)``-dimensional grid.

    ``A`` has shape ``(d+1, N_0, N_1, ..., N_d)``; axis 1 is time (never
    wrapped), the remaining axes are space, periodic when ``periodic``.
    """

    A: np.ndarray
    epsilon: float
    charge: float
    periodic: bool = True

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim < 2 or A.ndim != A.shape[0] + 1:
            raise ValueError(f"A must have shape (d+1, N_0, ..., N_d), got {A.shape}")
        _check_dim(A.shape[0] - 1)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not np.all(np.isfinite(A)):
            raise ValueError("A contains non-finite values")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def dim(self) -> int:
        return self.A.shape[0] - 1

    @property
    def shape(self) -> tuple:
        return self.A.shape[1:]

    @classmethod
    def from_gauge_field(cls, gauge: GaugeField) -> "GaugeLattice":
        spec = gauge.spec
        return cls(np.stack([gauge.a0, gauge.a1]), spec.epsilon, spec.charge, spec.periodic)

    def replace_link(self, mu: int, site, value: float) -> "GaugeLattice":
        A = np.array(self.A)
        A[(mu,) + tuple(site)] = value
        return GaugeLattice(A, self.epsilon, self.charge, self.periodic)


def _forward_diff(a, axis, periodic):
    """``a(n + axis) - a(n)`` with NaN where the neighbour does not exist."""
    if axis == 0 or not periodic:
        out = np.full(a.shape, np.nan)
        lo = [slice(None)] * a.ndim
        hi = [slice(None)] * a.ndim
        lo[axis], hi[axis] = slice(0, -1), slice(1, None)
        out[tuple(lo)] = a[tuple(hi)] - a[tuple(lo)]
        return out
    return np.roll(a, -1, axis=axis) - a


def field_strengths(lat: GaugeLattice) -> np.ndarray:
    """Lower-index ``F[mu, nu]`` at every base site; NaN where a plaquette leaves the grid."""
    D = lat.dim + 1
    eps = lat.epsilon
    diffs = [[_forward_diff(lat.A[nu], mu, lat.periodic) / eps for nu in range(D)] for mu in range(D)]
    F = np.zeros((D, D) + lat.shape)
    for mu in range(D):
        for nu in range(D):
            if mu != nu:
                F[mu, nu] = diffs[mu][nu] - diffs[nu][mu]
    # plaquettes touching the last time slice are not part of the lattice
    F[(slice(None), slice(None), -1)] = np.nan
    return F


def gauge_action(lat: GaugeLattice) -> float:
    """Real-time gauge action ``S_G = S_time + S_space`` (``S_space`` is empty in 1+1D)."""
    F = field_strengths(lat)
    q, eps, D = lat.charge, lat.epsilon, lat.dim + 1
    s_time = sum(np.nansum(_one_minus_cos(F[0, l], q, eps)) for l in range(1, D))
    s_space = sum(
        np.nansum(_one_minus_cos(F[k, l], q, eps)) for k in range(1, D) for l in range(k + 1, D)
    )
    return float(action_prefactor(lat.dim, eps) * (s_time - s_space))


def _metric_sign(mu):
    return 1.0 if mu == 0 else -1.0


def _neighbour_back(site, axis, lat):
    site = list(site)
    site[axis] -= 1
    if site[axis] < 0:
        if axis == 0 or not lat.periodic:
            raise IndexError(f"site has no backward neighbour along axis {axis}")
        site[axis] += lat.shape[axis]
    return tuple(site)


def sin_maxwell_term(lat: GaugeLattice, site, mu: int) -> float:
    """``eps^(d-1) sum_nu d^L_nu [(1/q) sin(q eps^2 F^{nu mu})]`` at ``site``."""
    F = field_strengths(lat)
    q, eps = lat.charge, lat.epsilon
    site = tuple(site)
    total = 0.0
    for nu in range(lat.dim + 1):
        if nu == mu:
            continue
        sign = _metric_sign(nu) * _metric_sign(mu)
        here = F[(nu, mu) + site]
        back = F[(nu, mu) + _neighbour_back(site, nu, lat)]
        if np.isnan(here) or np.isnan(back):
            raise IndexError(f"site {site} is too close to the lattice edge")
        total += (_sin_flux(sign * here, q, eps) - _sin_flux(sign * back, q, eps)) / eps
    return float(flux_prefactor(lat.dim, eps) * total)


def _five_point(func, x0, h):
    return (-func(x0 + 2 * h) + 8 * func(x0 + h) - 8 * func(x0 - h) + func(x0 - 2 * h)) / (12 * h)


def gauge_action_gradient_numeric(lat: GaugeLattice, site, mu: int, h: float = 1e-3) -> float:
    """Five-point finite-difference ``dS_G / dA_mu(site)``."""
    site = tuple(site)
    x0 = lat.A[(mu,) + site]
    return float(_five_point(lambda x: gauge_action(lat.replace_link(mu, site, x)), x0, h))


def total_action(history: FieldHistory, gauge: GaugeField, background: float = 0.0) -> float:
    """Matter plus gauge action ``Re S_DQW[psi, A] + S_G[A]`` in 1+1D.

    ``background`` is a static uniform external charge density; it couples as
    ``-q eps background sum_n A_0(n)`` over the interior sites of the matter
    action, so that it enters the Gauss law like matter charge.
    """
    spec = gauge.spec
    value = action_symmetric(history, gauge).real + gauge_action(GaugeLattice.from_gauge_field(gauge))
    if background:
        J = len(history)
        value -= spec.charge * spec.epsilon * background * float(np.sum(gauge.a0[1 : J - 1, 1:-1]))
    return value


def _with_link(gauge: GaugeField, mu, site, value):
    a = [np.array(gauge.a0), np.array(gauge.a1)]
    a[mu][site] = value
    return GaugeField(a[0], a[1], gauge.spec)


def gauge_el_residual_numeric(history: FieldHistory, gauge: GaugeField, site, mu: int,
                              h: float = 1e-3, background: float = 0.0) -> float:
    """``dS/dA_mu(site)`` of the total 1+1D action by a five-point stencil.

    Vanishes on configurations solving the coupled field equations; equals
    :func:`maxwell_closed_form` in general.
    """
    site = tuple(site)
    J, P = history.values.shape[:2]
    j, p = site
    if not (1 <= j <= J - 2 and 1 <= p <= P - 2):
        raise IndexError(f"site {site} is not interior")
    x0 = gauge.potential(mu)[site]
    return float(_five_point(
        lambda x: total_action(history, _with_link(gauge, mu, site, x), background), x0, h))


def maxwell_closed_form(history: FieldHistory, gauge: GaugeField, site, mu: int,
                        background: float = 0.0) -> float:
    """``-q eps J^mu_n + d^L_nu[(1/q) sin(q eps^2 F^{nu mu})]_n`` in 1+1D."""
    spec = gauge.spec
    current = closed_form_u1_current(history, gauge)
    jmu = (current.j0, current.j1)[mu][tuple(site)]
    if mu == 0:
        jmu += background
    lat = GaugeLattice.from_gauge_field(gauge)
    return float(-spec.charge * spec.epsilon * jmu + sin_maxwell_term(lat, site, mu))


def electric_field(gauge: GaugeField) -> np.ndarray:
    """``E = F_01`` on temporal links, shape ``(J-1, P)``."""
    lat = GaugeLattice.from_gauge_field(gauge)
    return field_strengths(lat)[0, 1, :-1]


def _gauss_residual_slice(E, j0, q, eps, periodic, background=0.0):
    flux = _sin_flux(np.asarray(E, dtype=float), q, eps)
    div = (flux - np.roll(flux, 1)) / eps
    res = div - q * eps * (np.asarray(j0) + background)
    return res if periodic else res[1:]


def gauss_residual(history: FieldHistory, gauge: GaugeField, E, j: int, background: float = 0.0):
    """``d^L_1[(1/q) sin(q eps^2 E)] - q eps (J^0 + background)`` on slice ``j``.

    ``E`` is the field on the temporal links leaving slice ``j``; pass
    ``None`` to take it from the gauge potentials.
    """
    spec = gauge.spec
    if E is None:
        E = electric_field(gauge)[j]
    j0 = closed_form_u1_current(history, gauge).j0[j]
    return _gauss_residual_slice(E, j0, spec.charge, spec.epsilon, spec.periodic, background)


def gauss_solve(charge, background_field: float, q: float, epsilon: float, periodic: bool = True,
                tol: float = 1e-12) -> np.ndarray:
    """Electric field satisfying the Gauss constraint for the density ``charge``.

    ``background_field`` is the field on the link just left of site 0.  Then
    ``s_p = sin(q eps^2 E0) + q^2 eps^2 sum_{p' <= p} J^0_{p'}`` and
    ``E_p = arcsin(s_p) / (q eps^2)``.
    """
    charge = np.asarray(charge, dtype=float)
    if periodic:
        net = float(np.sum(charge))
        scale = float(np.sum(np.abs(charge))) + 1.0
        if abs(net) > tol * scale:
            raise ConstraintError(f"net charge {net:.3e} on a periodic ring has no Gauss solution")
    if q == 0:
        return np.full(charge.shape, float(background_field))
    qe2 = q * epsilon ** 2
    s = np.sin(qe2 * background_field) + q * q * epsilon ** 2 * np.cumsum(charge)
    bad = np.flatnonzero(np.abs(s) > 1)
    if bad.size:
        raise SaturationError("electric field saturation in Gauss solve", site=int(bad[0]))
    return np.arcsin(s) / qe2


def ampere_update(E_prev, j1, q: float, epsilon: float, step=None) -> np.ndarray:
    """Advance the field one temporal link: ``sin(q eps^2 E_j) = sin(q eps^2 E_{j-1}) - q^2 eps^2 J^1_j``."""
    E_prev = np.asarray(E_prev, dtype=float)
    if q == 0:
        return E_prev.copy()
    qe2 = q * epsilon ** 2
    s = np.sin(qe2 * E_prev) - q * q * epsilon ** 2 * np.asarray(j1, dtype=float)
    bad = np.flatnonzero(np.abs(s) > 1)
    if bad.size:
        raise SaturationError("electric field saturation in Ampere update", site=int(bad[0]), step=step)
    return np.arcsin(s) / qe2


def walk_flux_current(psi_now, psi_next, spec: LatticeSpec):
    """Charge density and flux that the walk transports exactly.

    The walk mixes the pair ``(upper_p, lower_{p+1})`` into
    ``(upper'_{p+1}, lower'_p)``, so ``eps (|upper'_{p+1}|^2 - |lower_{p+1}|^2)``
    is what crosses the bond ``p -> p+1``.  Returns ``(rho, flux)`` with
    ``rho = eps |psi_next|^2``.
    """
    eps = spec.epsilon
    rho = eps * np.sum(np.abs(psi_next) ** 2, axis=-1)
    up_next = np.roll(np.abs(psi_next[:, 0]) ** 2, -1)
    down_now = np.roll(np.abs(psi_now[:, 1]) ** 2, -1)
    return rho, eps * (up_next - down_now)


@dataclass
class CoupledTrajectory:
    """Record of a coupled matter plus gauge-field run in temporal gauge."""

    history: FieldHistory
    gauge: GaugeField
    efield: np.ndarray
    j0: np.ndarray
    j1: np.ndarray
    background: float
    norms: np.ndarray
    charges: np.ndarray
    gauss_residuals: np.ndarray
    current: str = "noether"
    notes: dict = field(default_factory=dict)

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - self.norms[0])))


def coupled_evolve(spec: LatticeSpec, psi0, steps: int, e0=None, a1_initial=None,
                   neutralize: bool = True, current: str = "noether") -> CoupledTrajectory:
    """Evolve the walk and the electric field together in temporal gauge.

    Per step ``j``: advance the matter with the gauged walk at ``A1_j``, form
    the currents, update ``E_j`` from Ampere's law (``E_0`` comes from the
    Gauss constraint unless ``e0`` is given), and set
    ``A1_{j+1} = A1_j + eps E_j``.

    ``neutralize`` adds a static uniform background density cancelling the
    net matter charge, without which the Gauss constraint has no solution on
    a ring.  ``current="noether"`` uses the gauged U(1) current;
    ``current="walk"`` uses :func:`walk_flux_current`.
    """
    if current not in ("noether", "walk"):
        raise ConfigError("must be 'noether' or 'walk'", key="gauge.current")
    if not spec.periodic:
        raise ConfigError("coupled evolution needs a periodic lattice", key="lattice.boundary")
    P, eps, q = spec.sites, spec.epsilon, spec.charge
    walk = build_dirac_walk(spec)
    psi = np.zeros((steps + 1, P, 2), dtype=complex)
    psi[0] = spec.check_slice(psi0)
    a1 = np.zeros((steps + 1, P))
    if a1_initial is not None:
        a1[0] = a1_initial
    zeros = np.zeros((steps + 1, P))
    E = np.zeros((steps, P))
    J0 = np.zeros((steps, P))
    J1 = np.zeros((steps, P))
    gauss = np.zeros(steps)
    background = 0.0

    for j in range(steps):
        # gauge slices j are final here; later slices are still being built
        slice_gauge = GaugeField(zeros[j : j + 2], a1[j : j + 2], spec)
        psi[j + 1] = gauged_walk_step(walk, slice_gauge, psi[j], 0)
        if current == "noether":
            local = closed_form_u1_current(FieldHistory(psi[j : j + 2], spec), slice_gauge)
            J0[j], J1[j] = local.j0[0], local.j1[0]
        else:
            J0[j], J1[j] = walk_flux_current(psi[j], psi[j + 1], spec)
        if j == 0:
            if neutralize:
                background = -float(np.mean(J0[0]))
            if e0 is None:
                E[0] = gauss_solve(J0[0] + background, 0.0, q, eps, periodic=True,
                                   tol=1e-9)
            else:
                E[0] = np.broadcast_to(np.asarray(e0, dtype=float), (P,))
        else:
            E[j] = ampere_update(E[j - 1], J1[j], q, eps, step=j)
        a1[j + 1] = a1[j] + eps * E[j]
        gauss[j] = np.max(np.abs(_gauss_residual_slice(E[j], J0[j], q, eps, True, background)))

    history = FieldHistory(psi, spec)
    gauge = GaugeField(zeros, a1, spec)
    norms = np.array([norm(s, spec) for s in psi])
    return CoupledTrajectory(
        history=history,
        gauge=gauge,
        efield=E,
        j0=J0,
        j1=J1,
        background=background,
        norms=norms,
        charges=J0.sum(axis=1),
        gauss_residuals=gauss,
        current=current,
    )
