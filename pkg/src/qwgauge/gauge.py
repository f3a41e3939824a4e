"""U(1) gauge field, link variables and the gauged walk.

The potential is stored site-anchored: ``a0[j, p]`` belongs to the temporal
link ``(j, p) -> (j+1, p)`` and ``a1[j, p]`` to the spatial link
``(j, p) -> (j, p+1)``.  Link variables are ``U_mu(n) = exp(i q eps A_mu(n))``.

Minimal coupling replaces ``T`` by ``T exp(-i q eps A)`` and ``T^{-1}`` by
``exp(i q eps A) T^{-1}``.  The gauged walk step is

    psi_{j+1} = exp(-i q eps A0_j) [W- U1_p psi_{p+1} + W+ conj(U1_{p-1}) psi_{p-1} + W0 psi_p],

which is unitary for every gauge configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dirac_walk import ALPHA0, ALPHA1, WalkOperator, _apply, mu_eps
from .lattice import FieldHistory, LatticeSpec, translate

__all__ = [
    "GaugeField",
    "GaugeTransformation",
    "GaugingOrderReport",
    "link",
    "apply_gauge_transformation",
    "gauged_translate",
    "gauged_walk_step",
    "gauged_walk_adjoint",
    "gauged_adjoint_walk",
    "gauged_evolve",
    "gauged_hamiltonian_apply",
    "gauged_two_step_residual",
    "gauging_order_comparison",
    "plaquette",
    "field_strength",
    "field_strength_01",
    "plaquettes_01",
]


def _as_real_grid(a, shape, name):
    a = np.array(a, dtype=float)
    if a.shape != shape:
        raise ValueError(f"{name} has shape {a.shape}, expected {shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GaugeField:
    """Real potentials ``a0``, ``a1`` of shape ``(J, P)`` on one lattice."""

    a0: np.ndarray
    a1: np.ndarray
    spec: LatticeSpec = field(compare=False)

    def __post_init__(self):
        a0 = np.asarray(self.a0)
        if a0.ndim != 2 or a0.shape[1] != self.spec.sites:
            raise ValueError(f"a0 must have shape (J, {self.spec.sites}), got {a0.shape}")
        object.__setattr__(self, "a0", _as_real_grid(a0, a0.shape, "a0"))
        object.__setattr__(self, "a1", _as_real_grid(self.a1, a0.shape, "a1"))

    @classmethod
    def zeros(cls, spec: LatticeSpec, steps: int | None = None) -> "GaugeField":
        J = spec.steps if steps is None else steps
        return cls(np.zeros((J, spec.sites)), np.zeros((J, spec.sites)), spec)

    @property
    def n_slices(self) -> int:
        return self.a0.shape[0]

    def potential(self, mu: int) -> np.ndarray:
        if mu == 0:
            return self.a0
        if mu == 1:
            return self.a1
        raise ValueError("direction must be 0 or 1")

    def links(self, mu: int) -> np.ndarray:
        """All link variables ``U_mu`` as a ``(J, P)`` complex array."""
        return np.exp(1j * self.spec.charge * self.spec.epsilon * self.potential(mu))

    def check_slice(self, j: int) -> None:
        if not 0 <= j < self.n_slices:
            raise IndexError(f"gauge slice {j} outside stored range [0, {self.n_slices - 1}]")

    def check_history(self, history: FieldHistory) -> None:
        if history.spec.sites != self.spec.sites or len(history) > self.n_slices:
            raise ValueError(
                f"gauge extent {self.a0.shape} does not cover history of shape "
                f"{history.values.shape[:2]}"
            )


@dataclass(frozen=True)
class GaugeTransformation:
    """Gauge function ``phi`` on the ``(J, P)`` grid; acts as ``G_n = exp(i q phi_n)``."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi)
        object.__setattr__(self, "phi", _as_real_grid(phi, phi.shape, "phi"))


def link(gauge: GaugeField, n, mu: int) -> complex:
    """``U_mu(n) = exp(i q eps A_mu(n))`` for the link leaving ``n = (j, p)``."""
    j, p = n
    return complex(np.exp(1j * gauge.spec.charge * gauge.spec.epsilon * gauge.potential(mu)[j, p]))


def _right_diff_space(phi, spec):
    """``(phi_{p+1} - phi_p)/eps``; the outgoing edge link is left alone under fixed-zero."""
    d = (np.roll(phi, -1, axis=1) - phi) / spec.epsilon
    if not spec.periodic:
        d[:, -1] = 0.0
    return d


def _right_diff_time(phi, spec):
    """``(phi_{j+1} - phi_j)/eps``; the last slice has no outgoing temporal link."""
    d = np.zeros_like(phi)
    d[:-1] = (phi[1:] - phi[:-1]) / spec.epsilon
    return d


def apply_gauge_transformation(history: FieldHistory, gauge: GaugeField,
                               transform: GaugeTransformation):
    """Return ``(psi', A')`` with ``psi' = e^{i q phi} psi`` and ``A' = A - d^R phi``."""
    spec = gauge.spec
    phi = transform.phi
    if phi.shape != gauge.a0.shape:
        raise ValueError(f"phi has shape {phi.shape}, gauge has {gauge.a0.shape}")
    J = len(history)
    g = np.exp(1j * spec.charge * phi)
    psi = history.values * g[:J, :, None]
    new_gauge = GaugeField(gauge.a0 - _right_diff_time(phi, spec),
                           gauge.a1 - _right_diff_space(phi, spec), spec)
    return FieldHistory(psi, history.spec), new_gauge


def _phase(gauge, mu, j, sign):
    return np.exp(sign * 1j * gauge.spec.charge * gauge.spec.epsilon * gauge.potential(mu)[j])


def gauged_translate(field, gauge: GaugeField, mu: int, sign: int, j: int) -> np.ndarray:
    """Minimally coupled shift.

    ``sign=+1`` is ``T_mu exp(-i q eps A_mu)``, ``sign=-1`` its adjoint
    ``exp(i q eps A_mu) T_mu^{-1}``.  For ``mu=1`` ``field`` is a time slice
    and ``j`` selects the gauge slice; for ``mu=0`` ``field`` is a history and
    the result is the shifted value at slice ``j``.
    """
    spec = gauge.spec
    if mu == 1:
        gauge.check_slice(j)
        psi = np.asarray(field, dtype=complex)
        if sign == 1:
            return translate(_phase(gauge, 1, j, -1)[:, None] * psi, 1, spec)
        if sign == -1:
            return _phase(gauge, 1, j, +1)[:, None] * translate(psi, -1, spec)
        raise ValueError("sign must be +1 or -1")
    if mu == 0:
        values = field.values if isinstance(field, FieldHistory) else np.asarray(field)
        if sign == 1:
            if j - 1 < 0:
                raise IndexError(f"slice {j - 1} does not exist")
            gauge.check_slice(j - 1)
            return _phase(gauge, 0, j - 1, -1)[:, None] * values[j - 1]
        if sign == -1:
            if j + 1 >= values.shape[0]:
                raise IndexError(f"slice {j + 1} does not exist")
            gauge.check_slice(j)
            return _phase(gauge, 0, j, +1)[:, None] * values[j + 1]
        raise ValueError("sign must be +1 or -1")
    raise ValueError("direction must be 0 or 1")


def _gauged_w(walk: WalkOperator, gauge: GaugeField, psi, j):
    """``(W_g)_j psi`` without the temporal phase."""
    return (
        _apply(walk.w_minus, gauged_translate(psi, gauge, 1, -1, j))
        + _apply(walk.w_plus, gauged_translate(psi, gauge, 1, +1, j))
        + _apply(walk.w_zero, np.asarray(psi, dtype=complex))
    )


def gauged_walk_step(walk: WalkOperator, gauge: GaugeField, psi, j: int) -> np.ndarray:
    """``psi_{j+1} = exp(-i q eps A0_j) (W_g)_j psi_j``."""
    gauge.check_slice(j)
    return _phase(gauge, 0, j, -1)[:, None] * _gauged_w(walk, gauge, psi, j)


def gauged_walk_adjoint(walk: WalkOperator, gauge: GaugeField, psi, j: int) -> np.ndarray:
    """``((W_g)_j)^dagger psi`` (no temporal phase), built as the adjoint of each term."""
    h = lambda a: a.conj().T  # noqa: E731
    psi = np.asarray(psi, dtype=complex)
    return (
        gauged_translate(_apply(h(walk.w_minus), psi), gauge, 1, +1, j)
        + gauged_translate(_apply(h(walk.w_plus), psi), gauge, 1, -1, j)
        + _apply(h(walk.w_zero), psi)
    )


def gauged_adjoint_walk(walk: WalkOperator, gauge: GaugeField, psi, j: int) -> np.ndarray:
    """Gauging of ``W^dagger = W-^dag T + W+^dag T^{-1} + W0^dag`` at slice ``j``."""
    h = lambda a: a.conj().T  # noqa: E731
    psi = np.asarray(psi, dtype=complex)
    return (
        _apply(h(walk.w_minus), gauged_translate(psi, gauge, 1, +1, j))
        + _apply(h(walk.w_plus), gauged_translate(psi, gauge, 1, -1, j))
        + _apply(h(walk.w_zero), psi)
    )


def gauged_evolve(walk: WalkOperator, gauge: GaugeField, psi0, steps: int) -> FieldHistory:
    """History ``psi_0 .. psi_steps`` from repeated gauged walk steps."""
    spec = gauge.spec
    out = np.empty((steps + 1, spec.sites, 2), dtype=complex)
    out[0] = spec.check_slice(psi0)
    for j in range(steps):
        out[j + 1] = gauged_walk_step(walk, gauge, out[j], j)
    return FieldHistory(out, spec)


def gauged_hamiltonian_apply(psi, gauge: GaugeField, j: int) -> np.ndarray:
    """Covariant ``H psi`` at slice ``j``: ``mu alpha1 (-i D1) psi + m mu alpha0 psi``.

    ``D1 psi = (U1_p psi_{p+1} - conj(U1_{p-1}) psi_{p-1}) / (2 eps)``.
    """
    spec = gauge.spec
    mu = mu_eps(spec.eps_m)
    psi = np.asarray(psi, dtype=complex)
    d1 = (gauged_translate(psi, gauge, 1, -1, j) - gauged_translate(psi, gauge, 1, +1, j)) / (
        2 * spec.epsilon
    )
    return mu * (_apply(ALPHA1, -1j * d1) + spec.mass * _apply(ALPHA0, psi))


def gauged_two_step_residual(history: FieldHistory, gauge: GaugeField, j: int) -> np.ndarray:
    """Covariant two-step residual at slice ``j``.

    ``(i/2eps)(U0_j psi_{j+1} - conj(U0_{j-1}) psi_{j-1}) - H_A psi_j``; it reduces
    to the ungauged unitary residual for ``A = 0`` and picks up the local
    factor ``exp(i q phi)`` under gauge transformations.
    """
    if not 1 <= j <= len(history) - 2:
        raise IndexError(f"two-step residual needs an interior slice, got j={j} of {len(history)}")
    gauge.check_history(history)
    eps = gauge.spec.epsilon
    d0 = (gauged_translate(history, gauge, 0, -1, j) - gauged_translate(history, gauge, 0, +1, j)) / (
        2 * eps
    )
    return 1j * d0 - gauged_hamiltonian_apply(history.slice(j), gauge, j)


@dataclass(frozen=True)
class GaugingOrderReport:
    """Outcome of comparing the two ways of gauging the two-step equation.

    ``direct_residual`` is the max residual of the directly gauged two-step
    equation on a history produced by the gauged walk;
    ``onestep_induced_residual`` is the max residual of the two-step equation
    induced by the gauged one-step rule (zero up to rounding on that history);
    ``operator_defect`` is the max of ``|(W_g)_j^dag psi_j - conj(U0_{j-1}) (W_g)_{j-1}^dag U0_{j-1} psi_j| / (2 eps)``,
    the operator mismatch that separates the two equations.
    """

    direct_residual: float
    onestep_induced_residual: float
    operator_defect: float
    tolerance: float

    @property
    def defect(self) -> float:
        return abs(self.direct_residual - self.onestep_induced_residual)

    @property
    def commute(self) -> bool:
        return self.defect <= self.tolerance


def gauging_order_comparison(walk: WalkOperator, gauge: GaugeField, psi, j: int = 1,
                             tol: float = 1e-12) -> GaugingOrderReport:
    """Generate ``psi_{j-1}, psi_j, psi_{j+1}`` with the gauged walk and compare residuals.

    ``psi`` is the slice at ``j-1``; the gauge field must provide slices
    ``j-1`` and ``j``.
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    spec = gauge.spec
    eps = spec.epsilon
    psi_prev = np.asarray(psi, dtype=complex)
    psi_j = gauged_walk_step(walk, gauge, psi_prev, j - 1)
    psi_next = gauged_walk_step(walk, gauge, psi_j, j)
    values = np.zeros((j + 2, spec.sites, 2), dtype=complex)
    values[j - 1], values[j], values[j + 1] = psi_prev, psi_j, psi_next
    history = FieldHistory(values, spec)

    direct = gauged_two_step_residual(history, gauge, j)

    u0_j = _phase(gauge, 0, j, +1)[:, None]
    u0_prev = _phase(gauge, 0, j - 1, +1)[:, None]
    forward = u0_j * psi_next - _gauged_w(walk, gauge, psi_j, j)
    backward = psi_prev - gauged_walk_adjoint(walk, gauge, u0_prev * psi_j, j - 1)
    induced = (1j / (2 * eps)) * (forward - backward)

    mismatch = gauged_walk_adjoint(walk, gauge, psi_j, j) - np.conj(u0_prev) * gauged_walk_adjoint(
        walk, gauge, u0_prev * psi_j, j - 1
    )
    return GaugingOrderReport(
        direct_residual=float(np.max(np.abs(direct))),
        onestep_induced_residual=float(np.max(np.abs(induced))),
        operator_defect=float(np.max(np.abs(mismatch)) / (2 * eps)),
        tolerance=tol,
    )


def plaquette(gauge: GaugeField, n, mu: int, nu: int) -> complex:
    """``U_mu(n) U_nu(n+mu) conj(U_mu(n+nu)) conj(U_nu(n))``."""
    if mu == nu:
        return 1.0 + 0j
    spec = gauge.spec

    def shift(site, d):
        j, p = site
        if d == 0:
            if j + 1 >= gauge.n_slices:
                raise IndexError("plaquette leaves the stored time range")
            return (j + 1, p)
        if p + 1 >= spec.sites:
            if not spec.periodic:
                raise IndexError("plaquette leaves the fixed-zero segment")
            return (j, 0)
        return (j, p + 1)

    return (
        link(gauge, n, mu)
        * link(gauge, shift(n, mu), nu)
        * np.conj(link(gauge, shift(n, nu), mu))
        * np.conj(link(gauge, n, nu))
    )


def field_strength_01(gauge: GaugeField) -> np.ndarray:
    """``F_01 = d^R_0 A_1 - d^R_1 A_0`` at every plaquette base site.

    Shape ``(J-1, P)`` on a ring and ``(J-1, P-1)`` on a fixed-zero segment.
    """
    eps = gauge.spec.epsilon
    a0, a1 = gauge.a0[:-1], gauge.a1
    d0a1 = (a1[1:] - a1[:-1]) / eps
    d1a0 = (np.roll(a0, -1, axis=1) - a0) / eps
    F = d0a1 - d1a0
    return F if gauge.spec.periodic else F[:, :-1]


def plaquettes_01(gauge: GaugeField) -> np.ndarray:
    """All ``U_01`` plaquettes, same layout as :func:`field_strength_01`."""
    u0, u1 = gauge.links(0)[:-1], gauge.links(1)
    P = u0 * u1[1:] * np.conj(np.roll(u0, -1, axis=1)) * np.conj(u1[:-1])
    return P if gauge.spec.periodic else P[:, :-1]


def field_strength(gauge: GaugeField, n, mu: int, nu: int) -> float:
    """``F_{mu nu}(n) = d^R_mu A_nu - d^R_nu A_mu`` at a single site."""
    if mu == nu:
        return 0.0
    if mu == 1 and nu == 0:
        return -field_strength(gauge, n, 0, 1)
    j, p = n
    spec = gauge.spec
    if j + 1 >= gauge.n_slices:
        raise IndexError("field strength leaves the stored time range")
    if p + 1 >= spec.sites and not spec.periodic:
        raise IndexError("field strength leaves the fixed-zero segment")
    q = (p + 1) % spec.sites
    eps = spec.epsilon
    return float((gauge.a1[j + 1, p] - gauge.a1[j, p]) / eps - (gauge.a0[j, q] - gauge.a0[j, p]) / eps)
