"""Lattice actions of the Dirac walk and numeric Euler-Lagrange residuals.

With the modified adjoint ``psibar = psi^dag (tilde_gamma0)^{-1}`` and the
identities ``(tilde_gamma0)^{-1} = mu alpha0``, ``(tilde_gamma0)^{-1} tilde_gamma^0 = 1``
and ``(tilde_gamma0)^{-1} tilde_gamma^1 = mu alpha1`` the two actions become

    S_asym = eps^2 sum_n psi_n^dag [i d0 psi + i mu alpha1 d1 psi - m mu alpha0 psi]_n
    S_sym  = eps (i/2) sum_n sum_mu psi_n^dag K_mu U_mu(n) psi_{n+mu} + h.c.
             - eps^2 m sum_n psi_n^dag mu alpha0 psi_n

with ``K_0 = 1`` and ``K_1 = mu alpha1``.  Both sums run over interior sites
``1 <= j <= J-2``, ``1 <= p <= P-2`` without wrapping, so their difference is a
pure boundary sum (:func:`boundary_terms`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dirac_walk import ALPHA0, ALPHA1, ID2, mu_eps
from .gauge import GaugeField
from .lattice import FieldHistory

__all__ = [
    "ActionValue",
    "LagrangianDensity",
    "kinetic_matrices",
    "action_asymmetric",
    "action_symmetric",
    "boundary_terms",
    "dqw_density",
    "site_arguments",
    "euler_lagrange_residual",
]


@dataclass(frozen=True)
class ActionValue:
    """Complex action value; ``is_real_expected`` marks symmetric actions."""

    value: complex
    is_real_expected: bool

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    @property
    def imag(self) -> float:
        return float(np.imag(self.value))

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class LagrangianDensity:
    """Density ``L(psi_n, psi_up, psi_dag_n, psi_dag_up, site)``.

    ``psi_n`` and ``psi_dag_n`` are length-2 vectors; ``psi_up[mu]`` and
    ``psi_dag_up[mu]`` are the values at ``n + mu`` for ``mu = 0, 1``.  The
    ``psi_dag`` arguments are treated as independent of ``psi``.
    """

    func: Callable
    needs_gauge: bool = False

    def __call__(self, psi, psi_up, psi_dag, psi_dag_up, site):
        return self.func(psi, psi_up, psi_dag, psi_dag_up, site)


def kinetic_matrices(mu: float):
    """``((tilde_gamma0)^{-1} tilde_gamma^mu)`` for mu = 0, 1 and the mass matrix ``mu alpha0``."""
    return ID2, mu * ALPHA1, mu * ALPHA0


def _check_history(history: FieldHistory):
    J, P = history.values.shape[:2]
    if J < 3 or P < 3:
        raise ValueError(f"actions need at least 3 slices and 3 sites, got {J}x{P}")


def _form(a, mat, b):
    """``sum over sites of a_n^T mat b_n`` where ``a`` already holds the conjugated row."""
    return np.sum((np.asarray(b) @ mat.T) * a)


def action_asymmetric(history: FieldHistory, conjugate=None) -> ActionValue:
    """Asymmetric action over interior sites.

    ``conjugate`` optionally supplies the array used in place of
    ``conj(psi)`` so that the action can be differentiated with respect to
    ``psi^dag`` independently.
    """
    _check_history(history)
    spec = history.spec
    eps, m = spec.epsilon, spec.mass
    K0, K1, Mm = kinetic_matrices(mu_eps(spec.eps_m))
    v = history.values
    c = np.conj(v) if conjugate is None else np.asarray(conjugate)
    inner = (slice(1, -1), slice(1, -1))
    d0 = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * eps)
    d1 = (v[1:-1, 2:] - v[1:-1, :-2]) / (2 * eps)
    row = c[inner]
    value = eps ** 2 * (
        1j * _form(row, K0, d0) + 1j * _form(row, K1, d1) - m * _form(row, Mm, v[inner])
    )
    return ActionValue(complex(value), False)


def _links(gauge, history, mu):
    J, P = history.values.shape[:2]
    if gauge is None:
        return np.ones((J, P))
    if not isinstance(gauge, GaugeField):
        raise TypeError("gauge must be a GaugeField")
    gauge.check_history(history)
    return gauge.links(mu)[:J]


def action_symmetric(history: FieldHistory, gauge: GaugeField | None = None) -> ActionValue:
    """Symmetric (real) action over interior sites, optionally minimally coupled."""
    _check_history(history)
    spec = history.spec
    eps, m = spec.epsilon, spec.mass
    K0, K1, Mm = kinetic_matrices(mu_eps(spec.eps_m))
    v = history.values
    inner = (slice(1, -1), slice(1, -1))
    row = np.conj(v[inner])
    u0 = _links(gauge, history, 0)[inner][..., None]
    u1 = _links(gauge, history, 1)[inner][..., None]
    z = _form(row, K0, u0 * v[2:, 1:-1]) + _form(row, K1, u1 * v[1:-1, 2:])
    value = eps * 0.5j * (z - np.conj(z)) - eps ** 2 * m * _form(row, Mm, v[inner])
    return ActionValue(complex(value), True)


def boundary_terms(history: FieldHistory) -> complex:
    """``S_asym - S_sym`` expressed as boundary sums.

    Returns ``eps (-i/2) (B0 + B1)`` with
    ``B0 = sum_p [psi^dag_{1,p} psi_{0,p} - psi^dag_{J-1,p} psi_{J-2,p}]`` and
    ``B1 = sum_j [psi^dag_{j,1} K1 psi_{j,0} - psi^dag_{j,P-1} K1 psi_{j,P-2}]``,
    the sums running over interior indices of the other direction.
    """
    _check_history(history)
    spec = history.spec
    K0, K1, _ = kinetic_matrices(mu_eps(spec.eps_m))
    v = history.values
    c = np.conj(v)
    b0 = _form(c[1, 1:-1], K0, v[0, 1:-1]) - _form(c[-1, 1:-1], K0, v[-2, 1:-1])
    b1 = _form(c[1:-1, 1], K1, v[1:-1, 0]) - _form(c[1:-1, -1], K1, v[1:-1, -2])
    return complex(spec.epsilon * (-0.5j) * (b0 + b1))


def dqw_density(spec, gauge: GaugeField | None = None) -> LagrangianDensity:
    """Site density whose interior sum is :func:`action_symmetric`."""
    eps, m = spec.epsilon, spec.mass
    K = kinetic_matrices(mu_eps(spec.eps_m))
    Mm = K[2]
    if gauge is not None:
        U = (gauge.links(0), gauge.links(1))

    def density(psi, psi_up, psi_dag, psi_dag_up, site):
        total = 0j
        for mu in (0, 1):
            u = 1.0 if gauge is None else U[mu][site]
            fwd = psi_dag @ K[mu] @ psi_up[mu] * u
            bwd = psi_dag_up[mu] @ K[mu] @ psi * np.conj(u)
            total += eps * 0.5j * (fwd - bwd)
        return total - eps ** 2 * m * (psi_dag @ Mm @ psi)

    return LagrangianDensity(density, needs_gauge=gauge is not None)


def _neighbour(values, spec, j, p, mu):
    """Value at ``(j, p) + mu``; spatial wrap or zero per the boundary policy."""
    J, P = values.shape[:2]
    if mu == 0:
        if j + 1 >= J:
            raise IndexError(f"site ({j}, {p}) has no forward temporal neighbour")
        return values[j + 1, p]
    if p + 1 < P:
        return values[j, p + 1]
    if spec.periodic:
        return values[j, 0]
    return np.zeros_like(values[j, p])


def site_arguments(history: FieldHistory, site, conjugate=None):
    """Arguments ``(psi, psi_up, psi_dag, psi_dag_up, site)`` for a density at ``site``."""
    v = history.values
    c = np.conj(v) if conjugate is None else conjugate
    j, p = site
    spec = history.spec
    psi_up = np.array([_neighbour(v, spec, j, p, mu) for mu in (0, 1)])
    dag_up = np.array([_neighbour(c, spec, j, p, mu) for mu in (0, 1)])
    return v[j, p].copy(), psi_up, c[j, p].copy(), dag_up, (j, p)


def _step(x):
    h = 1e-5 * (1.0 + abs(x))
    if not np.isfinite(h) or x + h == x or h == 0:
        raise ArithmeticError(f"finite-difference step underflow at value {x!r}")
    return h


def _wirtinger(func, args, slot, index):
    """``d func / d z`` for the complex entry ``args[slot][index]`` by central differences.

    Uses ``(d/dx - i d/dy)/2``, exact up to rounding for densities that are
    polynomial of degree <= 2 in the entry.
    """
    base = args[slot][index]
    h = _step(base)
    out = 0j
    for direction, weight in ((1.0, 1.0), (1j, -1j)):
        vals = []
        for sgn in (1, -1):
            trial = [np.array(a, dtype=complex) if isinstance(a, np.ndarray) else a for a in args]
            trial[slot][index] = base + sgn * h * direction
            vals.append(func(*trial))
        out += weight * (vals[0] - vals[1]) / (2 * h)
    return out / 2


def _partial(density, args, slot, mu=None):
    """Gradient (length-2) with respect to argument ``slot`` (component ``mu`` for shifted slots)."""
    idx = (lambda a: (mu, a)) if mu is not None else (lambda a: a)
    return np.array([_wirtinger(density, args, slot, idx(a)) for a in range(2)])


def euler_lagrange_residual(density: LagrangianDensity, history: FieldHistory, site):
    """Both Euler-Lagrange branches at an interior ``site = (j, p)``.

    Returns ``(dag_branch, psi_branch)``: the gradients of
    ``L_n + sum_mu L_{n-mu}`` with respect to ``psi^dag_n`` and ``psi_n``
    respectively, each a length-2 complex vector.
    """
    j, p = site
    J, P = history.values.shape[:2]
    spec = history.spec
    if not 1 <= j <= J - 2:
        raise IndexError(f"site {site} is not interior in time")
    if not spec.periodic and not 1 <= p <= P - 2:
        raise IndexError(f"site {site} is not interior in space")
    here = site_arguments(history, (j, p))
    back = [site_arguments(history, (j - 1, p)), site_arguments(history, (j, (p - 1) % P))]
    dag = _partial(density, here, 2) + sum(_partial(density, back[mu], 3, mu) for mu in (0, 1))
    psi = _partial(density, here, 0) + sum(_partial(density, back[mu], 1, mu) for mu in (0, 1))
    return dag, psi
