"""Lattice Noether currents for one-parameter internal symmetries.

For a density ``L(psi_n, psi_{n+mu}, psi^dag_n, psi^dag_{n+mu})`` invariant
under ``psi -> f(psi, alpha)``, the current

    K^mu_n = (dL/dpsi_{n+mu})|_n C_{n+mu} + C^dag_{n+mu} (dL/dpsi^dag_{n+mu})|_n,
    C = df/dalpha at alpha = 0,

satisfies ``d^L_mu K^mu = 0`` on solutions of the equations of motion.  For
the phase rotation ``f = exp(i alpha) psi`` of the walk density this is
``K = -J`` with the U(1) charge current

    J^0_n = eps Re(psi_n^dag U_0(n) psi_{n+0}),
    J^1_n = eps mu Re(psi_n^dag alpha1 U_1(n) psi_{n+1}),

computed directly by :func:`closed_form_u1_current`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .actions import LagrangianDensity, _partial, site_arguments
from .dirac_walk import ALPHA1, mu_eps
from .gauge import GaugeField
from .lattice import FieldHistory, LatticeSpec

__all__ = [
    "InternalTransformation",
    "CurrentField",
    "u1_phase",
    "identity_transformation",
    "noether_current_numeric",
    "closed_form_u1_current",
    "lattice_divergence",
    "total_charge",
]


@dataclass(frozen=True)
class InternalTransformation:
    """One-parameter family ``f(psi, alpha)`` with ``f(psi, 0) = psi``.

    ``generator`` optionally gives ``C = df/dalpha|_0`` analytically; otherwise
    it is obtained by a central difference with step ``alpha_step``.
    """

    func: Callable
    generator: Callable | None = None
    alpha_step: float = 1e-6

    def __call__(self, psi, alpha):
        return self.func(psi, alpha)

    def generator_at(self, psi) -> np.ndarray:
        psi = np.asarray(psi, dtype=complex)
        if self.generator is not None:
            return np.asarray(self.generator(psi), dtype=complex)
        h = self.alpha_step
        return (np.asarray(self.func(psi, h)) - np.asarray(self.func(psi, -h))) / (2 * h)


def u1_phase(analytic: bool = False) -> InternalTransformation:
    """Global phase rotation ``psi -> exp(i alpha) psi``."""
    gen = (lambda psi: 1j * psi) if analytic else None
    return InternalTransformation(lambda psi, a: np.exp(1j * a) * psi, gen)


def identity_transformation() -> InternalTransformation:
    """Trivial family ``f(psi, alpha) = psi`` (zero generator)."""
    return InternalTransformation(lambda psi, a: psi)


@dataclass(frozen=True)
class CurrentField:
    """Current components ``j0[j, p]``, ``j1[j, p]`` for ``0 <= j <= J-2``."""

    j0: np.ndarray
    j1: np.ndarray
    spec: LatticeSpec

    def __neg__(self) -> "CurrentField":
        return CurrentField(-self.j0, -self.j1, self.spec)

    def max_abs_difference(self, other: "CurrentField") -> float:
        return float(max(np.max(np.abs(self.j0 - other.j0)), np.max(np.abs(self.j1 - other.j1))))


def noether_current_numeric(density: LagrangianDensity, transform: InternalTransformation,
                            history: FieldHistory) -> CurrentField:
    """Finite-difference Noether current at every site with a forward temporal neighbour."""
    spec = history.spec
    J, P = history.values.shape[:2]
    out = np.zeros((2, J - 1, P), dtype=complex)
    for j in range(J - 1):
        for p in range(P):
            args = site_arguments(history, (j, p))
            psi_up = args[1]
            for mu in (0, 1):
                c = transform.generator_at(psi_up[mu])
                d_psi = _partial(density, args, 1, mu)
                d_dag = _partial(density, args, 3, mu)
                out[mu, j, p] = d_psi @ c + np.conj(c) @ d_dag
    imag = np.max(np.abs(out.imag)) if out.size else 0.0
    scale = 1.0 + (np.max(np.abs(out.real)) if out.size else 0.0)
    if imag > 1e-6 * scale:
        raise ArithmeticError(f"Noether current has imaginary part {imag:.3g}; density not invariant?")
    return CurrentField(out[0].real, out[1].real, spec)


def closed_form_u1_current(history: FieldHistory, gauge: GaugeField | None = None) -> CurrentField:
    """U(1) charge current, minimally coupled when ``gauge`` is given."""
    spec = history.spec
    v = history.values
    if gauge is not None:
        gauge.check_history(history)
        u0 = gauge.links(0)[: len(history) - 1]
        u1 = gauge.links(1)[: len(history) - 1]
    else:
        u0 = u1 = 1.0
    here = v[:-1]
    up0 = v[1:]
    if spec.periodic:
        up1 = np.roll(here, -1, axis=1)
    else:
        up1 = np.zeros_like(here)
        up1[:, :-1] = here[:, 1:]
    mu = mu_eps(spec.eps_m)
    eps = spec.epsilon
    z0 = np.sum(np.conj(here) * up0, axis=-1) * u0
    z1 = np.sum(np.conj(here) * (up1 @ ALPHA1.T), axis=-1) * u1
    return CurrentField(eps * z0.real, eps * mu * z1.real, spec)


def lattice_divergence(current: CurrentField) -> np.ndarray:
    """Left-derivative divergence ``d^L_0 J^0 + d^L_1 J^1``.

    Returned for slices ``1 .. J-2``; on a ring every site is included, on a
    fixed-zero segment the first site (no backward neighbour) is dropped.
    """
    eps = current.spec.epsilon
    j0, j1 = current.j0, current.j1
    d0 = (j0[1:] - j0[:-1]) / eps
    if current.spec.periodic:
        d1 = (j1[1:] - np.roll(j1[1:], 1, axis=1)) / eps
        return d0 + d1
    d1 = (j1[1:, 1:] - j1[1:, :-1]) / eps
    return d0[:, 1:] + d1


def total_charge(current: CurrentField) -> np.ndarray:
    """``Q_j = sum_p J^0_{(j, p)}`` for each slice that carries a current."""
    return np.sum(current.j0, axis=1)
