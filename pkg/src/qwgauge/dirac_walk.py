"""One-step Dirac quantum walk and the associated two-step schemes.

Representation: ``alpha1 = diag(1, -1)`` and ``alpha0 = [[0, 1], [1, 0]]``,
so the projectors ``(1 +/- alpha1)/2`` pick the upper (right-moving) and lower
(left-moving) component.  The walk is

    (W psi)_p = W_minus psi_{p+1} + W_plus psi_{p-1} + W_zero psi_p

with ``W_plus = mu P+``, ``W_minus = mu P-``, ``W_zero = -i eps m mu alpha0``
and ``mu = 1/sqrt(1 + (eps m)^2)``.  Only the plus sign under the root makes
the jump operators satisfy the unitarity constraints; see
:func:`unitarity_defect`.

The two-step schemes are leapfrog recursions

    psi_{j+1} = psi_{j-1} - 2 i eps H psi_j,

with ``H = mu alpha1 (-i d) + m mu alpha0`` ("unitary") or the same with
``mu -> 1`` ("naive").  The unitary one is exactly the two-step equation
satisfied by every walk-generated history; the naive one has growing modes
whenever ``sin^2(k eps) + (eps m)^2 > 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import FieldHistory, LatticeSpec, lattice_derivative, laplacian, norm, translate

__all__ = [
    "SCHEMES",
    "InternalAlgebra",
    "WalkOperator",
    "LocalHamiltonian",
    "mu_eps",
    "internal_algebra",
    "build_dirac_walk",
    "walk_step",
    "walk_adjoint_step",
    "evolve",
    "hamiltonian_apply",
    "two_step_residual",
    "two_step_evolve",
    "local_hamiltonian",
    "momentum_walk_matrix",
    "dispersion",
    "amplification_spectrum",
    "measure_amplification",
]

SCHEMES = ("unitary", "naive")

ID2 = np.eye(2, dtype=complex)
ALPHA0 = np.array([[0, 1], [1, 0]], dtype=complex)
ALPHA1 = np.array([[1, 0], [0, -1]], dtype=complex)


def mu_eps(eps_times_m: float) -> float:
    """Walk prefactor ``1/sqrt(1 + (eps m)^2)``.

    The sign under the root is fixed by unitarity: the jump operators give
    ``W W^dag = mu^2 (1 + (eps m)^2)``, so ``1/sqrt(1 - (eps m)^2)`` would
    not yield a unitary walk (see ``build_dirac_walk(..., prefactor=...)``).
    """
    x = float(eps_times_m)
    if x < 0 or not np.isfinite(x):
        raise ValueError("eps*m must be a nonnegative finite number")
    return 1.0 / np.sqrt(1.0 + x * x)


@dataclass(frozen=True)
class InternalAlgebra:
    """Concrete 2x2 Dirac and walk matrices at a given ``mu``."""

    alpha0: np.ndarray
    alpha1: np.ndarray
    gamma0: np.ndarray
    gamma1: np.ndarray
    tilde_alpha0: np.ndarray
    tilde_alpha1: np.ndarray
    tilde_gamma0: np.ndarray
    tilde_gamma1: np.ndarray
    proj_plus: np.ndarray
    proj_minus: np.ndarray
    mu_eps: float

    @property
    def tilde_gamma0_inv(self) -> np.ndarray:
        """``(tilde_gamma0)^{-1} = mu alpha0``, used to form the modified adjoint."""
        return self.mu_eps * self.alpha0

    @property
    def kinetic(self) -> tuple:
        """``(tilde_gamma0)^{-1} tilde_gamma^mu`` for mu = 0, 1: ``(1, mu alpha1)``."""
        return (ID2.copy(), self.mu_eps * self.alpha1)


def internal_algebra(mu: float) -> InternalAlgebra:
    gamma0 = ALPHA0.copy()
    gamma1 = ALPHA0 @ ALPHA1
    return InternalAlgebra(
        alpha0=ALPHA0.copy(),
        alpha1=ALPHA1.copy(),
        gamma0=gamma0,
        gamma1=gamma1,
        tilde_alpha0=mu * ALPHA0,
        tilde_alpha1=mu * ALPHA1,
        tilde_gamma0=gamma0 / mu,
        tilde_gamma1=gamma1.copy(),
        proj_plus=(ID2 + ALPHA1) / 2,
        proj_minus=(ID2 - ALPHA1) / 2,
        mu_eps=float(mu),
    )


@dataclass(frozen=True)
class WalkOperator:
    """Jump operators of a translation-invariant nearest-neighbour walk.

    ``w_minus`` multiplies ``T^{-1}`` (value fetched from ``p+1``), ``w_plus``
    multiplies ``T`` (value fetched from ``p-1``).
    """

    w_minus: np.ndarray
    w_zero: np.ndarray
    w_plus: np.ndarray
    epsilon: float = 1.0
    mass: float = 0.0
    boundary: str = "periodic"

    @property
    def b_plus(self) -> np.ndarray:
        return self.w_plus + self.w_minus

    @property
    def b_minus(self) -> np.ndarray:
        return self.w_plus - self.w_minus

    @property
    def m_op(self) -> np.ndarray:
        return self.b_plus + self.w_zero

    def constraint_matrices(self) -> dict:
        """Left-hand sides of the unitarity constraints minus their targets."""
        wm, w0, wp = self.w_minus, self.w_zero, self.w_plus
        h = lambda a: a.conj().T  # noqa: E731
        return {
            "sum W W^dag - 1": wp @ h(wp) + w0 @ h(w0) + wm @ h(wm) - ID2,
            "W+ W0^dag + W0 W-^dag": wp @ h(w0) + w0 @ h(wm),
            "W+ W-^dag": wp @ h(wm),
            "sum W^dag W - 1": h(wp) @ wp + h(w0) @ w0 + h(wm) @ wm - ID2,
            "W+^dag W0 + W0^dag W-": h(wp) @ w0 + h(w0) @ wm,
            "W+^dag W-": h(wp) @ wm,
        }

    def unitarity_defect(self) -> float:
        """Largest entry magnitude over all constraint residuals."""
        return max(float(np.max(np.abs(m))) for m in self.constraint_matrices().values())


def build_dirac_walk(spec: LatticeSpec, prefactor: float | None = None) -> WalkOperator:
    """Dirac walk for ``spec``.

    ``prefactor`` overrides ``mu``; it exists only to show what goes wrong
    with other normalizations and should normally be left alone.
    """
    em = spec.eps_m
    mu = mu_eps(em) if prefactor is None else float(prefactor)
    alg = internal_algebra(mu)
    return WalkOperator(
        w_minus=mu * alg.proj_minus,
        w_zero=-1j * em * mu * alg.alpha0,
        w_plus=mu * alg.proj_plus,
        epsilon=spec.epsilon,
        mass=spec.mass,
        boundary=spec.boundary,
    )


def _apply(mat: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply an internal-space matrix to every site of ``psi`` (shape ``(..., 2)``)."""
    return psi @ mat.T


def walk_step(walk: WalkOperator, psi) -> np.ndarray:
    """One application of the walk: ``psi_{j+1} = W psi_j``."""
    psi = np.asarray(psi, dtype=complex)
    return (
        _apply(walk.w_minus, translate(psi, -1, walk.boundary))
        + _apply(walk.w_plus, translate(psi, 1, walk.boundary))
        + _apply(walk.w_zero, psi)
    )


def walk_adjoint_step(walk: WalkOperator, psi) -> np.ndarray:
    """``W^dagger psi = W-^dag T psi + W+^dag T^{-1} psi + W0^dag psi``."""
    psi = np.asarray(psi, dtype=complex)
    h = lambda a: a.conj().T  # noqa: E731
    return (
        _apply(h(walk.w_minus), translate(psi, 1, walk.boundary))
        + _apply(h(walk.w_plus), translate(psi, -1, walk.boundary))
        + _apply(h(walk.w_zero), psi)
    )


def evolve(walk: WalkOperator, psi0, steps: int, spec: LatticeSpec) -> FieldHistory:
    """History ``psi_0 .. psi_steps`` generated by repeated walk steps."""
    out = np.empty((steps + 1, spec.sites, 2), dtype=complex)
    out[0] = spec.check_slice(psi0)
    for j in range(steps):
        out[j + 1] = walk_step(walk, out[j])
    return FieldHistory(out, spec)


def _scheme_mu(scheme: str, spec: LatticeSpec) -> float:
    if scheme == "unitary":
        return mu_eps(spec.eps_m)
    if scheme == "naive":
        return 1.0
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def hamiltonian_apply(psi, spec: LatticeSpec, scheme: str = "unitary") -> np.ndarray:
    """``H psi`` with ``H = mu alpha1 (-i d) + m mu alpha0`` (``mu = 1`` for naive)."""
    mu = _scheme_mu(scheme, spec)
    psi = np.asarray(psi, dtype=complex)
    dpsi = lattice_derivative(psi, 1, "symmetric", spec=spec)
    return mu * (_apply(ALPHA1, -1j * dpsi) + spec.mass * _apply(ALPHA0, psi))


def two_step_residual(history: FieldHistory, j: int, scheme: str = "unitary") -> np.ndarray:
    """``(i/2eps)(psi_{j+1} - psi_{j-1}) - H psi_j`` at every site of slice ``j``."""
    spec = history.spec
    if not 1 <= j <= len(history) - 2:
        raise IndexError(f"two-step residual needs an interior slice, got j={j} of {len(history)}")
    lhs = 1j * lattice_derivative(history, 0, "symmetric", spec=spec, j=j)
    return lhs - hamiltonian_apply(history.slice(j), spec, scheme)


def two_step_evolve(psi0, psi1, steps: int, spec: LatticeSpec, scheme: str = "unitary") -> FieldHistory:
    """Leapfrog history ``psi_0 .. psi_steps`` from two initial slices."""
    out = np.empty((steps + 1, spec.sites, 2), dtype=complex)
    out[0] = spec.check_slice(psi0)
    if steps >= 1:
        out[1] = spec.check_slice(psi1)
    for j in range(1, steps):
        out[j + 1] = out[j - 1] - 2j * spec.epsilon * hamiltonian_apply(out[j], spec, scheme)
    return FieldHistory(out, spec)


@dataclass(frozen=True)
class LocalHamiltonian:
    """Decomposition ``eps H = A1 (-i eps d) + lap_coeff L + mass_term``.

    ``a0`` is ``(i/2 eps m)(M - M^dag)``, or the unnormalized ``(i/2)(M - M^dag)``
    when ``m = 0`` (``mass_normalized`` is then False).  ``q_r`` is
    ``-(i/2)(B+ - B+^dag)``, i.e. the Wilson-type matrix times its parameter,
    and ``laplacian_coefficient = -q_r/2``.
    """

    a0: np.ndarray
    a1: np.ndarray
    q_r: np.ndarray
    laplacian_coefficient: np.ndarray
    mass_term: np.ndarray
    mass_normalized: bool

    def apply(self, psi, spec: LatticeSpec) -> np.ndarray:
        """``eps H_Q psi`` assembled from the decomposition."""
        psi = np.asarray(psi, dtype=complex)
        d = lattice_derivative(psi, 1, "symmetric", spec=spec)
        return (
            _apply(self.a1, -1j * spec.epsilon * d)
            + _apply(self.laplacian_coefficient, laplacian(psi, spec))
            + _apply(self.mass_term, psi)
        )


def local_hamiltonian(walk: WalkOperator) -> LocalHamiltonian:
    """Hermitian generator ``(i/2)(W - W^dag)`` split into transport, Laplacian and mass parts."""
    h = lambda a: a.conj().T  # noqa: E731
    M, Bp, Bm = walk.m_op, walk.b_plus, walk.b_minus
    mass_term = 0.5j * (M - h(M))
    em = walk.epsilon * walk.mass
    normalized = em > 0
    a0 = mass_term / em if normalized else mass_term
    q_r = -0.5j * (Bp - h(Bp))
    return LocalHamiltonian(
        a0=a0,
        a1=(Bm + h(Bm)) / 2,
        q_r=q_r,
        laplacian_coefficient=-q_r / 2,
        mass_term=mass_term,
        mass_normalized=bool(normalized),
    )


def momentum_walk_matrix(walk: WalkOperator, k) -> np.ndarray:
    """Walk symbol ``W(k)`` acting on ``spinor * exp(i k p eps)``; shape ``(..., 2, 2)``."""
    k = np.asarray(k, dtype=float)[..., None, None]
    ph = np.exp(1j * k * walk.epsilon)
    return walk.w_minus * ph + walk.w_plus / ph + walk.w_zero


def dispersion(k, spec: LatticeSpec):
    """Positive eigenfrequency ``omega(k)`` with ``cos(omega eps) = mu cos(k eps)``.

    Evaluated as ``atan2(sqrt(sin^2(k eps) + (eps m)^2), cos(k eps)) / eps``,
    which equals the arccos form but keeps full precision near ``omega = 0``.
    """
    ke = np.asarray(k, dtype=float) * spec.epsilon
    em = spec.eps_m
    omega = np.arctan2(np.sqrt(np.sin(ke) ** 2 + em ** 2), np.cos(ke)) / spec.epsilon
    return float(omega) if np.ndim(omega) == 0 else omega


def _symbol_eps_h(scheme: str, k: float, spec: LatticeSpec) -> np.ndarray:
    mu = _scheme_mu(scheme, spec)
    return mu * (np.sin(k * spec.epsilon) * ALPHA1 + spec.eps_m * ALPHA0)


def amplification_spectrum(scheme: str, k: float, spec: LatticeSpec) -> np.ndarray:
    """Multipliers ``lambda_+/-`` of the two-step recursion on the mode ``k``.

    Returns ``[-i s + sqrt(1 - s^2), -i s - sqrt(1 - s^2)]`` for the largest
    eigenvalue ``s`` of ``eps H(k)``; the eigenvalue ``-s`` gives multipliers of
    the same moduli.
    """
    s = float(np.max(np.linalg.eigvalsh(_symbol_eps_h(scheme, k, spec))))
    root = np.sqrt(complex(1.0 - s * s))
    return np.array([-1j * s + root, -1j * s - root])


def measure_amplification(scheme: str, k: float, spec: LatticeSpec, steps: int = 200,
                          seed: int = 0) -> float:
    """Per-step growth of a lattice plane wave under the two-step recursion.

    Runs the leapfrog recursion on the lattice from a random spinor times
    ``exp(i k p eps)`` and returns ``||psi_N|| / ||psi_{N-1}||``.  The lattice
    must contain the momentum, i.e. ``k eps P / (2 pi)`` must be an integer.
    """
    turns = k * spec.epsilon * spec.sites / (2 * np.pi)
    if spec.periodic and abs(turns - round(turns)) > 1e-9:
        raise ValueError("k is not a momentum of the periodic lattice")
    rng = np.random.default_rng(seed)
    spinor = rng.normal(size=2) + 1j * rng.normal(size=2)
    wave = np.exp(1j * k * spec.positions)
    psi0 = wave[:, None] * spinor[None, :]
    psi1 = walk_step(build_dirac_walk(spec), psi0) if scheme == "unitary" else psi0.copy()
    prev, cur = psi0, psi1
    for _ in range(steps - 1):
        nxt = prev - 2j * spec.epsilon * hamiltonian_apply(cur, spec, scheme)
        scale = norm(nxt, spec)
        prev, cur = cur / scale, nxt / scale
    return norm(cur, spec) / norm(prev, spec)
