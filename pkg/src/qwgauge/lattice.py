"""Spacetime lattice geometry, field storage and finite-difference operators.

Fields are plain NumPy arrays.  A time slice of a spinor field has shape
``(P, 2)`` (site, internal component) and a stored history has shape
``(J, P, 2)``.  Scalar per-site quantities (currents, gauge potentials) use
``(P,)`` or ``(J, P)`` arrays with the same site axis conventions.

The translation operator shifts values towards larger site index,

    (T psi)_p = psi_{p-1},        (T^{-1} psi)_p = psi_{p+1},

so a positive shift is ``np.roll(psi, +1, axis=0)`` on a periodic ring and
a zero-filled shift on a segment with fixed-zero ends.  Time is never
wrapped: temporal neighbours are looked up in a :class:`FieldHistory` and
missing slices raise :class:`IndexError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError

__all__ = [
    "BOUNDARIES",
    "LatticeSpec",
    "FieldHistory",
    "translate",
    "lattice_derivative",
    "laplacian",
    "inner",
    "norm",
    "delta_field",
    "plane_wave",
    "gaussian_packet",
]

BOUNDARIES = ("periodic", "fixed-zero")
FLAVORS = ("symmetric", "left", "right")


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry and physical constants of a (1+1)-dimensional lattice.

    Parameters
    ----------
    sites : int
        Spatial extent ``P`` (number of sites per time slice), at least 2.
    steps : int
        Temporal extent ``J`` used when allocating histories.
    epsilon : float
        Lattice spacing, shared by time and space.
    boundary : {"periodic", "fixed-zero"}
        Spatial boundary policy.
    mass, charge : float
        Matter mass ``m >= 0`` and U(1) coupling ``q``.
    """

    sites: int
    steps: int = 1
    epsilon: float = 1.0
    boundary: str = "periodic"
    mass: float = 0.0
    charge: float = 0.0

    def __post_init__(self):
        if int(self.sites) != self.sites or self.sites < 2:
            raise ConfigError("must be an integer >= 2", key="lattice.sites")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigError("must be a positive integer", key="run.steps")
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ConfigError("must be a positive finite number", key="lattice.epsilon")
        if self.boundary not in BOUNDARIES:
            raise ConfigError(f"must be one of {BOUNDARIES}", key="lattice.boundary")
        if not np.isfinite(self.mass) or self.mass < 0:
            raise ConfigError("must be nonnegative", key="matter.mass")
        if not np.isfinite(self.charge):
            raise ConfigError("must be finite", key="matter.charge")

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def eps_m(self) -> float:
        """Dimensionless mass ``epsilon * m``."""
        return self.epsilon * self.mass

    @property
    def positions(self) -> np.ndarray:
        """Physical positions ``p * epsilon`` of the sites."""
        return np.arange(self.sites) * self.epsilon

    def with_(self, **changes) -> "LatticeSpec":
        """Return a copy with some fields replaced."""
        return replace(self, **changes)

    def zeros(self, steps: int | None = None) -> np.ndarray:
        """Zero spinor history of shape ``(steps, sites, 2)``."""
        return np.zeros((self.steps if steps is None else steps, self.sites, 2), complex)

    def check_slice(self, psi: np.ndarray) -> np.ndarray:
        psi = np.asarray(psi)
        if psi.shape[0] != self.sites:
            raise ValueError(f"field has {psi.shape[0]} sites, lattice has {self.sites}")
        return psi


@dataclass(frozen=True)
class FieldHistory:
    """Ordered time slices ``psi[j]`` of a spinor field on one lattice."""

    values: np.ndarray
    spec: LatticeSpec = field(compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 3 or values.shape[2] != 2:
            raise ValueError("history must have shape (J, P, 2)")
        if values.shape[1] != self.spec.sites:
            raise ValueError(
                f"history has {values.shape[1]} sites, lattice has {self.spec.sites}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, j):
        return self.values[j]

    @property
    def n_slices(self) -> int:
        return self.values.shape[0]

    def slice(self, j: int) -> np.ndarray:
        """Slice ``j``; raises :class:`IndexError` outside the stored range."""
        if not 0 <= j < self.n_slices:
            raise IndexError(f"time slice {j} outside stored range [0, {self.n_slices - 1}]")
        return self.values[j]

    def map(self, func) -> "FieldHistory":
        return FieldHistory(func(np.array(self.values)), self.spec)


def _boundary_of(spec_or_boundary) -> str:
    if isinstance(spec_or_boundary, LatticeSpec):
        return spec_or_boundary.boundary
    if spec_or_boundary not in BOUNDARIES:
        raise ValueError(f"unknown boundary {spec_or_boundary!r}")
    return spec_or_boundary


def translate(field, shift: int = 1, boundary="periodic", axis: int = 0) -> np.ndarray:
    """Apply ``T**shift`` along the site axis.

    ``shift=+1`` is ``T`` (output at ``p`` is input at ``p-1``); ``shift=-1``
    is ``T^{-1}``.  ``boundary`` may be a policy name or a :class:`LatticeSpec`.
    """
    field = np.asarray(field)
    if _boundary_of(boundary) == "periodic":
        return np.roll(field, shift, axis=axis)
    out = np.zeros_like(field)
    n = field.shape[axis]
    if abs(shift) >= n:
        return out
    src = [slice(None)] * field.ndim
    dst = [slice(None)] * field.ndim
    if shift >= 0:
        src[axis], dst[axis] = slice(0, n - shift), slice(shift, n)
    else:
        src[axis], dst[axis] = slice(-shift, n), slice(0, n + shift)
    out[tuple(dst)] = field[tuple(src)]
    return out


def _combine(forward, here, backward, flavor, eps):
    # forward = T^{-1} f (value at p+1), backward = T f (value at p-1)
    if flavor == "symmetric":
        return (forward - backward) / (2 * eps)
    if flavor == "left":
        return (here - backward) / eps
    if flavor == "right":
        return (forward - here) / eps
    raise ValueError(f"unknown derivative flavor {flavor!r}; expected one of {FLAVORS}")


def lattice_derivative(data, direction: int, flavor: str = "symmetric", *, spec: LatticeSpec, j=None):
    """Symmetric, left or right lattice derivative.

    ``direction=1`` differentiates in space.  ``data`` is a slice (sites on
    axis 0), or a history when ``j`` is given, in which case slice ``j`` is
    used.  ``direction=0`` differentiates in time at slice ``j`` of a
    history (``FieldHistory`` or array with time on axis 0); the result has
    the shape of one slice.

    ``symmetric`` is ``(T^{-1} - T)/(2 eps)``, ``left`` is ``(1 - T)/eps`` and
    ``right`` is ``(T^{-1} - 1)/eps``.
    """
    eps = spec.epsilon
    if direction == 1:
        f = data
        if j is not None:
            f = data.slice(j) if isinstance(data, FieldHistory) else np.asarray(data)[j]
        f = np.asarray(f)
        return _combine(translate(f, -1, spec), f, translate(f, 1, spec), flavor, eps)
    if direction == 0:
        if j is None:
            raise ValueError("temporal derivative needs a slice index j")
        values = data.values if isinstance(data, FieldHistory) else np.asarray(data)
        n = values.shape[0]
        need = {"symmetric": (j - 1, j + 1), "left": (j - 1, j), "right": (j, j + 1)}
        if flavor not in need:
            raise ValueError(f"unknown derivative flavor {flavor!r}; expected one of {FLAVORS}")
        lo, hi = need[flavor]
        if lo < 0 or hi >= n:
            raise IndexError(
                f"{flavor} temporal derivative at j={j} needs slices {lo}..{hi}, have 0..{n - 1}"
            )
        fwd = values[j + 1] if j + 1 < n else None
        bwd = values[j - 1] if j >= 1 else None
        return _combine(fwd, values[j], bwd, flavor, eps)
    raise ValueError("direction must be 0 (time) or 1 (space)")


def laplacian(field, spec) -> np.ndarray:
    """Dimensionless lattice Laplacian ``T^{-1} + T - 2`` in space."""
    field = np.asarray(field)
    return translate(field, -1, spec) + translate(field, 1, spec) - 2 * field


def inner(psi, phi, spec: LatticeSpec) -> complex:
    """Hermitian product ``eps * sum_p psi_p^dagger phi_p`` (antilinear in ``psi``)."""
    return complex(spec.epsilon * np.vdot(np.asarray(psi), np.asarray(phi)))


def norm(psi, spec: LatticeSpec) -> float:
    """Norm ``sqrt(<psi|psi>)``."""
    psi = np.asarray(psi)
    return float(np.sqrt(spec.epsilon * np.sum(np.abs(psi) ** 2)))


def delta_field(spec: LatticeSpec, site: int, spinor=(1.0, 0.0)) -> np.ndarray:
    """Field that is ``spinor`` at ``site`` and zero elsewhere."""
    psi = np.zeros((spec.sites, 2), complex)
    psi[site] = spinor
    return psi


def plane_wave(spec: LatticeSpec, k: float, spinor=(1.0, 0.0)) -> np.ndarray:
    """``spinor * exp(i k p eps)`` on every site (unnormalized)."""
    phase = np.exp(1j * k * spec.positions)
    return phase[:, None] * np.asarray(spinor, complex)[None, :]


def gaussian_packet(spec: LatticeSpec, center: float, width: float, k0: float = 0.0,
                    spinor=(1.0, 0.0)) -> np.ndarray:
    """Unit-norm Gaussian packet; ``center`` and ``width`` in physical units."""
    x = spec.positions
    if spec.periodic:
        L = spec.sites * spec.epsilon
        dx = (x - center + L / 2) % L - L / 2
    else:
        dx = x - center
    envelope = np.exp(-(dx ** 2) / (2 * width ** 2) + 1j * k0 * x)
    spinor = np.asarray(spinor, complex)
    spinor = spinor / np.linalg.norm(spinor)
    psi = envelope[:, None] * spinor[None, :]
    return psi / norm(psi, spec)
