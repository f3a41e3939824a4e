"""Named verification suites and the reference data they compare against.

Each suite returns a JSON-serialisable report::

    {"suite": name, "seed": seed, "passed": bool,
     "checks": [{"name", "defect", "tolerance", "relation", "passed", ...}]}

``relation`` is ``"<="`` when the measured defect must stay below the
tolerance and ``">="`` when a deliberate violation must be at least that
large (e.g. a scheme that is expected to fail).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import action_asymmetric, action_symmetric, boundary_terms, dqw_density
from .dirac_walk import (
    build_dirac_walk,
    dispersion,
    evolve,
    two_step_residual,
)
from .gauge import GaugeField, gauging_order_comparison
from .lattice import FieldHistory, LatticeSpec, norm
from .maxwell import (
    GaugeLattice,
    gauge_action,
    gauge_action_gradient_numeric,
    gauge_el_residual_numeric,
    maxwell_closed_form,
    sin_maxwell_term,
)
from .noether import closed_form_u1_current, lattice_divergence, noether_current_numeric, total_charge, u1_phase

__all__ = [
    "SUITES",
    "SmoothPotential",
    "random_field",
    "random_history",
    "dispersion_error",
    "dispersion_refinement",
    "gauge_action_refinement",
    "run_suite",
]


def _check(name, defect, tolerance, relation="<=", **extra):
    defect = float(defect)
    ok = defect <= tolerance if relation == "<=" else defect >= tolerance
    return {"name": name, "defect": defect, "tolerance": float(tolerance), "relation": relation,
            "passed": bool(ok), **extra}


def random_field(rng, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_history(rng, spec: LatticeSpec, steps: int | None = None) -> FieldHistory:
    J = spec.steps if steps is None else steps
    return FieldHistory(random_field(rng, (J, spec.sites, 2)), spec)


# ---------------------------------------------------------------- references


@dataclass(frozen=True)
class SmoothPotential:
    """Sum of plane-wave modes ``A_mu = sum amp cos(omega t + k.x + phase)``.

    ``modes`` is a sequence of ``(mu, amp, omega, kvec, phase)``.  Its field
    strength is known in closed form, which gives an exact continuum action.
    """

    dim: int
    modes: tuple

    @classmethod
    def random(cls, rng, dim: int, n_modes: int = 3, amp: float = 0.5, max_k: int = 2):
        modes = []
        for _ in range(n_modes):
            mu = int(rng.integers(0, dim + 1))
            kvec = tuple(int(v) for v in rng.integers(-max_k, max_k + 1, size=dim))
            modes.append((mu, float(amp * rng.uniform(0.5, 1.0)), float(rng.uniform(-1.5, 1.5)),
                          kvec, float(rng.uniform(0, 2 * np.pi))))
        return cls(dim, tuple(modes))

    def _coords(self, coords):
        return coords[0], coords[1:]

    def potential(self, mu, coords):
        t, xs = self._coords(coords)
        out = np.zeros(np.broadcast(*coords).shape)
        for m, amp, om, kv, ph in self.modes:
            if m == mu:
                out = out + amp * np.cos(om * t + sum(k * x for k, x in zip(kv, xs)) + ph)
        return out

    def _dpot(self, mu, nu, coords):
        """``d_nu A_mu``."""
        t, xs = self._coords(coords)
        out = np.zeros(np.broadcast(*coords).shape)
        for m, amp, om, kv, ph in self.modes:
            if m == mu:
                rate = om if nu == 0 else kv[nu - 1]
                out = out - amp * rate * np.sin(om * t + sum(k * x for k, x in zip(kv, xs)) + ph)
        return out

    def field_strength(self, mu, nu, coords):
        return self._dpot(nu, mu, coords) - self._dpot(mu, nu, coords)

    def continuum_action(self, box: float, duration: float, n_time: int = 48, n_space: int = 16):
        """Exact ``-1/4 int F_{mu nu} F^{mu nu}`` over ``[0, duration] x [0, box)^d``.

        Gauss-Legendre in time and the (exact for trigonometric polynomials)
        uniform rule in each periodic spatial direction.
        """
        tn, tw = np.polynomial.legendre.leggauss(n_time)
        tn, tw = (tn + 1) * duration / 2, tw * duration / 2
        xs = np.arange(n_space) * box / n_space
        grids = np.meshgrid(tn, *([xs] * self.dim), indexing="ij")
        weight = tw.reshape((-1,) + (1,) * self.dim) * (box / n_space) ** self.dim
        dens = np.zeros(grids[0].shape)
        for l in range(1, self.dim + 1):
            dens += 0.5 * self.field_strength(0, l, grids) ** 2
            for k in range(1, l):
                dens -= 0.5 * self.field_strength(k, l, grids) ** 2
        return float(np.sum(weight * dens))

    def sample(self, n_space: int, box: float, duration: float, charge: float) -> GaugeLattice:
        """Link-midpoint samples on a lattice with spacing ``box / n_space``."""
        eps = box / n_space
        n_time = int(round(duration / eps)) + 1
        axes = [np.arange(n_time) * eps] + [np.arange(n_space) * eps] * self.dim
        grids = np.meshgrid(*axes, indexing="ij")
        A = np.empty((self.dim + 1,) + grids[0].shape)
        for mu in range(self.dim + 1):
            shifted = list(grids)
            shifted[mu] = shifted[mu] + eps / 2
            A[mu] = self.potential(mu, shifted)
        return GaugeLattice(A, eps, charge, True)


def dispersion_error(spec: LatticeSpec, kmax: float, n_k: int = 2001) -> float:
    """``max |omega_lattice(k) - sqrt(k^2 + m^2)|`` over ``k in [-kmax, kmax]``."""
    k = np.linspace(-kmax, kmax, n_k)
    return float(np.max(np.abs(dispersion(k, spec) - np.sqrt(k ** 2 + spec.mass ** 2))))


def dispersion_refinement(mass: float = 1.0, epsilon: float = 0.2):
    """Errors at ``epsilon`` and ``epsilon/2`` on the window ``|k| <= pi/(4 epsilon)``.

    The window is fixed by the coarse spacing so both lattices are compared
    on the same physical momenta.
    """
    kmax = np.pi / (4 * epsilon)
    coarse = dispersion_error(LatticeSpec(sites=2, epsilon=epsilon, mass=mass), kmax)
    fine = dispersion_error(LatticeSpec(sites=2, epsilon=epsilon / 2, mass=mass), kmax)
    return coarse, fine


def gauge_action_refinement(potential: SmoothPotential, n_space: int, charge: float = 1.0,
                            box: float = 2 * np.pi):
    """Action defects against the continuum value at ``n_space`` and ``2 n_space`` sites.

    The time extent is a quarter of the box so that it is commensurate with
    both spacings.
    """
    duration = box / 4
    exact = potential.continuum_action(box, duration)
    coarse = abs(gauge_action(potential.sample(n_space, box, duration, charge)) - exact)
    fine = abs(gauge_action(potential.sample(2 * n_space, box, duration, charge)) - exact)
    return coarse, fine, exact


# -------------------------------------------------------------------- suites


def _suite_unitarity(rng):
    out = []
    spec = LatticeSpec(sites=64, epsilon=0.5, mass=0.6)
    walk = build_dirac_walk(spec)
    out.append(_check("jump-operator constraints, mu = 1/sqrt(1+(eps m)^2)", walk.unitarity_defect(), 1e-14))
    em = 0.1
    bad = build_dirac_walk(spec.with_(mass=em / spec.epsilon), prefactor=1 / np.sqrt(1 - em ** 2))
    out.append(_check("printed prefactor 1/sqrt(1-(eps m)^2) violates constraints",
                      bad.unitarity_defect(), 1e-3, ">="))
    psi0 = random_field(rng, (spec.sites, 2))
    hist = evolve(walk, psi0, 200, spec)
    n0 = norm(psi0, spec)
    drift = max(abs(norm(s, spec) - n0) for s in hist.values) / n0
    out.append(_check("relative norm drift over 200 steps", drift, 1e-12))
    res = max(np.max(np.abs(two_step_residual(hist, j))) for j in range(1, 200))
    out.append(_check("walk history solves unitary two-step equation", res, 1e-12))
    naive = max(np.max(np.abs(two_step_residual(hist, j, "naive"))) for j in range(1, 5))
    out.append(_check("walk history violates naive two-step equation", naive, 1e-6, ">="))
    return out


def _suite_noether(rng):
    out = []
    spec = LatticeSpec(sites=10, epsilon=0.6, mass=0.7)
    walk = build_dirac_walk(spec)
    dens = dqw_density(spec)
    worst = 0.0
    for trial in range(4):
        psi0 = random_field(rng, (spec.sites, 2))
        hist = evolve(walk, psi0, 4, spec) if trial % 2 == 0 else random_history(rng, spec, 5)
        num = noether_current_numeric(dens, u1_phase(), hist)
        worst = max(worst, num.max_abs_difference(-closed_form_u1_current(hist)))
    out.append(_check("numeric Noether current equals -J_U(1) sitewise", worst, 1e-8))
    spec = LatticeSpec(sites=64, epsilon=0.5, mass=0.8)
    hist = evolve(build_dirac_walk(spec), random_field(rng, (spec.sites, 2)), 300, spec)
    cur = closed_form_u1_current(hist)
    out.append(_check("on-shell divergence", np.max(np.abs(lattice_divergence(cur))), 1e-12))
    q = total_charge(cur)
    out.append(_check("total charge drift", np.max(np.abs(q - q[0])), 1e-12))
    off = hist.map(lambda v: v + 1e-3 * random_field(rng, v.shape))
    out.append(_check("off-shell divergence is visible",
                      np.max(np.abs(lattice_divergence(closed_form_u1_current(off)))), 1e-6, ">="))
    return out


def _suite_appendix_b(rng):
    worst = 0.0
    for _ in range(50):
        spec = LatticeSpec(sites=int(rng.integers(4, 12)), epsilon=float(rng.uniform(0.2, 1.5)),
                           mass=float(rng.uniform(0, 2)))
        hist = random_history(rng, spec, int(rng.integers(3, 9)))
        a = action_asymmetric(hist).value
        s = action_symmetric(hist).value
        b = boundary_terms(hist)
        worst = max(worst, abs(a - s - b) / max(abs(a), abs(s), abs(b), 1.0))
    return [_check("S_asym - S_sym - boundary terms (relative)", worst, 1e-12)]


def _suite_gauging_order(rng):
    spec = LatticeSpec(sites=16, steps=3, epsilon=0.5, mass=0.6, charge=0.9)
    walk = build_dirac_walk(spec)
    psi = random_field(rng, (spec.sites, 2))
    a1 = np.tile(rng.normal(size=spec.sites), (3, 1))
    uniform = GaugeField(np.tile(rng.normal(size=(3, 1)), (1, spec.sites)), a1, spec)
    varying = GaugeField(rng.normal(size=(3, spec.sites)), a1, spec)
    temporal = GaugeField(np.zeros((3, spec.sites)), a1, spec)
    out = []
    for name, gauge, expect in (("temporal gauge A0 = 0", temporal, True),
                                ("A0 uniform in space", uniform, True),
                                ("A0 varying in space", varying, False)):
        rep = gauging_order_comparison(walk, gauge, psi)
        relation, tol = ("<=", 1e-12) if expect else (">=", 1e-6)
        out.append(_check(f"{name}: commute={rep.commute}", rep.defect, tol, relation,
                          commute=rep.commute, expected_commute=expect))
    return out


def _suite_maxwell_oracle(rng):
    out = []
    worst = 0.0
    for _ in range(3):
        spec = LatticeSpec(sites=8, epsilon=2 * np.pi / 8, mass=float(rng.uniform(0, 1)),
                           charge=float(rng.uniform(0.5, 2.0)))
        J = 6
        pot = SmoothPotential.random(rng, 1)
        lat = pot.sample(spec.sites, spec.sites * spec.epsilon, (J - 1) * spec.epsilon, spec.charge)
        gauge = GaugeField(lat.A[0], lat.A[1], spec)
        hist = random_history(rng, spec, J)
        for site in ((2, 3), (3, 5)):
            for mu in (0, 1):
                num = gauge_el_residual_numeric(hist, gauge, site, mu)
                worst = max(worst, abs(num - maxwell_closed_form(hist, gauge, site, mu)))
    out.append(_check("1+1D with matter: numeric dS/dA vs sin-Maxwell closed form", worst, 1e-8))
    worst = 0.0
    pot = SmoothPotential.random(rng, 3)
    lat = pot.sample(8, 2 * np.pi, 3 * np.pi / 4, 1.3)
    for mu in range(4):
        site = (1, 1, 2, 3)
        worst = max(worst, abs(gauge_action_gradient_numeric(lat, site, mu) - sin_maxwell_term(lat, site, mu)))
    out.append(_check("3+1D pure gauge: numeric dS_G/dA vs closed form", worst, 1e-8))
    return out


def _suite_continuum(rng):
    coarse, fine = dispersion_refinement()
    out = [_check("dispersion error ratio eps -> eps/2 (want in [3, 5])", abs(coarse / fine - 4.0), 1.0,
                  coarse=coarse, fine=fine)]
    spec = LatticeSpec(sites=2, epsilon=0.1, mass=0.0)
    k = np.linspace(-0.49 * np.pi / spec.epsilon, 0.49 * np.pi / spec.epsilon, 1001)
    out.append(_check("massless dispersion omega = |k|", np.max(np.abs(dispersion(k, spec) - np.abs(k))), 1e-12))
    for dim, n in ((1, 32), (3, 8)):
        pot = SmoothPotential.random(rng, dim, amp=0.4, max_k=1)
        c, f, _ = gauge_action_refinement(pot, n)
        out.append(_check(f"S_G continuum defect ratio {dim}+1D (want in [3, 5])", abs(c / f - 4.0), 1.0,
                          coarse=c, fine=f))
    return out


SUITES = {
    "unitarity": _suite_unitarity,
    "noether": _suite_noether,
    "appendixB": _suite_appendix_b,
    "gauging_order": _suite_gauging_order,
    "maxwell_oracle": _suite_maxwell_oracle,
    "continuum": _suite_continuum,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run a named suite with a seeded generator and return its report."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    rng = np.random.default_rng(seed)
    checks = SUITES[name](rng)
    return {"suite": name, "seed": seed, "passed": all(c["passed"] for c in checks), "checks": checks}
