"""Unitary walk versus the naive symmetric-difference scheme.

Evolves the same random spinor with the Dirac walk, with the equivalent
two-step leapfrog, and with the naive leapfrog (no mu_eps factor), printing the
norm every few steps.  The naive norm grows like the largest amplification
factor of its two-step recursion.

    python demos/unitary_vs_naive.py
"""

import numpy as np

from qwgauge import LatticeSpec, build_dirac_walk, evolve, norm, two_step_evolve
from qwgauge.dirac_walk import amplification_spectrum, walk_step


def main(steps=60, seed=0):
    spec = LatticeSpec(sites=64, epsilon=1.0, mass=0.5)
    rng = np.random.default_rng(seed)
    psi0 = rng.normal(size=(64, 2)) + 1j * rng.normal(size=(64, 2))
    psi0 /= norm(psi0, spec)
    walk = build_dirac_walk(spec)
    psi1 = walk_step(walk, psi0)
    one_step = evolve(walk, psi0, steps, spec)
    unitary = two_step_evolve(psi0, psi1, steps, spec, "unitary")
    naive = two_step_evolve(psi0, psi1, steps, spec, "naive")

    print(f"{'step':>4} {'walk':>10} {'unitary 2-step':>15} {'naive 2-step':>14}")
    for j in range(0, steps + 1, 10):
        print(f"{j:4d} {norm(one_step[j], spec):10.6f} {norm(unitary[j], spec):15.6f} "
              f"{norm(naive[j], spec):14.6e}")

    k = np.linspace(-np.pi, np.pi, 721)
    worst = max(np.max(np.abs(amplification_spectrum("naive", kk, spec))) for kk in k)
    print(f"largest naive amplification factor over the Brillouin zone: {worst:.10f}")
    print(f"golden ratio:                                              {(1 + 5 ** 0.5) / 2:.10f}")


if __name__ == "__main__":
    main()
