"""Second-order convergence of the walk dispersion and of the gauge action.

Halving the spacing should reduce each error by about four.

    python demos/continuum_limits.py
"""

import numpy as np

from qwgauge.checks import SmoothPotential, dispersion_refinement, gauge_action_refinement


def main(seed=1):
    print("dispersion  |omega_lattice - sqrt(k^2 + m^2)| on |k| <= pi/(4 eps_coarse), m = 1")
    eps = 0.4
    prev = None
    for _ in range(4):
        coarse, fine = dispersion_refinement(mass=1.0, epsilon=eps)
        print(f"  eps = {eps:<6.3f} error {coarse:.3e} -> eps/2 error {fine:.3e}  ratio {coarse / fine:.3f}")
        eps /= 2

    rng = np.random.default_rng(seed)
    for dim, sizes in ((1, (8, 16, 32, 64)), (3, (4, 8))):
        pot = SmoothPotential.random(rng, dim, amp=0.4, max_k=1)
        print(f"gauge action, {dim}+1 dimensions")
        for n in sizes:
            coarse, fine, exact = gauge_action_refinement(pot, n)
            print(f"  {n:3d} -> {2 * n:3d} sites per side: defect {coarse:.3e} -> {fine:.3e}  "
                  f"ratio {coarse / fine:.3f}  (continuum {exact:.6f})")


if __name__ == "__main__":
    main()
