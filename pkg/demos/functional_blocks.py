"""Scalar-on-function linear regression by dyadic blocks: the coefficient
indices are split into geometrically growing blocks, each solved by its own
small least-squares system, keeping every block Gram well conditioned. The
cumulative condition number stays under an explicit ceiling that depends only
on the score decay rate."""

import numpy as np

from pinvreg.lfr import (
    dyadic_partition,
    ineq47_bound,
    lfr_errors,
    lfr_fit,
    simulate_problem,
)
from pinvreg.sampling import derive_seed

SEED = 3


def main():
    part = dyadic_partition(50)
    print(f"dyadic partition of 1..50 into {part.K} blocks: {part.blocks}")

    print("\nnoiseless recovery (n=300, 50 coefficients, alternating decay):")
    problem = simulate_problem(300, 50, 2.0, 0.0, seed=SEED)
    model = lfr_fit(problem)
    errors = lfr_errors(model, problem)
    print(f"  squared coefficient error E2 = {errors.e2:.2e}"
          f"   cumulative kappa = {model.cumulative_kappa:.2f}")

    print("\nnoise amplification at sigma=0.5 (same design, 10 draws):")
    e2s = []
    for t in range(10):
        noisy = simulate_problem(300, 50, 2.0, 0.5, seed=derive_seed(SEED, t))
        e2s.append(lfr_errors(lfr_fit(noisy), noisy).e2)
    print(f"  mean E2 = {np.mean(e2s):.2f}  "
          "(the unregularized block solves pass the noise straight through)")

    print("\ncumulative conditioning vs the decay-rate ceiling (20 draws each):")
    for s in (0.75, 1.5):
        for size, n in ((20, 100), (50, 200)):
            kappas = [
                lfr_fit(simulate_problem(n, size, s, 0.0, variant="table2",
                                         seed=derive_seed(SEED, s, size, n, t))
                        ).cumulative_kappa
                for t in range(20)
            ]
            print(f"  s={s:4.2f} size={size:2d} n={n:3d}  "
                  f"mean {np.mean(kappas):6.2f}  ceiling {ineq47_bound(s, size):6.2f}")


if __name__ == "__main__":
    main()
