"""Tour of the normalized polynomial bases: orthonormality under the weighted
inner product, the norm constants that make it work, and the sup-norm growth
envelope (including the one degree where the envelope genuinely fails)."""

import numpy as np

from pinvreg.jacobi import (
    JacobiBasis,
    JacobiParams,
    gauss_jacobi_rule,
    norm_constant,
    uniform_bound,
)


def main():
    for alpha, beta in ((-0.5, -0.5), (0.0, 0.0), (0.5, -0.5)):
        params = JacobiParams(alpha, beta)
        basis = JacobiBasis(params, 12)
        rule = gauss_jacobi_rule(params, 13)
        T = basis.table(rule.nodes)
        gram = T.T @ (rule.weights[:, None] * T)
        dev = np.max(np.abs(gram - np.eye(basis.size)))
        print(f"alpha={alpha:+.1f} beta={beta:+.1f}  "
              f"gamma_ab={params.gamma_ab:.6f}  max|Gram - I| = {dev:.2e}")

    print("\nraw squared norms h_k at alpha=beta=-1/2 (pi, pi/2, pi/2, ...):")
    cheb = JacobiParams(-0.5, -0.5)
    print("  ", np.array([norm_constant(cheb, k) for k in range(5)]))

    print("\nsup-norm envelope audit on a 2001-point grid, degrees 2..12:")
    grid = np.linspace(-1.0, 1.0, 2001)
    for alpha, beta in ((-0.5, -0.5), (0.5, 0.5)):
        params = JacobiParams(alpha, beta)
        table = np.abs(JacobiBasis(params, 12).table(grid))
        ratios = [np.max(table[:, k]) / uniform_bound(params, k)
                  for k in range(2, 13)]
        worst_k = int(np.argmax(ratios)) + 2
        print(f"  alpha=beta={alpha:+.1f}: worst ratio {max(ratios):.4f} "
              f"at degree {worst_k}"
              + ("  <-- genuine breach, degree 2 only" if max(ratios) > 1 else ""))


if __name__ == "__main__":
    main()
