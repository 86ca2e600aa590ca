"""Trees whose spectral radius is (sqrt(p) + sqrt(q)) / 2."""
from __future__ import annotations

from spectree.alg import sqrt_of
from spectree.chains import half_sum_tree
from spectree.spectra import check_eigen_exact, spectral_radius_numeric


def main() -> None:
    for p, q in [(8, 4), (5, 1), (13, 9), (12, 4)]:
        out = half_sum_tree(p, q)
        alpha = (sqrt_of(p) + sqrt_of(q)) / 2
        lo, hi = spectral_radius_numeric(out.tree)
        print(f"p={p:2d} q={q}: n={out.tree.n:4d} max degree {out.tree.max_degree}  "
              f"exact={check_eigen_exact(out.tree, alpha, out.phi).ok}  "
              f"rho~{float(lo):.10f} target~{float(alpha):.10f}")


if __name__ == "__main__":
    main()
