"""Build a tree with spectral radius sqrt(k) and maximum degree r, then check it two ways.

    python3 demos/synthesize_sqrt_k.py 7 4
"""
from __future__ import annotations

import sys
from fractions import Fraction

from spectree.alg import sqrt_of
from spectree.chains import r_min, sqrt_tree, zero_certificate
from spectree.spectra import check_eigen_exact, check_is_sqrt_k, spectral_radius_numeric
from spectree.treekit import unfolded_size


def main(k: int, r: int) -> None:
    print(f"sqrt({k}) is realizable with max degree r for {r_min(k)} <= r <= {k}")
    cert, ctx = zero_certificate(k, r)
    print(f"certificate: {len(cert.nodes)} distinct values, unfolds to {unfolded_size(cert)} vertices")
    out = sqrt_tree(k, r)
    print(f"tree: n={out.tree.n}, max degree {out.tree.max_degree}")
    print("exact eigen-equation:", check_eigen_exact(out.tree, sqrt_of(k), out.phi).ok)
    lo, hi = spectral_radius_numeric(out.tree, Fraction(1, 10**12))
    print(f"numeric radius in [{float(lo):.12f}, {float(hi):.12f}], sqrt(k) = {k ** 0.5:.12f}")
    if out.tree.n <= 300:
        print("largest root of the characteristic polynomial is sqrt(k):", check_is_sqrt_k(out.tree, k).ok)


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]] or [7, 4]
    main(*args)
