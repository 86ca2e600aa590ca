from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from spectree.alg import AlgReal, sqrt_of
from spectree.chains import half_sum_tree, sqrt_tree
from spectree.oracle import enumerate_trees
from spectree.spectra import (IntPoly, OutOfScope, char_poly, check_bounds, check_eigen_exact,
                              check_is_sqrt_k, eigen_counts, roots_above, spectral_radius_numeric)
from spectree.treekit import Tree

R2 = sqrt_of(2)
P3, P4, K14 = Tree.path(3), Tree.path(4), Tree.star(4)


def q(x) -> AlgReal:
    return AlgReal.rational(Fraction(x))


def eigenvalues(tree: Tree) -> np.ndarray:
    a = np.zeros((tree.n, tree.n))
    for u, v in tree.edges:
        a[u, v] = a[v, u] = 1
    return np.linalg.eigvalsh(a)


def small_trees(n_max=9):
    for n in range(1, n_max + 1):
        yield from enumerate_trees(n)


def test_eigen_exact_examples():
    assert check_eigen_exact(P3, R2, [q(1), R2, q(1)]).ok
    assert check_eigen_exact(K14, 2, [q(2), q(1), q(1), q(1), q(1)]).ok
    v = check_eigen_exact(P3, 2, [q(1), q(2), q(1)])
    assert not v.ok and v.vertex == 1 and v.residual == 2
    assert check_eigen_exact(P3, R2, [q(1), R2, q(-1)]).reason == "phi-not-positive"
    assert check_eigen_exact(P3, R2, [q(1), R2]).reason == "phi-length"
    assert v.to_json() == {"ok": False, "reason": "eigen-equation", "vertex": 1, "residual": "2"}


def test_char_poly_examples():
    assert char_poly(Tree.path(2)).coeffs == (-1, 0, 1)
    assert char_poly(P3).coeffs == (0, -2, 0, 1)
    assert char_poly(K14).coeffs == (0, 0, 0, -4, 0, 1)
    assert char_poly(P4).coeffs == (1, 0, -3, 0, 1)
    assert char_poly(Tree(1, ())).coeffs == (0, 1)
    assert str(char_poly(P3)) == "x^3 - 2*x"


def test_char_poly_root_invariant_and_coefficients():
    for t in small_trees(10):
        p = char_poly(t)
        assert p.degree == t.n
        for root in range(t.n):
            assert char_poly(t, root) == p
        if t.n >= 2:
            assert p.coeff(t.n - 1) == 0
            assert p.coeff(t.n - 2) == -(t.n - 1)


def test_char_poly_matches_numeric_eigenvalues():
    for t in small_trees(8):
        expected = np.poly(eigenvalues(t))[::-1]
        assert np.allclose([float(c) for c in char_poly(t).coeffs], expected, atol=1e-6)


def test_spectral_radius_examples():
    lo, hi = spectral_radius_numeric(P3)
    assert hi - lo <= Fraction(1, 10**9)
    assert float(lo) <= 2 ** 0.5 <= float(hi)
    lo, hi = spectral_radius_numeric(K14)
    assert lo <= 2 <= hi
    lo, hi = spectral_radius_numeric(P4)
    assert float(lo) - 1e-12 <= (1 + 5 ** 0.5) / 2 <= float(hi) + 1e-12
    assert spectral_radius_numeric(Tree(1, ())) == (0, 0)


def test_spectral_radius_against_numpy():
    for t in small_trees(9):
        if t.n == 1:
            continue
        lo, hi = spectral_radius_numeric(t, Fraction(1, 10**10))
        rho = eigenvalues(t)[-1]
        assert float(lo) - 1e-9 <= rho <= float(hi) + 1e-9


def test_eigen_counts_against_numpy():
    points = [Fraction(0), Fraction(1), Fraction(3, 2), R2, sqrt_of(3), q(2), (1 + sqrt_of(5)) / 2]
    for t in small_trees(8):
        ev = eigenvalues(t)
        for x in points:
            c = eigen_counts(t, x)
            assert c.above + c.equal + c.below == t.n
            xf = float(x)
            assert c.above == int(np.sum(ev > xf + 1e-9))
            assert c.below == int(np.sum(ev < xf - 1e-9))


def test_sturm_counts():
    # (x^2 - 2)(x - 3)(x + 1) = x^4 - 2x^3 - 5x^2 + 4x + 6
    p = IntPoly((6, 4, -5, -2, 1))
    assert roots_above(p, sqrt_of(3)) == 1
    assert roots_above(p, q(0)) == 2
    assert roots_above(p, q(-2)) == 4
    # squarefree part only: a double root counts once
    assert roots_above(IntPoly((4, -4, 1)), q(0)) == 1


def test_is_sqrt_k_examples():
    assert check_is_sqrt_k(K14, 4).ok
    assert check_is_sqrt_k(P3, 2).ok
    v = check_is_sqrt_k(P4, 3)
    assert not v.ok and v.reason == "not-a-root"
    # sqrt(2) = 2cos(pi/4) is an eigenvalue of P7 but not its largest, 2cos(pi/8)
    v = check_is_sqrt_k(Tree.path(7), 2)
    assert not v.ok and v.reason == "larger-root"
    assert check_is_sqrt_k(Tree.path(5), 3).ok


def test_is_sqrt_k_against_numpy():
    for t in small_trees(8):
        if t.n < 2:
            continue
        rho = eigenvalues(t)[-1]
        for k in range(2, 10):
            assert check_is_sqrt_k(t, k).ok == (abs(rho - k ** 0.5) < 1e-9)


def test_bounds_examples():
    assert check_bounds(K14).ok
    assert check_bounds(P3).ok
    with pytest.raises(OutOfScope):
        check_bounds(Tree.path(2))


def test_synthesized_instances_agree():
    cases = [(sqrt_tree(k, r), sqrt_of(k), k) for k, r in [(2, 2), (5, 3), (7, 4), (10, 4), (11, 6)]]
    cases += [(half_sum_tree(p, qq), (sqrt_of(p) + sqrt_of(qq)) / 2, None) for p, qq in [(8, 4), (13, 9)]]
    for out, alpha, k in cases:
        assert check_eigen_exact(out.tree, alpha, out.phi).ok
        lo, hi = spectral_radius_numeric(out.tree)
        a_lo, a_hi = alpha.approx(Fraction(1, 10**12))
        assert lo - Fraction(1, 10**9) <= a_hi and a_lo <= hi + Fraction(1, 10**9)
        if k is not None and out.tree.n <= 200:
            assert check_is_sqrt_k(out.tree, k).ok
