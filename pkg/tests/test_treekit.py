from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectree.alg import AlgReal, sqrt_of
from spectree.chains import sqrt_tree, zero_certificate
from spectree.spectra import check_eigen_exact
from spectree.treekit import (BudgetExceeded, EigenViolation, Tree, WeightedDiTree, ZeroLabelError,
                              materialize, phi_from_omega, relabel_ratios, to_dot, to_undirected,
                              unfolded_size, validate_ditree)
from spectree.wset import Certificate, Node, WContext

from test_wset import branching_fixture, chain_fixture

R2 = sqrt_of(2)


def q(x) -> AlgReal:
    return AlgReal.rational(Fraction(x))


def test_tree_validation():
    Tree(1, ())
    Tree.path(5)
    with pytest.raises(ValueError):
        Tree(3, ((0, 1),))
    with pytest.raises(ValueError):
        Tree(3, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        Tree(4, ((0, 1), (1, 0), (2, 3)))
    with pytest.raises(ValueError):
        Tree(4, ((0, 1), (1, 2), (0, 2)))
    with pytest.raises(ValueError):
        Tree(2, ((0, 0),))
    with pytest.raises(ValueError):
        Tree(2, ((0, 2),))


def test_tree_json_round_trip():
    t = Tree(4, ((0, 1), (1, 2), (1, 3)))
    assert Tree.from_json(json.loads(json.dumps(t.to_json()))) == t
    assert t.max_degree == 3


def test_materialize_branching_fixture():
    ctx, cert = branching_fixture()
    w = materialize(cert, ctx)
    assert w.omega == (q(Fraction(1, 2)), q(1), q(2), q(2), q(2))
    t = to_undirected(w)
    assert t.degrees() == [2, 3, 1, 1, 1]
    assert validate_ditree(w, ctx).ok


def test_materialize_chain_fixture_and_sizes():
    ctx, cert = chain_fixture()
    assert unfolded_size(cert) == 6
    w = materialize(cert, ctx)
    assert w.n == 6
    assert to_undirected(w).max_degree <= 3
    assert validate_ditree(w, ctx).ok


def test_materialize_leaf_and_budget():
    ctx = WContext(R2, 2)
    w = materialize(Certificate([Node(R2)], 0), ctx)
    assert w.n == 1 and w.omega == (R2,)
    assert to_undirected(w) == Tree(1, ())
    cert, ctx = zero_certificate(11, 6)
    with pytest.raises(BudgetExceeded) as info:
        materialize(cert, ctx, node_budget=100)
    assert info.value.size == unfolded_size(cert) == 7315


def test_materialize_rejects_invalid():
    ctx, cert = branching_fixture()
    cert.nodes[0] = Node(q(1), (1, 2))
    with pytest.raises(ValueError):
        materialize(cert, ctx)


def test_shared_child_unfolding_size():
    cert, ctx = zero_certificate(5, 3)
    inner = cert.nodes[cert.root].children[0]
    sub = Certificate(cert.nodes, inner)
    assert unfolded_size(cert) == 1 + 3 * unfolded_size(sub)


def test_validate_ditree_reports_problems():
    ctx, cert = branching_fixture()
    w = materialize(cert, ctx)
    bad = WeightedDiTree(w.n, w.parent, (q(1),) + w.omega[1:], 0)
    assert not validate_ditree(bad, ctx).ok
    assert not validate_ditree(w, ctx.with_r(2)).ok


def test_phi_examples():
    w = WeightedDiTree(1, (-1,), (R2,))
    assert phi_from_omega(w) == [1]
    p3 = WeightedDiTree(3, (-1, 0, 0), (q(0), R2, R2))
    phi = phi_from_omega(p3)
    assert phi == [1, R2 / 2, R2 / 2]
    assert check_eigen_exact(to_undirected(p3), R2, phi).ok
    with pytest.raises(ZeroLabelError):
        phi_from_omega(WeightedDiTree(2, (-1, 0), (q(1), q(0))))


def test_relabel_examples():
    p3 = Tree.path(3)
    res = relabel_ratios(p3, [R2 / 2, q(1), R2 / 2], 1, R2)
    assert res.ok
    assert res.ditree.omega[0] == R2 and res.ditree.omega[2] == R2
    assert res.ditree.omega[1] == 0
    star = Tree.star(4)
    res = relabel_ratios(star, [q(1)] + [q(Fraction(1, 2))] * 4, 0, 2)
    assert res.ok and res.ditree.omega == (q(0),) + (q(2),) * 4
    with pytest.raises(EigenViolation):
        relabel_ratios(p3, [q(1), q(2), q(1)], 0, 2)
    # a violation at the root shows up as a nonzero root label
    res = relabel_ratios(p3, [q(1), q(2), q(1)], 1, 2)
    # leaves get 2/1, the root 2 - 2*(1/2) = 1; residual 2*2 - 2 = 2 = label * phi(root)
    assert res.ditree.omega[1] == 1


@pytest.mark.parametrize("make", [branching_fixture, chain_fixture])
def test_relabel_round_trips_worked_fixtures(make):
    ctx, cert = make()
    w = materialize(cert, ctx)
    res = relabel_ratios(to_undirected(w), phi_from_omega(w), w.root, ctx.alpha, r=ctx.r)
    assert res.ok
    assert res.ditree.omega == w.omega
    assert res.ditree.parent == w.parent


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 11).flatmap(lambda k: st.tuples(st.just(k), st.integers(k // 4 + 2, k))))
def test_synthesized_round_trip(kr):
    k, r = kr
    cert, ctx = zero_certificate(k, r)
    if unfolded_size(cert) > 20000:
        return
    out = sqrt_tree(k, r)
    w = out.ditree
    assert validate_ditree(w, ctx).ok
    assert out.tree.max_degree <= r
    assert check_eigen_exact(out.tree, ctx.alpha, out.phi).ok
    res = relabel_ratios(out.tree, out.phi, w.root, ctx.alpha)
    assert res.ok and res.ditree.omega == w.omega
    assert unfolded_size(cert) == w.n


def test_ditree_json_round_trip():
    out = sqrt_tree(5, 3)
    obj = json.loads(json.dumps(out.ditree.to_json()))
    w = WeightedDiTree.from_json(obj)
    assert w == out.ditree
    assert Tree.from_json(obj) == out.tree


def test_to_dot():
    ctx, cert = branching_fixture()
    w = materialize(cert, ctx)
    dot = to_dot(w)
    assert dot.startswith("digraph") and "0 -> 1;" in dot and 'label="0: 1/2"' in dot
    dot = to_dot(Tree.path(3), labels=[R2, 1, R2])
    assert dot.startswith("graph") and "0 -- 1;" in dot and "sqrt(2)" in dot
