"""Spectral verification for trees, all in exact arithmetic.

Two independent routes decide the spectral radius of a tree:

* ``check_eigen_exact`` tests a strictly positive vector against the eigen
  equation.  A positive eigenvector exists only for the largest eigenvalue of a
  connected graph, so a pass certifies ``rho == alpha``.
* ``eigen_counts`` diagonalizes ``A - xI`` along the tree (Jacobs-Trevisan) and
  counts eigenvalues above, at and below ``x``.  ``spectral_radius_numeric``
  bisects with it.

``char_poly`` and Sturm sequences back ``check_is_sqrt_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .alg import AlgReal, sqrt_of, squarefree_decompose
from .treekit import Tree

Number = Union[int, Fraction, AlgReal]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = "ok"
    vertex: Optional[int] = None
    residual: Optional[AlgReal] = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason}
        if self.vertex is not None:
            out["vertex"] = self.vertex
        if self.residual is not None:
            out["residual"] = str(self.residual)
        return out


def check_eigen_exact(tree: Tree, alpha: Number, phi) -> Verdict:
    """``alpha * phi(u) == sum of phi over neighbours`` at every vertex, with ``phi > 0``."""
    alpha = AlgReal.coerce(alpha)
    if alpha.sign() <= 0:
        return Verdict(False, "alpha-not-positive")
    if len(phi) != tree.n:
        return Verdict(False, "phi-length")
    phi = [AlgReal.coerce(x) for x in phi]
    signs: dict[int, int] = {}
    for u, x in enumerate(phi):
        s = signs.get(id(x))
        if s is None:
            s = signs[id(x)] = x.sign()
        if s <= 0:
            return Verdict(False, "phi-not-positive", u, x)
    zero = AlgReal.rational(0)
    # vertices whose own and neighbouring phi entries are the same objects share a residual
    seen: dict[tuple, AlgReal] = {}
    for u, nbrs in enumerate(tree.adjacency):
        key = (id(phi[u]),) + tuple(sorted(id(phi[w]) for w in nbrs))
        res = seen.get(key)
        if res is None:
            res = seen[key] = alpha * phi[u] - sum((phi[w] for w in nbrs), zero)
        if not res.is_zero():
            return Verdict(False, "eigen-equation", u, res)
    return Verdict(True)


# integer polynomials, coefficients in ascending order

@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c) or (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            text += f" {s} {b}"
        return text


def _pmul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def char_poly(tree: Tree, root: int = 0) -> IntPoly:
    """``det(xI - A)`` via the rooted recurrence

    ``a(v) = x * prod a(c) - sum_c b(c) * prod_{c' != c} a(c')``, ``b(v) = prod a(c)``,
    where ``a`` is the polynomial of the subtree and ``b`` that of the subtree minus ``v``.
    """
    order, parent = tree.bfs_parents(root)
    kids = [[] for _ in range(tree.n)]
    for v in order[1:]:
        kids[parent[v]].append(v)
    a: dict[int, list] = {}
    b: dict[int, list] = {}
    for v in reversed(order):
        cs = kids[v]
        prod = [1]
        for c in cs:
            prod = _pmul(prod, a[c])
        total = _pmul([0, 1], prod)
        for i, c in enumerate(cs):
            rest = [1]
            for j, c2 in enumerate(cs):
                if j != i:
                    rest = _pmul(rest, a[c2])
            total = _padd(total, [-x for x in _pmul(b[c], rest)])
        a[v], b[v] = total, prod
        for c in cs:
            del a[c], b[c]
    return IntPoly(tuple(a[root]))


# eigenvalue location by diagonalization along the tree

def _rooted_classes(tree: Tree) -> tuple[list[tuple[int, ...]], int]:
    """Isomorphism classes of rooted subtrees (rooted at 0), children-first.

    Returns ``(classes, root_class)`` where ``classes[i]`` lists child class ids.
    """
    order, parent = tree.bfs_parents(0)
    kids = [[] for _ in range(tree.n)]
    for v in order[1:]:
        kids[parent[v]].append(v)
    ids: dict[tuple[int, ...], int] = {}
    classes: list[tuple[int, ...]] = []
    cls = [0] * tree.n
    for v in reversed(order):
        key = tuple(sorted(cls[c] for c in kids[v]))
        if key not in ids:
            ids[key] = len(classes)
            classes.append(key)
        cls[v] = ids[key]
    return classes, cls[0]


def _classes_for(tree: Tree):
    got = tree.__dict__.get("_rooted_classes")
    if got is None:
        got = _rooted_classes(tree)
        tree.__dict__["_rooted_classes"] = got
    return got


@dataclass(frozen=True)
class EigenCounts:
    above: int
    equal: int
    below: int


def eigen_counts(tree: Tree, x: Number) -> EigenCounts:
    """Number of adjacency eigenvalues greater than, equal to and less than ``x``.

    Diagonalizes ``A - xI`` bottom-up; a vertex with a zero child takes value
    ``-1/2``, that child ``2``, and the vertex is cut from its parent.  Subtrees
    of the same shape share one computation.
    """
    if isinstance(x, int):
        x = Fraction(x)
    classes, root_cls = _classes_for(tree)
    neg_x = -x
    # per class: (diagonal value at root, detached, above, equal, below)
    res: list[tuple] = []
    for kids in classes:
        above = equal = below = 0
        attached = []
        for c in kids:
            val, det, ab, eq, be = res[c]
            above += ab
            equal += eq
            below += be
            if not det:
                attached.append(val)
        zero_child = any(_is_zero(v) for v in attached)
        if zero_child:
            equal -= 1
            above += 1
            val = Fraction(-1, 2)
            detached = True
        else:
            val = neg_x
            for v in attached:
                val = val - 1 / v if not isinstance(v, AlgReal) else val - v.invert()
            detached = False
        s = _sign(val)
        if s > 0:
            above += 1
        elif s == 0:
            equal += 1
        else:
            below += 1
        res.append((val, detached, above, equal, below))
    _, _, ab, eq, be = res[root_cls]
    return EigenCounts(ab, eq, be)


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, AlgReal) else v == 0


def _sign(v) -> int:
    if isinstance(v, AlgReal):
        return v.sign()
    return (v > 0) - (v < 0)


def spectral_radius_numeric(tree: Tree, tol=Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
    """Rational interval of width at most ``tol`` containing the largest eigenvalue.

    Bisection on ``[0, max degree]``; the upper end is the maximum row sum.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if tree.n == 1:
        return Fraction(0), Fraction(0)
    lo, hi = Fraction(0), Fraction(tree.max_degree)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if eigen_counts(tree, mid).above > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


# Sturm sequences over the integers

def _pderiv(p: list) -> list:
    return [i * p[i] for i in range(1, len(p))] or [0]


def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _primitive(p: list) -> list:
    from math import gcd
    g = 0
    for c in p:
        g = gcd(g, c)
    return [c // g for c in p] if g > 1 else p


def _prem(a: list, b: list) -> list:
    """Remainder of ``lc(b)^e * a`` by ``b`` with ``e`` even, so signs are kept."""
    a, b = _trim(a), _trim(b)
    db = len(b) - 1
    lb = b[-1]
    steps = 0
    while len(a) - 1 >= db and any(a):
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        a = _trim(a[:-1] if len(a) > 1 else a)
        steps += 1
    if steps % 2 and lb < 0:
        a = [-c for c in a]
    return a


def sturm_sequence(p: IntPoly) -> list[list[int]]:
    seq = [list(p.coeffs), _trim(_pderiv(list(p.coeffs)))]
    while len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append(_primitive([-c for c in r]))
    return seq


def _sign_changes(signs: list[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _eval_alg(p: list, x: AlgReal) -> AlgReal:
    acc = AlgReal.rational(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def roots_above(p: IntPoly, a: AlgReal) -> int:
    """Distinct real roots of ``p`` in ``(a, inf)``; ``a`` must not be a root."""
    seq = sturm_sequence(p)
    at_a = [_eval_alg(q, a).sign() for q in seq]
    at_inf = [(q[-1] > 0) - (q[-1] < 0) for q in seq]
    return _sign_changes(at_a) - _sign_changes(at_inf)


def check_is_sqrt_k(tree: Tree, k: int) -> Verdict:
    """Exact test that ``sqrt(k)`` is the largest root of the characteristic polynomial."""
    if k < 1:
        raise ValueError("k must be positive")
    p = list(char_poly(tree).coeffs)
    c, d = squarefree_decompose(k)
    s = sqrt_of(k)
    if d == 1:
        minimal = [-c, 1]
    else:
        minimal = [-k, 0, 1]
    if not _eval_alg(p, s).is_zero():
        return Verdict(False, "not-a-root")
    g = p
    while True:
        q, r = _divmod_exact(g, minimal)
        if any(r):
            break
        g = q
    if roots_above(IntPoly(tuple(g)), s) > 0:
        return Verdict(False, "larger-root")
    return Verdict(True)


def _divmod_exact(a: list, b: list) -> tuple[list, list]:
    # b monic
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], a
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        coef = a[i + db]
        q[i] = coef
        for j, bc in enumerate(b):
            a[i + j] -= coef * bc
    return _trim(q), _trim(a[:db] or [0])


# the bound (1/4) rho^2 + 1 < Delta <= rho^2 for trees with at least 3 vertices

@dataclass
class BoundsVerdict:
    ok: bool
    delta: int
    rho_interval: tuple[Fraction, Fraction]
    upper_ok: bool
    lower_ok: bool
    margins: dict = field(default_factory=dict)


class OutOfScope(ValueError):
    pass


def check_bounds(tree: Tree, tol=Fraction(1, 10**6)) -> BoundsVerdict:
    """Decide both inequalities exactly by counting eigenvalues at ``sqrt(Delta)``
    and ``2*sqrt(Delta-1)``; a rho interval is returned for reporting."""
    if tree.n < 3:
        raise OutOfScope("the bound needs at least 3 vertices")
    delta = tree.max_degree
    at_top = eigen_counts(tree, sqrt_of(delta))
    upper_ok = at_top.above + at_top.equal >= 1
    at_low = eigen_counts(tree, 2 * sqrt_of(delta - 1))
    lower_ok = at_low.above + at_low.equal == 0
    lo, hi = spectral_radius_numeric(tree, tol)
    mid = (lo + hi) / 2
    margins = {
        "rho2_minus_delta": float(mid * mid - delta),
        "delta_minus_quarter_rho2_minus_1": float(delta - mid * mid / 4 - 1),
    }
    return BoundsVerdict(upper_ok and lower_ok, delta, (lo, hi), upper_ok, lower_ok, margins)
