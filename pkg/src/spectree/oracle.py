"""Ground truth at small scale: every tree up to 12 vertices, brute-force
characteristic polynomials, and sweeps of the degree/radius bounds."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .spectra import IntPoly, check_bounds, check_is_sqrt_k
from .treekit import Tree

MAX_N = 12
PRUFER_MAX_N = 7


# canonical forms

def _rooted(adj, root):
    parent = [-1] * len(adj)
    parent[root] = root
    order = [root]
    for u in order:
        for w in adj[u]:
            if parent[w] == -1:
                parent[w] = u
                order.append(w)
    parent[root] = -1
    return order, parent


def _centroids(adj) -> list[int]:
    n = len(adj)
    order, parent = _rooted(adj, 0)
    size = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    best, out = n, []
    for v in range(n):
        heaviest = n - size[v]
        for w in adj[v]:
            if w != parent[v]:
                heaviest = max(heaviest, size[w])
        if heaviest < best:
            best, out = heaviest, [v]
        elif heaviest == best:
            out.append(v)
    return out


def _ahu(adj, root: int) -> str:
    order, parent = _rooted(adj, root)
    code = [""] * len(adj)
    for v in reversed(order):
        kids = sorted(code[w] for w in adj[v] if w != parent[v])
        code[v] = "(" + "".join(kids) + ")"
    return code[root]


def _code_of_adjacency(adj) -> str:
    return min(_ahu(adj, c) for c in _centroids(adj))


def centroids(tree: Tree) -> list[int]:
    """One or two vertices minimizing the largest component left after removal."""
    return _centroids(tree.adjacency)


def canonical_code(tree: Tree) -> str:
    """Isomorphism invariant that separates non-isomorphic trees."""
    return _code_of_adjacency(tree.adjacency)


def tree_from_code(code: str) -> Tree:
    """Tree whose vertices are numbered in the preorder of a parenthesis code."""
    edges = []
    stack: list[int] = []
    n = 0
    for ch in code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], n))
            stack.append(n)
            n += 1
        else:
            stack.pop()
    return Tree(n, tuple(edges))


def canonical_form(tree: Tree) -> Tree:
    return tree_from_code(canonical_code(tree))


# enumeration

def _prufer_edges(seq, n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = degree.index(1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u = degree.index(1)
    edges.append((u, degree.index(1, u + 1)))
    return edges


def prufer_decode(seq, n: int) -> Tree:
    """Labeled tree on ``n >= 2`` vertices from a Prüfer sequence of length ``n - 2``."""
    return Tree(n, tuple(_prufer_edges(seq, n)))


def _by_prufer(n: int) -> set[str]:
    codes = set()
    for seq in itertools.product(range(n), repeat=n - 2):
        adj = [[] for _ in range(n)]
        for u, v in _prufer_edges(seq, n):
            adj[u].append(v)
            adj[v].append(u)
        codes.add(_code_of_adjacency(adj))
    return codes


def _by_leaf_extension(prev: list[Tree]) -> set[str]:
    # every tree on n vertices loses a leaf to some tree on n - 1 vertices
    codes = set()
    for t in prev:
        for v in range(t.n):
            adj = [list(a) for a in t.adjacency] + [[v]]
            adj[v].append(t.n)
            codes.add(_code_of_adjacency(adj))
    return codes


@dataclass(frozen=True)
class TreeCatalog:
    n: int
    trees: tuple[Tree, ...]

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)


@lru_cache(maxsize=None)
def enumerate_trees(n: int) -> TreeCatalog:
    """All trees on ``n`` vertices up to isomorphism, sorted by canonical code."""
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise ValueError(f"n must be an integer in [1, {MAX_N}], got {n!r}")
    if n == 1:
        codes = {"()"}
    elif n == 2:
        codes = {"(())"}
    elif n <= PRUFER_MAX_N:
        codes = _by_prufer(n)
    else:
        codes = _by_leaf_extension(list(enumerate_trees(n - 1)))
    return TreeCatalog(n, tuple(tree_from_code(c) for c in sorted(codes)))


# brute-force characteristic polynomial

def charpoly_bruteforce(tree: Tree) -> IntPoly:
    """``det(xI - A)`` by expanding over permutations with nonzero terms.

    A permutation contributes only if it sends each vertex to itself or a
    neighbour; its term is ``sign * (-1)^moved * x^fixed``.
    """
    n = tree.n
    adj = [set(a) for a in tree.adjacency]
    coeffs = [0] * (n + 1)
    image = [-1] * n
    used = [False] * n

    def sign_of(perm):
        seen = [False] * n
        s = 1
        for i in range(n):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    s = -s
        return s

    def place(i):
        if i == n:
            fixed = sum(1 for v in range(n) if image[v] == v)
            coeffs[fixed] += sign_of(image) * (-1) ** (n - fixed)
            return
        for j in [i, *sorted(adj[i])]:
            if not used[j]:
                used[j] = True
                image[i] = j
                place(i + 1)
                used[j] = False
        image[i] = -1

    place(0)
    return IntPoly(tuple(coeffs))


# sweeps

def _counts(n_max: int, n_min: int = 1) -> list[int]:
    return [len(enumerate_trees(n)) for n in range(n_min, n_max + 1)]


def scan_bounds(n_max: int) -> dict:
    """Check ``rho^2/4 + 1 < Delta <= rho^2`` on every tree with ``3 <= n <= n_max``."""
    if not 3 <= n_max <= MAX_N:
        raise ValueError(f"n_max must be in [3, {MAX_N}]")
    violations = []
    total = 0
    tightest = None
    for n in range(3, n_max + 1):
        for t in enumerate_trees(n):
            total += 1
            v = check_bounds(t)
            if not v.ok:
                violations.append({"tree": t.to_json(), "delta": v.delta,
                                   "upper_ok": v.upper_ok, "lower_ok": v.lower_ok})
            slack = v.margins["delta_minus_quarter_rho2_minus_1"]
            if tightest is None or slack < tightest["slack"]:
                tightest = {"slack": slack, "tree": t.to_json(), "delta": v.delta}
    return {"n_max": n_max, "counts": _counts(n_max, 3), "total": total,
            "violations": violations, "tightest_lower": tightest}


def scan_sqrt_k(n_max: int, k_max: int) -> dict:
    """Find trees with ``rho = sqrt(k)`` and test ``k/4 + 1 < Delta <= k`` on each hit."""
    if not 1 <= n_max <= MAX_N:
        raise ValueError(f"n_max must be in [1, {MAX_N}]")
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    hits, violations = [], []
    for n in range(1, n_max + 1):
        for t in enumerate_trees(n):
            if n == 1:
                continue
            for k in range(2, k_max + 1):
                if check_is_sqrt_k(t, k).ok:
                    delta = t.max_degree
                    hit = {"k": k, "delta": delta, "tree": t.to_json()}
                    hits.append(hit)
                    if not (k + 4 < 4 * delta and delta <= k):
                        violations.append(hit)
    realized = sorted({(h["k"], h["delta"]) for h in hits})
    return {"n_max": n_max, "k_max": k_max, "counts": _counts(n_max), "violations": violations,
            "hits": hits, "realized": [list(p) for p in realized]}
