"""Trees, weighted directed trees, and certificate materialization."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .alg import AlgReal
from .wset import Certificate, WContext, check_certificate, check_step

DEFAULT_NODE_BUDGET = 10**6


@dataclass(frozen=True)
class Tree:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 1:
            raise ValueError("a tree has at least one vertex")
        if len(edges) != self.n - 1:
            raise ValueError(f"{self.n} vertices need {self.n - 1} edges, got {len(edges)}")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edge")
        for u, v in edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge ({u}, {v})")
        seen = {0}
        todo = [0]
        while todo:
            u = todo.pop()
            for w in self.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != self.n:
            raise ValueError("graph is not connected")

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def bfs_parents(self, root: int = 0) -> tuple[list[int], list[int]]:
        """BFS order from ``root`` and parent array (``-1`` at the root)."""
        parent = [-1] * self.n
        order = [root]
        seen = [False] * self.n
        seen[root] = True
        for u in order:
            for w in self.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    order.append(w)
        return order, parent

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> Tree:
        return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))

    @classmethod
    def path(cls, n: int) -> Tree:
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> Tree:
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


@dataclass(frozen=True)
class WeightedDiTree:
    """Directed tree with unique source ``root`` and vertex labels ``omega``."""

    n: int
    parent: tuple[int, ...]
    omega: tuple[AlgReal, ...]
    root: int = 0

    @cached_property
    def children(self) -> list[list[int]]:
        kids = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return kids

    def out_degree(self, v: int) -> int:
        return len(self.children[v])

    def to_json(self) -> dict:
        tree = to_undirected(self)
        out = tree.to_json()
        out["root"] = self.root
        out["parent"] = {str(v): p for v, p in enumerate(self.parent) if p >= 0}
        out["omega"] = {str(v): w.to_json() for v, w in enumerate(self.omega)}
        return out

    @classmethod
    def from_json(cls, obj: dict) -> WeightedDiTree:
        n = int(obj["n"])
        parent = [-1] * n
        for v, p in obj["parent"].items():
            parent[int(v)] = int(p)
        omega = [None] * n
        for v, w in obj["omega"].items():
            omega[int(v)] = AlgReal.from_json(w)
        if any(w is None for w in omega):
            raise ValueError("omega must label every vertex")
        root = int(obj["root"])
        if parent[root] != -1 or sum(p == -1 for p in parent) != 1:
            raise ValueError("root must be the only vertex without a parent")
        return cls(n, tuple(parent), tuple(omega), root)


class BudgetExceeded(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"unfolded tree has {size} vertices, budget is {budget}")
        self.size = size
        self.budget = budget


def unfolded_size(cert: Certificate) -> int:
    """Vertex count of the unfolded tree, computed on the DAG."""
    size: dict[int, int] = {}
    for v in cert.topological_order():
        size[v] = 1 + sum(size[c] for c in cert.nodes[v].children)
    return size[cert.root]


def materialize(cert: Certificate, ctx: WContext, node_budget: int = DEFAULT_NODE_BUDGET,
                check: bool = True) -> WeightedDiTree:
    """Unfold a certificate into a member of the weighted directed tree family.

    Vertices are numbered in preorder; children follow certificate storage order.
    """
    if check:
        verdict = check_certificate(ctx, cert)
        if not verdict.ok:
            raise ValueError(f"invalid certificate: {verdict.summary()}")
    size = unfolded_size(cert)
    if size > node_budget:
        raise BudgetExceeded(size, node_budget)
    parent: list[int] = []
    omega: list[AlgReal] = []
    stack = [(cert.root, -1)]
    while stack:
        node, par = stack.pop()
        vid = len(parent)
        parent.append(par)
        omega.append(cert.nodes[node].value)
        for c in reversed(cert.nodes[node].children):
            stack.append((c, vid))
    return WeightedDiTree(len(parent), tuple(parent), tuple(omega), 0)


def to_undirected(w: WeightedDiTree) -> Tree:
    return Tree(w.n, tuple((p, v) for v, p in enumerate(w.parent) if p >= 0))


@dataclass
class DiTreeReport:
    ok: bool
    problems: list[tuple[int, str]]


def validate_ditree(w: WeightedDiTree, ctx: WContext) -> DiTreeReport:
    """Check the labeling rule and out-degree bounds vertex by vertex."""
    problems = []
    alpha = ctx.alpha
    cache: dict[int, AlgReal] = {}

    def inv(x: AlgReal) -> AlgReal:
        k = id(x)
        if k not in cache:
            cache[k] = x.invert()
        return cache[k]

    for v in range(w.n):
        kids = w.children[v]
        om = w.omega[v]
        if v != w.root and om.sign() <= 0:
            problems.append((v, "omega must be positive off the root"))
            continue
        if not kids:
            if om != alpha:
                problems.append((v, "sink label is not alpha"))
            continue
        if any(w.omega[c].sign() <= 0 for c in kids):
            continue
        expect = alpha - sum((inv(w.omega[c]) for c in kids), AlgReal.rational(0))
        if expect != om:
            problems.append((v, f"label {om} != alpha - sum of reciprocals = {expect}"))
        if ctx.r is not None:
            cap = ctx.r if (v == w.root and om.is_zero()) else ctx.r - 1
            if len(kids) > cap:
                problems.append((v, f"out-degree {len(kids)} exceeds {cap}"))
    return DiTreeReport(not problems, problems)


class ZeroLabelError(ValueError):
    pass


def phi_from_omega(w: WeightedDiTree) -> list[AlgReal]:
    """Positive vector with ``phi(root) = 1`` and ``phi(child) = phi(parent) / omega(child)``."""
    phi: list[Optional[AlgReal]] = [None] * w.n
    phi[w.root] = AlgReal.rational(1)
    inv_cache: dict[int, AlgReal] = {}
    prod_cache: dict[tuple[int, int], AlgReal] = {}
    todo = deque([w.root])
    while todo:
        u = todo.popleft()
        for c in w.children[u]:
            om = w.omega[c]
            if om.sign() <= 0:
                raise ZeroLabelError(f"vertex {c} has non-positive label {om}")
            key = (id(phi[u]), id(om))
            if key not in prod_cache:
                if id(om) not in inv_cache:
                    inv_cache[id(om)] = om.invert()
                prod_cache[key] = phi[u] * inv_cache[id(om)]
            phi[c] = prod_cache[key]
            todo.append(c)
    return phi


class EigenViolation(ValueError):
    def __init__(self, vertex: int, residual: AlgReal):
        super().__init__(f"eigen-equation fails at vertex {vertex} (residual {residual})")
        self.vertex = vertex
        self.residual = residual


@dataclass
class RelabelResult:
    ditree: WeightedDiTree
    verdicts: dict[int, str]

    @property
    def ok(self) -> bool:
        return all(v == "ok" for v in self.verdicts.values())


def relabel_ratios(tree: Tree, phi, root: int, alpha: AlgReal, r: Optional[int] = None) -> RelabelResult:
    """Orient ``tree`` away from ``root`` and label each edge target by the ratio
    ``phi(parent) / phi(child)``; the root gets ``alpha - sum(1/label(child))``.

    ``phi`` must satisfy the eigen-equation at every vertex other than the root;
    at the root the residual is ``label(root) * phi(root)``, so the root label is
    0 exactly when the equation holds there too.  Every label is re-derived as a
    closure step under ``r`` (default: the maximum degree).
    """
    alpha = AlgReal.coerce(alpha)
    phi = [AlgReal.coerce(x) for x in phi]
    adj = tree.adjacency
    for u in range(tree.n):
        if phi[u].sign() <= 0:
            raise ValueError(f"phi({u}) is not positive")
        if u == root:
            continue
        res = alpha * phi[u] - sum((phi[x] for x in adj[u]), AlgReal.rational(0))
        if not res.is_zero():
            raise EigenViolation(u, res)
    order, parent = tree.bfs_parents(root)
    omega: list[Optional[AlgReal]] = [None] * tree.n
    for v in order:
        if v != root:
            omega[v] = phi[parent[v]] / phi[v]
    ctx = WContext(alpha, tree.max_degree if r is None else r)
    kids = [[] for _ in range(tree.n)]
    for v in order:
        if v != root:
            kids[parent[v]].append(v)
    if kids[root]:
        omega[root] = alpha - sum((omega[c].invert() for c in kids[root]), AlgReal.rational(0))
    else:
        omega[root] = alpha
    verdicts = {}
    for v in order:
        if not kids[v]:
            verdicts[v] = "ok" if omega[v] == alpha else "sink label is not alpha"
            continue
        res = check_step(ctx, [omega[c] for c in kids[v]])
        if not res.ok:
            verdicts[v] = res.code
        elif res.beta != omega[v]:
            verdicts[v] = "value-mismatch"
        else:
            verdicts[v] = "ok"
    w = WeightedDiTree(tree.n, tuple(parent), tuple(omega), root)
    return RelabelResult(w, verdicts)


def to_dot(obj, labels=None, name: str = "T") -> str:
    """Graphviz text; a ``WeightedDiTree`` renders as a digraph labeled by omega."""
    lines = []
    if isinstance(obj, WeightedDiTree):
        labels = labels if labels is not None else obj.omega
        lines.append(f"digraph {name} {{")
        edge_fmt = "  {0} -> {1};"
        edges = [(p, v) for v, p in enumerate(obj.parent) if p >= 0]
        n = obj.n
    else:
        lines.append(f"graph {name} {{")
        edge_fmt = "  {0} -- {1};"
        edges = list(obj.edges)
        n = obj.n
    for v in range(n):
        text = f"{v}" if labels is None else f"{v}: {labels[v]}"
        lines.append(f'  {v} [label="{text}"];')
    for u, v in edges:
        lines.append(edge_fmt.format(u, v))
    lines.append("}")
    return "\n".join(lines) + "\n"
