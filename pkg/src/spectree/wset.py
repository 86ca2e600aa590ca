"""Membership certificates for the recursive sets W_r(alpha).

``W_r(alpha)`` contains ``alpha`` and every ``beta = alpha - sum(1/q_i)`` with
all ``q_i`` positive members, ``beta >= 0`` and ``s <= r - ceil(beta/(beta+1))``.
A certificate is a derivation DAG for one member.  ``r=None`` encodes the
unbounded set ``W(alpha)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .alg import AlgReal

INF = None


@dataclass(frozen=True)
class WContext:
    alpha: AlgReal
    r: Optional[int] = INF

    def __post_init__(self):
        object.__setattr__(self, "alpha", AlgReal.coerce(self.alpha))
        if self.alpha.sign() <= 0:
            raise ValueError("alpha must be positive")
        if self.r is not None and (not isinstance(self.r, int) or self.r < 1):
            raise ValueError(f"r must be a positive integer or None, got {self.r!r}")

    def with_r(self, r: Optional[int]) -> WContext:
        return WContext(self.alpha, r)

    def arity_limit(self, beta: AlgReal) -> float:
        if self.r is None:
            return math.inf
        return self.r - ceil_guard(beta)


def ceil_guard(beta: AlgReal) -> int:
    """``ceil(beta/(beta+1))`` for ``beta >= 0``: 0 at zero, 1 otherwise."""
    s = AlgReal.coerce(beta).sign()
    if s < 0:
        raise ValueError("ceil_guard requires beta >= 0")
    return s


# step verdict codes
OK = "ok"
NONPOSITIVE_CHILD = "nonpositive-child"
NEGATIVE_VALUE = "negative-value"
ARITY = "arity"
VALUE_MISMATCH = "value-mismatch"
LEAF_NOT_ALPHA = "leaf-not-alpha"


@dataclass(frozen=True)
class StepResult:
    code: str
    beta: Optional[AlgReal]
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.code == OK


def check_step(ctx: WContext, children: Sequence[AlgReal]) -> StepResult:
    """Apply one closure step to ``children``; returns the verdict and ``beta``."""
    if not children:
        raise ValueError("check_step needs at least one child")
    total = AlgReal.rational(0)
    for i, q in enumerate(children):
        if q.sign() <= 0:
            return StepResult(NONPOSITIVE_CHILD, None, f"child {i} = {q} is not positive")
        total = total + q.invert()
    beta = ctx.alpha - total
    if beta.sign() < 0:
        return StepResult(NEGATIVE_VALUE, beta, f"beta = {beta} < 0")
    s = len(children)
    if s > ctx.arity_limit(beta):
        return StepResult(ARITY, beta, f"s = {s} exceeds r - ceil(beta/(beta+1)) = {ctx.arity_limit(beta)}")
    return StepResult(OK, beta)


@dataclass(frozen=True)
class Node:
    value: AlgReal
    children: tuple[int, ...] = ()


@dataclass
class Certificate:
    """Derivation DAG: ``nodes[i].children`` index into ``nodes``."""

    nodes: list[Node]
    root: int

    @property
    def root_value(self) -> AlgReal:
        return self.nodes[self.root].value

    def topological_order(self) -> list[int]:
        """Children before parents, restricted to nodes reachable from the root."""
        n = len(self.nodes)
        if not 0 <= self.root < n:
            raise CertificateStructureError(f"root {self.root} is not a node id")
        state = [0] * n  # 0 new, 1 on stack, 2 done
        order = []
        stack = [(self.root, 0)]
        state[self.root] = 1
        while stack:
            v, i = stack.pop()
            kids = self.nodes[v].children
            if i < len(kids):
                stack.append((v, i + 1))
                c = kids[i]
                if not 0 <= c < n:
                    raise CertificateStructureError(f"node {v} references missing node {c}")
                if state[c] == 1:
                    raise CertificateStructureError(f"cycle through node {c}")
                if state[c] == 0:
                    state[c] = 1
                    stack.append((c, 0))
            else:
                state[v] = 2
                order.append(v)
        return order

    def to_json(self, ctx: WContext) -> dict:
        return {
            "alpha": ctx.alpha.to_json(),
            "r": "inf" if ctx.r is None else ctx.r,
            "nodes": [{"id": i, "value": nd.value.to_json(), "children": list(nd.children)}
                      for i, nd in enumerate(self.nodes)],
            "root": self.root,
        }

    @classmethod
    def from_json(cls, obj: dict) -> tuple[WContext, Certificate]:
        r = obj["r"]
        ctx = WContext(AlgReal.from_json(obj["alpha"]), None if r == "inf" else int(r))
        nodes_by_id = {int(nd["id"]): nd for nd in obj["nodes"]}
        if sorted(nodes_by_id) != list(range(len(nodes_by_id))):
            raise CertificateStructureError("node ids must be dense from 0")
        nodes = [Node(AlgReal.from_json(nodes_by_id[i]["value"]), tuple(int(c) for c in nodes_by_id[i]["children"]))
                 for i in range(len(nodes_by_id))]
        return ctx, cls(nodes, int(obj["root"]))


class CertificateStructureError(ValueError):
    """Cycle, dangling reference or bad root."""


@dataclass
class CertificateVerdict:
    ok: bool
    root_value: Optional[AlgReal]
    failures: list[tuple[list[int], str, str]] = field(default_factory=list)
    structural: Optional[str] = None

    def summary(self) -> str:
        if self.structural:
            return f"structural error: {self.structural}"
        if self.ok:
            return f"valid, root value {self.root_value}"
        path, code, detail = self.failures[0]
        return f"invalid at node path {path}: {code} ({detail})"


def check_certificate(ctx: WContext, cert: Certificate) -> CertificateVerdict:
    """Validate every reachable node once; failures carry a root-to-node path."""
    try:
        order = cert.topological_order()
    except CertificateStructureError as exc:
        return CertificateVerdict(False, None, structural=str(exc))
    failures = []
    for v in order:
        nd = cert.nodes[v]
        if not nd.children:
            if nd.value != ctx.alpha:
                failures.append((v, LEAF_NOT_ALPHA, f"leaf value {nd.value} != alpha"))
            continue
        res = check_step(ctx, [cert.nodes[c].value for c in nd.children])
        if not res.ok:
            failures.append((v, res.code, res.detail))
        elif res.beta != nd.value:
            failures.append((v, VALUE_MISMATCH, f"stored {nd.value}, derived {res.beta}"))
    if failures:
        paths = _paths_from_root(cert)
        return CertificateVerdict(False, cert.root_value,
                                  [(paths[v], code, detail) for v, code, detail in failures])
    return CertificateVerdict(True, cert.root_value)


def _paths_from_root(cert: Certificate) -> dict[int, list[int]]:
    paths = {cert.root: [cert.root]}
    frontier = [cert.root]
    while frontier:
        nxt = []
        for v in frontier:
            for c in cert.nodes[v].children:
                if c not in paths:
                    paths[c] = paths[v] + [c]
                    nxt.append(c)
        frontier = nxt
    return paths


class CertBuilder:
    """Incrementally builds a shared-node certificate; every step is checked on entry."""

    def __init__(self, ctx: WContext):
        self.ctx = ctx
        self.nodes: list[Node] = []
        self._by_children: dict[tuple[int, ...], int] = {}
        self._leaf: Optional[int] = None

    def leaf(self) -> int:
        if self._leaf is None:
            self._leaf = len(self.nodes)
            self.nodes.append(Node(self.ctx.alpha))
        return self._leaf

    def step(self, children: Sequence[int]) -> int:
        kids = tuple(sorted(children))
        if kids in self._by_children:
            return self._by_children[kids]
        res = check_step(self.ctx, [self.nodes[c].value for c in kids])
        if not res.ok:
            raise StepRejected(res)
        idx = len(self.nodes)
        self.nodes.append(Node(res.beta, kids))
        self._by_children[kids] = idx
        return idx

    def value(self, idx: int) -> AlgReal:
        return self.nodes[idx].value

    def certificate(self, root: int) -> Certificate:
        """Certificate containing only what ``root`` reaches, ids renumbered densely."""
        full = Certificate(self.nodes, root)
        keep = full.topological_order()
        remap = {old: new for new, old in enumerate(keep)}
        nodes = [Node(self.nodes[old].value, tuple(remap[c] for c in self.nodes[old].children)) for old in keep]
        return Certificate(nodes, remap[root])


class StepRejected(ValueError):
    def __init__(self, result: StepResult):
        super().__init__(f"{result.code}: {result.detail}")
        self.result = result


# closure search

@dataclass(frozen=True)
class SearchLimits:
    max_rounds: int = 8
    max_children: int = 8
    max_values: int = 5000
    max_denominator: Optional[int] = None

    def __post_init__(self):
        for name in ("max_rounds", "max_children", "max_values"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.max_denominator is not None and self.max_denominator < 1:
            raise ValueError("max_denominator must be >= 1")


@dataclass
class SearchResult:
    found: dict[AlgReal, Certificate]
    explored: list[AlgReal]
    rounds: int
    saturated: bool

    def definitive_absent(self, target: AlgReal) -> bool:
        """True only when the explored set provably equals the whole set."""
        return self.saturated and target not in self.found


def closure_search(ctx: WContext, limits: SearchLimits = SearchLimits(), targets=(),
                   stop_when_found: bool = True) -> SearchResult:
    """Bounded least-fixpoint iteration from ``{alpha}``.

    Round ``j`` combines values known at the end of round ``j-1``.  The result
    is saturated (exactly ``W_r(alpha)``) when a round adds nothing and no cap
    cut the enumeration short.
    """
    targets = [AlgReal.coerce(t) for t in targets]
    builder = CertBuilder(ctx)
    known: dict[AlgReal, int] = {ctx.alpha: builder.leaf()}
    found: dict[AlgReal, Certificate] = {}

    def record_found():
        for t in targets:
            if t in known and t not in found:
                found[t] = builder.certificate(known[t])

    record_found()
    max_s = limits.max_children if ctx.r is None else min(ctx.r, limits.max_children)
    complete_arity = ctx.r is not None and limits.max_children >= ctx.r
    rounds = 0
    saturated = False
    while rounds < limits.max_rounds:
        if stop_when_found and targets and len(found) == len(targets):
            break
        rounds += 1
        pool = sorted((v for v in known if v.sign() > 0), key=AlgReal.sort_key, reverse=True)
        recips = [v.invert() for v in pool]
        truncated = False
        new: dict[AlgReal, tuple[int, ...]] = {}

        def extend(start: int, chosen: list[int], partial: AlgReal):
            nonlocal truncated
            for j in range(start, len(pool)):
                acc = partial + recips[j]
                if acc > ctx.alpha:
                    # later pool entries have larger reciprocals
                    break
                chosen.append(j)
                beta = ctx.alpha - acc
                if beta not in known and beta not in new and len(chosen) <= ctx.arity_limit(beta):
                    if limits.max_denominator is not None and max(c.denominator for c in beta.coords) > limits.max_denominator:
                        truncated = True
                    elif len(known) + len(new) >= limits.max_values:
                        truncated = True
                    else:
                        new[beta] = tuple(known[pool[i]] for i in chosen)
                if len(chosen) < max_s:
                    extend(j, chosen, acc)
                chosen.pop()

        extend(0, [], AlgReal.rational(0))
        for beta in sorted(new, key=AlgReal.sort_key):
            idx = builder.step(new[beta])
            known[beta] = idx
        record_found()
        if not new and not truncated and complete_arity:
            saturated = True
            break
        if truncated and len(known) >= limits.max_values:
            break
    explored = sorted(known, key=AlgReal.sort_key)
    return SearchResult(found, explored, rounds, saturated)
