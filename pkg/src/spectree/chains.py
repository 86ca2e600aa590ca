"""Explicit derivations: ``s/sqrt(k)`` in ``W_{m+2}(sqrt(k))`` and the trees they yield.

For ``k = 4m + t`` each residue ``t`` has its own family of recurrences.  They
are transcribed step by step into a shared-node certificate; each step is
run through ``check_step`` and its value compared with the closed form it is
supposed to produce, so an algebra slip aborts the build instead of
producing a wrong certificate.  Step tags name the identity being applied.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .alg import AlgReal, sqrt_of
from .spectra import check_eigen_exact
from .treekit import (DEFAULT_NODE_BUDGET, BudgetExceeded, Tree, WeightedDiTree,
                      materialize, phi_from_omega, to_undirected)
from .wset import (CertBuilder, Certificate, Node, StepRejected, WContext,
                   check_certificate)


class ChainError(ValueError):
    pass


class RangeError(ChainError):
    """Requested ``s`` lies outside the range the construction covers."""


class InfeasibleError(ChainError):
    """No tree exists: the degree is outside ``(k/4 + 1, k]``."""


class TranscriptionError(ChainError):
    """A transcribed step failed its guard or produced an unexpected value."""

    def __init__(self, tag: str, message: str):
        super().__init__(f"[{tag}] {message}")
        self.tag = tag


class DivisibilityError(ChainError):
    pass


class OrderingError(ChainError):
    pass


class DegenerateError(ChainError):
    pass


def r_min(k: int) -> int:
    """Smallest degree ``r`` with ``k/4 + 1 < r``."""
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    return k // 4 + 2


def decompose(k: int) -> tuple[int, int]:
    return divmod(k, 4)


def base_context(k: int) -> WContext:
    """Context ``(sqrt(k), floor(k/4) + 2)`` under which ratio certificates are valid."""
    return WContext(sqrt_of(k), r_min(k))


class _Chain:
    """Shared builder state for one ``k``; nodes are created lazily and memoized."""

    def __init__(self, k: int):
        self.k = k
        self.m, self.t = decompose(k)
        self.alpha = sqrt_of(k)
        self.ctx = base_context(k)
        self.b = CertBuilder(self.ctx)
        self._memo: dict[tuple, int] = {}

    def ratio(self, num, den=1) -> AlgReal:
        """``(num/den) / sqrt(k)``."""
        return self.alpha * Fraction(num, den * self.k)

    def scaled_alpha(self, num, den=1) -> AlgReal:
        return self.alpha * Fraction(num, den)

    def leaf(self) -> int:
        return self.b.leaf()

    def step(self, parts, expect: AlgReal, tag: str) -> int:
        kids = [node for count, node in parts for _ in range(count)]
        if not kids:
            raise TranscriptionError(tag, f"step has no children; expected value {expect}")
        try:
            idx = self.b.step(kids)
        except StepRejected as exc:
            raise TranscriptionError(tag, str(exc)) from exc
        got = self.b.value(idx)
        if got != expect:
            raise TranscriptionError(tag, f"derived {got}, closed form gives {expect}")
        return idx

    def memo(self, key, make):
        if key not in self._memo:
            self._memo[key] = make()
        return self._memo[key]

    # s/sqrt(k) = sqrt(k) - (k - s)/sqrt(k): k - s copies of the leaf
    def base(self, s: int) -> int:
        m, t = self.m, self.t
        ok = (m >= 1 and 3 * m + t - 1 <= s <= 4 * m + t) or (m == 0 and t in (2, 3) and 2 <= s <= t)
        if not ok:
            raise RangeError(f"s={s} outside the direct range for k={self.k}")
        if s == self.k:
            return self.leaf()
        return self.memo(("base", s), lambda: self.step([(self.k - s, self.leaf())], self.ratio(s), "base"))

    def certificate(self, node: int) -> Certificate:
        return self.b.certificate(node)


class _Mod0(_Chain):
    """k = 4m, alpha = 2 sqrt(m)."""

    def __init__(self, m: int):
        super().__init__(4 * m)
        self.rm = sqrt_of(m)

    def ascend(self, i: int) -> int:
        # (i+1)/i sqrt(m); A(i+1) = 2 sqrt(m) - m / A(i)
        if i == 1:
            return self.leaf()
        m = self.m
        return self.memo(("c1", i), lambda: self.step(
            [(m, self.ascend(i - 1))], self.rm * Fraction(i + 1, i), "mod0/ascend"))

    def sqrt_m(self) -> int:
        # sqrt(m) = 2 sqrt(m) - (m+1) / ((m+1)/m sqrt(m))
        m = self.m
        return self.memo(("sqrt_m",), lambda: self.step(
            [(m + 1, self.ascend(m))], self.rm, "mod0/sqrt-m"))

    def descend(self, i: int) -> int:
        # (m-i-1)/(m-i) sqrt(m); i = 0 starts from sqrt(m)
        m = self.m
        if i == 0:
            return self.memo(("c3", 0), lambda: self.step(
                [(m + 1, self.sqrt_m())], self.rm * Fraction(m - 1, m), "mod0/descend-start"))
        return self.memo(("c3", i), lambda: self.step(
            [(m, self.descend(i - 1))], self.rm * Fraction(m - i - 1, m - i), "mod0/descend"))

    def upper(self, i: int) -> int:
        # (2m+i)/(2 sqrt(m)) for 0 <= i <= m-2
        m = self.m
        return self.memo(("c4a", i), lambda: self.step(
            [(m - i - 1, self.descend(i)), (i, self.leaf())], self.ratio(2 * m + i), "mod0/upper"))

    def two_m(self) -> int:
        return self.upper(0) if self.m >= 2 else self.sqrt_m()

    def lower(self, i: int) -> int:
        # (2m-i)/(2 sqrt(m)) for 0 <= i <= m
        m = self.m
        if i == 0:
            return self.two_m()

        def make():
            j = i - 1
            parts = []
            if m - j - 1 > 0:
                f = self.memo(("c4f", j), lambda: self.step(
                    [(m + 1, self.lower(j))], self.rm * Fraction(2 * (m - j - 1), 2 * m - j), "mod0/lower-aux"))
                parts.append((m - j - 1, f))
            parts += [(j, self.sqrt_m()), (1, self.leaf())]
            return self.step(parts, self.ratio(2 * m - j - 1), "mod0/lower")

        return self.memo(("c4b", i), make)

    def node(self, s: int) -> int:
        m = self.m
        if not m <= s <= 4 * m:
            raise RangeError(f"s={s} outside [{m}, {4 * m}] for k={self.k}")
        if s >= 3 * m - 1:
            return self.base(s)
        if s >= 2 * m:
            return self.upper(s - 2 * m) if s > 2 * m else self.two_m()
        return self.lower(2 * m - s)


class _Mod1(_Chain):
    """k = 4m + 1."""

    def __init__(self, m: int):
        super().__init__(4 * m + 1)

    def q(self, i: int) -> int:
        # Q(i) = (2i+1) m / (i sqrt(k))
        m = self.m
        if i == 1:
            return self.base(3 * m)
        return self.memo(("Q", i), lambda: self.step(
            [(m, self.b_(i - 1)), (1, self.leaf())], self.ratio((2 * i + 1) * m, i), "mod1/q"))

    def b_(self, i: int) -> int:
        # (i+1) sqrt(k) / (2i+1)
        m = self.m
        return self.memo(("b", i), lambda: self.step(
            [(m, self.q(i))], self.scaled_alpha(i + 1, 2 * i + 1), "mod1/b"))

    def upper_range(self, i: int) -> int:
        # (3m-i)/sqrt(k), 1 <= i <= m
        m = self.m
        return self.memo(("c2", i), lambda: self.step(
            [(i + 1, self.b_(i)), (m - i, self.leaf())], self.ratio(3 * m - i), "mod1/upper"))

    def p(self, i: int) -> int:
        # P(i) = (2m-i)/sqrt(k), 0 <= i <= m
        m = self.m
        if i == 0:
            return self.upper_range(m)
        if i == 1:
            def make():
                parts = []
                if m - 1 > 0:
                    c = self.step([(m + 1, self.p(0))], self.scaled_alpha(m - 1, 2 * m), "mod1/lower1-aux")
                    parts.append((m - 1, c))
                parts.append((2, self.leaf()))
                return self.step(parts, self.ratio(2 * m - 1), "mod1/lower1")
            return self.memo(("P", 1), make)
        j = i - 2

        def make():
            bb = self.step([(m + 1, self.p(j))], self.scaled_alpha(m - j - 1, 2 * m - j), "mod1/lower-aux")
            return self.step([(m - j - 1, bb), (j + 2, self.b_(j + 1))], self.ratio(2 * m - j - 2), "mod1/lower")

        return self.memo(("P", i), make)

    def node(self, s: int) -> int:
        m = self.m
        if not m <= s <= 4 * m + 1:
            raise RangeError(f"s={s} outside [{m}, {4 * m + 1}] for k={self.k}")
        if s >= 3 * m:
            return self.base(s)
        if s > 2 * m:
            return self.upper_range(3 * m - s)
        return self.p(2 * m - s)


class _Mod2(_Chain):
    """k = 4m + 2."""

    def __init__(self, m: int):
        super().__init__(4 * m + 2)

    def p(self, i: int) -> int:
        # P(i) = ((2i+1)m + i) / (i sqrt(k))
        m = self.m
        if i == 1:
            return self.base(3 * m + 1)
        j = i - 1

        def make():
            y = self.step([(m, self.q(j))],
                          self.scaled_alpha((j + 1) * (m + 1), j * (2 * m + 1) + m + 1), "mod2/p-aux")
            return self.step([(m + 1, y)], self.ratio((2 * i + 1) * m + i, i), "mod2/p")

        return self.memo(("P", i), make)

    def q(self, i: int) -> int:
        # Q(i) = ((2i+1)m + i + 1) / (i sqrt(k))
        m = self.m
        if i == 1:
            return self.base(3 * m + 2)
        j = i - 1

        def make():
            x = self.step([(m + 1, self.p(j))],
                          self.scaled_alpha(m * (j + 1), j * (2 * m + 1) + m), "mod2/q-aux")
            return self.step([(m, x)], self.ratio((2 * i + 1) * m + i + 1, i), "mod2/q")

        return self.memo(("Q", i), make)

    def bb(self, i: int) -> int:
        # (m-i-1) sqrt(k) / (2m-i), 0 <= i <= m-2
        m = self.m
        return self.memo(("B", i), lambda: self.step(
            [(m + 1, self.w(i))], self.scaled_alpha(m - i - 1, 2 * m - i), "mod2/bridge"))

    def w(self, i: int) -> int:
        # W(i) = (2m-i)/sqrt(k), -2 <= i <= m
        m = self.m
        if i == -2:
            node = self.p(m)
            if self.b.value(node) != self.ratio(2 * m + 2):
                raise TranscriptionError("mod2/w(-2)", "P(m) does not equal (2m+2)/sqrt(k)")
            return node
        if i == -1:
            return self.memo(("W", -1), lambda: self.step(
                [(m + 1, self.w(-2))], self.ratio(2 * m + 1), "mod2/w(-1)"))
        if i == 0:
            return self.memo(("W", 0), lambda: self.step(
                [(m + 1, self.w(-1))], self.ratio(2 * m), "mod2/w(0)"))
        if i == 1:
            return self.memo(("W", 1), lambda: self.step(
                [(1, self.w(-1)), (m, self.w(0))], self.ratio(2 * m - 1), "mod2/w(1)"))
        j = i - 2
        return self.memo(("W", i), lambda: self.step(
            [(m - j - 1, self.bb(j)), (j + 2, self.w(-1))], self.ratio(2 * m - j - 2), "mod2/w"))

    def upper_range(self, i: int) -> int:
        # (2m+2+i)/sqrt(k), 0 <= i <= m-2
        m = self.m
        return self.memo(("c3", i), lambda: self.step(
            [(m - i - 1, self.bb(i))], self.ratio(2 * m + 2 + i), "mod2/upper"))

    def node(self, s: int) -> int:
        m = self.m
        if not m <= s <= 4 * m + 2:
            raise RangeError(f"s={s} outside [{m}, {4 * m + 2}] for k={self.k}")
        if s >= 3 * m + 1:
            return self.base(s)
        if s >= 2 * m + 2:
            return self.upper_range(s - 2 * m - 2)
        return self.w(2 * m - s)


class _Mod3(_Chain):
    """k = 4m + 3."""

    def __init__(self, m: int):
        super().__init__(4 * m + 3)

    def f2(self, i: int) -> int:
        # (2i+1)(m+1) / (i sqrt(k)), 1 <= i <= m+1
        m = self.m
        if i == 1:
            return self.memo(("f2", 1), lambda: self.step(
                [(m, self.leaf())], self.ratio(3 * (m + 1)), "mod3/f2(1)"))
        j = i - 1

        def make():
            u = self.step([(j + 1, self.f1(j)), (m - j, self.f1(j - 1))],
                          self.ratio(2 * m * j + j + m, j), "mod3/f2-aux1")
            v = self.step([(m + 1, u)], self.scaled_alpha((j + 1) * m, 2 * m * j + j + m), "mod3/f2-aux2")
            return self.step([(m, v)], self.ratio((2 * j + 3) * (m + 1), j + 1), "mod3/f2")

        return self.memo(("f2", i), make)

    def f1(self, i: int) -> int:
        # (i+1) sqrt(k) / (2i+1), 0 <= i <= m+1
        m = self.m
        if i == 0:
            return self.leaf()
        tag = "mod3/f1(1)" if i == 1 else "mod3/f1"
        return self.memo(("f1", i), lambda: self.step(
            [(m + 1, self.f2(i))], self.scaled_alpha(i + 1, 2 * i + 1), tag))

    def half_alpha(self) -> int:
        m = self.m
        return self.memo(("x2",), lambda: self.step(
            [(m + 1, self.g(-2))], self.scaled_alpha(1, 2), "mod3/half-alpha"))

    def g(self, i: int) -> int:
        # g(i) = (2m-i)/sqrt(k), -3 <= i <= m
        m = self.m
        if i == -3:
            return self.f2(m + 1)
        if i == -2:
            return self.memo(("g", -2), lambda: self.step(
                [(m + 1, self.f1(m))], self.ratio(2 * m + 2), "mod3/g(-2)"))
        if i == -1:
            return self.memo(("g", -1), lambda: self.step(
                [(m + 1, self.half_alpha())], self.ratio(2 * m + 1), "mod3/g(-1)"))
        if i == 0:
            def make():
                x4 = self.step([(m + 1, self.g(-1))], self.scaled_alpha(m, 2 * m + 1), "mod3/g0-aux")
                return self.step([(m, x4), (1, self.half_alpha())], self.ratio(2 * m), "mod3/g(0)")
            return self.memo(("g", 0), make)
        j = i - 1

        def make():
            parts = []
            if m - j - 1 > 0:
                y = self.step([(m + 1, self.g(j))], self.scaled_alpha(m - j - 1, 2 * m - j), "mod3/g-aux")
                parts.append((m - j - 1, y))
            parts.append((j + 2, self.half_alpha()))
            return self.step(parts, self.ratio(2 * m - j - 1), "mod3/g")

        return self.memo(("g", i), make)

    def h(self, i: int) -> int:
        # h(i+2) = (2m+2+i)/sqrt(k), 0 <= i <= m
        m = self.m
        return self.memo(("h", i), lambda: self.step(
            [(m + 1 - i, self.f1(m - i)), (i, self.leaf())], self.ratio(2 * m + 2 + i), "mod3/upper"))

    def node(self, s: int) -> int:
        m = self.m
        if not m <= s <= 4 * m + 3:
            raise RangeError(f"s={s} outside [{m}, {4 * m + 3}] for k={self.k}")
        if s >= 3 * m + 2:
            return self.base(s)
        if s >= 2 * m + 2:
            return self.h(s - 2 * m - 2)
        return self.g(2 * m - s)


_FAMILIES = {0: _Mod0, 1: _Mod1, 2: _Mod2, 3: _Mod3}


def cert_base(k: int, s: int) -> Certificate:
    """Direct certificate ``s/sqrt(k) = sqrt(k) - (k-s)/sqrt(k)``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    ch = _Chain(k)
    return ch.certificate(ch.base(s))


def _cert_mod(t: int, m: int, s: int) -> Certificate:
    if not isinstance(m, int) or m < 1:
        raise RangeError(f"m must be a positive integer, got {m!r}")
    ch = _FAMILIES[t](m)
    return ch.certificate(ch.node(s))


def cert_mod0(m: int, s: int) -> Certificate:
    """``s/(2 sqrt(m))`` in ``W_{m+2}(2 sqrt(m))`` for ``m <= s <= 4m``."""
    return _cert_mod(0, m, s)


def cert_mod1(m: int, s: int) -> Certificate:
    """``s/sqrt(4m+1)`` in ``W_{m+2}(sqrt(4m+1))`` for ``m <= s <= 4m+1``."""
    return _cert_mod(1, m, s)


def cert_mod2(m: int, s: int) -> Certificate:
    """``s/sqrt(4m+2)`` in ``W_{m+2}(sqrt(4m+2))`` for ``m <= s <= 4m+2``."""
    return _cert_mod(2, m, s)


def cert_mod3(m: int, s: int) -> Certificate:
    """``s/sqrt(4m+3)`` in ``W_{m+2}(sqrt(4m+3))`` for ``m <= s <= 4m+3``."""
    return _cert_mod(3, m, s)


def _check_feasible(k: int, s: int) -> None:
    lo = r_min(k)
    if not lo <= s <= k:
        raise InfeasibleError(f"need k/4 + 1 < s <= k, i.e. {lo} <= s <= {k}; got s={s} for k={k}")


def ratio_certificate(k: int, s: int) -> Certificate:
    """Certificate for ``s/sqrt(k)``, valid under ``base_context(k)``."""
    _check_feasible(k, s)
    m, t = decompose(k)
    if m == 0:
        return cert_base(k, s)
    return _cert_mod(t, m, s)


@dataclass
class Synthesis:
    tree: Optional[Tree]
    ditree: Optional[WeightedDiTree]
    certificate: Certificate
    context: WContext
    phi: Optional[list] = None


class SynthesisBudgetExceeded(BudgetExceeded):
    """Materialization too large; ``certificate`` and ``context`` are still valid."""

    def __init__(self, size: int, budget: int, certificate: Certificate, context: WContext):
        super().__init__(size, budget)
        self.certificate = certificate
        self.context = context


def zero_certificate(k: int, r: int) -> tuple[Certificate, WContext]:
    """Root ``0 = sqrt(k) - r * (r/sqrt(k))^{-1}`` over ``r`` shared copies of the ratio certificate."""
    _check_feasible(k, r)
    inner = ratio_certificate(k, r)
    nodes = list(inner.nodes) + [Node(AlgReal.rational(0), (inner.root,) * r)]
    cert = Certificate(nodes, len(nodes) - 1)
    ctx = WContext(sqrt_of(k), r)
    verdict = check_certificate(ctx, cert)
    if not verdict.ok:
        raise TranscriptionError("zero-root", verdict.summary())
    return cert, ctx


def _finish(cert: Certificate, ctx: WContext, node_budget: int, verify: bool) -> Synthesis:
    try:
        w = materialize(cert, ctx, node_budget, check=False)
    except BudgetExceeded as exc:
        raise SynthesisBudgetExceeded(exc.size, exc.budget, cert, ctx) from None
    tree = to_undirected(w)
    phi = phi_from_omega(w)
    if verify:
        verdict = check_eigen_exact(tree, ctx.alpha, phi)
        if not verdict.ok:
            raise ChainError(f"synthesized tree fails the eigen check: {verdict}")
    return Synthesis(tree, w, cert, ctx, phi)


def sqrt_tree(k: int, r: int, node_budget: int = DEFAULT_NODE_BUDGET, verify: bool = True) -> Synthesis:
    """Tree with maximum degree exactly ``r`` and spectral radius ``sqrt(k)``."""
    cert, ctx = zero_certificate(k, r)
    out = _finish(cert, ctx, node_budget, verify)
    if out.tree.max_degree != r:
        raise ChainError(f"materialized tree has max degree {out.tree.max_degree}, expected {r}")
    return out


def half_sum_parameters(p: int, q: int) -> tuple[int, AlgReal, int]:
    """``(d, alpha, r)`` with ``d = (p-q)/4``, ``alpha = (sqrt(p)+sqrt(q))/2``, ``r = max(q, d) + 1``."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if p < q:
        raise OrderingError(f"need p >= q, got p={p}, q={q}")
    if (p - q) % 4:
        raise DivisibilityError(f"4 does not divide p - q = {p - q}")
    if p == q:
        raise DegenerateError("p = q leaves the root without children; rejected")
    d = (p - q) // 4
    alpha = (sqrt_of(p) + sqrt_of(q)) / 2
    return d, alpha, max(q, d) + 1


def half_sum_certificate(p: int, q: int) -> tuple[Certificate, WContext]:
    d, alpha, r = half_sum_parameters(p, q)
    ctx = WContext(alpha, r)
    b = CertBuilder(ctx)
    leaf = b.leaf()
    rq = sqrt_of(q)

    def step(kids, expect, tag):
        try:
            idx = b.step(kids)
        except StepRejected as exc:
            raise TranscriptionError(tag, str(exc)) from exc
        if b.value(idx) != expect:
            raise TranscriptionError(tag, f"derived {b.value(idx)}, expected {expect}")
        return idx

    a = step([leaf] * d, rq, "half-sum/leaf-parent")
    mid = step([a] * q, (sqrt_of(p) - rq) / 2, "half-sum/middle")
    root = step([mid] * d, AlgReal.rational(0), "half-sum/root")
    return b.certificate(root), ctx


def half_sum_tree(p: int, q: int, node_budget: int = DEFAULT_NODE_BUDGET, verify: bool = True) -> Synthesis:
    """Tree with spectral radius ``(sqrt(p)+sqrt(q))/2`` and degree ``1 + max(q, (p-q)/4)``."""
    cert, ctx = half_sum_certificate(p, q)
    out = _finish(cert, ctx, node_budget, verify)
    if out.tree.max_degree != ctx.r:
        raise ChainError(f"max degree {out.tree.max_degree}, expected {ctx.r}")
    return out
