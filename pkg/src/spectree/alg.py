"""Exact arithmetic in real fields Q(sqrt(d1), sqrt(d2)).

Values are stored as four rational coordinates over the basis
``1, sqrt(d1), sqrt(d2), sqrt(d1*d2)``.  Zero testing is structural; the sign
of a nonzero value is found by interval evaluation of the square roots at
increasing precision.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

Rational = Fraction


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(c, d)`` with ``n == c*c*d`` and ``d`` squarefree."""
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    c, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        c *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return c, d * n


def _is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_decompose(n)[0] == 1


def _sqf(n: int) -> int:
    return squarefree_decompose(n)[1]


class FieldError(ValueError):
    """Operands cannot be placed in a common biquadratic field."""


@dataclass(frozen=True, order=True)
class FieldSpec:
    """Field Q(sqrt(d1), sqrt(d2)); ``d2 == 1`` means quadratic, ``d1 == d2 == 1`` rational."""

    d1: int = 1
    d2: int = 1

    def __post_init__(self):
        if not (_is_squarefree(self.d1) and _is_squarefree(self.d2)):
            raise FieldError(f"radicands must be squarefree: {self.d1}, {self.d2}")
        if self.d2 != 1 and (self.d1 == 1 or self.d1 == self.d2):
            raise FieldError(f"invalid field spec ({self.d1}, {self.d2})")

    @property
    def radicands(self) -> frozenset[int]:
        """All nontrivial squarefree classes of the field."""
        if self.d1 == 1:
            return frozenset()
        if self.d2 == 1:
            return frozenset({self.d1})
        return frozenset({self.d1, self.d2, _sqf(self.d1 * self.d2)})

    @property
    def degree(self) -> int:
        return 1 << ((self.d1 != 1) + (self.d2 != 1))

    def __str__(self):
        if self.d1 == 1:
            return "Q"
        if self.d2 == 1:
            return f"Q(sqrt({self.d1}))"
        return f"Q(sqrt({self.d1}), sqrt({self.d2}))"


RATIONAL = FieldSpec(1, 1)


def field_from_radicands(rads) -> FieldSpec:
    """Smallest canonical field containing sqrt(d) for every d in ``rads``."""
    group = {1}
    for d in rads:
        d = _sqf(d)
        group |= {_sqf(g * d) for g in group}
        if len(group) > 4:
            raise FieldError(f"radicands {sorted(set(rads))} span more than a biquadratic field")
    nontrivial = sorted(group - {1})
    if not nontrivial:
        return RATIONAL
    if len(nontrivial) == 1:
        return FieldSpec(nontrivial[0], 1)
    return FieldSpec(nontrivial[0], nontrivial[1])


def _isqrt_bounds(d: int, bits: int) -> tuple[int, int]:
    # floor and ceil of sqrt(d) * 2**bits
    s = math.isqrt(d << (2 * bits))
    return s, s if s * s == d << (2 * bits) else s + 1


class AlgReal:
    """Immutable exact element of a real field of degree at most four."""

    __slots__ = ("field", "coords", "__dict__")

    def __init__(self, field: FieldSpec, coords):
        coords = tuple(c if type(c) is Fraction else Fraction(c) for c in coords)
        if len(coords) != 4:
            raise ValueError("need four coordinates")
        if field.d1 == 1 and any(coords[1:]):
            raise ValueError("rational field carries only c0")
        if field.d2 == 1 and (coords[2] or coords[3]):
            raise ValueError("quadratic field carries only c0, c1")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("AlgReal is immutable")

    # construction helpers

    @classmethod
    def rational(cls, q) -> AlgReal:
        return cls(RATIONAL, (q, 0, 0, 0))

    @classmethod
    def coerce(cls, x) -> AlgReal:
        if isinstance(x, AlgReal):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to AlgReal")

    # field embedding

    def embed(self, target: FieldSpec) -> AlgReal:
        """Rewrite ``self`` over the basis of ``target`` (a superfield)."""
        if target == self.field:
            return self
        c0, c1, c2, c3 = self.coords
        out = [c0, Fraction(0), Fraction(0), Fraction(0)]
        f = self.field
        terms = []
        if f.d1 != 1:
            terms.append((f.d1, c1))
        if f.d2 != 1:
            terms.append((f.d2, c2))
            terms.append((f.d1 * f.d2, c3))
        for rad, c in terms:
            if not c:
                continue
            scale, d = squarefree_decompose(rad)
            out[_basis_index(target, d)] += c * scale / _basis_scale(target, d)
        return AlgReal(target, out)

    def _common(self, other) -> tuple[AlgReal, AlgReal]:
        other = AlgReal.coerce(other)
        if self.field == other.field:
            return self, other
        target = field_from_radicands(self.field.radicands | other.field.radicands)
        return self.embed(target), other.embed(target)

    # arithmetic

    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return AlgReal(a.field, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return AlgReal(self.field, [-c for c in self.coords])

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return AlgReal(a.field, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return AlgReal.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgReal(self.field, [c * other for c in self.coords])
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        d1, d2 = a.field.d1, a.field.d2
        a0, a1, a2, a3 = a.coords
        b0, b1, b2, b3 = b.coords
        d12 = d1 * d2
        return AlgReal(a.field, (
            a0 * b0 + d1 * a1 * b1 + d2 * a2 * b2 + d12 * a3 * b3,
            a0 * b1 + a1 * b0 + d2 * (a2 * b3 + a3 * b2),
            a0 * b2 + a2 * b0 + d1 * (a1 * b3 + a3 * b1),
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
        ))

    __rmul__ = __mul__

    def _conj(self, flip1: bool, flip2: bool) -> AlgReal:
        c0, c1, c2, c3 = self.coords
        return AlgReal(self.field, (
            c0,
            -c1 if flip1 else c1,
            -c2 if flip2 else c2,
            -c3 if flip1 != flip2 else c3,
        ))

    def invert(self) -> AlgReal:
        """Exact reciprocal, via Galois conjugates over the rational norm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if f.d1 == 1:
            return AlgReal.rational(1 / self.coords[0])
        if f.d2 == 1:
            cofactor = self._conj(True, False)
        else:
            cofactor = self._conj(True, False) * self._conj(False, True) * self._conj(True, True)
        norm = (self * cofactor).coords[0]
        return cofactor * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, AlgReal):
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        return AlgReal.coerce(other) * self.invert()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.invert() ** (-e)
        out, base = AlgReal(self.field, (1, 0, 0, 0)), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # sign and comparison

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _scaled_integers(self) -> tuple[list[int], list[int]]:
        den = math.lcm(*(c.denominator for c in self.coords))
        nums = [int(c * den) for c in self.coords]
        f = self.field
        rads = [1, f.d1, f.d2, f.d1 * f.d2]
        return nums, rads

    def _interval_at(self, bits: int) -> tuple[int, int]:
        # integer bounds of value * lcm(denominators) * 2**bits
        nums, rads = self._scaled_integers()
        lo = hi = 0
        for n, d in zip(nums, rads):
            if not n:
                continue
            s_lo, s_hi = _isqrt_bounds(d, bits)
            if n > 0:
                lo += n * s_lo
                hi += n * s_hi
            else:
                lo += n * s_hi
                hi += n * s_lo
        return lo, hi

    def sign(self) -> int:
        cached = self.__dict__.get("_sign")
        if cached is None:
            cached = self.__dict__["_sign"] = self._compute_sign()
        return cached

    def _compute_sign(self) -> int:
        if self.is_zero():
            return 0
        if self.field.d1 == 1:
            return 1 if self.coords[0] > 0 else -1
        bits = 32
        while True:
            lo, hi = self._interval_at(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def approx(self, eps) -> tuple[Fraction, Fraction]:
        """Rational interval ``[lo, hi]`` of width at most ``eps`` containing the value."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if self.field.d1 == 1:
            return self.coords[0], self.coords[0]
        nums, _ = self._scaled_integers()
        den = math.lcm(*(c.denominator for c in self.coords))
        bits = 16
        while True:
            lo, hi = self._interval_at(bits)
            scale = den << bits
            if Fraction(hi - lo, scale) <= eps:
                return Fraction(lo, scale), Fraction(hi, scale)
            bits *= 2

    def __float__(self):
        lo, hi = self.approx(Fraction(1, 1 << 60))
        return float((lo + hi) / 2)

    def __bool__(self):
        return not self.is_zero()

    def _cmp(self, other) -> int:
        return (self - AlgReal.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (AlgReal, int, Fraction)):
            return NotImplemented
        return self.key == AlgReal.coerce(other).key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def key(self) -> tuple:
        """Canonical identity: the smallest field holding the value, plus coordinates there."""
        c0, c1, c2, c3 = self.coords
        f = self.field
        used = []
        if c1:
            used.append(f.d1)
        if c2:
            used.append(f.d2)
        if c3:
            used.append(f.d1 * f.d2)
        small = field_from_radicands(used)
        red = self.embed_down(small)
        return (small.d1, small.d2) + red.coords

    def embed_down(self, target: FieldSpec) -> AlgReal:
        """Express ``self`` in a subfield ``target`` known to contain it."""
        if target == self.field:
            return self
        out = [self.coords[0], Fraction(0), Fraction(0), Fraction(0)]
        f = self.field
        src = [(1, f.d1), (2, f.d2), (3, f.d1 * f.d2)]
        for idx, rad in src:
            c = self.coords[idx]
            if not c:
                continue
            scale, d = squarefree_decompose(rad)
            out[_basis_index(target, d)] += c * scale / _basis_scale(target, d)
        return AlgReal(target, out)

    def sort_key(self) -> tuple:
        """Total order consistent with numeric order (used for deterministic iteration)."""
        return _SortKey(self)

    # text forms

    def __repr__(self):
        return f"AlgReal({self})"

    def __str__(self):
        f = self.field
        names = ["", f"sqrt({f.d1})", f"sqrt({f.d2})", f"sqrt({f.d1}*{f.d2})"]
        parts = []
        for c, name in zip(self.coords, names):
            if not c:
                continue
            mag = abs(c)
            if not name:
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag}*{name}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def to_json(self) -> dict:
        return {
            "d1": self.field.d1,
            "d2": self.field.d2,
            "coords": [f"{c.numerator}/{c.denominator}" for c in self.coords],
        }

    @classmethod
    def from_json(cls, obj) -> AlgReal:
        if isinstance(obj, str):
            return parse(obj)
        if isinstance(obj, (int, float)) and not isinstance(obj, bool):
            if isinstance(obj, float) and not obj.is_integer():
                raise ValueError("floating-point values are not accepted; use a rational string")
            return cls.rational(int(obj))
        return cls(FieldSpec(obj["d1"], obj["d2"]), [Fraction(c) for c in obj["coords"]])


class _SortKey:
    __slots__ = ("x",)

    def __init__(self, x: AlgReal):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x

    def __eq__(self, other):
        return self.x == other.x


def _basis_index(target: FieldSpec, d: int) -> int:
    if d == 1:
        return 0
    if d == target.d1:
        return 1
    if d == target.d2:
        return 2
    if target.d2 != 1 and d == _sqf(target.d1 * target.d2):
        return 3
    raise FieldError(f"sqrt({d}) is not in {target}")


def _basis_scale(target: FieldSpec, d: int) -> int:
    # basis vector sqrt(d1*d2) equals g*sqrt(d) with g = gcd(d1, d2)
    if _basis_index(target, d) == 3:
        return math.gcd(target.d1, target.d2)
    return 1


def sqrt_of(n: int) -> AlgReal:
    """Exact square root of a positive integer."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"sqrt_of needs a positive integer, got {n!r}")
    c, d = squarefree_decompose(n)
    if d == 1:
        return AlgReal.rational(c)
    return AlgReal(FieldSpec(d, 1), (0, c, 0, 0))


def invert(x: AlgReal) -> AlgReal:
    return x.invert()


def sign(x: AlgReal) -> int:
    return AlgReal.coerce(x).sign()


def approx(x: AlgReal, eps) -> tuple[Fraction, Fraction]:
    return AlgReal.coerce(x).approx(eps)


# text grammar: rationals, sqrt(int-expr), + - * / and parentheses

def parse(text: str) -> AlgReal:
    """Parse expressions such as ``3/2``, ``sqrt(8)`` or ``(sqrt(5)+1)/2``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc
    return AlgReal.coerce(_eval(tree.body, text))


def _eval(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        a, b = _eval(node.left, text), _eval(node.right, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(b, Fraction):
            return a / b
        return AlgReal.coerce(a) / b
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt" and len(node.args) == 1 and not node.keywords):
        arg = _eval(node.args[0], text)
        if not isinstance(arg, Fraction) or arg.denominator != 1 or arg < 1:
            raise ValueError(f"sqrt() needs a positive integer argument in {text!r}")
        return sqrt_of(int(arg))
    raise ValueError(f"unsupported syntax in {text!r}")
