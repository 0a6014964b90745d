"""Exact arithmetic in the real field Q(sqrt2, sqrt3, sqrt5).

Elements are stored sparsely over the basis of square roots of the
squarefree products of 2, 3 and 5.  A basis element is addressed by a
three-bit mask (bit 0 -> 2, bit 1 -> 3, bit 2 -> 5), so sqrt(6) has mask 3
and the product of two basis elements is ``cross(m1, m2) * basis(m1 ^ m2)``.

Everything is immutable and hashable.
"""

from __future__ import annotations

import math
from math import isqrt
from typing import Mapping

from gmpy2 import mpq

__all__ = [
    "FieldElement",
    "LinearPoly",
    "ZERO",
    "ONE",
    "make_cos",
    "sign",
    "evaluate",
    "as_field",
    "UnsupportedCoxeterEntry",
    "INF",
]

INF = math.inf

_PRIMES = (2, 3, 5)
_RADICAND = tuple(
    (2 if m & 1 else 1) * (3 if m & 2 else 1) * (5 if m & 4 else 1) for m in range(8)
)
_CROSS = tuple(tuple(_RADICAND[a & b] for b in range(8)) for a in range(8))
_SQRT = tuple(math.sqrt(r) for r in _RADICAND)
# serialisation order: 1, √2, √3, √5, √6, √10, √15, √30
BASIS_ORDER = (0, 1, 2, 4, 3, 5, 6, 7)
_PARITY = tuple(bin(m).count("1") & 1 for m in range(8))


class UnsupportedCoxeterEntry(ValueError):
    pass


def _q(x) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


class FieldElement:
    """An exact element of Q(sqrt2, sqrt3, sqrt5)."""

    __slots__ = ("_d", "_hash")

    def __init__(self, coords=None):
        # coords: mapping mask -> rational, or a rational-like scalar
        if coords is None:
            self._d = ()
        elif isinstance(coords, Mapping):
            self._d = tuple(
                (m, _q(c)) for m, c in sorted(coords.items()) if c != 0
            )
        else:
            c = _q(coords)
            self._d = ((0, c),) if c != 0 else ()
        self._hash = None

    @classmethod
    def _raw(cls, pairs):
        obj = object.__new__(cls)
        obj._d = pairs
        obj._hash = None
        return obj

    @classmethod
    def sqrt(cls, n: int) -> "FieldElement":
        """sqrt(n) for n a product of distinct primes among 2, 3, 5 (or 1)."""
        if n == 1:
            return ONE
        if n not in _RADICAND:
            raise ValueError(f"sqrt({n}) is not a basis element of the field")
        return cls._raw(((_RADICAND.index(n), mpq(1)),))

    @classmethod
    def from_coords(cls, coords) -> "FieldElement":
        """Build from 8 rationals in the serialisation basis order."""
        coords = list(coords)
        if len(coords) != 8:
            raise ValueError("expected 8 coordinates")
        return cls({BASIS_ORDER[i]: _q(c) for i, c in enumerate(coords)})

    def coords(self) -> tuple:
        """The 8 coordinates in the order 1, √2, √3, √5, √6, √10, √15, √30."""
        d = dict(self._d)
        return tuple(d.get(m, mpq(0)) for m in BASIS_ORDER)

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords()]

    @classmethod
    def from_json(cls, data) -> "FieldElement":
        return cls.from_coords([mpq(s) for s in data])

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def is_rational(self) -> bool:
        return not self._d or (len(self._d) == 1 and self._d[0][0] == 0)

    def rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self._d[0][1] if self._d else mpq(0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = as_field(other)
        if other is NotImplemented:
            return other
        if not other._d:
            return self
        if not self._d:
            return other
        acc = dict(self._d)
        for m, c in other._d:
            v = acc.get(m)
            acc[m] = c if v is None else v + c
        return FieldElement._raw(tuple(sorted((m, c) for m, c in acc.items() if c)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(tuple((m, -c) for m, c in self._d))

    def __sub__(self, other):
        other = as_field(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return as_field(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            try:
                c = _q(other)
            except (TypeError, ValueError):
                return NotImplemented
            if c == 0:
                return ZERO
            return FieldElement._raw(tuple((m, v * c) for m, v in self._d))
        a, b = self._d, other._d
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            (m1, c1), (m2, c2) = a[0], b[0]
            return FieldElement._raw(((m1 ^ m2, c1 * c2 * _CROSS[m1][m2]),))
        acc = {}
        for m1, c1 in a:
            row = _CROSS[m1]
            for m2, c2 in b:
                m = m1 ^ m2
                v = c1 * c2 * row[m2]
                acc[m] = acc[m] + v if m in acc else v
        return FieldElement._raw(tuple(sorted((m, c) for m, c in acc.items() if c)))

    __rmul__ = __mul__

    def conjugate(self, flip: int) -> "FieldElement":
        """Galois conjugate negating sqrt(p) for primes p in the mask ``flip``."""
        return FieldElement._raw(
            tuple((m, -c if _PARITY[m & flip] else c) for m, c in self._d)
        )

    def inverse(self) -> "FieldElement":
        if not self._d:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return FieldElement._raw(((0, 1 / self._d[0][1]),))
        num = ONE
        a = self
        for flip in (1, 2, 4):
            conj = a.conjugate(flip)
            if conj != a:
                num = num * conj
                a = a * conj
        return num * (1 / a.rational())

    def __truediv__(self, other):
        other = as_field(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self * (1 / other.rational())
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_field(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        return sign(self)

    def __lt__(self, other):
        return sign(self - as_field(other)) < 0

    def __le__(self, other):
        return sign(self - as_field(other)) <= 0

    def __gt__(self, other):
        return sign(self - as_field(other)) > 0

    def __ge__(self, other):
        return sign(self - as_field(other)) >= 0

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __float__(self):
        return math.fsum(float(c) * _SQRT[m] for m, c in self._d)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self._d == other._d
        try:
            c = _q(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._d == (((0, c),) if c != 0 else ())

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(self.rational())
            else:
                h = hash(self._d)
            self._hash = h
        return h

    def __repr__(self):
        if not self._d:
            return "0"
        parts = []
        for m, c in self._d:
            cs = str(c) if c.denominator == 1 else f"({c})"
            parts.append(cs if m == 0 else f"{cs}*√{_RADICAND[m]}")
        return " + ".join(parts)

    __str__ = __repr__


ZERO = FieldElement()
ONE = FieldElement(1)


def as_field(x):
    if isinstance(x, FieldElement):
        return x
    try:
        return FieldElement(x)
    except (TypeError, ValueError):
        return NotImplemented


def _interval(x: FieldElement, k: int):
    """Rational enclosure of ``x`` using surd bounds of precision 2**-k."""
    lo = hi = mpq(0)
    scale = 1 << k
    for m, c in x._d:
        if m == 0:
            lo += c
            hi += c
            continue
        r = isqrt(_RADICAND[m] * scale * scale)
        a, b = mpq(r, scale), mpq(r + 1, scale)
        if c > 0:
            lo += c * a
            hi += c * b
        else:
            lo += c * b
            hi += c * a
    return lo, hi


def sign(x: FieldElement) -> int:
    """Exact sign under the embedding with every surd positive."""
    d = x._d
    if not d:
        return 0
    if len(d) == 1:
        c = d[0][1]
        return 1 if c > 0 else -1
    approx = 0.0
    mag = 0.0
    for m, c in d:
        t = float(c) * _SQRT[m]
        approx += t
        mag += abs(t)
    if math.isfinite(mag) and abs(approx) > mag * 1e-12:
        return 1 if approx > 0 else -1
    k = 64
    while True:
        lo, hi = _interval(x, k)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        k *= 2


_COS = {
    2: ZERO,
    3: FieldElement(mpq(-1, 2)),
    4: FieldElement({1: mpq(-1, 2)}),
    5: FieldElement({0: mpq(-1, 4), 4: mpq(-1, 4)}),
    6: FieldElement({2: mpq(-1, 2)}),
}


def make_cos(m) -> FieldElement:
    """The bilinear form value -cos(pi/m) between simple roots.

    ``m == 1`` gives ``1`` (the diagonal) and ``m == inf`` gives ``-1``.
    """
    if m == INF or m is None:
        return FieldElement(-1)
    if m == 1:
        return ONE
    try:
        return _COS[int(m)]
    except (KeyError, ValueError, TypeError):
        raise UnsupportedCoxeterEntry(
            f"field does not contain cos(pi/{m}); supported m: 1..6 and inf"
        ) from None


class LinearPoly:
    """An affine-linear polynomial ``const + sum(coef * x_var)``."""

    __slots__ = ("const", "terms", "_hash")

    def __init__(self, const=ZERO, terms=None):
        self.const = as_field(const)
        if terms is None:
            self.terms = ()
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            self.terms = tuple(
                sorted((v, as_field(c)) for v, c in items if as_field(c))
            )
        self._hash = None

    @classmethod
    def _raw(cls, const, terms):
        obj = object.__new__(cls)
        obj.const = const
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def var(cls, v, coef=ONE) -> "LinearPoly":
        return cls(ZERO, {v: coef})

    def is_constant(self) -> bool:
        return not self.terms

    def variables(self) -> tuple:
        return tuple(v for v, _ in self.terms)

    def coef(self, v) -> FieldElement:
        for u, c in self.terms:
            if u == v:
                return c
        return ZERO

    def __add__(self, other):
        if not isinstance(other, LinearPoly):
            other = LinearPoly(other)
        if not other.terms:
            return LinearPoly._raw(self.const + other.const, self.terms)
        acc = dict(self.terms)
        for v, c in other.terms:
            acc[v] = acc[v] + c if v in acc else c
        return LinearPoly._raw(
            self.const + other.const, tuple(sorted((v, c) for v, c in acc.items() if c))
        )

    __radd__ = __add__

    def __neg__(self):
        return LinearPoly._raw(-self.const, tuple((v, -c) for v, c in self.terms))

    def __sub__(self, other):
        if not isinstance(other, LinearPoly):
            other = LinearPoly(other)
        return self + (-other)

    def __rsub__(self, other):
        return LinearPoly(other) - self

    def __mul__(self, k):
        if isinstance(k, LinearPoly):
            if k.is_constant():
                k = k.const
            elif self.is_constant():
                return k * self.const
            else:
                raise TypeError("product of two non-constant linear polynomials")
        k = as_field(k)
        if not k:
            return LinearPoly._raw(ZERO, ())
        return LinearPoly._raw(self.const * k, tuple((v, c * k) for v, c in self.terms))

    __rmul__ = __mul__

    def substitute(self, assignment: Mapping) -> "LinearPoly":
        """Replace variables present in ``assignment`` by field elements or polys."""
        out = LinearPoly._raw(self.const, ())
        rest = []
        for v, c in self.terms:
            if v in assignment:
                val = assignment[v]
                if isinstance(val, LinearPoly):
                    out = out + val * c
                else:
                    out = LinearPoly._raw(out.const + as_field(val) * c, out.terms)
            else:
                rest.append((v, c))
        if rest:
            out = out + LinearPoly._raw(ZERO, tuple(rest))
        return out

    def __eq__(self, other):
        if not isinstance(other, LinearPoly):
            if self.terms:
                return False
            return self.const == other
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.const, self.terms)) if self.terms else hash(self.const)
        return self._hash

    def __repr__(self):
        parts = []
        if self.const or not self.terms:
            parts.append(repr(self.const))
        for v, c in self.terms:
            parts.append(f"{'' if c == ONE else '(' + repr(c) + ')*'}x{v}")
        return " + ".join(parts)

    def to_json(self):
        return {
            "const": self.const.to_json(),
            "terms": [[v, c.to_json()] for v, c in self.terms],
        }


def evaluate(p: LinearPoly, assignment: Mapping) -> FieldElement:
    """Substitute field values for every variable of ``p``."""
    total = p.const
    for v, c in p.terms:
        try:
            val = assignment[v]
        except KeyError:
            raise KeyError(f"no value assigned to variable x{v}") from None
        total = total + c * as_field(val)
    return total
