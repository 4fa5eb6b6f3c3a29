"""Coefficient ring for zeta computations.

Elements are integer polynomials in the Lefschetz symbol ``L`` (any integer
exponent) and in opaque class symbols (nonnegative exponents).  Two ring
morphisms are provided: the Euler specialization ``L -> 1`` and the Poincare
specialization ``L -> v^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Union

__all__ = [
    "ClassSymbol",
    "GrotElem",
    "VLaurent",
    "MissingSpecializationData",
    "NotDivisible",
    "L",
    "ONE",
    "ZERO",
    "grot_add",
    "grot_mul",
    "grot_div_exact",
    "euler_specialize",
    "poincare_specialize",
]


class MissingSpecializationData(ValueError):
    """A class symbol lacks the euler or poincare value a specialization needs."""


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


# ---------------------------------------------------------------------------
# Laurent polynomials in v with rational exponents


def _as_fraction(e) -> Fraction:
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    if isinstance(e, str):
        return Fraction(e)
    raise TypeError(f"bad exponent {e!r}")


class VLaurent:
    """Element of Z[v^(1/b), v^(-1/b)], stored as exponent -> coefficient."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Fraction, int] = {}
        for e, c in items:
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            e = _as_fraction(e)
            acc[e] = acc.get(e, 0) + c
        self._c = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "VLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, e, c: int = 1) -> "VLaurent":
        return cls({e: c})

    @classmethod
    def from_scaled(cls, scaled: Mapping[int, int], b: int) -> "VLaurent":
        """Build from a map of integer exponents that were multiplied by ``b``."""
        return cls({Fraction(e, b): c for e, c in scaled.items()})

    @property
    def coeffs(self) -> dict[Fraction, int]:
        return dict(self._c)

    @property
    def denominator(self) -> int:
        return lcm(1, *(e.denominator for e in self._c))

    def scaled(self, b: int | None = None) -> dict[int, int]:
        b = self.denominator if b is None else b
        out = {}
        for e, c in self._c.items():
            s = e * b
            if s.denominator != 1:
                raise ValueError(f"exponent {e} not a multiple of 1/{b}")
            out[int(s)] = c
        return out

    def is_zero(self) -> bool:
        return not self._c

    def at_one(self) -> int:
        return sum(self._c.values())

    def __add__(self, other):
        other = _vl(other)
        return VLaurent(list(self._c.items()) + list(other._c.items()))

    __radd__ = __add__

    def __neg__(self):
        return VLaurent({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        return self + (-_vl(other))

    def __rsub__(self, other):
        return _vl(other) - self

    def __mul__(self, other):
        other = _vl(other)
        acc: dict[Fraction, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return VLaurent(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = VLaurent.const(1)
        for _ in range(n):
            out = out * self
        return out

    def div_exact(self, other: "VLaurent") -> "VLaurent":
        """Exact quotient in Z[v^(1/b), v^(-1/b)]; raises NotDivisible."""
        other = _vl(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero VLaurent")
        b = lcm(self.denominator, other.denominator)
        num = self.scaled(b)
        den = other.scaled(b)
        dtop = max(den)
        dlow = min(den)
        lead = den[dtop]
        q: dict[int, int] = {}
        r = dict(num)
        while r:
            top = max(r)
            if top - dtop < (min(num) - dlow if num else 0):
                raise NotDivisible("VLaurent division leaves a remainder")
            c = r[top]
            if c % lead:
                raise NotDivisible("VLaurent division leaves a remainder")
            k = c // lead
            s = top - dtop
            q[s] = q.get(s, 0) + k
            for e, d in den.items():
                r[e + s] = r.get(e + s, 0) - k * d
                if r[e + s] == 0:
                    del r[e + s]
        return VLaurent.from_scaled(q, b)

    def __eq__(self, other):
        if isinstance(other, int):
            other = VLaurent.const(other)
        if not isinstance(other, VLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"VLaurent({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "v"
            else:
                mono = f"v^{e}" if e.denominator == 1 and e > 0 else f"v^({e})"
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self._c.items()}


def _vl(x) -> VLaurent:
    if isinstance(x, VLaurent):
        return x
    if isinstance(x, int):
        return VLaurent.const(x)
    raise TypeError(f"cannot coerce {x!r} to VLaurent")


# ---------------------------------------------------------------------------
# class symbols


@dataclass(frozen=True)
class ClassSymbol:
    """Opaque class in the Grothendieck ring, optionally with specialization data."""

    name: str
    euler: int | None = field(default=None, compare=True)
    poincare: VLaurent | None = field(default=None, compare=True)

    def __post_init__(self):
        if not self.name:
            raise ValueError("class symbol needs a name")
        if self.euler is not None and self.poincare is not None:
            if self.poincare.at_one() != self.euler:
                raise ValueError(
                    f"class {self.name}: poincare at v=1 is {self.poincare.at_one()}, "
                    f"euler is {self.euler}"
                )

    def __str__(self):
        return f"[{self.name}]"


# a monomial is (L exponent, ((symbol, exponent), ...)) with symbols sorted by name
Monomial = tuple


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    la, ca = a
    lb, cb = b
    if not ca:
        return (la + lb, cb)
    if not cb:
        return (la + lb, ca)
    acc = dict(ca)
    for s, e in cb:
        acc[s] = acc.get(s, 0) + e
    return (la + lb, tuple(sorted(acc.items(), key=lambda se: se[0].name)))


def _order_key(m: Monomial, names: list[str]):
    cls = {s.name: e for s, e in m[1]}
    return tuple(cls.get(n, 0) for n in names) + (m[0],)


Scalar = Union[int, "GrotElem"]


class GrotElem:
    """Integer polynomial in L^(+-1) and class symbols, kept in canonical form."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self._t: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self._t[m] = c
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "GrotElem":
        return cls({(0, ()): c})

    @classmethod
    def lefschetz(cls, e: int = 1, c: int = 1) -> "GrotElem":
        return cls({(e, ()): c})

    @classmethod
    def symbol(cls, s: ClassSymbol, e: int = 1) -> "GrotElem":
        if e < 0:
            raise ValueError("class exponents are nonnegative")
        return cls({(0, ((s, e),) if e else ()): 1})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def symbols(self) -> set[ClassSymbol]:
        return {s for (_, cls) in self._t for s, _ in cls}

    def l_range(self) -> tuple[int, int]:
        les = [m[0] for m in self._t]
        return min(les), max(les)

    def __add__(self, other):
        other = _ge(other)
        out = dict(self._t)
        for m, c in other._t.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GrotElem(out)

    __radd__ = __add__

    def __neg__(self):
        return GrotElem({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-_ge(other))

    def __rsub__(self, other):
        return _ge(other) - self

    def __mul__(self, other):
        other = _ge(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return GrotElem(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._t) == 1:
                ((m, c),) = self._t.items()
                if not m[1] and c in (1, -1):
                    return GrotElem({(m[0] * n, ()): c ** (-n)})
            raise ValueError("negative power of a non-unit")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def shift_l(self, k: int) -> "GrotElem":
        """Multiply by L^k."""
        return GrotElem({(m[0] + k, m[1]): c for m, c in self._t.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = GrotElem.const(other)
        if not isinstance(other, GrotElem):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms ordered by (L-degree, class names), the renderer's order."""
        return sorted(
            self._t.items(),
            key=lambda mc: (mc[0][0], tuple((s.name, e) for s, e in mc[0][1])),
        )

    def __repr__(self):
        return f"GrotElem({self})"

    def __str__(self):
        return render_grot(self)


def _ge(x) -> GrotElem:
    if isinstance(x, GrotElem):
        return x
    if isinstance(x, int):
        return GrotElem.const(x)
    raise TypeError(f"cannot coerce {x!r} to GrotElem")


ZERO = GrotElem()
ONE = GrotElem.const(1)
L = GrotElem.lefschetz(1)


def _mono_str(m: Monomial, latex: bool = False) -> str:
    le, cls = m
    parts = []
    for s, e in cls:
        name = s.name
        base = f"[{name}]"
        parts.append(base if e == 1 else (f"{base}^{{{e}}}" if latex else f"{base}^{e}"))
    if le:
        if latex:
            parts.append("\\mathbb{L}" if le == 1 else f"\\mathbb{{L}}^{{{le}}}")
        else:
            parts.append("L" if le == 1 else f"L^{le}")
    return ("" if latex else "*").join(parts)


def render_grot(x: GrotElem, latex: bool = False) -> str:
    if x.is_zero():
        return "0"
    out = ""
    for i, (m, c) in enumerate(x.sorted_terms()):
        mono = _mono_str(m, latex)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else (f"{mag}{mono}" if latex else f"{mag}*{mono}")
        else:
            body = str(mag)
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


# ---------------------------------------------------------------------------
# operations named in the interface


def grot_add(x: GrotElem, y: GrotElem) -> GrotElem:
    return _ge(x) + _ge(y)


def grot_mul(x: GrotElem, y: GrotElem) -> GrotElem:
    return _ge(x) * _ge(y)


def grot_div_exact(x: GrotElem, y: GrotElem) -> GrotElem:
    """Return q with q*y == x.

    Long division under the lex order (class exponents first, L last).  The
    quotient's L-degrees are bounded below by minL(x) - minL(y), which makes
    the loop terminate when y does not divide x.
    """
    x, y = _ge(x), _ge(y)
    if y.is_zero():
        raise ZeroDivisionError("exact division by zero")
    if x.is_zero():
        return ZERO
    names = sorted({s.name for s in x.symbols() | y.symbols()})
    key = lambda m: _order_key(m, names)  # noqa: E731
    ly = max(y._t, key=key)
    cy = y._t[ly]
    ybag = dict(ly[1])
    lbound = x.l_range()[0] - y.l_range()[0]
    q: dict[Monomial, int] = {}
    r = dict(x._t)
    while r:
        lr = max(r, key=key)
        c = r[lr]
        rbag = dict(lr[1])
        if any(rbag.get(s, 0) < e for s, e in ybag.items()) or c % cy:
            raise NotDivisible(f"{y} does not divide {x}")
        le = lr[0] - ly[0]
        if le < lbound:
            raise NotDivisible(f"{y} does not divide {x}")
        qbag = {s: rbag[s] - ybag.get(s, 0) for s in rbag}
        qm = (le, tuple(sorted(((s, e) for s, e in qbag.items() if e), key=lambda se: se[0].name)))
        k = c // cy
        q[qm] = q.get(qm, 0) + k
        for m, d in y._t.items():
            pm = _mono_mul(qm, m)
            v = r.get(pm, 0) - k * d
            if v:
                r[pm] = v
            else:
                r.pop(pm, None)
    return GrotElem(q)


def euler_specialize(x: GrotElem) -> int:
    """Ring morphism L -> 1, [X] -> euler([X])."""
    total = 0
    for (_, cls), c in _ge(x)._t.items():
        v = c
        for s, e in cls:
            if s.euler is None:
                raise MissingSpecializationData(f"class {s.name} has no euler data")
            v *= s.euler**e
        total += v
    return total


def poincare_specialize(x: GrotElem) -> VLaurent:
    """Ring morphism L -> v^2, [X] -> poincare([X])."""
    acc = VLaurent()
    for (le, cls), c in _ge(x)._t.items():
        v = VLaurent.monomial(2 * le, c)
        for s, e in cls:
            if s.poincare is None:
                raise MissingSpecializationData(f"class {s.name} has no poincare data")
            v = v * s.poincare**e
        acc = acc + v
    return acc
