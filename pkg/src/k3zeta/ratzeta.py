"""Rational functions in T over the coefficient ring.

A ``ZetaRat`` is ``F(T) / prod (1 - L^a T^b)^m`` with ``F`` a polynomial in T
whose coefficients are ``GrotElem``.  Equality is decided by cross
multiplication, which is sound because the coefficient ring is a domain and
the factors ``1 - L^a T^b`` are nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .grotring import ONE, ZERO, GrotElem, NotDivisible, _ge, _mono_str

__all__ = [
    "DenFactor",
    "TPoly",
    "ZetaRat",
    "InsufficientDenominator",
    "zeta_term",
    "zeta_add",
    "zeta_mul",
    "zeta_equals",
    "numerator_over",
    "render_plain",
    "render_latex",
    "to_json",
]


class InsufficientDenominator(ValueError):
    pass


@dataclass(frozen=True, order=True)
class DenFactor:
    """The factor (1 - L^a T^b) with a multiplicity."""

    a: int
    b: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.b < 1:
            raise ValueError(f"T-exponent must be positive, got {self.b}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.a, self.b)


class TPoly:
    """Polynomial in T with GrotElem coefficients (degree -> coefficient)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, GrotElem | int] | None = None):
        self._c: dict[int, GrotElem] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _ge(v)
                if not v.is_zero():
                    self._c[k] = v

    @classmethod
    def const(cls, g: GrotElem | int) -> "TPoly":
        return cls({0: g})

    @classmethod
    def mono(cls, g: GrotElem | int, k: int) -> "TPoly":
        return cls({k: g})

    @classmethod
    def factor(cls, a: int, b: int) -> "TPoly":
        """1 - L^a T^b."""
        return cls({0: ONE, b: -GrotElem.lefschetz(a)})

    @property
    def coeffs(self) -> dict[int, GrotElem]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degrees(self) -> tuple[int, int]:
        return min(self._c), max(self._c)

    def __add__(self, other: "TPoly") -> "TPoly":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return TPoly(out)

    def __neg__(self):
        return TPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GrotElem)):
            g = _ge(other)
            return TPoly({k: v * g for k, v in self._c.items()})
        out: dict[int, GrotElem] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                p = v1 * v2
                k = k1 + k2
                out[k] = out[k] + p if k in out else p
        return TPoly(out)

    __rmul__ = __mul__

    def times_factor(self, a: int, b: int, times: int = 1) -> "TPoly":
        out = self
        lf = GrotElem.lefschetz(a)
        for _ in range(times):
            shifted = {k + b: -(v * lf) for k, v in out._c.items()}
            out = out + TPoly(shifted)
        return out

    def div_factor(self, a: int, b: int) -> "TPoly":
        """Exact quotient by (1 - L^a T^b); raises NotDivisible."""
        if not self._c:
            return self
        lo, hi = self.degrees()
        if hi - b < lo:
            raise NotDivisible("degree too small")
        q: dict[int, GrotElem] = {}
        for k in range(lo, hi - b + 1):
            v = self._c.get(k, ZERO)
            prev = q.get(k - b)
            if prev is not None:
                v = v + prev.shift_l(a)
            if not v.is_zero():
                q[k] = v
        qp = TPoly(q)
        if qp.times_factor(a, b) != self:
            raise NotDivisible(f"(1 - L^{a} T^{b}) does not divide")
        return qp

    def map_coeffs(self, fn) -> dict[int, object]:
        return {k: fn(v) for k, v in self._c.items()}

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"TPoly({render_tpoly(self)})"


def _merge(dens: Iterable[tuple[tuple[int, int], int]]) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for ab, m in dens:
        if m:
            out[ab] = out.get(ab, 0) + m
    return out


class ZetaRat:
    """Element of R[T, 1/(1 - L^a T^b)]."""

    __slots__ = ("num", "den")

    def __init__(
        self,
        num: TPoly,
        den: Mapping[tuple[int, int], int] | Iterable[DenFactor] = (),
        canonical: bool = True,
    ):
        if isinstance(den, Mapping):
            d = {ab: m for ab, m in den.items() if m}
        else:
            d = _merge(((f.a, f.b), f.multiplicity) for f in den)
        for (a, b), m in d.items():
            if b < 1:
                raise ValueError(f"T-exponent must be positive, got {b}")
            if m < 0:
                raise ValueError("negative multiplicity")
        self.num = num
        self.den = dict(sorted(d.items()))
        if num.is_zero():
            self.den = {}
        elif canonical:
            self._cancel()

    @classmethod
    def zero(cls) -> "ZetaRat":
        return cls(TPoly())

    @classmethod
    def poly(cls, p: TPoly) -> "ZetaRat":
        return cls(p)

    @classmethod
    def from_negated_factors(cls, num: TPoly, factors: Iterable[tuple[int, int]]) -> "ZetaRat":
        """Build num / prod (L^a T^b - 1); each factor flips the numerator sign."""
        fl = list(factors)
        sign = -1 if len(fl) % 2 else 1
        return cls(num * sign, _merge(((ab, 1) for ab in fl)))

    def _cancel(self):
        num = self.num
        den = dict(self.den)
        for ab in list(den):
            while den[ab]:
                try:
                    num = num.div_factor(*ab)
                except NotDivisible:
                    break
                den[ab] -= 1
            if not den[ab]:
                del den[ab]
        self.num = num
        self.den = den

    @property
    def factors(self) -> list[DenFactor]:
        return [DenFactor(a, b, m) for (a, b), m in self.den.items()]

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def over(self, den: Mapping[tuple[int, int], int]) -> TPoly:
        """Numerator F with self = F / prod over ``den``."""
        out = self.num
        for ab, m in self.den.items():
            if den.get(ab, 0) < m:
                raise InsufficientDenominator(f"factor {ab} needs multiplicity {m}")
        for ab, m in den.items():
            extra = m - self.den.get(ab, 0)
            if extra:
                out = out.times_factor(ab[0], ab[1], extra)
        return out

    def _common(self, other: "ZetaRat") -> dict[tuple[int, int], int]:
        keys = set(self.den) | set(other.den)
        return {ab: max(self.den.get(ab, 0), other.den.get(ab, 0)) for ab in keys}

    def __add__(self, other: "ZetaRat") -> "ZetaRat":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        d = self._common(other)
        return ZetaRat(self.over(d) + other.over(d), d)

    def __neg__(self):
        return ZetaRat(-self.num, self.den, canonical=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, GrotElem)):
            return ZetaRat(self.num * _ge(other), self.den)
        if isinstance(other, TPoly):
            return ZetaRat(self.num * other, self.den)
        d = _merge(list(self.den.items()) + list(other.den.items()))
        return ZetaRat(self.num * other.num, d)

    __rmul__ = __mul__

    def equals(self, other: "ZetaRat") -> bool:
        d = self._common(other)
        return self.over(d) == other.over(d)

    def __eq__(self, other):
        if not isinstance(other, ZetaRat):
            return NotImplemented
        return self.equals(other)

    __hash__ = None  # equality is semantic, no stable hash

    def order_bound(self, q: Fraction) -> int:
        """Upper bound for the pole order at q: multiplicity of factors of ratio q."""
        return sum(m for (a, b), m in self.den.items() if Fraction(a, b) == q)

    def __repr__(self):
        return f"ZetaRat({render_plain(self)})"


def zeta_term(cls: GrotElem | int, a: int, b: int) -> ZetaRat:
    """cls * L^a T^b / (1 - L^a T^b)."""
    if b < 1:
        raise ValueError(f"T-exponent must be positive, got {b}")
    g = _ge(cls)
    if g.is_zero():
        return ZetaRat.zero()
    return ZetaRat(TPoly.mono(g.shift_l(a), b), {(a, b): 1})


def zeta_add(x: ZetaRat, y: ZetaRat) -> ZetaRat:
    return x + y


def zeta_mul(x: ZetaRat, y: ZetaRat) -> ZetaRat:
    return x * y


def zeta_equals(x: ZetaRat, y: ZetaRat) -> bool:
    return x.equals(y)


def numerator_over(z: ZetaRat, dens: Iterable[DenFactor] | Mapping[tuple[int, int], int]) -> TPoly:
    if not isinstance(dens, Mapping):
        dens = _merge(((f.a, f.b), f.multiplicity) for f in dens)
    return z.over(dens)


# ---------------------------------------------------------------------------
# rendering


def _num_terms(p: TPoly):
    rows = []
    for k, g in p.coeffs.items():
        for m, c in g.terms.items():
            rows.append((k, m, c))
    rows.sort(key=lambda r: (r[0], r[1][0], tuple((s.name, e) for s, e in r[1][1])))
    return rows


def render_tpoly(p: TPoly, latex: bool = False) -> str:
    rows = _num_terms(p)
    if not rows:
        return "0"
    out = ""
    for i, (k, m, c) in enumerate(rows):
        parts = []
        mono = _mono_str(m, latex)
        if mono:
            parts.append(mono)
        if k:
            if latex:
                parts.append("T" if k == 1 else f"T^{{{k}}}")
            else:
                parts.append("T" if k == 1 else f"T^{k}")
        body = ("" if latex else "*").join(parts)
        mag = abs(c)
        if not body:
            body = str(mag)
        elif mag != 1:
            body = f"{mag}{body}" if latex else f"{mag}*{body}"
        if i == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def _factor_str(a: int, b: int, latex: bool) -> str:
    if latex:
        lp = "" if a == 0 else ("\\mathbb{L}" if a == 1 else f"\\mathbb{{L}}^{{{a}}}")
        tp = "T" if b == 1 else f"T^{{{b}}}"
        return f"(1 - {lp}{tp})"
    lp = "" if a == 0 else ("L*" if a == 1 else f"L^{a}*")
    tp = "T" if b == 1 else f"T^{b}"
    return f"(1 - {lp}{tp})"


def _den_str(z: ZetaRat, latex: bool) -> str:
    parts = []
    for (a, b), m in sorted(z.den.items(), key=lambda t: (t[0][1], -t[0][0])):
        f = _factor_str(a, b, latex)
        if m > 1:
            f = f"{f}^{{{m}}}" if latex else f"{f}^{m}"
        parts.append(f)
    return "".join(parts)


def render_plain(z: ZetaRat) -> str:
    num = render_tpoly(z.num)
    if not z.den:
        return num
    return f"({num})/({_den_str(z, False)})"


def render_latex(z: ZetaRat) -> str:
    num = render_tpoly(z.num, latex=True)
    if not z.den:
        return num
    return f"\\frac{{{num}}}{{{_den_str(z, True)}}}"


def to_json(z: ZetaRat) -> dict:
    terms = []
    for k, m, c in _num_terms(z.num):
        terms.append(
            {
                "T": k,
                "L": m[0],
                "classes": {s.name: e for s, e in m[1]},
                "coeff": c,
            }
        )
    return {
        "numerator": terms,
        "denominator": [{"a": a, "b": b, "multiplicity": m} for (a, b), m in z.den.items()],
    }
