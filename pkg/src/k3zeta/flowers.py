"""Flower catalog, numerical recursions and flower contributions.

A flower is a chain ``N_0 F_0 + ... + N_l F_l`` hanging off a minimal-weight
component ``F_{l+1}``.  Its contribution to the motivic zeta function is the
part of the Denef-Loeser sum indexed by the flower's components and by the
curves ``C_{j+1} = F_j  cap  F_{j+1}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .grotring import ONE, ClassSymbol, GrotElem, L, VLaurent
from .ratzeta import TPoly, ZetaRat, zeta_equals, zeta_term

__all__ = [
    "TopKind",
    "FlowerType",
    "FlowerSpec",
    "FlowerClasses",
    "CATALOG",
    "TABLE_CODES",
    "ParityError",
    "FlowerTypeError",
    "canonical_code",
    "flower_compose",
    "flower_nus",
    "endpoint_nu",
    "cover_classes",
    "contribution",
    "closed_form",
    "verify_table",
    "default_grid",
    "TableReport",
]


class FlowerTypeError(ValueError):
    pass


class ParityError(ValueError):
    """The recursions would produce a non-integral discrepancy."""


class TopKind(enum.Enum):
    P2_LINE = "P2Line"
    P2_CONIC = "P2Conic"
    MINIMAL_RULED = "MinimalRuled"


@dataclass(frozen=True)
class FlowerType:
    code: str
    top_kind: TopKind
    M: int
    # multipliers of N for F_0..F_l, as a function of l
    pattern: Callable[[int], list[int]] = field(repr=False, compare=False)
    attach: int = 1
    fixed_length: int | None = None
    min_length: int = 1

    @property
    def variable_length(self) -> bool:
        return self.fixed_length is None


def _fixed(ms):
    return lambda _l: list(ms)


_LINE, _CONIC, _RULED = TopKind.P2_LINE, TopKind.P2_CONIC, TopKind.MINIMAL_RULED

_TYPES = [
    FlowerType("2A", _LINE, 2, _fixed([1]), 2, 0),
    FlowerType("3A", _LINE, 3, _fixed([1, 2]), 3, 1),
    FlowerType("3B", _LINE, 3, _fixed([1]), 3, 0),
    FlowerType("4A", _LINE, 4, _fixed([1, 2, 3]), 4, 2),
    FlowerType("4B", _LINE, 4, _fixed([1]), 4, 0),
    FlowerType("6A", _LINE, 6, _fixed([1, 2, 3, 4, 5]), 6, 4),
    FlowerType("6B", _LINE, 6, _fixed([1]), 6, 0),
    FlowerType("2B", _CONIC, 2, _fixed([2]), 1, 0),
    FlowerType("2C", _CONIC, 2, lambda l: [2] + [1] * l, 1, None, 1),
    FlowerType("4C", _CONIC, 4, lambda l: [2] + [1] * l, 2, None, 1),
    FlowerType("4D", _CONIC, 4, lambda l: [1] + [1] * l, 1, None, 1),
    FlowerType("6C", _CONIC, 6, lambda l: [2] + [1] * (l - 1) + [2], 3, None, 2),
    FlowerType("6D", _CONIC, 6, lambda l: [2] + [1] * l, 3, None, 1),
    FlowerType("6E", _CONIC, 6, _fixed([2]), 3, 0),
    FlowerType("4alpha", _RULED, 4, _fixed([1]), 2, 0),
    FlowerType("6alpha", _RULED, 6, _fixed([1, 2]), 3, 1),
    FlowerType("6beta", _RULED, 6, _fixed([1]), 3, 0),
    FlowerType("8alpha", _RULED, 8, _fixed([1, 2, 3]), 4, 2),
    FlowerType("8beta", _RULED, 8, _fixed([1]), 4, 0),
    FlowerType("12alpha", _RULED, 12, _fixed([1, 2, 3, 4, 5]), 6, 4),
    FlowerType("12beta", _RULED, 12, _fixed([1]), 6, 0),
]

CATALOG: dict[str, FlowerType] = {t.code: t for t in _TYPES}

# rows with a transcribed closed form; 4D has none
TABLE_CODES = [c for c in CATALOG if c != "4D"]

_ALIASES = {"α": "alpha", "β": "beta", "a": "alpha", "b": "beta"}


def canonical_code(code: str) -> str:
    """Accept '4α', '4alpha' or '4a'-style spellings for ruled types."""
    c = code.strip()
    if c in CATALOG:
        return c
    c = c.replace("α", "alpha").replace("β", "beta")
    if c in CATALOG:
        return c
    raise FlowerTypeError(f"unknown flower type {code!r}")


def flower_compose(code: str, N: int, length: int | None = None) -> tuple[list[int], int]:
    """Multiplicities of F_0..F_l and the multiplicity of the attachment."""
    t = CATALOG[canonical_code(code)]
    if N < 1:
        raise FlowerTypeError("N must be positive")
    if t.variable_length:
        if length is None:
            raise FlowerTypeError(f"type {t.code} needs a length")
        if length < t.min_length:
            raise FlowerTypeError(f"type {t.code} needs length >= {t.min_length}")
        l = length
    else:
        if length is not None and length != t.fixed_length:
            raise FlowerTypeError(f"type {t.code} has fixed length {t.fixed_length}")
        l = t.fixed_length
    return [m * N for m in t.pattern(l)], t.attach * N


@dataclass(frozen=True)
class FlowerSpec:
    """A concrete flower: type, scale N, discrepancy nu_0 of the top, length, genus."""

    code: str
    N: int
    nu0: int
    length: int | None = None
    genus: int = 0

    def __post_init__(self):
        object.__setattr__(self, "code", canonical_code(self.code))
        t = self.type
        if t.fixed_length is not None:
            if self.length is None:
                object.__setattr__(self, "length", t.fixed_length)
            elif self.length != t.fixed_length:
                raise FlowerTypeError(f"type {t.code} has fixed length {t.fixed_length}")
        elif self.length is None or self.length < t.min_length:
            raise FlowerTypeError(f"type {t.code} needs length >= {t.min_length}")
        if self.genus < 0:
            raise FlowerTypeError("genus must be nonnegative")
        if t.top_kind is not TopKind.MINIMAL_RULED and self.genus != 0:
            raise FlowerTypeError("only ruled-top flowers carry a genus")

    @classmethod
    def from_nu1(cls, code: str, N: int, nu1: int, length: int | None = None) -> "FlowerSpec":
        """Conic types, parametrized by the discrepancy of F_1."""
        t = CATALOG[canonical_code(code)]
        if t.top_kind is not TopKind.P2_CONIC:
            raise FlowerTypeError("nu1 parametrization is for conic types")
        mults, attach = flower_compose(code, N, length)
        n0 = mults[0]
        n1 = mults[1] if len(mults) > 1 else attach
        # conic top: nu1 = (N1/N0) nu0 - 1/2
        nu0 = (Fraction(nu1) + Fraction(1, 2)) * n0 / n1
        if nu0.denominator != 1:
            raise ParityError(f"{code}: nu1={nu1} gives nu0={nu0}")
        return cls(code, N, int(nu0), length)

    @property
    def type(self) -> FlowerType:
        return CATALOG[self.code]

    @property
    def mults(self) -> list[int]:
        return flower_compose(self.code, self.N, self.length)[0]

    @property
    def attach_N(self) -> int:
        return flower_compose(self.code, self.N, self.length)[1]

    @property
    def all_N(self) -> list[int]:
        m, a = flower_compose(self.code, self.N, self.length)
        return m + [a]


_TOP_OFFSET = {
    TopKind.P2_LINE: Fraction(2),
    TopKind.P2_CONIC: Fraction(1, 2),
    TopKind.MINIMAL_RULED: Fraction(1),
}


def _raw_nus(spec: FlowerSpec) -> list[Fraction]:
    ns = spec.all_N
    nus = [Fraction(spec.nu0)]
    nus.append(Fraction(ns[1], ns[0]) * nus[0] - _TOP_OFFSET[spec.type.top_kind])
    for j in range(1, len(ns) - 1):
        nus.append(Fraction(ns[j - 1] + ns[j + 1], ns[j]) * nus[j] - nus[j - 1])
    return nus


def endpoint_nu(code: str, nu0, length: int | None = None) -> Fraction:
    """Closed-form relation between nu_{l+1} and nu_0."""
    c = canonical_code(code)
    n = Fraction(nu0)
    l = length
    table = {
        "2A": lambda: 2 * n - 2,
        "3A": lambda: 3 * n - 4,
        "3B": lambda: 3 * n - 2,
        "4A": lambda: 4 * n - 6,
        "4B": lambda: 4 * n - 2,
        "6A": lambda: 6 * n - 10,
        "6B": lambda: 6 * n - 2,
        "2B": lambda: (n - 1) / 2,
        "2C": lambda: (n - 2 * l - 1) / 2,
        "4C": lambda: n - 2 * l,
        "4D": lambda: (2 * n - l - 1) / 2,
        "6C": lambda: (3 * n - 6 * l + 5) / 2,
        "6D": lambda: (3 * n - 6 * l + 1) / 2,
        "6E": lambda: (3 * n - 1) / 2,
        "4alpha": lambda: 2 * n - 1,
        "6alpha": lambda: 3 * n - 2,
        "6beta": lambda: 3 * n - 1,
        "8alpha": lambda: 4 * n - 3,
        "8beta": lambda: 4 * n - 1,
        "12alpha": lambda: 6 * n - 5,
        "12beta": lambda: 6 * n - 1,
    }
    return table[c]()


def flower_nus(spec: FlowerSpec) -> list[int]:
    """nu_0, ..., nu_{l+1} from the consecutive-component relations."""
    raw = _raw_nus(spec)
    bad = [(j, v) for j, v in enumerate(raw) if v.denominator != 1]
    if bad:
        j, v = bad[0]
        raise ParityError(f"{spec.code} with nu0={spec.nu0}: nu_{j} = {v} is not an integer")
    end = endpoint_nu(spec.code, spec.nu0, spec.length)
    if raw[-1] != end:
        raise AssertionError(f"{spec.code}: recursion gives {raw[-1]}, endpoint table {end}")
    return [int(v) for v in raw]


def admissible(spec_args: tuple) -> bool:
    try:
        flower_nus(FlowerSpec(*spec_args))
    except (ParityError, FlowerTypeError):
        return False
    return True


# ---------------------------------------------------------------------------
# cover classes


@dataclass(frozen=True)
class FlowerClasses:
    """Classes of F_j open parts (j = 0..l) and of curves C_1..C_{l+1}."""

    opens: list[GrotElem]
    curves: list[GrotElem]
    symbols: dict[str, ClassSymbol]


def _poincare_n_copies(n: int, genus: int) -> VLaurent:
    return VLaurent({0: n, 1: -2 * genus * n, 2: n})


def cover_classes(
    spec: FlowerSpec,
    tag: str = "F",
    top_name: str | None = None,
    curve_name: str | None = None,
) -> FlowerClasses:
    """Cover classes of the strata of one flower.

    P^2-line top: [P] L^2 with [P] a set of N_0 points, curves [P](L+1).
    Minimal ruled top: [C~] L, curves [C~].
    Conic top: opaque symbols for the top and for C_1 with the specialization
    data of (N_0/2)(L+1)L and (N_0/2)(L+1).
    Middle components are [C_1~](L-1) with every curve class [C_1~].
    """
    n0 = spec.mults[0]
    l = spec.length
    kind = spec.type.top_kind
    syms: dict[str, ClassSymbol] = {}
    if kind is TopKind.P2_LINE:
        p = ClassSymbol(top_name or f"P_{tag}", euler=n0, poincare=VLaurent.const(n0))
        syms["P"] = p
        curve = GrotElem.symbol(p) * (L + 1)
        top = GrotElem.symbol(p) * L**2
    elif kind is TopKind.MINIMAL_RULED:
        g = spec.genus
        c = ClassSymbol(
            curve_name or f"C_{tag}",
            euler=n0 * (2 - 2 * g),
            poincare=_poincare_n_copies(n0, g),
        )
        syms["C1"] = c
        curve = GrotElem.symbol(c)
        top = curve * L
    else:
        half = n0 // 2
        v2 = VLaurent({2: 1})
        f0 = ClassSymbol(
            top_name or f"F0o_{tag}",
            euler=n0,
            poincare=VLaurent.const(half) * (v2 + 1) * v2,
        )
        c1 = ClassSymbol(
            curve_name or f"C_{tag}",
            euler=n0,
            poincare=VLaurent.const(half) * (v2 + 1),
        )
        syms["F0o"] = f0
        syms["C1"] = c1
        curve = GrotElem.symbol(c1)
        top = GrotElem.symbol(f0)
    middle = curve * (L - 1)
    return FlowerClasses([top] + [middle] * l, [curve] * (l + 1), syms)


# ---------------------------------------------------------------------------
# contributions


def contribution(
    spec: FlowerSpec,
    classes: FlowerClasses | None = None,
    attach_nu: int | None = None,
) -> ZetaRat:
    """Sum over j = 0..l of [F_j~o] t_j + (L-1)[C_{j+1}~] t_j t_{j+1}."""
    if classes is None:
        classes = cover_classes(spec)
    ns = spec.all_N
    nus = flower_nus(spec)
    if attach_nu is not None and attach_nu != nus[-1]:
        raise ValueError(f"attachment discrepancy {attach_nu} != {nus[-1]}")
    terms = [zeta_term(ONE, -nus[j], ns[j]) for j in range(len(ns))]
    total = ZetaRat.zero()
    for j in range(spec.length + 1):
        total = total + terms[j] * classes.opens[j]
        total = total + terms[j] * terms[j + 1] * (classes.curves[j] * (L - 1))
    return total


def _x(a: int, b: int, c: GrotElem | int = 1) -> TPoly:
    """c L^a T^b as a polynomial in T."""
    base = c if isinstance(c, GrotElem) else GrotElem.const(c)
    return TPoly.mono(base.shift_l(a), b)


def _one() -> TPoly:
    return TPoly.const(1)


def _poly_sum(ps: Iterable[TPoly]) -> TPoly:
    out = TPoly()
    for p in ps:
        out = out + p
    return out


def _lpow_minus_one(k: int) -> GrotElem:
    return GrotElem.lefschetz(k) - 1


def closed_form(spec: FlowerSpec, classes: FlowerClasses | None = None) -> ZetaRat:
    """The tabulated closed form of the contribution at concrete integers."""
    t = spec.type
    if t.code == "4D":
        raise FlowerTypeError("type 4D has no closed form")
    if classes is None:
        classes = cover_classes(spec)
    ns = spec.all_N
    nus = flower_nus(spec)
    n0, v0 = ns[0], nus[0]
    nE, vE = ns[-1], nus[-1]
    l = spec.length
    y = _x(-v0, n0)
    one = _one()

    if t.top_kind is TopKind.P2_LINE:
        pre = _x(-v0 + 2, n0, GrotElem.symbol(classes.symbols["P"]))
        bodies = {
            "2A": one + y,
            "3A": _x(-2 * v0 + 2, 2 * n0) + _x(-v0 + 2, n0) + one,
            "3B": _x(-2 * v0, 2 * n0) + y + one,
            "4A": _x(-3 * v0 + 4, 3 * n0) + _x(-2 * v0 + 4, 2 * n0) + _x(-v0 + 2, n0) + one,
            "4B": (y + one) * (_x(-2 * v0, 2 * n0) + one),
            "6A": _poly_sum(
                [
                    _x(-5 * v0 + 8, 5 * n0),
                    _x(-4 * v0 + 8, 4 * n0),
                    _x(-3 * v0 + 6, 3 * n0),
                    _x(-2 * v0 + 4, 2 * n0),
                    _x(-v0 + 2, n0),
                    one,
                ]
            ),
            "6B": (y + one) * (_x(-2 * v0, 2 * n0) - y + one) * (_x(-2 * v0, 2 * n0) + y + one),
        }
        return ZetaRat(pre * bodies[t.code], {(-vE, nE): 1})

    if t.top_kind is TopKind.MINIMAL_RULED:
        pre = _x(-v0 + 1, n0, GrotElem.symbol(classes.symbols["C1"]))
        bodies = {
            "4alpha": one + y,
            "6alpha": _x(-2 * v0 + 1, 2 * n0) + _x(-v0 + 1, n0) + one,
            "6beta": _x(-2 * v0, 2 * n0) + y + one,
            "8alpha": _x(-3 * v0 + 2, 3 * n0) + _x(-2 * v0 + 2, 2 * n0) + _x(-v0 + 1, n0) + one,
            "8beta": (y + one) * (_x(-2 * v0, 2 * n0) + one),
            "12alpha": _poly_sum(
                [
                    _x(-5 * v0 + 4, 5 * n0),
                    _x(-4 * v0 + 4, 4 * n0),
                    _x(-3 * v0 + 3, 3 * n0),
                    _x(-2 * v0 + 2, 2 * n0),
                    _x(-v0 + 1, n0),
                    one,
                ]
            ),
            "12beta": (y + one) * (_x(-2 * v0, 2 * n0) - y + one) * (_x(-2 * v0, 2 * n0) + y + one),
        }
        return ZetaRat(pre * bodies[t.code], {(-vE, nE): 1})

    # conic tops
    f0 = GrotElem.symbol(classes.symbols["F0o"])
    c1 = GrotElem.symbol(classes.symbols["C1"])
    first = ZetaRat(_x(-v0, n0, f0), {(-v0, n0): 1})
    if t.code in ("2B", "6E"):
        cross = zeta_term(ONE, -v0, n0) * zeta_term(ONE, -vE, nE) * (c1 * (L - 1))
        return first + cross
    n1, v1 = ns[1], nus[1]
    Lm1 = L - 1
    if t.code == "2C":
        body = _poly_sum(
            [
                _x(-2 * v1 + l, 2 * n1, Lm1),
                _x(-v1 + 1, n1, _lpow_minus_one(l)),
                _x(1, 0, _lpow_minus_one(l)),
            ]
        )
    elif t.code == "4C":
        body = _poly_sum(
            [
                _x(-3 * v1 + 2 * l - 1, 3 * n1, Lm1),
                _x(-2 * v1 + l, 2 * n1, _lpow_minus_one(l)),
                _x(-v1 + 1, n1, _lpow_minus_one(2 * l - 1)),
                _x(1, 0, _lpow_minus_one(l)),
            ]
        )
    elif t.code == "6C":
        body = _poly_sum(
            [
                _x(-4 * v1 + 3 * l - 4, 4 * n1, Lm1),
                _x(-3 * v1 + 2 * l - 2, 3 * n1, _lpow_minus_one(l - 1)),
                _x(-2 * v1 + l - 1, 2 * n1, _lpow_minus_one(2 * l - 2)),
                _x(-v1 + 1, n1, _lpow_minus_one(2 * l - 2)),
                _x(1, 0, _lpow_minus_one(l - 1)),
            ]
        )
    elif t.code == "6D":
        body = _poly_sum(
            [
                _x(-4 * v1 + 3 * l - 2, 4 * n1, Lm1),
                _x(-3 * v1 + 2 * l - 1, 3 * n1, _lpow_minus_one(l)),
                _x(-2 * v1 + l, 2 * n1, _lpow_minus_one(2 * l - 1)),
                _x(-v1 + 1, n1, _lpow_minus_one(2 * l - 1)),
                _x(1, 0, _lpow_minus_one(l)),
            ]
        )
    else:  # pragma: no cover - catalog is closed
        raise FlowerTypeError(t.code)
    second = ZetaRat(_x(-v1 - 1, n1, c1) * body, {(-v0, n0): 1, (-vE, nE): 1})
    return first + second


# ---------------------------------------------------------------------------
# table verification


@dataclass
class TableReport:
    code: str
    checked: int = 0
    failures: list[FlowerSpec] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures


def _admissible_nus(code: str, N: int, length, count: int, start: int = -3) -> list[int]:
    out = []
    n = start
    while len(out) < count and n < start + 40 * count:
        try:
            flower_nus(FlowerSpec(code, N, n, length))
            out.append(n)
        except ParityError:
            pass
        n += 1
    return out


def default_grid(code: str, max_N: int = 3, nu_count: int = 6, max_length: int = 5):
    """Grid points: N <= max_N, nu_count consecutive admissible nu_0, l <= max_length."""
    t = CATALOG[canonical_code(code)]
    lengths = range(t.min_length, max_length + 1) if t.variable_length else [t.fixed_length]
    genera = [0, 1, 2] if t.top_kind is TopKind.MINIMAL_RULED else [0]
    for N in range(1, max_N + 1):
        for l in lengths:
            for nu in _admissible_nus(t.code, N, l, nu_count):
                for g in genera:
                    yield FlowerSpec(t.code, N, nu, l, g)


def verify_table(
    code: str,
    grid: Iterable[FlowerSpec] | None = None,
    form: Callable[[FlowerSpec, FlowerClasses], ZetaRat] = closed_form,
) -> TableReport:
    """Compare the built contribution with the closed form at every grid point."""
    code = canonical_code(code)
    rep = TableReport(code)
    points = default_grid(code) if grid is None else grid
    for spec in points:
        cls = cover_classes(spec)
        rep.checked += 1
        if not zeta_equals(contribution(spec, cls), form(spec, cls)):
            rep.failures.append(spec)
    return rep
