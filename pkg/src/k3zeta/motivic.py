"""Motivic zeta function of a model via the Denef-Loeser formula, and its poles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .flowers import TopKind, contribution
from .grotring import GrotElem, L, MissingSpecializationData, VLaurent, poincare_specialize
from .ratzeta import TPoly, ZetaRat, numerator_over, zeta_term
from .sncmodel import (
    Model,
    assign_cover_classes,
    classify,
    curve_class,
    flower_classes,
    flower_spec,
    minimal_components,
    open_class,
)

__all__ = [
    "Pole",
    "PoleReport",
    "assemble",
    "minimal_part",
    "flower_contributions",
    "candidate_poles",
    "conic_tops",
    "exact_poles",
    "specialize_tpoly",
    "poincare_pole_test",
    "oracle_poles",
    "theta_specialize",
]


def _prepared(m: Model) -> Model:
    """Cover classes are assigned once; already-assigned models pass through."""
    if any(c.cover_class is not None for c in m.components):
        return m
    return assign_cover_classes(m)


def _edge_terms(m: Model, edge) -> ZetaRat:
    a, b = m.component(edge.a), m.component(edge.b)
    ta = zeta_term(1, -a.nu, a.N)
    tb = zeta_term(1, -b.nu, b.N)
    out = ZetaRat.zero()
    for k in range(len(edge.curves)):
        out = out + ta * tb * (curve_class(m, edge, k) * (L - 1))
    return out


def assemble(m: Model) -> ZetaRat:
    """Sum over strata E_J (|J| <= 2) of (L-1)^{|J|-1}[E_J~o] prod L^-nu T^N/(1 - L^-nu T^N)."""
    m = _prepared(m)
    total = ZetaRat.zero()
    for c in m.components:
        total = total + zeta_term(open_class(m, c.id), -c.nu, c.N)
    for e in m.edges:
        total = total + _edge_terms(m, e)
    return total


def minimal_part(m: Model) -> ZetaRat:
    """Terms of strata contained in the minimal-weight components."""
    m = _prepared(m)
    mins = set(minimal_components(m))
    total = ZetaRat.zero()
    for cid in mins:
        c = m.component(cid)
        total = total + zeta_term(open_class(m, cid), -c.nu, c.N)
    for e in m.edges:
        if e.a in mins and e.b in mins:
            total = total + _edge_terms(m, e)
    return total


def flower_contributions(m: Model) -> list[ZetaRat]:
    m = _prepared(m)
    out = []
    for f in m.flowers:
        spec = flower_spec(m, f)
        out.append(contribution(spec, flower_classes(m, f), attach_nu=m.component(f.attachment).nu))
    return out


def candidate_poles(m: Model) -> set[tuple[int, int]]:
    """Denominator data (-nu_i, N_i) of all components."""
    if not m.components:
        raise ValueError("empty model")
    return {(-c.nu, c.N) for c in m.components}


def conic_tops(m: Model) -> list[str]:
    out = []
    for f in m.flowers:
        spec = flower_spec(m, f)
        if spec.type.top_kind is TopKind.P2_CONIC:
            out.append(f.top)
    return out


@dataclass(frozen=True)
class Pole:
    q: Fraction
    order: int
    source: str  # "MinimalWeight" or "ConicTop"
    components: tuple[str, ...] = ()


@dataclass
class PoleReport:
    candidates: set[tuple[int, int]]
    poles: list[Pole] = field(default_factory=list)
    lct: Fraction = Fraction(0)
    delta: int = 0

    @property
    def ratios(self) -> list[Fraction]:
        return [p.q for p in self.poles]


def exact_poles(m: Model) -> PoleReport:
    """Poles from the structure of the model: the minimal weight and conic tops."""
    kind = classify(m)
    delta = 0 if kind == "Flowerpot" else 1
    mins = minimal_components(m)
    lct = min(Fraction(c.nu, c.N) for c in m.components)
    poles = [Pole(-lct, delta + 1, "MinimalWeight", tuple(mins))]
    by_q: dict[Fraction, list[str]] = {}
    for cid in conic_tops(m):
        by_q.setdefault(m.component(cid).ratio, []).append(cid)
    for q, ids in by_q.items():
        poles.append(Pole(q, 1, "ConicTop", tuple(ids)))
    poles.sort(key=lambda p: p.q, reverse=True)
    return PoleReport(candidate_poles(m), poles, lct, delta)


# ---------------------------------------------------------------------------
# Poincare specialization oracle


def specialize_tpoly(p: TPoly) -> dict[int, VLaurent]:
    """Apply L -> v^2 and [X] -> P(X) coefficientwise."""
    return {k: poincare_specialize(c) for k, c in p.coeffs.items()}


def _substitute(poly: dict[int, VLaurent], t_exp: Fraction) -> VLaurent:
    out = VLaurent()
    for k, c in poly.items():
        out = out + c * VLaurent.monomial(t_exp * k)
    return out


def poincare_pole_test(z: ZetaRat, a: int, b: int) -> bool:
    """Certify a pole at a/b: P(F) must not vanish at T = v^(-2a/b).

    ``z`` is taken in lowest terms; ``F`` is its numerator over all remaining
    factors.  Raises MissingSpecializationData if a class lacks Poincare data.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    q = Fraction(a, b)
    if not any(f.ratio == q for f in z.factors):
        return False
    num = numerator_over(z, z.factors)
    return not _substitute(specialize_tpoly(num), Fraction(-2 * a, b)).is_zero()


def oracle_poles(m: Model, z: ZetaRat | None = None) -> dict[tuple[int, int], bool | None]:
    """Run the Poincare test on every candidate; None marks an untestable candidate."""
    if z is None:
        z = assemble(m)
    out: dict[tuple[int, int], bool | None] = {}
    for a, b in sorted(candidate_poles(m), key=lambda ab: (-Fraction(*ab), ab[1])):
        try:
            out[(a, b)] = poincare_pole_test(z, a, b)
        except MissingSpecializationData:
            out[(a, b)] = None
    return out


def theta_specialize(m: Model, q: Fraction) -> VLaurent:
    """Poincare specialization of the common numerator of the conic-top terms at ratio q.

    Each conic top E_i with double curve C_i contributes
    [E_i~o] L^-nu T^N (1 - L^-nu' T^N') + (L-1)[C_i~] L^{-nu-nu'} T^{N+N'},
    with (N', nu') the data of the component meeting E_i in the conic, brought
    to the denominator (1 - L^-nu T^N) prod_i (1 - L^-nu'_i T^N'_i) with
    N = lcm N_i.  Substitution is at T = v^(-2q).
    """
    m = _prepared(m)
    q = Fraction(q)
    tops = [cid for cid in conic_tops(m) if m.component(cid).ratio == q]
    if not tops:
        raise ValueError(f"no conic-flower top at ratio {q}")
    data = []
    for cid in tops:
        f, _ = m.flower_of(cid)
        c = m.component(cid)
        nxt = m.component(f.members[1] if f.length else f.attachment)
        edge = m.edge_between(cid, nxt.id)
        data.append((c, nxt, open_class(m, cid), curve_class(m, edge, 0)))
    N = lcm(*(c.N for c, *_ in data))
    theta = TPoly()
    for i, (c, nxt, e_cls, c_cls) in enumerate(data):
        theta_i = TPoly.mono(e_cls.shift_l(-c.nu), c.N) * TPoly.factor(-nxt.nu, nxt.N)
        theta_i = theta_i + TPoly.mono((c_cls * (L - 1)).shift_l(-c.nu - nxt.nu), c.N + nxt.N)
        geo = TPoly({k * c.N: GrotElem.lefschetz(-k * c.nu) for k in range(N // c.N)})
        term = theta_i * geo
        for j, (_, nj, *_rest) in enumerate(data):
            if j != i:
                term = term * TPoly.factor(-nj.nu, nj.N)
        theta = theta + term
    return _substitute(specialize_tpoly(theta), -2 * q)
