"""Shared helpers: fixture access and a generator of valid K3-type models."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from k3zeta.flowers import CATALOG, FlowerSpec, FlowerTypeError, ParityError, TopKind, flower_nus
from k3zeta.sncmodel import load_model, parse_model, validate

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "k3zeta" / "fixtures"
VALID_FIXTURES = ["d2e", "chain", "cand4", "cand2"]


def fixture_model(name: str):
    return load_model(FIXTURES / f"{name}.json")


@pytest.fixture
def d2e():
    return fixture_model("d2e")


@pytest.fixture
def cand4():
    return fixture_model("cand4")


@pytest.fixture
def cand2():
    return fixture_model("cand2")


@pytest.fixture
def chain():
    return fixture_model("chain")


# ---------------------------------------------------------------------------
# sympy conversion, used as an independent arithmetic route

Ls, Ts = sympy.symbols("L T")
_SYMS: dict[str, sympy.Symbol] = {}


def sym(name: str) -> sympy.Symbol:
    if name not in _SYMS:
        _SYMS[name] = sympy.Symbol("c_" + "".join(ch if ch.isalnum() else "_" for ch in name))
    return _SYMS[name]


def grot_to_sympy(g) -> sympy.Expr:
    out = sympy.Integer(0)
    for (le, cls), c in g.terms.items():
        term = sympy.Integer(c) * Ls**le
        for s, e in cls:
            term *= sym(s.name) ** e
        out += term
    return out


def zeta_to_sympy(z) -> sympy.Expr:
    num = sum((grot_to_sympy(c) * Ts**k for k, c in z.num.coeffs.items()), sympy.Integer(0))
    den = sympy.Integer(1)
    for (a, b), m in z.den.items():
        den *= (1 - Ls**a * Ts**b) ** m
    return num / den


def sympy_equal(a, b) -> bool:
    return sympy.cancel(sympy.together(a - b)) == 0


# ---------------------------------------------------------------------------
# random valid models built from the flower catalog

_P2 = {"kind": "P2"}


def _flower_doc(code, N, length, genus, nu_end, attach_id, tag):
    """Components/edges of one flower ending on a component with discrepancy nu_end."""
    t = CATALOG[code]
    for nu0 in range(-2, 40):
        try:
            spec = FlowerSpec(code, N, nu0, length if t.variable_length else None, genus)
            nus = flower_nus(spec)
        except (ParityError, FlowerTypeError):
            continue
        if nus[-1] == nu_end:
            break
    else:
        return None
    mults = spec.all_N
    comps, edges = [], []
    ids = [f"{tag}_{j}" for j in range(spec.length + 1)]
    cg = genus if t.top_kind is TopKind.MINIMAL_RULED else 0
    for j, cid in enumerate(ids):
        if j == 0:
            geom = {"kind": "RuledSurface", "base_genus": genus, "L": 0} if t.top_kind is TopKind.MINIMAL_RULED else _P2
        else:
            geom = {"kind": "RuledSurface", "base_genus": cg, "L": 0}
        comps.append({"id": cid, "N": mults[j], "nu": nus[j], "geometry": geom})
    chain = ids + [attach_id]
    for x, y in zip(chain, chain[1:]):
        edges.append({"a": x, "b": y, "curves": [{"genus": cg}]})
    flower = {"type": code, "members": ids, "attachment": attach_id}
    # only the top has nonzero open Euler characteristic
    top_chi = 2 - 2 * genus if t.top_kind is TopKind.MINIMAL_RULED else 1
    return comps, edges, flower, mults[0] * top_chi, 2 - 2 * cg


def _feasible(N_pot: int, nu_pot: int) -> list[tuple[str, int | None]]:
    """(type, length) pairs that can end on a pot with data (N_pot, nu_pot)."""
    out = []
    for code, t in sorted(CATALOG.items()):
        if code == "4D" or N_pot % t.attach:
            continue
        lengths = range(t.min_length, t.min_length + 3) if t.variable_length else [None]
        for length in lengths:
            if _flower_doc(code, N_pot // t.attach, length, 0, nu_pot, "x", "y") is not None:
                out.append((code, length))
    return out


def random_model(seed: int, chain: bool = False, poincare: bool = True):
    """A valid model with degree 24, or None if the draw cannot be balanced."""
    rng = random.Random(seed)
    if chain:
        N_pot = rng.choice([1, 2, 4])
        nu_pot = rng.randint(0, 4)
        pots = ["V0", "V1"]
    else:
        N_pot = rng.choice([1, 2, 3, 4, 6, 12])
        nu_pot = rng.randint(0, 6)
        pots = ["D"]
    comps, edges, flowers = [], [], []
    flower_deg = 0
    curves_on = {p: 0 for p in pots}
    options = _feasible(N_pot, nu_pot)
    if not options:
        return None
    for k in range(rng.randint(1, 4)):
        code = rng.choice(sorted({c for c, _ in options}))
        length = rng.choice([ln for c, ln in options if c == code])
        t = CATALOG[code]
        genus = rng.choice([0, 0, 1]) if t.top_kind is TopKind.MINIMAL_RULED else 0
        pot = rng.choice(pots)
        c, e, f, deg, chi_curve = _flower_doc(code, N_pot // t.attach, length, genus, nu_pot, pot, f"F{k}")
        comps += c
        edges += e
        flowers.append(f)
        flower_deg += deg
        curves_on[pot] += chi_curve
    if not flowers:
        return None
    rest = 24 - flower_deg
    pot_docs = []
    if chain:
        # V1 gets random blowups; V0 balances the degree
        L1 = rng.randint(0, 6)
        chi1 = 4 + L1 - curves_on["V1"]
        rest -= N_pot * chi1
        if rest % N_pot:
            return None
        chi0 = rest // N_pot
        L0 = chi0 - 4 + curves_on["V0"]
        if L0 < 0:
            return None
        for pid, Lb, chi in (("V0", L0, chi0), ("V1", L1, chi1)):
            d = {"id": pid, "N": N_pot, "nu": nu_pot, "geometry": {"kind": "RuledSurface", "base_genus": 0, "L": Lb}}
            if poincare:
                d["class"] = {"name": f"{pid}~o", "poincare": _generic_poincare(chi, rng)}
            pot_docs.append(d)
        edges.insert(0, {"a": "V0", "b": "V1", "curves": [{"genus": 1, "class": {"name": "C_ell", "poincare": {"0": 1, "1": -2, "2": 1}}}]})
    else:
        if rest % N_pot:
            return None
        chi = rest // N_pot
        if chi < 0:
            return None
        d = {"id": "D", "N": N_pot, "nu": nu_pot, "geometry": {"kind": "KTrivial", "euler": chi + curves_on["D"]}}
        if poincare:
            d["class"] = {"name": "D~o", "poincare": _generic_poincare(chi, rng)}
        pot_docs.append(d)
    doc = {"components": pot_docs + comps, "edges": edges, "flowers": flowers}
    m = parse_model(doc)
    rep = validate(m, strict=True)
    assert rep.valid, (doc, [str(v) for v in rep.violations])
    return m


def _generic_poincare(chi: int, rng: random.Random) -> dict:
    """A Laurent polynomial with value chi at v = 1 and a dominant top term."""
    top = rng.randint(5, 9)
    mid = rng.randint(-3, 3)
    return {"0": chi - top - mid, "2": mid, "4": top}


def random_models(n: int, chain: bool = False, start: int = 0, poincare: bool = True):
    out = []
    seed = start
    while len(out) < n:
        m = random_model(seed, chain, poincare)
        if m is not None:
            out.append(m)
        seed += 1
    return out


def single_flower_model(code: str, genus: int = 0):
    """Small flowerpot carrying copies of one flower type, balanced to degree 24."""
    t = CATALOG[code]
    for N_pot in (1, 2, 3, 4, 6, 8, 12):
        if N_pot % t.attach:
            continue
        for nu_pot in range(0, 12):
            length = t.min_length if t.variable_length else None
            if _flower_doc(code, N_pot // t.attach, length, genus, nu_pot, "D", "F") is None:
                continue
            for copies in range(1, 7):
                parts = [_flower_doc(code, N_pot // t.attach, length, genus, nu_pot, "D", f"F{k}") for k in range(copies)]
                deg = sum(p[3] for p in parts)
                rest = 24 - deg
                if rest % N_pot:
                    continue
                chi = rest // N_pot
                pot = {
                    "id": "D",
                    "N": N_pot,
                    "nu": nu_pot,
                    "geometry": {"kind": "KTrivial", "euler": chi + sum(p[4] for p in parts)},
                    "class": {"name": "D~o", "poincare": {"0": chi - 7, "4": 7}},
                }
                doc = {
                    "components": [pot] + [c for p in parts for c in p[0]],
                    "edges": [e for p in parts for e in p[1]],
                    "flowers": [p[2] for p in parts],
                }
                m = parse_model(doc)
                assert validate(m, strict=True).valid
                return m
    return None


def catalog_models():
    out = []
    for code in sorted(CATALOG):
        if code == "4D":
            continue
        genera = [0, 1] if CATALOG[code].top_kind is TopKind.MINIMAL_RULED else [0]
        for g in genera:
            m = single_flower_model(code, g)
            if m is not None:
                out.append(m)
    return out
