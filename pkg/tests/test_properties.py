"""Invariant suites over fixtures, generated models and random flower data."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from conftest import VALID_FIXTURES, catalog_models, fixture_model, random_models
from k3zeta.flowers import CATALOG, FlowerSpec, ParityError, TopKind, flower_nus
from k3zeta.monodromy import acampo, check_property, cyclotomic_exponents, degree_check
from k3zeta.sncmodel import classify, degree_sum, flower_spec, weight

MODELS = (
    [fixture_model(n) for n in VALID_FIXTURES]
    + random_models(60, start=11000)
    + random_models(40, chain=True, start=11000)
    + catalog_models()
)


def order(N, nu):
    return N // gcd(N, nu % N) if nu % N else 1


def conic_order_ok(code, N0, nu0, N_end):
    d = order(N0, nu0)
    if code == "4C":
        return N_end % 2 == 0 and (N_end // 2) % d != 0
    return N_end % d != 0


@pytest.mark.parametrize("idx", range(len(MODELS)))
def test_model_invariants(idx):
    m = MODELS[idx]
    assert degree_sum(m) == 24
    z = acampo(m)
    assert degree_check(z) == 24
    assert all(k <= 0 for k in cyclotomic_exponents(z).values())
    for f in m.flowers:
        chain = list(f.members) + [f.attachment]
        ws = [weight(m, c) for c in chain]
        assert all(a > b for a, b in zip(ws, ws[1:]))
        ns = [m.component(c).N for c in chain]
        nus = [m.component(c).nu for c in chain]
        for j in range(1, len(chain) - 1):
            assert nus[j + 1] * ns[j] == (ns[j - 1] + ns[j + 1]) * nus[j] - nus[j - 1] * ns[j]
        if CATALOG[f.type_code].top_kind is TopKind.P2_CONIC:
            assert conic_order_ok(f.type_code, ns[0], nus[0], ns[-1])
    if classify(m) == "Flowerpot":
        assert check_property(m).holds


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([c for c, t in CATALOG.items() if t.top_kind is TopKind.P2_CONIC and c != "4D"]),
    st.integers(1, 6),
    st.integers(-5, 40),
    st.integers(1, 7),
)
def test_conic_root_of_unity_constraint(code, N, nu0, length):
    t = CATALOG[code]
    l = max(length, t.min_length) if t.variable_length else None
    try:
        spec = FlowerSpec(code, N, nu0, l)
        nus = flower_nus(spec)
    except ParityError:
        return
    ns = spec.all_N
    assert conic_order_ok(code, ns[0], nus[0], ns[-1])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(CATALOG)), st.integers(1, 6), st.integers(-5, 40), st.integers(1, 7), st.integers(0, 3))
def test_flower_recursion_random(code, N, nu0, length, genus):
    t = CATALOG[code]
    l = max(length, t.min_length) if t.variable_length else None
    g = genus if t.top_kind is TopKind.MINIMAL_RULED else 0
    try:
        spec = FlowerSpec(code, N, nu0, l, g)
        nus = flower_nus(spec)
    except ParityError:
        return
    ns = spec.all_N
    for j in range(1, len(ns) - 1):
        assert nus[j + 1] * ns[j] == (ns[j - 1] + ns[j + 1]) * nus[j] - nus[j - 1] * ns[j]
    ws = [Fraction(nu, n) for nu, n in zip(nus, ns)]
    assert all(a > b for a, b in zip(ws, ws[1:]))


def test_flower_spec_round_trip():
    for m in MODELS:
        for f in m.flowers:
            spec = flower_spec(m, f)
            chain = list(f.members) + [f.attachment]
            assert spec.all_N == [m.component(c).N for c in chain]
            assert flower_nus(spec) == [m.component(c).nu for c in chain]
