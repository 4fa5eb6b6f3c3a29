import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import VALID_FIXTURES, catalog_models, fixture_model, random_models
from k3zeta.flowers import CATALOG, TopKind
from k3zeta.monodromy import (
    CycloProduct,
    DegreeError,
    EigenvalueCandidate,
    acampo,
    candidate,
    check_property,
    cyclo_multiplicity,
    cyclotomic_exponents,
    degree_check,
    from_cyclotomic,
    is_eigenvalue,
    mobius,
    xi_order,
)
from k3zeta.sncmodel import model_to_dict, parse_model

T = sympy.Symbol("T")


def test_mobius_against_sympy():
    for n in range(1, 200):
        assert mobius(n) == sympy.mobius(n)
    with pytest.raises(ValueError):
        mobius(0)


def test_acampo_d2e(d2e):
    z = acampo(d2e)
    assert z.exponents == {1: -22, 2: -1}
    assert z.render_raw() == "1/((T^2 - 1)(T - 1)^22)"
    assert degree_check(z) == 24


def test_acampo_cand4(cand4):
    z = acampo(cand4)
    assert z.exponents == {1: -2, 2: -11}
    assert z.render_raw() == "1/((T^2 - 1)^11(T - 1)^2)"
    assert degree_check(z) == 24


def test_acampo_cand2(cand2):
    z = acampo(cand2)
    assert z.exponents == {1: -14, 2: 5, 4: -5}
    assert z.render() == "1/((T^2 + 1)^5(T - 1)^14)"
    assert degree_check(z) == 24


def test_acampo_via_sympy(cand2):
    z = acampo(cand2)
    expr = sympy.Integer(1)
    for n, e in z.exponents.items():
        expr *= (T**n - 1) ** e
    target = 1 / ((T**2 + 1) ** 5 * (T - 1) ** 14)
    assert sympy.cancel(expr - target) == 0


def test_cyclo_multiplicities(d2e, cand2):
    z = acampo(cand2)
    assert cyclo_multiplicity(z, 2) == 0
    assert cyclo_multiplicity(z, 4) == -5
    z = acampo(d2e)
    assert cyclo_multiplicity(z, 2) == -1
    assert cyclo_multiplicity(z, 1) == -23
    assert cyclo_multiplicity(CycloProduct({}), 7) == 0
    assert degree_check(CycloProduct({})) == 0


def test_xi_order():
    assert xi_order(2, 1) == 2
    assert xi_order(4, 5) == 4
    assert xi_order(3, 0) == 1
    assert xi_order(6, 4) == 3
    assert xi_order(5, -2) == 5


def test_is_eigenvalue(d2e, cand4, cand2):
    assert is_eigenvalue(d2e, candidate(d2e, "E"))
    assert candidate(cand2, "K6").d == 2
    assert not is_eigenvalue(cand2, candidate(cand2, "K6"))
    assert candidate(cand4, "K1").d == 4
    assert not is_eigenvalue(cand4, candidate(cand4, "K1"))


def test_strict_degree(d2e):
    doc = model_to_dict(d2e)
    doc["components"][0]["geometry"]["euler"] = 25
    m = parse_model(doc)
    with pytest.raises(DegreeError):
        is_eigenvalue(m, EigenvalueCandidate("E", 2))
    assert is_eigenvalue(m, EigenvalueCandidate("E", 2), strict=False)
    with pytest.raises(DegreeError):
        check_property(m)


def test_check_d2e(d2e):
    v = check_property(d2e)
    assert v.holds
    assert [(r.component, r.status) for r in v.results] == [("D", "lct"), ("E", "eigenvalue")]


def test_check_cand4(cand4):
    v = check_property(cand4)
    assert not v.holds
    fails = v.failures
    assert sorted(r.component for r in fails) == ["K1", "K2"]
    for r in fails:
        f, _ = cand4.flower_of(r.component)
        assert f.type_code == "2B" and f.attachment == "V1"
        assert r.d == 4 and r.multiplicity == 0


def test_check_cand2(cand2):
    v = check_property(cand2)
    assert not v.holds
    (r,) = v.failures
    f, _ = cand2.flower_of(r.component)
    assert r.component == "K6" and f.type_code == "2B" and f.attachment == "V1"
    assert r.d == 2 and r.multiplicity == 0


def test_no_conic_flowers_holds():
    from conftest import single_flower_model

    m = single_flower_model("3A")
    v = check_property(m)
    assert v.holds and all(r.status == "lct" for r in v.results)


@given(st.dictionaries(st.integers(1, 30), st.integers(-6, 6), max_size=6))
def test_cyclotomic_round_trip(exps):
    z = CycloProduct(exps)
    assert from_cyclotomic(cyclotomic_exponents(z)) == z


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(1, 12), st.integers(-3, 3), max_size=4))
def test_cyclotomic_against_sympy(exps):
    z = CycloProduct(exps)
    cyc = cyclotomic_exponents(z)
    expr = sympy.Integer(1)
    for d, k in cyc.items():
        expr *= sympy.cyclotomic_poly(d, T) ** k
    direct = sympy.Integer(1)
    for n, e in z.exponents.items():
        direct *= (T**n - 1) ** e
    assert sympy.cancel(expr - direct) == 0


# theorem replays --------------------------------------------------------------

POTS = [fixture_model("d2e")] + random_models(40, start=7000) + catalog_models()
CHAINS = [fixture_model("chain")] + random_models(30, chain=True, start=7000)


def _invariants(m):
    z = acampo(m)
    assert degree_check(z) == 24
    assert all(k < 0 for k in cyclotomic_exponents(z).values())


@pytest.mark.parametrize("idx", range(len(POTS)))
def test_flowerpot_replay(idx):
    m = POTS[idx]
    _invariants(m)
    assert check_property(m).holds


@pytest.mark.parametrize("idx", range(len(CHAINS)))
def test_chain_replay(idx):
    m = CHAINS[idx]
    _invariants(m)
    # generated chains carry one multiplicity on every pot component
    assert check_property(m).holds


@pytest.mark.parametrize("name", VALID_FIXTURES)
def test_fixture_invariants(name):
    _invariants(fixture_model(name))
