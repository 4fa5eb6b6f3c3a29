"""One check per acceptance criterion; each prints a PASS/FAIL line."""

import time
from fractions import Fraction
from math import gcd

import pytest

from conftest import VALID_FIXTURES, catalog_models, fixture_model, random_models
from k3zeta.countercand import CASES, enumerate_all, enumerate_case
from k3zeta.flowers import CATALOG, TABLE_CODES, TopKind, default_grid, flower_nus, verify_table
from k3zeta.monodromy import acampo, check_property, cyclotomic_exponents, degree_check
from k3zeta.motivic import exact_poles, oracle_poles
from k3zeta.sncmodel import classify, degree_sum, flower_spec, weight


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def test_criterion_1_countercandidate_counts(report):
    t0 = time.perf_counter()
    sols = enumerate_all()
    dt = time.perf_counter() - t0
    counts = [sum(s.case_id == c for s in sols) for c in CASES]
    ok = counts == [42, 1, 17, 2, 1, 0, 0, 0, 0, 0] and len(sols) == 63 and dt < 60
    report(1, ok, f"per-case {counts}, total {len(sols)}, {dt:.1f} s")


def test_criterion_2_case_2_solution(report):
    sols = enumerate_case(2)
    want = {"L0": 4, "S": 2, "phi": 1, "gamma": 0, "phi_p": 1, "gamma_p": 4, "g": 7}
    ok = len(sols) == 1 and sols[0].values == want
    report(2, ok, f"{[s.values for s in sols]}")


def test_criterion_3_case_1_without_exclusion(report):
    n = len(enumerate_case(1, exclusion=False))
    report(3, n == 68, f"{n} solutions")


def test_criterion_4_flower_tables(report):
    t0 = time.perf_counter()
    reps = [verify_table(code, default_grid(code, max_N=3, nu_count=6, max_length=5)) for code in TABLE_CODES]
    dt = time.perf_counter() - t0
    bad = [r.code for r in reps if not r.ok]
    points = sum(r.checked for r in reps)
    ok = len(reps) == 20 and not bad and dt < 120
    report(4, ok, f"{len(reps) - len(bad)}/{len(reps)} rows, {points} grid points, {dt:.1f} s" + (f", failing {bad}" if bad else ""))


def test_criterion_5_d2e(report):
    m = fixture_model("d2e")
    poles = [(p.q, p.order) for p in exact_poles(m).poles]
    deg = degree_check(acampo(m))
    holds = check_property(m).holds
    ok = poles == [(0, 1), (Fraction(-1, 2), 1)] and deg == 24 and holds
    report(5, ok, f"poles {[(str(q), o) for q, o in poles]}, degree {deg}, holds {holds}")


def test_criterion_6_countercandidate_fixtures(report):
    m1, m2 = fixture_model("cand4"), fixture_model("cand2")
    z1, z2 = acampo(m1), acampo(m2)
    v1, v2 = check_property(m1), check_property(m2)

    def conic_tops_on_V1(m, verdict):
        outs = []
        for r in verdict.failures:
            f, _ = m.flower_of(r.component)
            outs.append(CATALOG[f.type_code].top_kind is TopKind.P2_CONIC and f.attachment == "V1" and f.top == r.component)
        return bool(outs) and all(outs)

    ok = (
        z1.render_raw() == "1/((T^2 - 1)^11(T - 1)^2)"
        and z2.render() == "1/((T^2 + 1)^5(T - 1)^14)"
        and not v1.holds
        and not v2.holds
        and conic_tops_on_V1(m1, v1)
        and conic_tops_on_V1(m2, v2)
    )
    report(
        6,
        ok,
        f"cand4 {z1.render_raw()} fails at {[r.component for r in v1.failures]}; "
        f"cand2 {z2.render()} fails at {[r.component for r in v2.failures]}",
    )


def _oracle_agrees(m):
    cert = {Fraction(a, b) for (a, b), ok in oracle_poles(m).items() if ok}
    return cert == set(exact_poles(m).ratios)


def test_criterion_7_oracle_equivalence(report):
    models = [fixture_model(n) for n in VALID_FIXTURES] + random_models(60, start=31000) + random_models(40, chain=True, start=31000) + catalog_models()
    bad = [k for k, m in enumerate(models) if not _oracle_agrees(m)]
    report(7, not bad, f"{len(models) - len(bad)}/{len(models)} models agree")


def test_criterion_8_invariants(report):
    models = [fixture_model(n) for n in VALID_FIXTURES] + random_models(60, start=41000) + random_models(40, chain=True, start=41000) + catalog_models()
    replay_skip = {VALID_FIXTURES.index("cand4"), VALID_FIXTURES.index("cand2")}
    failures = []
    for k, m in enumerate(models):
        z = acampo(m)
        if degree_sum(m) != 24 or degree_check(z) != 24:
            failures.append((k, "degree"))
        if any(e > 0 for e in cyclotomic_exponents(z).values()):
            failures.append((k, "cyclotomic"))
        for f in m.flowers:
            chain = list(f.members) + [f.attachment]
            ws = [weight(m, c) for c in chain]
            if not all(a > b for a, b in zip(ws, ws[1:])):
                failures.append((k, "weights"))
            ns = [m.component(c).N for c in chain]
            nus = [m.component(c).nu for c in chain]
            for j in range(1, len(chain) - 1):
                if nus[j + 1] * ns[j] != (ns[j - 1] + ns[j + 1]) * nus[j] - nus[j - 1] * ns[j]:
                    failures.append((k, "recursion"))
            if flower_nus(flower_spec(m, f)) != nus:
                failures.append((k, "nu"))
            if CATALOG[f.type_code].top_kind is TopKind.P2_CONIC:
                d = exact_order(ns[0], nus[0])
                if f.type_code == "4C":
                    good = ns[-1] % 2 == 0 and (ns[-1] // 2) % d
                else:
                    good = ns[-1] % d
                if not good:
                    failures.append((k, "conic-order"))
        # theorem replays: every model except the two countercandidate fixtures
        if k not in replay_skip and not check_property(m).holds:
            failures.append((k, f"verdict ({classify(m)})"))
    report(8, not failures, f"{len(models)} models, failures {failures[:5]}")


def exact_order(N, nu):
    r = nu % N
    return N // gcd(N, r) if r else 1
