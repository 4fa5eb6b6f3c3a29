"""Enumeration of combinatorial countercandidates.

Each case is a small system of linear relations in nonnegative integers.
The variables are L0 (or L_end = L0 + L_{k+1} in cases 9 and 10), the sum S of
the remaining L_i, the flower counts phi, gamma, phi_p, gamma_p and, in cases
2 and 10, the genus g.  N = N(V_1) is 1 when gamma = 0 and 2 otherwise,
except in cases 2, 5 and 7 where no 24/N term occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "VARIABLES",
    "Relation",
    "CaseSystem",
    "Countercandidate",
    "CASES",
    "EXCLUSION_CASES",
    "case_system",
    "solve",
    "satisfies",
    "enumerate_case",
    "enumerate_all",
    "exclusion_passes",
    "render_countercandidate",
    "render_table",
]

VARIABLES = ("L0", "S", "phi", "gamma", "phi_p", "gamma_p", "g")
EXCLUSION_CASES = frozenset({1, 3, 5, 7})
CASES = tuple(range(1, 11))


@dataclass(frozen=True)
class Relation:
    """sum coeffs[v] * v  (op)  rhs, with op in {'==', '<='}."""

    coeffs: tuple[tuple[str, Fraction], ...]
    op: str
    rhs: Fraction

    @classmethod
    def of(cls, op: str, rhs, **coeffs) -> "Relation":
        items = tuple((v, Fraction(c)) for v, c in coeffs.items() if c)
        return cls(items, op, Fraction(rhs))

    def value(self, x: Mapping[str, int]) -> Fraction:
        return sum((c * x[v] for v, c in self.coeffs), Fraction(0))

    def holds(self, x: Mapping[str, int]) -> bool:
        val = self.value(x)
        return val == self.rhs if self.op == "==" else val <= self.rhs

    def cleared(self) -> "Relation":
        """Same relation with integer coefficients."""
        den = math.lcm(self.rhs.denominator, *(c.denominator for _, c in self.coeffs))
        return Relation(tuple((v, c * den) for v, c in self.coeffs), self.op, self.rhs * den)


def _eq(rhs, **c):
    return Relation.of("==", rhs, **c)


def _le(rhs, **c):
    return Relation.of("<=", rhs, **c)


def _ge(rhs, **c):
    return Relation.of("<=", -Fraction(rhs), **{k: -Fraction(v) for k, v in c.items()})


H = Fraction(1, 2)


def _relations(case: int, N: int | None) -> list[Relation]:
    """Relations of one case; N is substituted where 24/N occurs."""
    t = Fraction(24, N) if N else None
    eq1 = dict(phi_p=1, gamma_p=2, phi=-1, L0=-1)
    base = [_ge(1, L0=1), _ge(1, phi=1)]
    pot = _le(0, phi=2, gamma=2, S=-1)  # 2 phi + 2 gamma <= S
    top = _le(1, phi_p=1, gamma_p=1, L0=-1)  # phi' + gamma' <= L0 + 1
    mid = dict(S=1, gamma_p=1, phi_p=2, phi=-2, gamma=-3 * H)
    if case == 1:
        return base + [
            _eq(4, **eq1),
            _eq(t - 4, **mid),
            _eq(24, L0=1, S=2),
            top,
            _le(1, phi=1, gamma=1, S=-1),
            _eq(0, g=1),
        ]
    if case == 2:
        return base + [
            _eq(4, **eq1),
            _eq(26, phi_p=4, gamma_p=2, phi=-4, gamma=-3, g=2, S=2),
            _eq(8, L0=1, S=2),
            pot,
            top,
        ]
    if case == 3:
        return base + [_eq(4, **eq1), _eq(t - 3, **mid), _eq(26, L0=1, S=2), pot, top, _eq(0, g=1)]
    if case == 4:
        return base + [_eq(4, **eq1), _eq(t - 9, **mid), _eq(14, L0=1, S=2), pot, top, _eq(0, g=1)]
    if case == 5:
        return base + [
            _eq(4, **eq1),
            _eq(15, S=2, gamma_p=2, phi_p=4, phi=-4, gamma=-3),
            _eq(20, L0=1, S=2),
            pot,
            top,
            _eq(0, g=1),
        ]
    if case == 6:
        return base + [_eq(7, **eq1), _eq(t - 4, **mid), _eq(12, L0=1, S=2), pot, top, _eq(0, g=1)]
    if case == 7:
        return base + [
            _eq(6, **eq1),
            _eq(22, S=2, gamma_p=2, phi_p=4, phi=-4, gamma=-3),
            _eq(16, L0=1, S=2),
            pot,
            top,
            _eq(0, g=1),
        ]
    if case == 8:
        return base + [
            _eq(4, **eq1),
            _eq(t - 10, S=3, gamma_p=3, phi_p=6, phi=-6, gamma=-9 * H),
            _eq(20, L0=1, S=2),
            pot,
            top,
            _eq(0, g=1),
        ]
    if case == 9:
        return base + [
            _eq(8, **eq1),
            _eq(t, S=1, phi_p=2, gamma_p=1, phi=-2, gamma=-3 * H),
            _eq(16, L0=1, S=2),
            _le(2, phi_p=1, gamma_p=1, L0=-1),
            pot,
            _eq(0, g=1),
        ]
    if case == 10:
        return base + [
            _eq(2, phi_p=1, gamma_p=2, phi=-1, g=-2, L0=-1),
            _eq(t - 2, S=1, phi_p=2, gamma_p=1, g=-2, phi=-2, gamma=-3 * H),
            _eq(8, L0=1, S=2),
            top,
            pot,
            _le(2, g=2, S=-1, phi=2, gamma=2, gamma_p=-1),
            _ge(1, g=1),
        ]
    raise ValueError(f"invalid case {case}")


_HAS_N_RULE = {1: True, 2: False, 3: True, 4: True, 5: False, 6: True, 7: False, 8: True, 9: True, 10: True}


@dataclass(frozen=True)
class CaseSystem:
    case_id: int
    N: int | None
    relations: tuple[Relation, ...]

    @property
    def has_n_rule(self) -> bool:
        return _HAS_N_RULE[self.case_id]

    @property
    def has_exclusion(self) -> bool:
        return self.case_id in EXCLUSION_CASES


def case_system(case: int, N: int | None = None) -> list[CaseSystem]:
    """The search problems of a case, split by N when the N rule applies."""
    if case not in _HAS_N_RULE:
        raise ValueError(f"invalid case {case}; expected 1..10")
    if not _HAS_N_RULE[case]:
        return [CaseSystem(case, None, tuple(_relations(case, None)))]
    out = []
    for n in (1, 2) if N is None else (N,):
        rels = _relations(case, n)
        # N = 1 exactly when gamma = 0
        rels.append(_eq(0, gamma=1) if n == 1 else _ge(1, gamma=1))
        out.append(CaseSystem(case, n, tuple(rels)))
    return out


# ---------------------------------------------------------------------------
# search


_INF = math.inf


def _propagate(rels: list[Relation], lo: dict, hi: dict) -> bool:
    """Tighten integer bounds to a fixpoint; False when infeasible."""
    changed = True
    while changed:
        changed = False
        for r in rels:
            parts = [r] if r.op == "<=" else [r, Relation(tuple((v, -c) for v, c in r.coeffs), "<=", -r.rhs)]
            for p in parts:
                mins = {}
                for v, c in p.coeffs:
                    mins[v] = c * lo[v] if c > 0 else c * hi[v]
                finite = sum((m for m in mins.values() if m != -_INF), Fraction(0))
                n_inf = sum(1 for m in mins.values() if m == -_INF)
                if not n_inf and finite > p.rhs:
                    return False
                for v, c in p.coeffs:
                    if n_inf > 1 or (n_inf == 1 and mins[v] != -_INF):
                        continue
                    rest = finite if mins[v] == -_INF else finite - mins[v]
                    bound = (p.rhs - rest) / c
                    if c > 0:
                        nb = math.floor(bound)
                        if nb < hi[v]:
                            hi[v] = nb
                            changed = True
                    else:
                        nb = math.ceil(bound)
                        if nb > lo[v]:
                            lo[v] = nb
                            changed = True
                    if lo[v] > hi[v]:
                        return False
    return True


def solve(system: CaseSystem) -> list[dict[str, int]]:
    """All nonnegative integer points of the system."""
    rels = [r.cleared() for r in system.relations]
    lo = {v: 0 for v in VARIABLES}
    hi = {v: _INF for v in VARIABLES}
    out: list[dict[str, int]] = []

    def rec(lo, hi):
        if not _propagate(rels, lo, hi):
            return
        free = [v for v in VARIABLES if lo[v] != hi[v]]
        if not free:
            x = {v: int(lo[v]) for v in VARIABLES}
            if all(r.holds(x) for r in rels):
                out.append(x)
            return
        v = free[0]
        if hi[v] == _INF:
            raise RuntimeError(f"case {system.case_id}: variable {v} is unbounded")
        for val in range(int(lo[v]), int(hi[v]) + 1):
            lo2, hi2 = dict(lo), dict(hi)
            lo2[v] = hi2[v] = val
            rec(lo2, hi2)

    rec(lo, hi)
    return out


@dataclass(frozen=True)
class Countercandidate:
    case_id: int
    assignment: tuple[tuple[str, int], ...]

    @property
    def values(self) -> dict[str, int]:
        return dict(self.assignment)

    def __getitem__(self, key: str) -> int:
        return self.values[key]

    @property
    def N(self) -> int | None:
        if not _HAS_N_RULE[self.case_id]:
            return None
        return 1 if self["gamma"] == 0 else 2

    def key(self) -> tuple:
        return tuple(self[v] for v in VARIABLES)


def satisfies(case: int, x: Mapping[str, int]) -> bool:
    """Independent check of one assignment against the case as written."""
    L0, S, phi, gam = x["L0"], x["S"], x["phi"], x["gamma"]
    php, gp, g = x["phi_p"], x["gamma_p"], x.get("g", 0)
    if min(L0, S, phi, gam, php, gp, g) < 0 or L0 < 1 or phi < 1:
        return False
    N = 1 if gam == 0 else 2
    t = Fraction(24, N)
    mid = S + gp + 2 * php - 2 * phi - Fraction(3 * gam, 2)
    e1 = php + 2 * gp - phi - L0
    pot = 2 * phi + 2 * gam <= S
    top = php + gp <= L0 + 1
    if case == 1:
        return g == 0 and e1 == 4 and mid == t - 4 and L0 + 2 * S == 24 and top and phi + gam <= S + 1
    if case == 2:
        return e1 == 4 and 4 * php + 2 * gp - 4 * phi - 3 * gam + 2 * g + 2 * S == 26 and L0 + 2 * S == 8 and pot and top
    if case == 3:
        return g == 0 and e1 == 4 and mid == t - 3 and L0 + 2 * S == 26 and pot and top
    if case == 4:
        return g == 0 and e1 == 4 and mid == t - 9 and L0 + 2 * S == 14 and pot and top
    if case == 5:
        return g == 0 and e1 == 4 and 2 * mid == 15 and L0 + 2 * S == 20 and pot and top
    if case == 6:
        return g == 0 and e1 == 7 and mid == t - 4 and L0 + 2 * S == 12 and pot and top
    if case == 7:
        return g == 0 and e1 == 6 and 2 * mid == 22 and L0 + 2 * S == 16 and pot and top
    if case == 8:
        return g == 0 and e1 == 4 and 3 * mid == t - 10 and L0 + 2 * S == 20 and pot and top
    if case == 9:
        return g == 0 and e1 == 8 and mid == t and L0 + 2 * S == 16 and php + gp <= L0 + 2 and pot
    if case == 10:
        return (
            g >= 1
            and e1 - 2 * g == 2
            and mid - 2 * g == t - 2
            and L0 + 2 * S == 8
            and top
            and pot
            and 2 * g <= S - 2 * phi - 2 * gam + gp + 2
        )
    raise ValueError(f"invalid case {case}")


def exclusion_passes(case_id: int, sol) -> bool:
    """A solution survives the cyclic-cover test iff L0 + 2 gamma' is divisible by 4."""
    if case_id not in EXCLUSION_CASES:
        raise ValueError(f"case {case_id} has no exclusion rule")
    x = sol.values if isinstance(sol, Countercandidate) else sol
    return (x["L0"] + 2 * x["gamma_p"]) % 4 == 0


def enumerate_case(case_id: int, exclusion: bool = True) -> list[Countercandidate]:
    sols = []
    for system in case_system(case_id):
        for x in solve(system):
            if not satisfies(case_id, x):  # pragma: no cover - guards the search
                raise AssertionError(f"search produced an invalid point {x}")
            if exclusion and case_id in EXCLUSION_CASES and not exclusion_passes(case_id, x):
                continue
            sols.append(Countercandidate(case_id, tuple((v, x[v]) for v in VARIABLES)))
    sols.sort(key=Countercandidate.key)
    return sols


def enumerate_all(exclusion: bool = True) -> list[Countercandidate]:
    out = []
    for c in CASES:
        out.extend(enumerate_case(c, exclusion))
    return out


# ---------------------------------------------------------------------------
# reports


def _chain_line(case: int, x: Mapping[str, int]) -> str:
    if case in (9, 10):
        return f"chain V0..V_(k+1) with {x['L0']} blowups on the two ends and {x['S']} on the interior"
    return f"chain V0..V_(k+1) with {x['L0']} blowups on V0 and {x['S']} on V1..V_(k+1)"


_LABELS = {
    "L0": "L0",
    "S": "sum L_i",
    "phi": "phi",
    "gamma": "gamma",
    "phi_p": "phi'",
    "gamma_p": "gamma'",
    "g": "g",
}


def render_countercandidate(sol: Countercandidate | None) -> dict:
    """Human-readable summary plus a structured record."""
    if sol is None:
        return {"text": "", "record": None}
    x = sol.values
    lname = "L_end" if sol.case_id in (9, 10) else "L0"
    vals = ", ".join(f"{lname if v == 'L0' else _LABELS[v]}={x[v]}" for v in VARIABLES if v != "g" or sol.case_id in (2, 10))
    n = sol.N
    lines = [f"case {sol.case_id}: {vals}" + (f", N={n}" if n is not None else "")]
    lines.append(f"  {_chain_line(sol.case_id, x)}")
    if sol.case_id == 2:
        lines.append("  N(V0) = 4, N(V_i) = 2 for i >= 1")
        lines.append(f"  a genus-{x['g']} flower of type 4alpha sits on V_(k+1)")
    record = {"case": sol.case_id, **{k: x[k] for k in VARIABLES}}
    if n is not None:
        record["N"] = n
    return {"text": "\n".join(lines), "record": record}


def render_table(sols: Iterable[Countercandidate]) -> str:
    rows = [render_countercandidate(s)["text"] for s in sols]
    return "\n".join(rows)
