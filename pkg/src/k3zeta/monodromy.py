"""Monodromy zeta function via A'Campo and the monodromy property."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping

from .motivic import exact_poles
from .sncmodel import Model, euler_open

__all__ = [
    "CycloProduct",
    "EigenvalueCandidate",
    "CandidateResult",
    "Verdict",
    "DegreeError",
    "mobius",
    "acampo",
    "cyclo_multiplicity",
    "cyclotomic_exponents",
    "from_cyclotomic",
    "degree_check",
    "xi_order",
    "candidate",
    "is_eigenvalue",
    "check_property",
]


class DegreeError(ValueError):
    """The monodromy zeta function does not have degree 24."""


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class CycloProduct:
    """prod_N (T^N - 1)^{e_N}."""

    exponents: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, e in self.exponents.items():
            if n < 1:
                raise ValueError("exponent keys must be positive")
            if e:
                clean[int(n)] = int(e)
        object.__setattr__(self, "exponents", dict(sorted(clean.items())))

    @property
    def degree(self) -> int:
        return sum(n * e for n, e in self.exponents.items())

    def __mul__(self, other: "CycloProduct") -> "CycloProduct":
        out = dict(self.exponents)
        for n, e in other.exponents.items():
            out[n] = out.get(n, 0) + e
        return CycloProduct(out)

    def __eq__(self, other):
        return isinstance(other, CycloProduct) and self.exponents == other.exponents

    def __hash__(self):
        return hash(tuple(self.exponents.items()))

    def render(self) -> str:
        """As 1/(...) when all exponents are negative, else as a product."""
        if not self.exponents:
            return "1"
        cyc = cyclotomic_exponents(self)
        names = {1: "T - 1", 2: "T + 1", 4: "T^2 + 1", 3: "T^2 + T + 1", 6: "T^2 - T + 1"}
        parts = []
        for d in sorted(cyc, reverse=True):
            e = cyc[d]
            base = f"({names.get(d, f'Phi_{d}(T)')})"
            parts.append((base, e))
        if all(e < 0 for _, e in parts):
            return "1/(" + "".join(b + (f"^{-e}" if e != -1 else "") for b, e in parts) + ")"
        return "".join(b + (f"^{e}" if e != 1 else "") for b, e in parts)

    def render_raw(self) -> str:
        """In terms of the factors (T^N - 1)."""
        if not self.exponents:
            return "1"

        def fac(n, e):
            base = "(T - 1)" if n == 1 else f"(T^{n} - 1)"
            return base + (f"^{e}" if e != 1 else "")

        num = "".join(fac(n, e) for n, e in sorted(self.exponents.items(), reverse=True) if e > 0)
        den = "".join(fac(n, -e) for n, e in sorted(self.exponents.items(), reverse=True) if e < 0)
        if not den:
            return num
        return f"{num or '1'}/({den})"

    def to_json(self) -> dict:
        return {
            "exponents": {str(n): e for n, e in self.exponents.items()},
            "cyclotomic": {str(d): e for d, e in cyclotomic_exponents(self).items()},
            "degree": self.degree,
        }


def acampo(m: Model) -> CycloProduct:
    """prod_i (T^{N_i} - 1)^{-chi(E_i open)}."""
    out: dict[int, int] = {}
    for c in m.components:
        out[c.N] = out.get(c.N, 0) - euler_open(m, c.id)
    return CycloProduct(out)


def cyclo_multiplicity(z: CycloProduct, d: int) -> int:
    """Order of Phi_d in z as a zero; negative for a pole."""
    return sum(e for n, e in z.exponents.items() if n % d == 0)


def cyclotomic_exponents(z: CycloProduct) -> dict[int, int]:
    """Nonzero Phi_d multiplicities."""
    ds = set()
    for n in z.exponents:
        ds.update(_divisors(n))
    out = {}
    for d in sorted(ds):
        k = cyclo_multiplicity(z, d)
        if k:
            out[d] = k
    return out


def from_cyclotomic(mult: Mapping[int, int]) -> CycloProduct:
    """Inverse of ``cyclotomic_exponents`` by Moebius inversion over multiples."""
    if not mult:
        return CycloProduct({})
    top = max(mult)
    out = {}
    for n in range(1, top + 1):
        e = sum(mobius(k // n) * mult.get(k, 0) for k in range(n, top + 1, n))
        if e:
            out[n] = e
    return CycloProduct(out)


def degree_check(z: CycloProduct) -> int:
    """Degree of the denominator polynomial Q with z = 1/Q."""
    return -z.degree


def xi_order(N: int, nu: int) -> int:
    """Multiplicative order of exp(-2 pi i nu/N)."""
    r = nu % N
    return N // gcd(N, r) if r else 1


@dataclass(frozen=True)
class EigenvalueCandidate:
    component: str
    d: int


def candidate(m: Model, cid: str) -> EigenvalueCandidate:
    c = m.component(cid)
    return EigenvalueCandidate(cid, xi_order(c.N, c.nu))


def is_eigenvalue(m: Model, cand: EigenvalueCandidate, strict: bool = True, zeta: CycloProduct | None = None) -> bool:
    z = acampo(m) if zeta is None else zeta
    if strict and degree_check(z) != 24:
        raise DegreeError(f"monodromy zeta function has degree {degree_check(z)}, not 24")
    return cyclo_multiplicity(z, cand.d) < 0


@dataclass(frozen=True)
class CandidateResult:
    component: str
    q: Fraction
    d: int
    multiplicity: int
    status: str  # "lct", "eigenvalue" or "not-eigenvalue"

    @property
    def ok(self) -> bool:
        return self.status != "not-eigenvalue"


@dataclass
class Verdict:
    holds: bool
    results: list[CandidateResult]
    zeta: CycloProduct

    @property
    def failures(self) -> list[CandidateResult]:
        return [r for r in self.results if not r.ok]


def check_property(m: Model, strict: bool = True) -> Verdict:
    """Every pole must give an eigenvalue of monodromy.

    The pole at -lct always does; conic-top poles are tested against the
    cyclotomic factors of the A'Campo product.
    """
    z = acampo(m)
    if strict and degree_check(z) != 24:
        raise DegreeError(f"monodromy zeta function has degree {degree_check(z)}, not 24")
    results = []
    for pole in exact_poles(m).poles:
        for cid in pole.components:
            cand = candidate(m, cid)
            mult = cyclo_multiplicity(z, cand.d)
            if pole.source == "MinimalWeight":
                status = "lct"
            else:
                status = "eigenvalue" if mult < 0 else "not-eigenvalue"
            results.append(CandidateResult(cid, pole.q, cand.d, mult, status))
    return Verdict(all(r.ok for r in results), results, z)
