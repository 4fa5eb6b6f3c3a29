"""Command-line interface: ``k3zeta <command> ...``.

Exit codes: 0 success (or property holds), 1 invalid model, 2 property
fails, 3 unreadable document.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import countercand, flowers, monodromy, motivic, sncmodel
from .grotring import MissingSpecializationData
from .ratzeta import render_latex, render_plain, to_json

EXIT_OK, EXIT_INVALID, EXIT_FAILS, EXIT_PARSE = 0, 1, 2, 3
FIXTURE_ENV = "K3ZETA_FIXTURES"


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("k3zeta").joinpath("fixtures")))


def resolve_model_path(name: str) -> Path:
    """A file path, or a fixture name looked up in the fixture directory."""
    p = Path(name)
    if p.is_file():
        return p
    base = fixture_dir()
    for cand in (base / name, base / f"{name}.json"):
        if cand.is_file():
            return cand
    raise _Abort(EXIT_PARSE, f"no such model file or fixture: {name}")


def _load(name: str) -> sncmodel.Model:
    path = resolve_model_path(name)
    try:
        return sncmodel.load_model(path)
    except sncmodel.ModelParseError as exc:
        raise _Abort(EXIT_PARSE, f"parse error: {exc}") from None
    except OSError as exc:
        raise _Abort(EXIT_PARSE, f"cannot read {path}: {exc}") from None


def _load_valid(name: str, strict: bool) -> sncmodel.Model:
    m = _load(name)
    rep = sncmodel.validate(m, strict=strict)
    if not rep.valid:
        lines = ["invalid model:"] + [f"  {v}" for v in rep.violations]
        raise _Abort(EXIT_INVALID, "\n".join(lines))
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return m


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _q(x: Fraction) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    m = _load(args.model)
    rep = sncmodel.validate(m, strict=args.strict)
    if args.format == "json":
        print(
            _dump(
                {
                    "valid": rep.valid,
                    "violations": [{"code": v.code, "message": v.message} for v in rep.violations],
                    "warnings": [{"code": v.code, "message": v.message} for v in rep.warnings],
                }
            )
        )
    else:
        for v in rep.violations:
            print(f"violation {v}")
        for w in rep.warnings:
            print(f"warning {w}")
        if rep.valid:
            print(f"valid ({sncmodel.classify(m)})")
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_zeta(args) -> int:
    m = _load_valid(args.model, args.strict)
    try:
        z = motivic.assemble(m)
    except sncmodel.InsufficientData as exc:
        raise _Abort(EXIT_INVALID, str(exc)) from None
    if args.format == "json":
        print(_dump(to_json(z)))
    elif args.format == "latex":
        print(render_latex(z))
    else:
        print(render_plain(z))
    return EXIT_OK


def cmd_poles(args) -> int:
    m = _load_valid(args.model, args.strict)
    rep = motivic.exact_poles(m)
    oracle = None
    if args.oracle:
        try:
            z = motivic.assemble(m)
        except sncmodel.InsufficientData as exc:
            raise _Abort(EXIT_INVALID, str(exc)) from None
        raw = motivic.oracle_poles(m, z)
        # per ratio: certified if any candidate is, untestable if any cannot be evaluated
        by_q: dict[Fraction, list] = {}
        for (a, b), res in raw.items():
            by_q.setdefault(Fraction(a, b), []).append(res)
        oracle = {q: True if True in rs else (None if None in rs else False) for q, rs in by_q.items()}
    if args.format == "json":
        out = {
            "lct": _q(rep.lct),
            "delta": rep.delta,
            "candidates": [{"a": a, "b": b} for a, b in sorted(rep.candidates, key=lambda t: (Fraction(*t), t[1]), reverse=True)],
            "poles": [
                {"q": _q(p.q), "order": p.order, "source": p.source, "components": list(p.components)}
                for p in rep.poles
            ],
        }
        if oracle is not None:
            out["oracle"] = [
                {"q": _q(q), "certified": v} for q, v in sorted(oracle.items(), key=lambda t: t[0], reverse=True)
            ]
        print(_dump(out))
        return EXIT_OK
    print(f"lct = {_q(rep.lct)}, delta = {rep.delta}")
    for p in rep.poles:
        line = f"{_q(p.q)} (order {p.order}, {p.source}: {', '.join(p.components)})"
        if oracle is not None:
            v = oracle.get(p.q)
            line += "  oracle: " + {True: "certified", False: "not certified", None: "untestable"}[v]
        print(line)
    if oracle is not None:
        extra = [q for q, v in oracle.items() if v and q not in rep.ratios]
        for q in sorted(extra, reverse=True):
            print(f"{_q(q)} certified by the oracle but not a structural pole")
    return EXIT_OK


def cmd_mzeta(args) -> int:
    m = _load_valid(args.model, args.strict)
    try:
        z = monodromy.acampo(m)
    except sncmodel.InsufficientData as exc:
        raise _Abort(EXIT_INVALID, str(exc)) from None
    if args.format == "json":
        print(_dump(z.to_json()))
    else:
        print(z.render_raw())
        print(f"= {z.render()}")
        print(f"degree {monodromy.degree_check(z)}")
    return EXIT_OK


def cmd_check(args) -> int:
    m = _load_valid(args.model, args.strict)
    try:
        verdict = monodromy.check_property(m)
    except (monodromy.DegreeError, sncmodel.InsufficientData) as exc:
        raise _Abort(EXIT_INVALID, str(exc)) from None
    if args.format == "json":
        print(
            _dump(
                {
                    "holds": verdict.holds,
                    "candidates": [
                        {
                            "component": r.component,
                            "q": _q(r.q),
                            "order": r.d,
                            "multiplicity": r.multiplicity,
                            "status": r.status,
                        }
                        for r in verdict.results
                    ],
                }
            )
        )
    else:
        for r in verdict.results:
            print(f"{r.component}: pole {_q(r.q)}, eigenvalue order {r.d}, Phi_{r.d} multiplicity {r.multiplicity}: {r.status}")
        print("monodromy property holds" if verdict.holds else "monodromy property FAILS")
    return EXIT_OK if verdict.holds else EXIT_FAILS


def cmd_flowers_verify(args) -> int:
    codes = [flowers.canonical_code(args.type)] if args.type else list(flowers.TABLE_CODES)
    reports = []
    for code in codes:
        if code == "4D":
            raise _Abort(EXIT_INVALID, "type 4D has no closed form")
        grid = flowers.default_grid(code, args.max_N, args.nu_count, args.max_length)
        reports.append(flowers.verify_table(code, grid))
    passed = sum(r.ok for r in reports)
    if args.format == "json":
        print(
            _dump(
                {
                    "passed": passed,
                    "total": len(reports),
                    "rows": [
                        {
                            "type": r.code,
                            "checked": r.checked,
                            "ok": r.ok,
                            "failures": [
                                {"N": s.N, "nu0": s.nu0, "length": s.length, "genus": s.genus} for s in r.failures
                            ],
                        }
                        for r in reports
                    ],
                }
            )
        )
    else:
        for r in reports:
            status = "ok" if r.ok else f"{len(r.failures)} failures"
            print(f"{r.code:8s} {r.checked:4d} points  {status}")
        print(f"{passed}/{len(reports)} rows pass")
    return EXIT_OK if passed == len(reports) else EXIT_FAILS


def cmd_countercand(args) -> int:
    exclusion = not args.no_exclusion
    try:
        sols = countercand.enumerate_case(args.case, exclusion) if args.case else countercand.enumerate_all(exclusion)
    except ValueError as exc:
        raise _Abort(EXIT_INVALID, str(exc)) from None
    if args.format == "json":
        print(
            _dump(
                {
                    "exclusion": exclusion,
                    "count": len(sols),
                    "solutions": [countercand.render_countercandidate(s)["record"] for s in sols],
                }
            )
        )
    else:
        if sols:
            print(countercand.render_table(sols))
        print(f"{len(sols)} countercandidates")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3zeta", description="Zeta functions of triple-point-free K3 degenerations.")
    sub = p.add_subparsers(dest="command", required=True)

    def model_cmd(name, fn, formats, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("model", help=f"model file or fixture name (fixture directory from ${FIXTURE_ENV})")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--strict", action="store_true", help="treat a degree other than 24 as an error")
        sp.set_defaults(func=fn)
        return sp

    model_cmd("validate", cmd_validate, ["plain", "json"], "check a model document")
    model_cmd("zeta", cmd_zeta, ["plain", "latex", "json"], "motivic zeta function")
    sp = model_cmd("poles", cmd_poles, ["plain", "json"], "poles of the motivic zeta function")
    sp.add_argument("--oracle", action="store_true", help="add the Poincare specialization test")
    model_cmd("mzeta", cmd_mzeta, ["plain", "json"], "monodromy zeta function")
    model_cmd("check", cmd_check, ["plain", "json"], "monodromy property verdict")

    fp = sub.add_parser("flowers", help="flower catalog tools")
    fsub = fp.add_subparsers(dest="flowers_command", required=True)
    vp = fsub.add_parser("verify", help="compare contributions with the closed forms")
    vp.add_argument("--type", help="a single flower type, e.g. 3A or 12beta")
    vp.add_argument("--max-N", type=int, default=3)
    vp.add_argument("--nu-count", type=int, default=6)
    vp.add_argument("--max-length", type=int, default=5)
    vp.add_argument("--format", choices=["plain", "json"], default="plain")
    vp.set_defaults(func=cmd_flowers_verify)

    cp = sub.add_parser("countercand", help="enumerate combinatorial countercandidates")
    cp.add_argument("--case", type=int, choices=range(1, 11), metavar="N")
    cp.add_argument("--no-exclusion", action="store_true", help="skip the mod-4 cyclic cover filter")
    cp.add_argument("--format", choices=["table", "json"], default="table")
    cp.set_defaults(func=cmd_countercand)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Abort as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except (flowers.FlowerTypeError, MissingSpecializationData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
