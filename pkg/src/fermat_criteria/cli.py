"""Command-line front end: ``fermat-criteria {field,sunit,check,frey,density}``.

Exit codes: 0 applies (or plain success), 1 fails, 2 invalid input,
3 undecided_bounded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import criteria, density, frey
from .errors import FermatCriteriaError
from .ideals import PrimeIdeal, s_k, s_k_prime, split_prime, u_k
from .quadfield import FieldElem, QuadField, format_elem, make_field, parse_elem, parse_rational
from .sunit import (
    SUnitSolutions,
    check_mod3_condition,
    check_valuation_bound,
    solve_unit_equation,
)
from .units import fundamental_unit

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_INVALID = 2
EXIT_UNDECIDED = 3

VERDICT_EXIT = {
    criteria.APPLIES: EXIT_OK,
    criteria.FAILS: EXIT_FAILS,
    criteria.UNDECIDED: EXIT_UNDECIDED,
}


@dataclasses.dataclass
class Config:
    sunit_bound: int = 10
    generator_height_bound: int = 10**6
    sieve_cap: int = density.DEFAULT_SIEVE_CAP
    output_format: str = "text"

    def __post_init__(self):
        for name in ("sunit_bound", "generator_height_bound", "sieve_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_env(cls, **overrides) -> Config:
        cap = int(os.environ.get("FERMAT_CRITERIA_SIEVE_CAP", density.DEFAULT_SIEVE_CAP))
        return cls(sieve_cap=cap, **{k: v for k, v in overrides.items() if v is not None})


# --- canonical JSON -----------------------------------------------------------------


def to_jsonable(obj):
    if isinstance(obj, FieldElem):
        return format_elem(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, PrimeIdeal):
        return obj.label
    if isinstance(obj, QuadField):
        return str(obj)
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return format(obj, ".6f")
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _emit_text(data, out, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(data, dict):
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v:
                out.write(f"{pad}{k}:\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {v if v != [] else '[]'}\n")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                out.write(f"{pad}-\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}- {v}\n")
    else:
        out.write(f"{pad}{data}\n")


def emit(obj, cfg: Config, out=None) -> None:
    out = out or sys.stdout
    if cfg.output_format == "json":
        out.write(dumps(obj))
    else:
        _emit_text(to_jsonable(obj), out)


# --- commands -----------------------------------------------------------------------


def _field(args) -> QuadField:
    return make_field(args.d)


def _coeffs(F: QuadField, args, names=("A", "B", "C")) -> list[FieldElem]:
    return [parse_elem(str(getattr(args, n)), F) for n in names]


def field_report(F: QuadField) -> dict:
    fu = fundamental_unit(F)
    above2 = split_prime(F, 2)
    return {
        "d": F.d,
        "disc": F.disc,
        "integral_basis": F.basis_str(),
        "two": {"splitting": above2[0].kind, "primes": above2},
        "fundamental_unit": fu.eps,
        "unit_norm": fu.norm_sign,
        "S_K": s_k(F),
        "U_K": u_k(F),
    }


def cmd_field(args, cfg: Config) -> int:
    emit(field_report(_field(args)), cfg)
    return EXIT_OK


def _solutions(F: QuadField, S, bound: int, cfg: Config) -> SUnitSolutions:
    return solve_unit_equation(F, S, bound, cfg.generator_height_bound)


def sunit_report(sols: SUnitSolutions, coefficients=None) -> dict:
    rows = []
    for s in sols:
        rows.append({
            "lambda": s.lam,
            "mu": s.mu,
            "relevance": s.relevance,
            "valuations": {P.label: list(v) for P, v in s.valuations.items()},
            "valuation_bound": {P.label: check_valuation_bound(s, P) for P in sols.S if P.q == 2},
            "mod3_condition": {P.label: check_mod3_condition(s, P) for P in sols.S if P.q == 2},
        })
    out = {
        "d": sols.field.d,
        "S": list(sols.S),
        "bound": sols.bound,
        "bounded": sols.bounded,
        "count": len(rows),
        "solutions": rows,
    }
    if coefficients is not None:
        out["coefficients"] = list(coefficients)
    return out


def cmd_sunit(args, cfg: Config) -> int:
    F = _field(args)
    bound = args.bound or cfg.sunit_bound
    given = [args.A, args.B, args.C]
    if any(v is not None for v in given):
        if any(v is None for v in given):
            raise FermatCriteriaError("--A, --B and --C must be given together")
        coeffs = _coeffs(F, args)
        S = s_k_prime(F, *coeffs)
    else:
        coeffs, S = None, s_k(F)
    emit(sunit_report(_solutions(F, S, bound, cfg), coeffs), cfg)
    return EXIT_OK


def criterion_report_dict(rep: criteria.CriterionReport) -> dict:
    return to_jsonable(rep)


def run_check(F: QuadField, coeffs, target: str, cfg: Config, bound: int | None = None):
    bound = bound or cfg.sunit_bound
    if target == "W_K":
        sols = _solutions(F, s_k_prime(F, *coeffs), bound, cfg)
        return criteria.w_k_check(F, *coeffs, sols)
    sols = _solutions(F, s_k(F), bound, cfg)
    return criteria.k3_check(F, *coeffs, sols)


def cmd_check(args, cfg: Config) -> int:
    F = _field(args)
    coeffs = _coeffs(F, args)
    rep = run_check(F, coeffs, args.target, cfg, args.bound)
    data = criterion_report_dict(rep)
    data["target"] = args.target
    emit(data, cfg)
    return VERDICT_EXIT[rep.verdict]


def cmd_frey(args, cfg: Config) -> int:
    names = ("A", "B", "C", "a", "b", "c")
    if args.d is not None:
        F = _field(args)
        vals = _coeffs(F, args, names)
    else:
        F = None
        vals = [parse_rational(str(getattr(args, n))) for n in names]
    fd = frey.frey_invariants(*vals, args.p, field=F)
    data = {
        "coefficients": list(fd.coefficients),
        "triple": list(fd.triple),
        "p": fd.p,
        "c4": fd.c4,
        "delta": fd.delta,
        "j": fd.j,
    }
    if F is not None:
        data["d"] = F.d
        w = frey.is_in_w_k(F, *vals, args.p)
        data["in_W_K"] = {"ok": w.ok, "reason": w.reason}
        data["reduction"] = [
            _reduction_dict(frey.classify_reduction(fd, P)) for P in s_k(F)
        ]
    emit(data, cfg)
    return EXIT_OK


def _reduction_dict(r: frey.ReductionReport) -> dict:
    out = to_jsonable(r)
    out["notes"] = list(r.notes)
    return out


_MODES = {
    "congruence": density.CONGRUENCE_ONLY,
    density.CONGRUENCE_ONLY: density.CONGRUENCE_ONLY,
    "solver": density.WITH_SOLVER,
    density.WITH_SOLVER: density.WITH_SOLVER,
}


def cmd_density(args, cfg: Config) -> int:
    if args.x > cfg.sieve_cap:
        raise density.LimitTooLarge(f"x={args.x} exceeds the sieve cap {cfg.sieve_cap}")
    want_rows = cfg.output_format == "csv" or args.csv is not None
    rep = density.density_scan(
        args.x, _MODES[args.mode], bound=args.bound or 8, d_cap=args.d_cap, rows=want_rows
    )
    if args.csv is not None:
        with open(args.csv, "w", newline="") as fh:
            density.write_csv(rep, fh)
    if cfg.output_format == "csv":
        density.write_csv(rep, sys.stdout)
    else:
        emit(rep.summary(), cfg)
    return EXIT_OK


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--height-bound", type=int, default=None,
                        help="generator search height bound (default 10^6)")

    parser = argparse.ArgumentParser(prog="fermat-criteria", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="field invariants")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("sunit", parents=[common], help="bounded S-unit equation solutions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    for n in ("A", "B", "C"):
        p.add_argument(f"--{n}", default=None)
    p.set_defaults(func=cmd_sunit)

    p = sub.add_parser("check", parents=[common], help="criterion verdict for Ax^p+By^p+Cz^p=0")
    p.add_argument("--d", type=int, required=True)
    for n in ("A", "B", "C"):
        p.add_argument(f"--{n}", required=True)
    p.add_argument("--target", choices=("W_K", "K3"), default="W_K")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("frey", parents=[common], help="Frey curve invariants")
    p.add_argument("--d", type=int, default=None)
    for n in ("A", "B", "C", "a", "b", "c"):
        p.add_argument(f"--{n}", required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_frey)

    p = sub.add_parser("density", parents=[common], help="square-free density scan")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--mode", choices=sorted(_MODES), default="congruence")
    p.add_argument("--bound", type=int, default=None, help="solver exponent box (default 8)")
    p.add_argument("--d-cap", type=int, default=200)
    p.add_argument("--csv", default=None, metavar="PATH", help="write one row per d")
    p.set_defaults(func=cmd_density)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("json" if args.json else "text")
    try:
        cfg = Config.from_env(output_format=fmt, generator_height_bound=args.height_bound)
        if getattr(args, "bound", None) is not None and args.bound <= 0:
            raise ValueError("--bound must be positive")
        return args.func(args, cfg)
    except (FermatCriteriaError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
