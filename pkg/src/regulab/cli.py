"""regulab command line: eval, verify, report-merge, zeta-check.

Settings come from defaults, then a key = value config file (--config), then
REGULAB_* environment variables, then flags. Exit codes: 0 all checks pass,
1 some check fails, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from . import __version__
from .suites import DEFAULT_SEED, SUITES, report, run_suite

ENV_PREFIX = "REGULAB_"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    budget: int | None = None
    tol: float | None = None
    input: str | None = None
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tol must be positive")
        if self.format not in ("json", "csv"):
            raise UsageError("format must be json or csv")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.budget is not None and self.budget < 1:
            raise UsageError("budget must be positive")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d


_CASTS: dict[str, Callable] = {"seed": int, "budget": lambda v: int(float(v)), "tol": float, "format": str, "output": str, "input": str}


def read_config_file(path: str) -> dict:
    """Lines 'key = value'; '#' starts a comment; keys mirror the long flags."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, value = (s.strip() for s in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in _CASTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                out[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return out


def resolve_settings(args: argparse.Namespace, environ=os.environ) -> dict:
    merged: dict[str, str] = {}
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in _CASTS:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            merged[key] = env
    for key in _CASTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        return {k: _CASTS[k](v) for k, v in merged.items()}
    except ValueError as exc:
        raise UsageError(f"bad setting: {exc}") from exc


# ---------------------------------------------------------------- eval

def parse_number(text: str):
    """Integers and p/q stay exact; anything else is read as a complex number, 'i' allowed."""
    t = text.strip().replace(" ", "")
    if t.lower() in ("inf", "infinity", "oo"):
        return None
    try:
        return Fraction(t)
    except ValueError:
        pass
    try:
        return complex(t.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def _num(x):
    if x is None:
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag] if x.imag else x.real
    return x


def _eval_registry() -> dict[str, tuple[tuple[int, ...], Callable, str]]:
    from . import arakelov, polylog, projective

    def z(v):
        return None if v is None else complex(v)

    return {
        "L2": ((1,), lambda a: polylog.polylog_sv(2, z(a[0])), "single-valued L_2 (Bloch-Wigner)"),
        "L": ((2,), lambda a: polylog.polylog_sv(int(a[0]), z(a[1])), "single-valued L_n, args n z"),
        "Ltilde": ((2,), lambda a: polylog.polylog_sv_levin(int(a[0]), z(a[1])), "modified single-valued L_n, args n z"),
        "Li": ((2,), lambda a: polylog.li(int(a[0]), z(a[1])), "principal-branch Li_n, args n z"),
        "bloch-wigner": ((1,), lambda a: polylog.bloch_wigner(z(a[0])), "direct Bloch-Wigner formula"),
        "beta": ((1,), lambda a: polylog.beta(int(a[0])), "coefficient of x^k in 2x/(e^{2x}-1)"),
        "beta_kp": ((2,), lambda a: polylog.beta_kp(int(a[0]), int(a[1])), "mixed coefficient beta_{k,p}"),
        "cross-ratio": ((4,), lambda a: projective.cross_ratio(*a), "((z1-z3)(z2-z4))/((z1-z4)(z2-z3)); exact on rationals"),
        "zeta": ((1,), lambda a: polylog.zeta_int(int(a[0])), "Riemann zeta at an integer"),
        "field": ((1,), lambda a: arakelov.field_data(int(a[0])).to_json(), "quadratic field data for a fundamental discriminant"),
    }


def cmd_eval(args, settings) -> tuple[int, str]:
    registry = _eval_registry()
    if args.function not in registry:
        raise UsageError(f"unknown function {args.function!r}; choose from {sorted(registry)}")
    arity, fn, method = registry[args.function]
    if len(args.args) not in arity:
        raise UsageError(f"{args.function} takes {arity[0]} argument(s), got {len(args.args)}")
    parsed = [parse_number(a) for a in args.args]
    try:
        value = fn(parsed)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    out = {"function": args.function, "args": args.args, "value": _num(value), "method": method}
    return 0, json.dumps(out, sort_keys=True)


# ---------------------------------------------------------------- verify

def _render(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep, sort_keys=True, indent=2)
    buf = io.StringIO()
    fields = ["name", "anchor", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "pass", "runtime_ms"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rep["records"]:
        w.writerow({k: json.dumps(r[k]) if isinstance(r[k], list) else r[k] for k in fields})
    return buf.getvalue()


def cmd_verify(args, settings) -> tuple[int, str]:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    cfg = RunConfig(command=f"verify {args.suite}", **settings)
    checks = run_suite(args.suite, seed=cfg.seed, budget=cfg.budget, tol=cfg.tol)
    rep = report(cfg.command, cfg.echo(), checks)
    code = 0 if all(r["pass"] for r in rep["records"]) else 1
    return code, _render(rep, cfg.format)


# ---------------------------------------------------------------- report-merge

def _record_key(rep: dict, rec: dict) -> tuple[str, str]:
    cfg_hash = hashlib.sha256(json.dumps(rep.get("config", {}), sort_keys=True).encode()).hexdigest()[:16]
    return rec["name"], cfg_hash


def merge_reports(reports: list[dict]) -> dict:
    if not reports:
        raise UsageError("nothing to merge")
    versions = {r.get("version") for r in reports}
    if len(versions) != 1:
        raise UsageError(f"reports come from different versions: {sorted(map(str, versions))}")
    seen = set()
    records = []
    for rep in reports:
        if not isinstance(rep.get("records"), list):
            raise UsageError("not a report: missing records")
        for rec in rep["records"]:
            key = _record_key(rep, rec)
            if key in seen:
                continue
            seen.add(key)
            records.append({**rec, "config_hash": key[1]})
    return {
        "tool": "regulab",
        "version": versions.pop(),
        "command": "report-merge",
        "config": {"sources": [r.get("command") for r in reports]},
        "records": records,
    }


def cmd_report_merge(args, settings) -> tuple[int, str]:
    reps = []
    for path in args.paths:
        try:
            with open(path) as fh:
                reps.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read report {path}: {exc}") from exc
    merged = merge_reports(reps)
    code = 0 if all(r["pass"] for r in merged["records"]) else 1
    return code, _render(merged, settings.get("format", "json"))


# ---------------------------------------------------------------- zeta-check

def _parse_sweep(text: str) -> range:
    try:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    except ValueError as exc:
        raise UsageError("sweep must look like a..b") from exc


def cmd_zeta_check(args, settings) -> tuple[int, str]:
    from .arakelov import NotFundamental, class_number_formula_check, is_fundamental

    discs = []
    if args.disc is not None:
        if not is_fundamental(args.disc):
            raise UsageError(f"{args.disc} is not a fundamental discriminant")
        discs.append(args.disc)
    if args.sweep:
        discs += [D for D in _parse_sweep(args.sweep) if D not in discs and is_fundamental(D)]
    if not discs:
        raise UsageError("give --disc D or --sweep a..b")
    rows = []
    for D in discs:
        try:
            row = class_number_formula_check(D, settings.get("tol"))
        except NotFundamental as exc:
            raise UsageError(str(exc)) from exc
        rows.append({k: row[k] for k in ("D", "h", "R", "w", "lhs", "rhs", "abs_err", "pass")})
    code = 0 if all(r["pass"] for r in rows) else 1
    if settings.get("format") == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return code, buf.getvalue()
    return code, "\n".join(json.dumps(r, sort_keys=True) for r in rows)


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=lambda v: int(float(v)))
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--out", dest="output")
    common.add_argument("--config", help="key = value file mirroring the flags")

    p = argparse.ArgumentParser(prog="regulab", description="polylogarithm and regulator checks")
    p.add_argument("--version", action="version", version=f"regulab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a named function")
    e.add_argument("function")
    e.add_argument("args", nargs="*")
    e.set_defaults(handler=cmd_eval)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", help=", ".join(SUITES))
    v.set_defaults(handler=cmd_verify)

    m = sub.add_parser("report-merge", parents=[common], help="merge JSON reports")
    m.add_argument("paths", nargs="+")
    m.set_defaults(handler=cmd_report_merge)

    z = sub.add_parser("zeta-check", parents=[common], help="class number formula for quadratic fields")
    z.add_argument("--disc", type=int)
    z.add_argument("--sweep")
    z.set_defaults(handler=cmd_zeta_check)
    return p


def main(argv: list[str] | None = None, environ=os.environ) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        settings = resolve_settings(args, environ)
        code, text = args.handler(args, settings)
    except UsageError as exc:
        print(f"regulab: {exc}", file=sys.stderr)
        return 2
    out = settings.get("output")
    if out:
        with open(out, "w") as fh:
            fh.write(text + ("" if text.endswith("\n") else "\n"))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
