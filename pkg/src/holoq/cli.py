"""Command-line front end.

Exit codes: 0 pass, 1 usage or parse error, 2 mathematical violation or
domain error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import DomainError, HoloqError, ParseError, PreconditionError, StencilError, UnsupportedNode
from .expr import Ln, QFunction, analytic_derivative, evaluate, is_catalog_holomorphic, raw_conj
from .parser import format_expr, parse
from .properties import (
    check_commutativity,
    check_derivative_rules,
    check_quotient_equality,
    check_structure_forms,
)
from .quaternion import Quaternion
from .wirtinger import (
    DEFAULT_STEP,
    DEFAULT_TOL,
    Domain,
    check_holomorphy,
    full_derivative_numeric,
    sample_points,
)

SCHEMA = "holoq/1"

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_INCONCLUSIVE = 0, 1, 2, 3

GRAMMAR_HELP = """\
expression language:
  p                     the quaternion variable
  2, 0.5, 1e-3          real constants
  + - * / ^             standard precedence, ^ is right-associative and takes
                        constant integer exponents only (p^2, p^-1)
  exp ln sin cos recip  builtins, called as exp(p)
  i j k                 quaternion units (raw mode, not holomorphic)
  a / b means a * recip(b); implicit multiplication such as 2p is an error.
"""


class UsageError(HoloqError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for violations here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    expressions: list[str] = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    step: float = DEFAULT_STEP
    richardson: bool = False
    samples: int = 100
    seed: int = 0
    box: tuple[tuple[float, float], ...] = ((-2.0, 2.0),) * 3
    exclude_radius: Optional[float] = None
    min_abs_b: float = 0.05
    branch_margin: float = 0.1
    output_format: str = "json"
    output: Optional[str] = None

    def validate(self) -> None:
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if not self.step > 0:
            raise UsageError("--step must be positive")
        if self.samples < 1:
            raise UsageError("--points must be at least 1")

    def domain(self, f: QFunction) -> Domain:
        has_log = any(isinstance(n, Ln) for n in f.walk())
        radius = 0.1 if self.exclude_radius is None else self.exclude_radius
        return Domain(
            x=self.box[0], z=self.box[1], u=self.box[2],
            min_abs_p=radius, min_abs_b=self.min_abs_b,
            branch_margin=self.branch_margin if has_log else 0.0,
            samples=self.samples, seed=self.seed,
        )

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "expressions": self.expressions,
            "tolerance": self.tolerance,
            "step": self.step,
            "richardson": self.richardson,
            "points": self.samples,
            "seed": self.seed,
            "box": [list(b) for b in self.box],
            "exclude_radius": self.exclude_radius,
        }


# Parsing helpers --------------------------------------------------------------


def _interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise UsageError(f"bad interval {text!r}, expected lo:hi") from None
    if hi < lo:
        raise UsageError(f"empty interval {text!r}")
    return (lo, hi)


def parse_box(text: str) -> tuple[tuple[float, float], ...]:
    """``lo:hi`` for all three axes or ``x0:x1,z0:z1,u0:u1``."""
    parts = text.split(",")
    if len(parts) == 1:
        return (_interval(parts[0]),) * 3
    if len(parts) == 3:
        return tuple(_interval(s) for s in parts)
    raise UsageError(f"bad box {text!r}")


def parse_grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    try:
        counts = tuple(int(s) for s in parts)
    except ValueError:
        raise UsageError(f"bad grid {text!r}, expected NxNxN") from None
    if len(counts) == 1:
        counts = counts * 3
    if len(counts) != 3 or min(counts) < 1:
        raise UsageError(f"bad grid {text!r}, expected NxNxN with positive counts")
    return counts


def parse_point(text: str) -> Quaternion:
    try:
        comps = [float(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"bad point {text!r}, expected x,y,z,u") from None
    if len(comps) != 4:
        raise UsageError(f"bad point {text!r}, expected four components")
    return Quaternion(*comps)


# Serialization ------------------------------------------------------------------


def _num(v: float):
    return v if math.isfinite(v) else None


def _quat_list(q: Quaternion) -> list:
    return [_num(c) for c in q.components()]


def _cplx(c: complex) -> list:
    return [_num(c.real), _num(c.imag)]


def _g17(v: Optional[float]) -> str:
    return "" if v is None or not math.isfinite(v) else format(v, ".17g")


def _dump_json(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g17(c) if isinstance(c, float) or c is None else c for c in row])
    return buf.getvalue()


def _short(v: Optional[float]) -> str:
    return "nan" if v is None or not math.isfinite(v) else repr(v)


def _text(lines: dict) -> str:
    return "".join(f"{k}: {_short(v) if isinstance(v, float) else v}\n" for k, v in lines.items())


# Commands -----------------------------------------------------------------------


def cmd_check(cfg: RunConfig, raw_conj_demo: bool = False) -> tuple[int, str]:
    f = raw_conj() if raw_conj_demo else parse(cfg.expressions[0])
    label = "raw_conj(p)" if raw_conj_demo else cfg.expressions[0]
    report = check_holomorphy(f, cfg.domain(f), cfg.tolerance, cfg.step, cfg.richardson)
    code = {"holomorphic": EXIT_OK, "violated": EXIT_VIOLATION}.get(report.verdict, EXIT_INCONCLUSIVE)
    summary = {
        "expression": label,
        "verdict": report.verdict,
        "max_rel_residual": report.max_rel_residual,
        "mean_rel_residual": report.mean_rel_residual,
        "tolerance": report.tolerance,
        "num_samples": len(report.samples),
        "num_skipped_singular": report.num_skipped_singular,
    }
    if cfg.output_format == "csv":
        rows = [
            [r.point.x, r.point.z, r.point.u, r.eq1, r.eq2, r.eq3, r.eq4, r.scale, r.max_rel]
            for r in report.samples
        ]
        return code, _dump_csv(["x", "z", "u", "eq1", "eq2", "eq3", "eq4", "scale", "rel"], rows)
    if cfg.output_format == "text":
        per_eq = {f"max_rel_{k}": v for k, v in report.max_per_equation.items()}
        return code, _text({**summary, **per_eq})
    doc = {
        "command": "check",
        "config": cfg.as_dict(),
        **{k: (_num(v) if isinstance(v, float) else v) for k, v in summary.items()},
        "max_rel_per_equation": {k: _num(v) for k, v in report.max_per_equation.items()},
        "samples": [
            {"point": _quat_list(r.point), "eq1": r.eq1, "eq2": r.eq2, "eq3": r.eq3, "eq4": r.eq4, "scale": r.scale}
            for r in report.samples
        ],
    }
    return code, _dump_json(doc)


def cmd_derive(cfg: RunConfig, order: int) -> tuple[int, str]:
    if order < 1:
        raise UsageError("--order must be at least 1")
    f = parse(cfg.expressions[0])
    deriv = analytic_derivative(f, order)
    text = format_expr(deriv)
    rows, worst, skipped = [], 0.0, 0
    for p in cfg.domain(f).points():
        try:
            exact = deriv.value_at(p)
            numeric = full_derivative_numeric(f, p, order, cfg.step, cfg.richardson)
        except (DomainError, StencilError):
            skipped += 1
            continue
        dev = abs(numeric - exact) / (1.0 + abs(exact))
        worst = max(worst, dev)
        rows.append((p, exact, numeric, dev))
    code = EXIT_OK if rows and worst <= cfg.tolerance else (EXIT_VIOLATION if rows else EXIT_INCONCLUSIVE)
    max_dev = worst if rows else math.nan
    if cfg.output_format == "csv":
        table = [[p.x, p.z, p.u, *e.components(), *n.components(), d] for p, e, n, d in rows]
        header = ["x", "z", "u", "analytic_w", "analytic_x", "analytic_y", "analytic_z",
                  "numeric_w", "numeric_x", "numeric_y", "numeric_z", "deviation"]
        return code, _dump_csv(header, table)
    if cfg.output_format == "text":
        return code, _text({"expression": cfg.expressions[0], "order": order, "derivative": text,
                            "max_deviation": max_dev, "num_points": len(rows), "num_skipped_singular": skipped})
    doc = {
        "command": "derive",
        "config": cfg.as_dict(),
        "expression": cfg.expressions[0],
        "order": order,
        "derivative": text,
        "max_deviation": _num(max_dev),
        "tolerance": cfg.tolerance,
        "num_skipped_singular": skipped,
        "points": [
            {"point": _quat_list(p), "analytic": _quat_list(e), "numeric": _quat_list(n), "deviation": d}
            for p, e, n, d in rows
        ],
    }
    return code, _dump_json(doc)


def cmd_eval(cfg: RunConfig, point: Quaternion) -> tuple[int, str]:
    f = parse(cfg.expressions[0])
    r = evaluate(f, point)
    v = r.value
    if cfg.output_format == "csv":
        return EXIT_OK, _dump_csv(["w", "x", "y", "z", "phi1_re", "phi1_im", "phi2_re", "phi2_im"],
                                  [[v.x, v.y, v.z, v.u, r.phi1.real, r.phi1.imag, r.phi2.real, r.phi2.imag]])
    if cfg.output_format == "text":
        return EXIT_OK, _text({"value": ", ".join(_short(c) for c in v.components()),
                               "phi1": f"{_short(r.phi1.real)} + {_short(r.phi1.imag)}i",
                               "phi2": f"{_short(r.phi2.real)} + {_short(r.phi2.imag)}i"})
    doc = {
        "command": "eval",
        "expression": cfg.expressions[0],
        "point": _quat_list(point),
        "value": _quat_list(v),
        "phi1": _cplx(r.phi1),
        "phi2": _cplx(r.phi2),
        "catalog_holomorphic": is_catalog_holomorphic(f),
    }
    return EXIT_OK, _dump_json(doc)


PROPERTY_CHECKS = ("commute", "quotient", "structure", "rules")


def _run_property(check: str, left: QFunction, right: Optional[QFunction], points, cfg: RunConfig) -> list[tuple]:
    """Rows of ``(name, deviation, tolerance, points, skipped, passed)``."""
    if check == "commute":
        r = check_commutativity(left, right, points, cfg.tolerance)
        return [(r.name, r.max_abs_deviation, r.tolerance, len(r.points), r.num_skipped, r.passed)]
    if check == "quotient":
        r = check_quotient_equality(left, right, points, cfg.tolerance)
        return [(r.name, r.max_abs_deviation, r.tolerance, len(r.points), r.num_skipped, r.passed)]
    if check == "structure":
        s = check_structure_forms(left, points, cfg.tolerance, seed=cfg.seed)
        return [
            (f"structure:{name}", value, s.tolerance, len(s.points), s.num_skipped, bool(s.points) and value <= s.tolerance)
            for name, value in (("realness", s.max_realness), ("phi1_rotation", s.max_phi1_rotation),
                                ("ratio_rotation", s.max_ratio_rotation))
        ]
    if check == "rules":
        return [
            (r.name, r.max_abs_deviation, r.tolerance, len(r.points), r.num_skipped, r.passed)
            for r in check_derivative_rules(left, right, points, cfg.tolerance, cfg.step).values()
        ]
    raise UsageError(f"unknown check {check!r}")


def cmd_props(cfg: RunConfig, check: str) -> tuple[int, str]:
    left = parse(cfg.expressions[0])
    right = parse(cfg.expressions[1]) if len(cfg.expressions) > 1 and cfg.expressions[1] else None
    if check != "structure" and right is None:
        raise UsageError(f"--check {check} needs --right")
    points = sample_points(
        cfg.samples, cfg.seed, (cfg.box[0], cfg.box[0], cfg.box[1], cfg.box[2]),
        min_abs_p=0.1 if cfg.exclude_radius is None else cfg.exclude_radius,
        min_abs_b=cfg.min_abs_b, branch_margin=cfg.branch_margin,
    )
    results = []
    for name in (PROPERTY_CHECKS if check == "all" else (check,)):
        results.extend(_run_property(name, left, right, points, cfg))
    passed = all(r[-1] for r in results)
    code = EXIT_OK if passed else EXIT_VIOLATION
    if cfg.output_format == "csv":
        return code, _dump_csv(["property", "max_abs_deviation", "tolerance", "points", "skipped", "pass"],
                               [[n, d, t, c, s, str(p).lower()] for n, d, t, c, s, p in results])
    if cfg.output_format == "text":
        return code, "".join(f"{'PASS' if p else 'FAIL'} {n}: deviation {_short(d)} (tol {_short(t)}, {c} points)\n"
                             for n, d, t, c, s, p in results)
    doc = {
        "command": "props",
        "config": cfg.as_dict(),
        "check": check,
        "pass": passed,
        "properties": [
            {"property": n, "max_abs_deviation": _num(d), "tolerance": t, "points": c, "skipped": s, "pass": p}
            for n, d, t, c, s, p in results
        ],
    }
    return code, _dump_json(doc)


def field_nodes(f: QFunction, counts, ranges, exclude_radius: float = 0.0):
    """First derivative of ``f`` on a regular ``(x, z, u)`` grid at ``y = 0``.

    Yields ``(x, z, u, value)`` with ``value`` ``None`` at singular or
    excluded nodes.  ``x`` varies slowest.
    """
    deriv = analytic_derivative(f)
    axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(ranges, counts)]
    for x in axes[0]:
        for z in axes[1]:
            for u in axes[2]:
                p = Quaternion(float(x), 0.0, float(z), float(u))
                value = None
                if abs(p) >= exclude_radius:
                    try:
                        value = deriv.value_at(p)
                    except DomainError:
                        value = None
                if value is not None and not all(math.isfinite(c) for c in value.components()):
                    value = None
                yield float(x), float(z), float(u), value


def cmd_field(cfg: RunConfig, grid: tuple[int, int, int], ranges) -> tuple[int, str]:
    f = parse(cfg.expressions[0])
    radius = 0.0 if cfg.exclude_radius is None else cfg.exclude_radius
    nodes = list(field_nodes(f, grid, ranges, radius))
    if cfg.output_format == "json":
        doc = {
            "command": "field",
            "expression": cfg.expressions[0],
            "grid": {"counts": list(grid), "ranges": [list(r) for r in ranges]},
            "nodes": [{"position": [x, z, u], "value": None if v is None else _quat_list(v)} for x, z, u, v in nodes],
            "num_null": sum(v is None for *_, v in nodes),
        }
        return EXIT_OK, _dump_json(doc)
    rows = [[x, z, u, *(v.components() if v is not None else (None,) * 4)] for x, z, u, v in nodes]
    return EXIT_OK, _dump_csv(["x", "z", "u", "psi_w", "psi_x", "psi_y", "psi_z"], rows)


# Entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="holoq",
        description="Quaternionic holomorphy checks, full derivatives and property tests.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"holoq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sampling=True):
        p.add_argument("--format", choices=("json", "csv", "text"), default=None, dest="output_format")
        p.add_argument("--output", help="write the report here instead of stdout")
        if sampling:
            p.add_argument("--tol", type=float, default=DEFAULT_TOL)
            p.add_argument("--step", type=float, default=DEFAULT_STEP, help="base difference step, scaled by max(1, |p|)")
            p.add_argument("--richardson", action="store_true", help="one level of Richardson extrapolation")
            p.add_argument("--points", type=int, default=100, help="number of sample points")
            p.add_argument("--seed", type=int, default=None, help="RNG seed (default $HOLOQ_SEED or 0)")
            p.add_argument("--box", default="-2:2", help="lo:hi or x0:x1,z0:z1,u0:u1")
            p.add_argument("--exclude-radius", type=float, default=None, help="skip points with |p| below this")

    fmt = argparse.RawDescriptionHelpFormatter
    c = sub.add_parser("check", help="verify the generalized Cauchy-Riemann equations", epilog=GRAMMAR_HELP, formatter_class=fmt)
    c.add_argument("--expr")
    c.add_argument("--raw-conj", action="store_true", help="check the conjugation p -> conj(p) instead (negative control)")
    common(c)

    d = sub.add_parser("derive", help="analytic full derivative with a numeric cross-check", epilog=GRAMMAR_HELP, formatter_class=fmt)
    d.add_argument("--expr", required=True)
    d.add_argument("--order", type=int, default=1)
    common(d)

    e = sub.add_parser("eval", help="evaluate an expression at one point", epilog=GRAMMAR_HELP, formatter_class=fmt)
    e.add_argument("--expr", required=True)
    e.add_argument("--at", required=True, help="x,y,z,u")
    common(e, sampling=False)

    pr = sub.add_parser("props", help="commutativity, quotient, structure and derivative-rule checks", epilog=GRAMMAR_HELP, formatter_class=fmt)
    pr.add_argument("--left", required=True)
    pr.add_argument("--right")
    pr.add_argument("--check", choices=PROPERTY_CHECKS + ("all",), default="commute")
    common(pr)

    fl = sub.add_parser("field", help="export the first derivative on a 3D grid at y = 0", epilog=GRAMMAR_HELP, formatter_class=fmt)
    fl.add_argument("--expr", required=True)
    fl.add_argument("--grid", default="11x11x11", help="NxNxN node counts")
    fl.add_argument("--range", default=None, help="lo:hi or x0:x1,z0:z1,u0:u1 (default: --box)")
    common(fl)
    return parser


def _default_seed() -> int:
    env = os.environ.get("HOLOQ_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HOLOQ_SEED must be an integer, got {env!r}") from None


def _config(args: argparse.Namespace) -> RunConfig:
    default_format = "csv" if args.command == "field" else "json"
    cfg = RunConfig(command=args.command, output_format=args.output_format or default_format, output=args.output)
    if hasattr(args, "tol"):
        cfg.tolerance = args.tol
        cfg.step = args.step
        cfg.richardson = args.richardson
        cfg.samples = args.points
        cfg.seed = args.seed if args.seed is not None else _default_seed()
        cfg.box = parse_box(args.box)
        cfg.exclude_radius = args.exclude_radius
    if args.command == "props":
        cfg.expressions = [args.left, args.right or ""]
    elif args.command == "check":
        if not args.raw_conj and not args.expr:
            raise UsageError("check needs --expr or --raw-conj")
        cfg.expressions = [args.expr or ""]
    else:
        cfg.expressions = [args.expr]
    cfg.validate()
    return cfg


# options whose values routinely start with a minus sign
_SIGNED_VALUE_OPTIONS = {"--at", "--range", "--box"}


def _join_signed_values(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _SIGNED_VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str, str]:
    """Run the CLI and return ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    argv = _join_signed_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"{parser.format_usage()}error: {exc}\n"
    try:
        cfg = _config(args)
        if args.command == "check":
            code, out = cmd_check(cfg, raw_conj_demo=args.raw_conj)
        elif args.command == "derive":
            code, out = cmd_derive(cfg, args.order)
        elif args.command == "eval":
            code, out = cmd_eval(cfg, parse_point(args.at))
        elif args.command == "props":
            code, out = cmd_props(cfg, args.check)
        else:
            ranges = parse_box(args.range) if args.range else cfg.box
            code, out = cmd_field(cfg, parse_grid(args.grid), ranges)
    except ParseError as exc:
        return EXIT_USAGE, "", f"error: {exc.render()}\n"
    except (UsageError, UnsupportedNode, PreconditionError) as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    except DomainError as exc:
        return EXIT_VIOLATION, "", f"error: {type(exc).__name__}: {exc}\n"
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
        return code, "", ""
    return code, out, ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
