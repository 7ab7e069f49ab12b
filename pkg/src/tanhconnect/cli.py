"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical/assembly failure,
4 I/O failure.  Tables are CSV with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import approximant as ap
from .assembly import assemble
from .checks import DEMOS, run_demo
from .errors import (
    ArtifactError,
    ExpressionSyntaxError,
    SpecValidationError,
    TanhConnectError,
    UnknownIdentifier,
)
from .expr import parse
from .piecewise import ConnectorParams, DomainInterval, spec_from_dict
from .showcase import (
    REFERENCE_DELTA,
    REFERENCE_OSCILLATOR,
    DeltaSpec,
    OscillatorSpec,
    check_unit_mass,
    delta_approximant,
    force_approximant,
    sift,
    solve_analytic,
    solve_rk4,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt(v: float) -> str:
    return "%.17g" % v


def write_csv(path: str | None, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}", EXIT_INVALID) from None


def _load_any(path: str) -> ap.AssembledApproximant:
    """Accept either a spec document or a saved artifact."""
    doc = _read_json(path)
    if isinstance(doc, dict) and "schema_version" in doc:
        return ap.load(doc)
    return assemble(spec_from_dict(doc))


# -- commands ----------------------------------------------------------------

def cmd_build(args) -> int:
    doc = _read_json(args.inp)
    spec = spec_from_dict(doc)
    a = assemble(spec)
    text = ap.dumps(a)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    return EXIT_OK


def cmd_sample(args) -> int:
    a = _load_any(args.inp)
    d = a.spec.domain
    lo = d.x0 if args.start is None else args.start
    hi = d.xf if args.stop is None else args.stop
    if args.points < 1:
        raise CliError("--points must be at least 1", EXIT_INVALID)
    if lo > hi or (lo == hi and args.points > 1):
        raise CliError(f"need --from < --to, got {lo} and {hi}", EXIT_INVALID)
    if lo < d.x0 or hi > d.xf:
        raise CliError(f"sampling range [{lo}, {hi}] leaves the domain [{d.x0}, {d.xf}]",
                       EXIT_INVALID)
    xs = np.array([lo]) if args.points == 1 else np.linspace(lo, hi, args.points)
    values, failures = ap.evaluate_batch(a, xs)
    write_csv(args.out, ["x", "omega"], [xs, values])
    for f in failures:
        print(f"warning: {f}", file=sys.stderr)
    return EXIT_NUMERIC if failures else EXIT_OK


def _parse_exclusion(text: str) -> tuple[float, float]:
    try:
        center, radius = text.split(":")
        return float(center), float(radius)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected CENTER:RADIUS, got {text!r}") from None


def cmd_error(args) -> int:
    a = _load_any(args.inp)
    d = a.spec.domain
    if args.grid_file:
        try:
            raw = Path(args.grid_file).read_text().split()
        except OSError as exc:
            raise CliError(f"cannot read {args.grid_file}: {exc}", EXIT_IO) from None
        try:
            grid = np.array([float(v) for v in raw if v.lower() != "x"])
        except ValueError as exc:
            raise CliError(f"bad grid file: {exc}", EXIT_INVALID) from None
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise CliError("grid file must list strictly increasing abscissae", EXIT_INVALID)
        if grid[0] < d.x0 or grid[-1] > d.xf:
            raise CliError("grid leaves the domain", EXIT_INVALID)
    else:
        if args.grid < 2:
            raise CliError("--grid must be at least 2", EXIT_INVALID)
        grid = np.linspace(d.x0, d.xf, args.grid)
    prof = ap.error_profile(a, grid, rel_floor=args.rel_floor, exclude=args.exclude_around,
                            exclude_radius=args.exclude_radius)
    write_csv(args.out, ["x", "omega", "psi", "abs_err", "rel_err"],
              [prof.x, prof.omega, prof.psi, prof.abs_err, prof.rel_err])
    s = prof.summary
    print(f"max_abs={_fmt(s.max_abs)} argmax_abs={_fmt(s.argmax_abs)} "
          f"max_rel={_fmt(s.max_rel)} argmax_rel={_fmt(s.argmax_rel)} "
          f"counted={s.counted} excluded={s.excluded}")
    return EXIT_OK


def _connector(args) -> ConnectorParams:
    return ConnectorParams(kind=args.kind, sigma=args.sigma)


def cmd_delta(args) -> int:
    try:
        d = DeltaSpec(args.b, args.h, DomainInterval(*args.domain))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    f = parse(args.f) if args.f else None
    a = delta_approximant(d, _connector(args))
    i1, e_i = check_unit_mass(d, approximant=a)
    print(f"I1={_fmt(i1)}")
    print(f"e_I={_fmt(e_i)}")
    if f is not None:
        i2, e2 = sift(d, f, approximant=a)
        print(f"I2={_fmt(i2)}")
        print(f"e2={_fmt(e2)}")
    return EXIT_OK


def cmd_oscillator(args) -> int:
    try:
        o = OscillatorSpec(args.m, args.k, args.f0, args.t1, args.t2,
                           DomainInterval(args.t0, args.tf), args.x0, args.v0)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    if not args.dt > 0:
        raise CliError("--dt must be positive", EXIT_INVALID)
    a = force_approximant(o, _connector(args))
    try:
        rk = solve_rk4(o, args.dt, approximant=a)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    if args.method == "rk4":
        write_csv(args.out, ["t", "x", "v"], [rk.t, rk.x, rk.v])
        return EXIT_OK
    an = solve_analytic(o, rk.t, approximant=a)
    if args.method == "analytic":
        write_csv(args.out, ["t", "x", "v"], [an.t, an.x, an.v])
        return EXIT_OK
    write_csv(args.out, ["t", "x_rk4", "v_rk4", "x_analytic", "v_analytic"],
              [rk.t, rk.x, rk.v, an.x, an.v])
    dx = float(np.max(np.abs(rk.x - an.x)))
    print(f"max_abs_dx={_fmt(dx)}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_demo(args) -> int:
    checks = run_demo(args.name)
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERIC


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tanhconnect",
        description="Analytic tanh-connector approximants of piecewise continuous functions.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="assemble a spec file into an artifact")
    b.add_argument("--in", dest="inp", required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("sample", help="tabulate Omega on an equispaced grid")
    s.add_argument("--in", dest="inp", required=True, help="spec or artifact JSON")
    s.add_argument("--from", dest="start", type=float)
    s.add_argument("--to", dest="stop", type=float)
    s.add_argument("--points", type=int, default=1001)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("error", help="error profile against the piecewise reference")
    e.add_argument("--in", dest="inp", required=True, help="spec or artifact JSON")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--grid", type=int, default=10_000)
    g.add_argument("--grid-file")
    e.add_argument("--exclude-radius", type=float, default=0.0,
                   help="leave points this close to any cut out of the summary")
    e.add_argument("--exclude-around", type=_parse_exclusion, action="append", default=[],
                   metavar="CENTER:RADIUS", help="leave a neighbourhood out of the summary")
    e.add_argument("--rel-floor", type=float, default=1e-12)
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_error)

    dl = sub.add_parser("delta", help="unit-mass and sifting checks for a thin rect")
    dl.add_argument("--b", type=float, default=REFERENCE_DELTA.b)
    dl.add_argument("--h", type=float, default=REFERENCE_DELTA.h)
    dl.add_argument("--domain", type=float, nargs=2, default=[-1.0, 1.0], metavar=("X0", "XF"))
    dl.add_argument("--f", help="test function for the sifting integral, e.g. 'sin(x)'")
    dl.add_argument("--kind", choices=["raw", "regularized"], default="regularized")
    dl.add_argument("--sigma", type=float, default=1e-6)
    dl.set_defaults(func=cmd_delta)

    o = sub.add_parser("oscillator", help="mass-spring system under a switched force")
    po = REFERENCE_OSCILLATOR
    for name, default in [("m", po.m), ("k", po.k), ("f0", po.f0), ("t1", po.t1),
                          ("t2", po.t2), ("t0", po.t_domain.x0), ("tf", po.t_domain.xf),
                          ("x0", po.x0_init), ("v0", po.v0_init), ("dt", 1e-3)]:
        o.add_argument(f"--{name}", type=float, default=default)
    o.add_argument("--method", choices=["rk4", "analytic", "both"], default="both")
    o.add_argument("--kind", choices=["raw", "regularized"], default="regularized")
    o.add_argument("--sigma", type=float, default=1e-6)
    o.add_argument("--out", default="-")
    o.set_defaults(func=cmd_oscillator)

    dm = sub.add_parser("demo", help="reproduce a worked example and report PASS/FAIL")
    dm.add_argument("name", choices=sorted(DEMOS))
    dm.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpecValidationError as exc:
        for issue in exc.issues:
            print(f"error: {type(issue).__name__}: {issue}", file=sys.stderr)
        return EXIT_INVALID
    except (ExpressionSyntaxError, UnknownIdentifier, ArtifactError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TanhConnectError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
