"""Command-line front end.

Exit codes: 0 success/pass, 1 certification or invariant failure (or an
unwritable output), 2 usage error, 3 invalid problem parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import serialize as ser
from .core import RESIDUAL_TOL, Params, check_feasibility, cost
from .errors import InvalidInput, InvalidParams
from .oracle import DpConfig, competitor_costs, solve_dp, value_csv
from .pmp import build_certificate, certify, preflight_existence
from .synthesis import synthesize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARAMS = 0, 1, 2, 3
PARAM_NAMES = ("lambda", "a", "t0", "T", "x0")
SWEEP_FIELDS = ("lambda", "a", "t0", "T", "x0", "kind", "case", "rho", "tbar", "alpha1",
                "xbar0", "cost_analytic", "cost_dp", "gap", "cert_residual", "status")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    fixed: dict                      # parameter name -> value
    ranges: dict = field(default_factory=dict)  # name -> (start, stop, count)
    with_dp: bool = False
    with_cert: bool = False
    nt: int = 2000
    nx: int = 4001
    tol: float = RESIDUAL_TOL
    jobs: int = 1

    def points(self):
        """Grid points in lexicographic order of the range indices."""
        axes = []
        for name in PARAM_NAMES:
            if name in self.ranges:
                start, stop, count = self.ranges[name]
                axes.append([float(v) for v in np.linspace(start, stop, int(count))])
            else:
                axes.append([float(self.fixed[name])])
        for combo in itertools.product(*axes):
            yield dict(zip(PARAM_NAMES, combo))


def sweep_row(spec: SweepSpec, point: dict) -> dict:
    row = dict.fromkeys(SWEEP_FIELDS)
    row.update(point)
    row["kind"] = spec.kind.upper()
    params = Params.unchecked(spec.kind, point["lambda"], point["a"], point["t0"],
                              point["T"], point["x0"])
    if not params.valid:
        row["status"] = "invalid"
        return row
    result = synthesize(params)
    lm = result.landmarks
    row.update(case=result.case.value, rho=lm.rho, tbar=lm.tbar, alpha1=lm.alpha1,
               xbar0=lm.xbar0, cost_analytic=result.cost, status="ok")
    if spec.with_dp:
        dp = solve_dp(params, DpConfig.covering(params, spec.nt, spec.nx))
        row["cost_dp"] = dp.cost
        row["gap"] = dp.cost - result.cost
    if spec.with_cert:
        cert = build_certificate(params, result, spec.tol)
        row["cert_residual"] = certify(result.process, cert, spec.tol).max_residual
    return row


def _row_task(args):
    return sweep_row(*args)


def run_sweep(spec: SweepSpec) -> str:
    """Evaluate every grid point and return the CSV document (grid order)."""
    points = list(spec.points())
    tasks = [(spec, p) for p in points]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [sweep_row(*t) for t in tasks]
    return ser.table_csv(SWEEP_FIELDS, ([r[f] for f in SWEEP_FIELDS] for r in rows))


def _parse_range(text: str):
    try:
        name, spec = text.split("=", 1)
        start, stop, count = spec.split(":")
        rng = (float(start), float(stop), int(count))
    except ValueError:
        raise UsageError(f"bad --range {text!r}; expected NAME=start:stop:count") from None
    if name not in PARAM_NAMES:
        raise UsageError(f"--range name must be one of {', '.join(PARAM_NAMES)}")
    if rng[2] < 1:
        raise UsageError("--range count must be >= 1")
    return name, rng


# --------------------------------------------------------------------------
# argument parsing


def _param_parent(required: bool) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--kind", type=str.lower, choices=("fp1", "fp2"), required=True)
    parent.add_argument("--lambda", dest="lam", type=float, required=required)
    parent.add_argument("--a", type=float, required=required)
    parent.add_argument("--t0", type=float, default=0.0)
    parent.add_argument("--T", type=float, required=required)
    parent.add_argument("--x0", type=float, default=0.0)
    parent.add_argument("--out", metavar="PATH", help="write the document here instead of stdout")
    parent.add_argument("--format", choices=("json", "csv"), default="json")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthpmp",
        description="Optimal syntheses, maximum-principle certificates and DP oracles "
                    "for the discounted growth-type control family.")
    parser.add_argument("--version", action="version", version=ser.VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    with_params = _param_parent(required=True)

    sub.add_parser("synth", parents=[with_params], help="closed-form optimal process")

    p = sub.add_parser("certify", parents=[_param_parent(required=False)],
                       help="build multipliers and check the four conditions")
    p.add_argument("--in", dest="infile", metavar="PATH",
                   help="synth JSON document to certify (its params override the flags)")
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    p.add_argument("--samples", type=int, default=10001)

    p = sub.add_parser("dp", parents=[with_params], help="dynamic-programming oracle")
    p.add_argument("--nt", type=int, default=2000)
    p.add_argument("--nx", type=int, default=4001)
    p.add_argument("--stride", type=int, default=1, help="thinning of the CSV value grid")
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")

    p = sub.add_parser("compete", parents=[with_params], help="exact competitor families")
    p.add_argument("--step", type=float, default=1e-3, help="switch-time grid step")

    p = sub.add_parser("preflight", parents=[with_params], help="existence-theorem preflight")
    p.add_argument("--samples", type=int, default=21)

    p = sub.add_parser("sweep", parents=[_param_parent(required=False)],
                       help="CSV table over a parameter grid")
    p.add_argument("--range", dest="ranges", action="append", default=[],
                   metavar="NAME=start:stop:count")
    p.add_argument("--with-dp", action="store_true")
    p.add_argument("--with-cert", action="store_true")
    p.add_argument("--nt", type=int, default=2000)
    p.add_argument("--nx", type=int, default=4001)
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(format="csv")
    return parser


def _params(args) -> Params:
    missing = [n for n, v in (("--lambda", args.lam), ("--a", args.a), ("--T", args.T)) if v is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    return Params(args.kind, args.lam, args.a, args.t0, args.T, args.x0)


def _emit(args, text: str) -> int:
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"growthpmp: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_FAIL
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# commands


def cmd_synth(args) -> int:
    result = synthesize(_params(args))
    if args.format == "csv":
        rc = _emit(args, ser.process_csv(result.process))
    else:
        rc = _emit(args, ser.dumps(ser.synthesis_to_doc(result)))
    ok = check_feasibility(result.process, 1e-12).passed
    return rc or (EXIT_OK if ok else EXIT_FAIL)


def cmd_certify(args) -> int:
    if args.infile:
        try:
            with open(args.infile, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.infile}: {exc}") from None
        process = ser.process_from_doc(doc.get("process", doc))
        params = process.params
    else:
        params = _params(args)
        process = None
    result = synthesize(params)
    if process is None:
        process = result.process
    cert = build_certificate(params, result, args.tol)
    report = certify(process, cert, args.tol, args.samples)
    doc = {
        "version": ser.VERSION,
        "params": ser.params_to_doc(params),
        "case": result.case.value,
        "cost": cost(process),
        "certificate": ser.certificate_to_doc(cert),
        "report": report.as_dict(),
    }
    text = ser.flat_csv(report.as_dict()) if args.format == "csv" else ser.dumps(doc)
    rc = _emit(args, text)
    return rc or (EXIT_OK if report.passed else EXIT_FAIL)


def cmd_dp(args) -> int:
    params = _params(args)
    config = DpConfig.covering(params, args.nt, args.nx)
    result = solve_dp(params, config, backend=args.backend)
    if args.format == "csv":
        return _emit(args, value_csv(result, max(1, args.stride)))
    analytic = synthesize(params)
    doc = {
        "version": ser.VERSION,
        "params": ser.params_to_doc(params),
        "config": config.as_dict(),
        "backend": result.backend,
        "cost_dp": result.cost,
        "cost_extracted": cost(result.process),
        "cost_analytic": analytic.cost,
        "case": analytic.case.value,
        "gap": result.cost - analytic.cost,
        "process": ser.process_to_doc(result.process),
    }
    return _emit(args, ser.dumps(doc))


def cmd_compete(args) -> int:
    params = _params(args)
    result = competitor_costs(params, args.step)
    if args.format == "csv":
        rows = [(e.family, e.s, e.cost) for e in result.entries]
        return _emit(args, ser.table_csv(["family", "s", "cost"], rows))
    doc = {"version": ser.VERSION, "params": ser.params_to_doc(params), **result.as_dict()}
    return _emit(args, ser.dumps(doc))


def cmd_preflight(args) -> int:
    if None in (args.lam, args.a, args.T):
        raise UsageError("missing --lambda, --a or --T")
    params = Params.unchecked(args.kind, args.lam, args.a, args.t0, args.T, args.x0)
    report = preflight_existence(params, args.samples)
    doc = {"version": ser.VERSION, "params": ser.params_to_doc(params), **report.as_dict()}
    text = ser.flat_csv(report.as_dict()) if args.format == "csv" else ser.dumps(doc)
    rc = _emit(args, text)
    if rc:
        return rc
    if not report.params_ok:
        return EXIT_PARAMS
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(args) -> int:
    ranges = dict(_parse_range(r) for r in args.ranges)
    fixed = {"lambda": args.lam, "a": args.a, "t0": args.t0, "T": args.T, "x0": args.x0}
    missing = [n for n, v in fixed.items() if v is None and n not in ranges]
    if missing:
        raise UsageError(f"give a value or a --range for: {', '.join(missing)}")
    spec = SweepSpec(args.kind, fixed, ranges, args.with_dp, args.with_cert,
                     args.nt, args.nx, args.tol, max(1, args.jobs))
    text = run_sweep(spec)
    if args.format == "json":
        rows = list(_csv_rows(text))
        text = ser.dumps({"version": ser.VERSION, "rows": rows})
    return _emit(args, text)


def _csv_rows(text: str):
    for row in csv.DictReader(io.StringIO(text)):
        yield {k: _maybe_float(v) for k, v in row.items()}


def _maybe_float(v: str):
    if v == "":
        return None
    try:
        return float(v)
    except ValueError:
        return v


COMMANDS = {
    "synth": cmd_synth,
    "certify": cmd_certify,
    "dp": cmd_dp,
    "compete": cmd_compete,
    "preflight": cmd_preflight,
    "sweep": cmd_sweep,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: usage errors exit 2, --help/--version exit 0
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"growthpmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParams as exc:
        print(f"growthpmp: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except InvalidInput as exc:
        print(f"growthpmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
