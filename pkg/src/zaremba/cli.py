"""Command-line front end: ``zaremba {kernel,trace,fit,verify}``.

Grids go out as CSV (header row, ``,`` separator, ``repr`` floats so every
value round-trips exactly).  ``verify`` prints one line per check and can
write a JSON report; the report holds no timing data, so identical flags
give identical bytes.  The timed run manifest is a separate, optional file.

Exit codes: 0 success, 1 a verification check failed, 2 usage or
precondition error, 3 numerical failure (incomplete eigenvalue enumeration
or non-converged quadrature).
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import re
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__, halfline, spectra, verify, wedge
from .coeffs import BC
from .numerics import NonConvergence, fit_powers
from .spectra import IncompleteEnumeration, SectorSpec
from .wedge import REGULAR, Robin, WedgeConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    parameters: dict
    tolerances: dict
    version: str
    wall_clock_seconds: float = 0.0
    outcomes: list = field(default_factory=list)


_ANGLE = re.compile(r"^\s*(?:(?P<num>[0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>[0-9.eE+-]+))?\s*$")


def angle(text: str) -> float:
    """Parse ``1.5708``, ``pi``, ``pi/3`` or ``2pi/3``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r} (use a number or forms like pi/2, 2pi/3)")
    num = float(m.group("num")) if m.group("num") else 1.0
    den = float(m.group("den")) if m.group("den") else 1.0
    return num * math.pi / den


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(rows, header, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


def _vertex(args):
    if args.vertex == "regular":
        if args.s is not None:
            raise UsageError("--s is only meaningful with --vertex robin")
        return REGULAR
    if args.s is None:
        raise UsageError("--vertex robin needs --s")
    return Robin(args.s)


# -- kernel --------------------------------------------------------------------


def cmd_kernel(args, out):
    subject = args.subject
    if subject.startswith("halfline"):
        for flag in ("t", "r", "r2"):
            if getattr(args, flag) is None:
                raise UsageError(f"{subject} needs --{flag.replace('_', '-')}")
        if subject == "halfline-robin":
            if args.s is None:
                raise UsageError("halfline-robin needs --s")
            grid = itertools.product(args.t, args.r, args.r2, args.s_grid or [args.s])
            rows = [(t, r, r2, s, halfline.robin_w(t, r, r2, s)) for t, r, r2, s in grid]
            _write_csv(rows, ["t", "r", "r2", "s", "value"], out)
            return EXIT_OK
        fn = halfline.dirichlet_kernel if subject == "halfline-d" else halfline.neumann_kernel
        rows = [(t, r, r2, fn(t, r, r2)) for t, r, r2 in itertools.product(args.t, args.r, args.r2)]
        _write_csv(rows, ["t", "r", "r2", "value"], out)
        return EXIT_OK

    vertex = _vertex(args)
    if subject == "psi":
        for flag in ("t", "rho", "theta", "rho2", "theta2"):
            if getattr(args, flag) is None:
                raise UsageError(f"psi needs --{flag}")
        grid = itertools.product(args.t, args.rho, args.theta, args.rho2, args.theta2)
        rows = [(t, r, a, r2, a2, wedge.psi(t, r, a, r2, a2, vertex)) for t, r, a, r2, a2 in grid]
        _write_csv(rows, ["t", "rho", "theta", "rho2", "theta2", "value"], out)
        return EXIT_OK
    # mixed-diag
    for flag in ("t", "rho", "theta"):
        if getattr(args, flag) is None:
            raise UsageError(f"mixed-diag needs --{flag}")
    cfg = WedgeConfig(m=args.m, vertex=vertex, dim_v=args.dim_v)
    grid = itertools.product(args.t, args.rho, args.theta)
    rows = [(t, r, a, wedge.mixed_diagonal(t, r, a, cfg)) for t, r, a in grid]
    _write_csv(rows, ["t", "rho", "theta", "value"], out)
    return EXIT_OK


# -- trace -----------------------------------------------------------------------


def _sector(args) -> SectorSpec:
    return SectorSpec(alpha=args.alpha, radius=args.radius, side_lo_bc=args.bc_lo, side_hi_bc=args.bc_hi)


def _t_grid(args):
    if not 0 < args.t_min < args.t_max:
        raise UsageError("need 0 < --t-min < --t-max")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    return spectra.default_t_grid(args.t_min, args.t_max, args.points)


def cmd_trace(args, out):
    samples = spectra.heat_traces(_sector(args), _t_grid(args), args.lambda_max, args.threads)
    _write_csv([(s.t, s.value, s.tail_bound) for s in samples], ["t", "value", "tail_bound"], out)
    return EXIT_OK


# -- fit -------------------------------------------------------------------------


def _read_samples(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"t", "value"} <= set(reader.fieldnames):
            raise UsageError(f"{path}: CSV needs columns 't' and 'value'")
        return [(float(row["t"]), float(row["value"])) for row in reader]


def cmd_fit(args, out):
    if args.input:
        samples = _read_samples(args.input)
        exponents = args.exponents or list(spectra.TRACE_EXPONENTS)
    elif args.source == "strip":
        cfg = WedgeConfig(m=args.m, vertex=_vertex(args), dim_v=args.dim_v)
        exponents = args.exponents or list(wedge.STRIP_FIT_EXPONENTS)
        fit = wedge.fit_strip_trace(cfg, eps3=args.eps3, t_max=args.strip_t_max, exponents=exponents)
        return _write_fit(fit, out)
    else:
        ts = _t_grid(args)
        samples = [(s.t, s.value) for s in spectra.heat_traces(_sector(args), ts, args.lambda_max, args.threads)]
        exponents = args.exponents or list(spectra.TRACE_EXPONENTS)
    return _write_fit(fit_powers(samples, exponents), out)


def _write_fit(fit, out):
    rows = zip(fit.exponents, fit.coefficients, fit.stderr)
    _write_csv(rows, ["exponent", "coefficient", "stderr"], out)
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _parse_tolerances(items):
    overrides = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            overrides[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--tol {key}: {value!r} is not a number") from None
    try:
        return verify.Tolerances().with_overrides(overrides)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def cmd_verify(args, out):
    tol = _parse_tolerances(args.tol)
    started = time.perf_counter()
    try:
        results = verify.run_suite(args.suite, tol, threads=args.threads)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    elapsed = time.perf_counter() - started

    for r in results:
        status = "PASS" if r.passed else "FAIL"
        out.write(
            f"{status} {r.criterion} {r.name}: measured={_fmt(r.measured)} "
            f"target={_fmt(r.target)} tolerance={_fmt(r.tolerance)}\n"
        )
    ok = verify.all_passed(results)
    out.write(f"{'ALL PASS' if ok else 'FAILURES'} ({sum(r.passed for r in results)}/{len(results)})\n")

    report = {
        "command": "verify",
        "parameters": {"suite": args.suite},
        "tolerances": asdict(tol),
        "version": __version__,
        "passed": ok,
        "checks": [r.as_dict() for r in results],
    }
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.manifest:
        manifest = RunManifest(
            command="verify",
            parameters={"suite": args.suite, "threads": args.threads},
            tolerances=asdict(tol),
            version=__version__,
            wall_clock_seconds=elapsed,
            outcomes=[{"criterion": r.criterion, "name": r.name, "passed": r.passed} for r in results],
        )
        with open(args.manifest, "w") as fh:
            json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def _add_sector_flags(p):
    p.add_argument("--alpha", type=angle, default=math.pi, help="opening angle (number or e.g. pi/2); default pi")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--bc-lo", type=BC.parse, default=BC.DIRICHLET, help="D or N on the side phi = 0")
    p.add_argument("--bc-hi", type=BC.parse, default=BC.NEUMANN, help="D or N on the side phi = alpha")
    p.add_argument("--t-min", type=float, default=0.002)
    p.add_argument("--t-max", type=float, default=0.02)
    p.add_argument("--points", type=int, default=16)
    p.add_argument("--lambda-max", type=float, default=2e4, help="eigenvalue cutoff")


def _add_vertex_flags(p):
    p.add_argument("--vertex", choices=("regular", "robin"), default="regular")
    p.add_argument("--s", type=float, default=None, help="Robin parameter at the vertex")
    p.add_argument("--m", type=int, default=2, help="ambient dimension")
    p.add_argument("--dim-v", type=int, default=1, help="fibre dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zaremba", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    thread_help = "worker threads for spectra (default: $ZAREMBA_THREADS or 1)"
    parser.add_argument("--threads", type=int, default=None, help=thread_help)
    # accepted after the subcommand too; SUPPRESS keeps a global value from being overwritten
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=thread_help)
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="evaluate a heat kernel on a grid (CSV)")
    k.add_argument("subject", choices=("halfline-d", "halfline-n", "halfline-robin", "psi", "mixed-diag"))
    for name in ("t", "r", "r2", "rho", "rho2"):
        k.add_argument(f"--{name}", type=float, nargs="+")
    for name in ("theta", "theta2"):
        k.add_argument(f"--{name}", type=angle, nargs="+", help="angles; write a negative pi form as --{name}=-pi/2")
    _add_vertex_flags(k)
    k.add_argument("--s-grid", type=float, nargs="+", help="several Robin parameters (halfline-robin)")
    k.set_defaults(func=cmd_kernel)

    t = sub.add_parser("trace", parents=[common], help="sector heat trace samples (CSV t,value,tail_bound)")
    _add_sector_flags(t)
    t.set_defaults(func=cmd_trace)

    f = sub.add_parser("fit", parents=[common], help="fit sum_k c_k t**e_k to heat trace data (CSV exponent,coefficient,stderr)")
    f.add_argument("--input", help="CSV with columns t,value (e.g. the output of 'trace')")
    f.add_argument("--source", choices=("trace", "strip"), default="trace", help="data to fit when no --input")
    f.add_argument("--exponents", type=float, nargs="+")
    f.add_argument("--eps3", type=float, default=1.0, help="strip radius (--source strip)")
    f.add_argument("--strip-t-max", type=float, default=1e-4, help="largest t of the strip fit (two decades)")
    _add_sector_flags(f)
    _add_vertex_flags(f)
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--suite", default="all", help="specfun, kernels, coeff-pipeline or all")
    v.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance (repeatable)")
    v.add_argument("--output", help="write the JSON report here")
    v.add_argument("--manifest", help="write a run manifest with timing here")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"zaremba {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompleteEnumeration as exc:
        print(f"zaremba {args.command}: incomplete enumeration: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NonConvergence as exc:
        print(f"zaremba {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OverflowError, TypeError) as exc:
        print(f"zaremba {args.command}: precondition violated: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
