"""Command-line front end.

Exit codes: 0 all checks passed, 1 some check failed (or passed only
conditionally), 2 usage or parse error, 3 numerical error.
"""

import argparse
import sys

from .criteria import (
    Criterion,
    Overall,
    Threshold,
    build_example_params,
    check_theorem,
    corollary_threshold,
    subordinating_sequence,
)
from .errors import NumericalError, UsageError
from .geometry import DEFAULT_GRID, DiscGrid, Property, PropertyKind, subordinating_check, verify_params
from .report_io import (
    CRITERION_HEADER,
    PROPERTY_HEADER,
    ScanAction,
    criterion_rows,
    fmt,
    format_criterion_report,
    format_property_report,
    parse_job,
    property_row,
    run_scan,
    write_csv,
    write_scan_csv,
)
from .series import FWParams, SeriesControl, coefficient_window, eval_derivative, eval_fox_wright, eval_normalized

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _pair(text):
    try:
        x, w = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'value,weight', got {text!r}") from None
    return x, w


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=1e-14, help="series truncation tolerance")
    p.add_argument("--max-terms", type=int, default=10000, help="series term cap")
    p.add_argument("--grid-radii", type=int, help="radii in the verification grid (default 64)")
    p.add_argument("--grid-angles", type=int, help="angles per radius (default 256)")
    p.add_argument("--prefix-len", type=int, default=200, help="prefix length for sequence checks")
    p.add_argument("--csv", action="store_true", help="CSV instead of text")
    p.add_argument("--assert-h-nonneg", action="store_true",
                   help="take the H-function nonnegativity hypothesis as given")
    return p


def _param_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--upper", type=_pair, action="append", default=[], metavar="a,A",
                   help="upper pair, repeat for each")
    p.add_argument("--lower", type=_pair, action="append", default=[], metavar="b,B",
                   help="lower pair, repeat for each")
    return p


def build_parser():
    common, params = _common(), _param_flags()
    parser = _Parser(prog="foxwright", description="Fox-Wright function evaluation and geometric checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common, params], help="evaluate the normalized function")
    p.add_argument("z", type=complex, help="argument, e.g. 0.5 or 0.3+0.2j")
    p.add_argument("--raw", action="store_true", help="the unnormalized series instead")
    p.add_argument("--derivative", type=int, choices=(1, 2), help="derivative of the normalized function")

    p = sub.add_parser("coeffs", parents=[common, params], help="normalized coefficients U_0..U_N")
    p.add_argument("n", type=int)

    p = sub.add_parser("check", parents=[common, params], help="check criterion hypotheses")
    p.add_argument("criteria", nargs="+", metavar="CRITERION",
                   help=", ".join(c.value for c in Criterion))
    p.add_argument("--rho", type=float, help="radius used by the inequality criteria")

    p = sub.add_parser("verify", parents=[common, params], help="sample a geometric property on a disc")
    p.add_argument("property", help=", ".join(k.value for k in Property))
    p.add_argument("--radius", type=float, default=1.0, help="domain radius (default 1)")
    p.add_argument("--c", type=float, help="constant of ReOverZ, DerivDist and RatioDist")
    p.add_argument("--augment", action="store_true", help="prepend the upper pair (1, 1)")

    p = sub.add_parser("scan", parents=[common], help="run the scan actions of a TOML job file, CSV out")
    p.add_argument("job", help="job file path, or - for standard input")

    p = sub.add_parser("thresholds", parents=[common], help="parameter thresholds (C2, K1_CONST, FINAL_STARLIKE)")
    p.add_argument("kind", help=", ".join(t.value for t in Threshold))
    p.add_argument("a", type=float, nargs="?")

    p = sub.add_parser("example", parents=[common], help="build the (alpha, beta, gamma) example family")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("gamma", type=float)
    p.add_argument("--check", nargs="+", metavar="CRITERION",
                   help="also check these criteria on the result, with rho = rho_1")
    return parser


def _grid(args):
    if args.grid_radii is None and args.grid_angles is None:
        return DEFAULT_GRID
    return DiscGrid.geometric(
        args.grid_radii if args.grid_radii is not None else len(DEFAULT_GRID.radii),
        args.grid_angles if args.grid_angles is not None else DEFAULT_GRID.angles_per_radius,
    )


def _ctl(args):
    return SeriesControl(tol=args.tol, max_terms=args.max_terms)


def _params(args):
    return FWParams(args.upper, args.lower)


def _value(v):
    v = complex(v)
    return fmt(v.real) if v.imag == 0 else fmt(v)


def _emit_checks(reports, args, out):
    if args.csv:
        rows = [row for r in reports for row in criterion_rows(r)]
        out.write(write_csv(CRITERION_HEADER, rows).decode())
    else:
        out.write("\n\n".join(format_criterion_report(r) for r in reports) + "\n")
    return EXIT_PASS if all(r.overall is Overall.PASS for r in reports) else EXIT_FAIL


def _cmd_eval(args, out):
    params, ctl = _params(args), _ctl(args)
    if args.raw:
        if args.derivative:
            raise UsageError("--raw and --derivative are exclusive")
        value = eval_fox_wright(params, args.z, ctl)
    elif args.derivative:
        value = eval_derivative(params, args.z, args.derivative, ctl)
    else:
        value = eval_normalized(params, args.z, ctl)
    if args.csv:
        out.write(write_csv(("z", "value_re", "value_im"), [(fmt(args.z), complex(value).real, complex(value).imag)]).decode())
    else:
        out.write(_value(value) + "\n")
    return EXIT_PASS


def _cmd_coeffs(args, out):
    if args.n < 0:
        raise UsageError(f"N must be nonnegative, got {args.n}")
    values = coefficient_window(_params(args), args.n + 1).values
    if args.csv:
        out.write(write_csv(("k", "U_k"), list(enumerate(values))).decode())
    else:
        out.writelines(f"{k} {fmt(float(v))}\n" for k, v in enumerate(values))
    return EXIT_PASS


def _cmd_check(args, out):
    params = _params(args)
    crits = [Criterion.parse(c) for c in args.criteria]
    reports = [check_theorem(c, params, args.assert_h_nonneg, args.rho) for c in crits]
    return _emit_checks(reports, args, out)


def _cmd_verify(args, out):
    kind = PropertyKind.parse(args.property, args.c)
    params = _params(args)
    if args.augment:
        params = params.augmented()
    grid = _grid(args)
    if kind.prop is Property.SUBORDINATING:
        # the sequence taken from the function is the one of f(z)/z for the augmented function
        if args.radius != 1.0:
            raise UsageError("Subordinating is checked on the unit disc only")
        seq = subordinating_sequence(params, args.prefix_len)
        report = subordinating_check(seq, grid, args.prefix_len)
    else:
        report = verify_params(params, kind, grid, args.radius, _ctl(args))
    if args.csv:
        out.write(write_csv(PROPERTY_HEADER, [property_row(report)]).decode())
    else:
        out.write(format_property_report(report) + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_scan(args, out):
    if args.job == "-":
        data = sys.stdin.buffer.read()
    else:
        try:
            with open(args.job, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read job file: {exc}") from None
    job = parse_job(data)
    scans = [a for a in job.actions if isinstance(a, ScanAction)]
    if not scans:
        raise UsageError("job file has no scan action")
    grid = None if args.grid_radii is None and args.grid_angles is None else _grid(args)
    all_pass = True
    blocks = []
    for action in scans:
        rows = run_scan(job.params, action, _ctl(args), grid)
        all_pass &= all(ok for _, _, ok in rows)
        blocks.append(write_scan_csv(rows, action.header).decode())
    out.write("\n".join(blocks))
    return EXIT_PASS if all_pass else EXIT_FAIL


def _cmd_thresholds(args, out):
    kind = Threshold.parse(args.kind)
    if kind is not Threshold.K1_CONST and args.a is None:
        raise UsageError(f"{kind.value} needs the parameter a")
    value = corollary_threshold(kind, args.a)
    if args.csv:
        a = "" if args.a is None else args.a
        out.write(write_csv(("kind", "a", "value"), [(kind.value, a, value)]).decode())
    else:
        out.write(fmt(value) + "\n")
    return EXIT_PASS


def _cmd_example(args, out):
    family = build_example_params(args.alpha, args.beta, args.gamma)
    if args.csv:
        rows = [("upper", i + 1, x, w) for i, (x, w) in enumerate(family.params.upper)]
        rows += [("lower", j + 1, x, w) for j, (x, w) in enumerate(family.params.lower)]
        rows.append(("rho1", "", family.rho1, ""))
        out.write(write_csv(("side", "index", "value", "weight"), rows).decode())
    else:
        p = family.params
        out.writelines(f"upper {fmt(x)} {fmt(w)}\n" for x, w in p.upper)
        out.writelines(f"lower {fmt(x)} {fmt(w)}\n" for x, w in p.lower)
        out.write(f"rho1 {fmt(family.rho1)}\n")
    if not args.check:
        return EXIT_PASS
    if not args.csv:
        out.write("\n")
    crits = [Criterion.parse(c) for c in args.check]
    reports = [check_theorem(c, family.params, args.assert_h_nonneg, family.rho1) for c in crits]
    return _emit_checks(reports, args, out)


_COMMANDS = {
    "eval": _cmd_eval,
    "coeffs": _cmd_coeffs,
    "check": _cmd_check,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "thresholds": _cmd_thresholds,
    "example": _cmd_example,
}


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit status instead of exiting."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help
        return EXIT_PASS if not exc.code else EXIT_USAGE
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NumericalError as exc:
        err.write(f"numerical error: {exc}\n")
        return EXIT_NUMERIC


def main():
    sys.exit(run())
