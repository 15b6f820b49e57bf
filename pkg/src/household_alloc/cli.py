"""Command-line entry point: ``household-alloc {solve,statics,verify,sweep} CONFIG ...``.

Exit codes: 0 success, 1 usage/parse/validation error, 2 non-interior regime,
3 verification failure, 4 sweep verdict mismatch.
"""

from __future__ import annotations

import argparse
import enum
import random
import sys

import numpy as np

from .config import ConfigError, load_config
from .errors import InvalidParameter, ModelError, NotConverged, NotInterior
from .model import (
    DECISIONS,
    budget_residual,
    evaluate_utility,
    solve_closed_form,
    utility_weight_sum,
    validate,
)
from .oracle import cross_validate, random_interior_instance
from .scenarios import (
    SweepSpec,
    canonical_param,
    crowd_out_analysis,
    export_csv,
    future_earnings_scenario,
    quantity_quality_frontier,
    run_sweep,
)
from .statics import (
    ROWS,
    analytic_jacobian,
    discrepancy_report,
    sign_pattern,
    tabulated_jacobian,
    verify_paper_claims,
)


class ExitCode(enum.IntEnum):
    OK = 0
    USAGE = 1
    NOT_INTERIOR = 2
    VERIFICATION_FAILED = 3
    VERDICT_MISMATCH = 4


# scenario -> (default param, from, to, steps)
SCENARIO_DEFAULTS = {
    "crowd_out": ("gamma7", 1.0, 2.0, 11),
    "qq_frontier": ("gamma3", 0.2, 1.8, 9),
    "future_earnings": ("gamma5", 0.2, 1.0, 5),
}
QQ_GAMMA2_DEFAULT = (0.5, 2.0, 7)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved for the regime here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def g6(x):
    return f"{x:.6g}"


def _matrix_lines(M, fmt=g6, width=12):
    head = " " * 4 + "".join(f"{'gamma' + str(j):>{width}}" for j in range(1, 8))
    lines = [head]
    for i, d in enumerate(ROWS):
        lines.append(f"{d:<4}" + "".join(f"{fmt(v):>{width}}" for v in M[i]))
    return lines


def cmd_solve(args, out):
    cfg = load_config(args.config)
    cls = validate(cfg.prefs, cfg.econ, tol=cfg.tol)
    print(f"regime: {cls.regime.value} (gamma2 + gamma5 - gamma3 = {g6(cls.mqqt_margin)})", file=out)
    if not cls.is_interior:
        print(f"{args.config}: {cls.regime.value} regime; no interior allocation is computed", file=out)
        return ExitCode.NOT_INTERIOR
    alloc = solve_closed_form(cfg.prefs, cfg.econ, tol=cfg.tol)
    print(f"utility weight sum S = {g6(utility_weight_sum(cfg.prefs))}", file=out)
    for d in DECISIONS:
        print(f"  {d} = {g6(getattr(alloc, d))}", file=out)
    print(f"utility = {g6(evaluate_utility(alloc, cfg.prefs, cfg.econ))}", file=out)
    res = budget_residual(alloc, cfg.econ)
    ok = abs(res) <= cfg.tol.budget * cfg.econ.w
    print(f"budget residual = {g6(res)} ({'within' if ok else 'OUTSIDE'} {cfg.tol.budget:g} * w)", file=out)
    return ExitCode.OK


def cmd_statics(args, out):
    cfg = load_config(args.config)
    prefs, econ, tol = cfg.prefs, cfg.econ, cfg.tol
    cls = validate(prefs, econ, tol=tol)
    if not cls.is_interior:
        raise NotInterior(cls)
    J = analytic_jacobian(prefs, econ, tol)
    print(f"analytic sensitivities d(decision)/d(gamma)  (beta = w/S^2 = {g6(J.beta)})", file=out)
    for line in _matrix_lines(J.entries):
        print(line, file=out)
    status = ExitCode.OK

    if args.table1:
        T = tabulated_jacobian(prefs, econ, tol)
        print("\ntabulated sensitivities (printed table formulas)", file=out)
        for line in _matrix_lines(T.entries):
            print(line, file=out)
        report = discrepancy_report(prefs, econ, tol=tol)
        print(f"\ndiscrepancies (|analytic - table| > {tol.table_flag:g} * max(1, |analytic|)): "
              f"{len(report.flagged)} of {len(report.cells)} cells", file=out)
        for c in report.flagged:
            print(f"  ({c.decision}, gamma{c.weight}): analytic {g6(c.analytic)}  table {g6(c.tabulated)}"
                  f"  finite-diff {g6(c.finite_difference)}  -> {c.verdict}", file=out)
        if args.discrepancy_csv:
            write_discrepancy_csv(report, args.discrepancy_csv)

    if args.signs:
        S = sign_pattern(J, tol.sign_zero)
        print("\nsign pattern", file=out)
        for line in _matrix_lines(S.symbols(), fmt=str, width=8):
            print(line, file=out)
        claims = verify_paper_claims(prefs, econ, tol)
        print("\nclaims", file=out)
        for v in claims:
            witness = ", ".join(f"{k} = {g6(x)}" for k, x in v.witness.items())
            print(f"  {v.claim:<14} {'PASS' if v.passed else 'FAIL'}  {v.statement}  [{witness}]", file=out)
        if args.claims_csv:
            write_claims_csv(claims, args.claims_csv)
        if not claims.all_passed:
            status = ExitCode.VERIFICATION_FAILED
    return status


def write_discrepancy_csv(report, path):
    lines = ["decision,weight,analytic,tabulated,finite_difference,abs_diff,flagged,verdict"]
    for c in report.cells:
        lines.append(",".join([c.decision, f"gamma{c.weight}", repr(c.analytic), repr(c.tabulated),
                               repr(c.finite_difference), repr(c.abs_diff),
                               str(c.flagged).lower(), c.verdict.replace(",", ";")]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_claims_csv(claims, path):
    lines = ["claim,passed,witness"]
    for v in claims:
        witness = ";".join(f"{k}={x!r}" for k, x in v.witness.items())
        lines.append(f"{v.claim},{str(v.passed).lower()},{witness}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_verify(args, out, closed_form=solve_closed_form):
    if args.seeds < 0:
        raise UsageError("--seeds must be >= 0")
    cfg = load_config(args.config)
    cls = validate(cfg.prefs, cfg.econ, tol=cfg.tol)
    if not cls.is_interior:
        raise NotInterior(cls)

    def check(prefs, econ):
        try:
            return cross_validate(prefs, econ, tol=args.tol, closed_form=closed_form)
        except NotConverged:
            return None

    def describe(cv):
        if cv is None:
            return "FAIL (numerical maximiser did not converge)"
        return (f"{'PASS' if cv.passed else 'FAIL'}  max gap {cv.max_rel_gap:.3g}  "
                f"utility gap {cv.utility_rel_gap:.3g}  "
                f"residual closed-form {cv.residual_closed_form:.3g}  numerical {cv.residual_numerical:.3g}")

    base = check(cfg.prefs, cfg.econ)
    print(f"config instance: {describe(base)}", file=out)
    ok = base is not None and base.passed

    if args.seeds:
        rng = random.Random(args.seed)
        results = [check(*random_interior_instance(rng)) for _ in range(args.seeds)]
        n_pass = sum(1 for r in results if r is not None and r.passed)
        done = [r for r in results if r is not None]
        print(f"randomized instances: {n_pass}/{args.seeds} PASS (seed {args.seed})", file=out)
        if done:
            print(f"  worst gap {max(r.max_rel_gap for r in done):.3g}  "
                  f"worst residual {max(max(r.residual_closed_form, r.residual_numerical) for r in done):.3g}",
                  file=out)
        ok = ok and n_pass == args.seeds

    print(f"verification: {'PASS' if ok else 'FAIL'}", file=out)
    return ExitCode.OK if ok else ExitCode.VERIFICATION_FAILED


def cmd_sweep(args, out):
    param = canonical_param(args.param) if args.param else None
    lo, hi, steps = args.lo, args.hi, args.steps
    if args.scenario:
        default_param, d_lo, d_hi, d_steps = SCENARIO_DEFAULTS[args.scenario]
        if args.scenario == "qq_frontier" and param == "gamma2":
            d_lo, d_hi, d_steps = QQ_GAMMA2_DEFAULT
        elif param is not None and param != default_param:
            raise UsageError(f"scenario {args.scenario} sweeps {default_param}, not {param}")
        param = param or default_param
        lo = d_lo if lo is None else lo
        hi = d_hi if hi is None else hi
        steps = d_steps if steps is None else steps
    if param is None:
        raise UsageError("--param is required without --scenario")
    if lo is None or hi is None:
        raise UsageError("--from and --to are required without --scenario")
    steps = 11 if steps is None else steps
    if steps < 2:
        raise UsageError(f"--steps must be at least 2, got {steps}")
    if not (0 < lo < hi):
        raise UsageError(f"need 0 < --from < --to, got {lo!r} and {hi!r}")

    cfg = load_config(args.config)
    grid = [float(v) for v in np.linspace(lo, hi, steps)]
    if args.scenario == "crowd_out":
        result = crowd_out_analysis(cfg.prefs, cfg.econ, grid, tol=cfg.tol)
    elif args.scenario == "qq_frontier":
        result = quantity_quality_frontier(cfg.prefs, cfg.econ, grid, param=param, tol=cfg.tol)
    elif args.scenario == "future_earnings":
        result = future_earnings_scenario(cfg.prefs, cfg.econ, grid, tol=cfg.tol)
    else:
        spec = SweepSpec(cfg.prefs, cfg.econ, param, grid, strict_discount=args.strict_discount)
        result = run_sweep(spec, cfg.tol)

    export_csv(result, args.out)
    print(f"{result.name}: {param} from {g6(lo)} to {g6(hi)}, {steps} points -> {args.out}", file=out)
    for row in result.skipped_rows:
        print(f"  skipped {param} = {g6(row.value)}: {row.regime}", file=out)
    for d, verdict in result.verdicts.items():
        want = result.expected.get(d)
        if want is None:
            mark = ""
        elif want == verdict:
            mark = " ✓"
        else:
            mark = f" ✗ (expected {want})"
        print(f"{d}: {verdict}{mark}", file=out)
    return ExitCode.OK if result.matches_expected else ExitCode.VERDICT_MISMATCH


def build_parser():
    parser = _Parser(prog="household-alloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="closed-form optimal allocation")
    p.add_argument("config")

    p = sub.add_parser("statics", help="sensitivity matrix, table audit and sign claims")
    p.add_argument("config")
    p.add_argument("--table1", action="store_true", help="also print the tabulated matrix and discrepancies")
    p.add_argument("--signs", action="store_true", help="print the sign pattern and claim verdicts")
    p.add_argument("--discrepancy-csv", metavar="PATH")
    p.add_argument("--claims-csv", metavar="PATH")

    p = sub.add_parser("verify", help="closed form against the numerical maximiser")
    p.add_argument("config")
    p.add_argument("--seeds", type=int, default=0, help="number of randomized instances")
    p.add_argument("--seed", type=int, default=42, help="base seed for the randomized instances")
    p.add_argument("--tol", type=float, default=1e-10, help="maximiser tolerance")

    p = sub.add_parser("sweep", help="one-parameter sweep written as CSV")
    p.add_argument("config")
    p.add_argument("--param")
    p.add_argument("--from", dest="lo", type=float)
    p.add_argument("--to", dest="hi", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--scenario", choices=sorted(SCENARIO_DEFAULTS))
    p.add_argument("--strict-discount", action="store_true",
                   help="skip points with gamma5..gamma7 outside (0, 1]")
    return parser


def main(argv=None, out=None, err=None, closed_form=solve_closed_form):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        if args.command == "solve":
            return int(cmd_solve(args, out))
        if args.command == "statics":
            return int(cmd_statics(args, out))
        if args.command == "verify":
            return int(cmd_verify(args, out, closed_form=closed_form))
        return int(cmd_sweep(args, out))
    except (UsageError, ConfigError, InvalidParameter, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return int(ExitCode.USAGE)
    except NotInterior as exc:
        print(f"error: {exc}", file=err)
        return int(ExitCode.NOT_INTERIOR)
    except ModelError as exc:
        print(f"error: {exc}", file=err)
        return int(ExitCode.USAGE)
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=err)
        return int(ExitCode.USAGE)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
