"""Trace the children/education trade-off by sweeping gamma3 or gamma2."""

import numpy as np

from household_alloc.scenarios import export_csv, quantity_quality_frontier

from _common import parser, print_verdicts, setup

DEFAULTS = {"gamma3": (0.2, 1.8, 9), "gamma2": (0.5, 2.0, 7)}


def main():
    p = parser(__doc__)
    p.add_argument("--param", choices=sorted(DEFAULTS), default="gamma3")
    args = p.parse_args()
    cfg, out = setup(args)
    lo, hi, steps = DEFAULTS[args.param]
    grid = [float(v) for v in np.linspace(lo, hi, steps)]
    result = quantity_quality_frontier(cfg.prefs, cfg.econ, grid, param=args.param, tol=cfg.tol)
    path = out / f"qq_frontier_{args.param}.csv"
    export_csv(result, path)
    print(f"qq_frontier ({args.param}): {len(result.interior_rows)} interior, "
          f"{len(result.skipped_rows)} skipped -> {path}")
    for row in result.interior_rows:
        print(f"  {args.param} = {row.value:.3f}: n = {row.allocation.n:.6g}, e = {row.allocation.e:.6g}")
    print_verdicts(result)
    return 0 if result.matches_expected else 4


if __name__ == "__main__":
    raise SystemExit(main())
