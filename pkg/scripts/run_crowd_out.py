"""Sweep the pension weight gamma7 and record how savings and the rest respond."""

import numpy as np

from household_alloc.scenarios import crowd_out_analysis, export_csv

from _common import parser, print_verdicts, setup


def main():
    p = parser(__doc__)
    p.add_argument("--lo", type=float, default=1.0)
    p.add_argument("--hi", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=11)
    args = p.parse_args()
    cfg, out = setup(args)
    grid = [float(v) for v in np.linspace(args.lo, args.hi, args.steps)]
    result = crowd_out_analysis(cfg.prefs, cfg.econ, grid, cfg.tol)
    path = out / "crowd_out.csv"
    export_csv(result, path)
    print(f"crowd_out: {len(result.interior_rows)} interior rows -> {path}")
    print_verdicts(result)
    return 0 if result.matches_expected else 4


if __name__ == "__main__":
    raise SystemExit(main())
