"""Sweep the weight on children's future earnings, gamma5, over (0, 1]."""

import numpy as np

from household_alloc.scenarios import export_csv, future_earnings_scenario

from _common import parser, print_verdicts, setup


def main():
    args = parser(__doc__, default_config="gamma3_half.cfg").parse_args()
    cfg, out = setup(args)
    grid = [float(v) for v in np.linspace(0.2, 1.0, 5)]
    result = future_earnings_scenario(cfg.prefs, cfg.econ, grid, cfg.tol)
    path = out / "future_earnings.csv"
    export_csv(result, path)
    print(f"future_earnings: {len(result.interior_rows)} interior rows -> {path}")
    print_verdicts(result)
    return 0 if result.matches_expected else 4


if __name__ == "__main__":
    raise SystemExit(main())
