"""Compare the analytic, tabulated and finite-difference sensitivity matrices cell by cell."""

import csv

from household_alloc.statics import discrepancy_report

from _common import parser, setup


def main():
    args = parser(__doc__, default_config="gamma3_half.cfg").parse_args()
    cfg, out = setup(args)
    report = discrepancy_report(cfg.prefs, cfg.econ, tol=cfg.tol)
    path = out / "table_audit.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["decision", "weight", "analytic", "tabulated", "finite_difference", "flagged", "verdict"])
        for c in report.cells:
            writer.writerow([c.decision, c.weight, repr(c.analytic), repr(c.tabulated),
                             repr(c.finite_difference), str(c.flagged).lower(), c.verdict])
    print(f"{len(report.flagged)} of {len(report.cells)} cells flagged -> {path}")
    for c in report.flagged:
        print(f"  d{c.decision}/dgamma{c.weight}: analytic {c.analytic:.6g}, tabulated {c.tabulated:.6g}, "
              f"fd {c.finite_difference:.6g} ({c.verdict})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
