"""One-parameter sweeps of the closed form, named experiments, and CSV export."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BaseNotInterior, DiscountOutOfRange, EmptyGrid, ModelError
from .model import (
    DEFAULT_TOL,
    DECISIONS,
    EconomyParams,
    PreferenceWeights,
    evaluate_utility,
    solve_closed_form,
    validate,
)
from .statics import analytic_jacobian

CSV_HEADER = ("param", "value", "c", "s", "p", "q", "n", "e", "utility", "regime")
SWEEPABLE = tuple(f"gamma{i}" for i in range(1, 8)) + ("tau", "w")

INCREASING = "increasing"
DECREASING = "decreasing"
CONSTANT = "constant"
MIXED = "mixed"


def canonical_param(name):
    """Accept ``gamma7``, ``g7``, ``γ7`` and the economy names ``w`` / ``tau``."""
    key = name.strip()
    for prefix in ("γ", "gamma", "g"):
        if key.startswith(prefix) and key[len(prefix):].isdigit():
            key = "gamma" + key[len(prefix):]
            break
    if key == "w_t":
        key = "w"
    if key not in SWEEPABLE:
        raise ValueError(f"cannot sweep {name!r}; choose one of {', '.join(SWEEPABLE)}")
    return key


def with_param(prefs, econ, param, value):
    if param.startswith("gamma"):
        return replace(prefs, **{param: float(value)}), econ
    return prefs, replace(econ, **{param: float(value)})


@dataclass
class SweepSpec:
    prefs: PreferenceWeights
    econ: EconomyParams
    param: str
    grid: tuple
    outputs: tuple = DECISIONS
    # the (0, 1] range on gamma5..gamma7 is not imposed on sweep points unless asked
    strict_discount: bool = False

    def __post_init__(self):
        self.param = canonical_param(self.param)
        self.grid = tuple(float(v) for v in self.grid)


@dataclass
class SweepRow:
    value: float
    allocation: object = None  # Allocation, or None when skipped
    utility: float = math.nan
    regime: str = "Interior"
    sensitivities: dict = field(default_factory=dict)  # d(decision)/d(param) for swept weights
    reason: str = ""

    @property
    def skipped(self):
        return self.allocation is None


@dataclass
class ScenarioResult:
    param: str
    rows: list
    verdicts: dict  # decision -> INCREASING / DECREASING / CONSTANT / MIXED
    expected: dict = field(default_factory=dict)  # decision -> claimed direction
    ranges: dict = field(default_factory=dict)  # decision -> (min, max)
    name: str = "sweep"

    @property
    def interior_rows(self):
        return [r for r in self.rows if not r.skipped]

    @property
    def skipped_rows(self):
        return [r for r in self.rows if r.skipped]

    def column(self, decision):
        return np.array([getattr(r.allocation, decision) for r in self.interior_rows])

    def mismatches(self):
        return {k: (want, self.verdicts.get(k)) for k, want in self.expected.items()
                if self.verdicts.get(k) != want}

    @property
    def matches_expected(self):
        return not self.mismatches()


def monotonicity(values, tol=DEFAULT_TOL.monotone):
    """Direction of a sequence by strict comparison of neighbours."""
    diffs = np.diff(np.asarray(values, dtype=float))
    if len(diffs) == 0:
        return CONSTANT
    if np.all(diffs > tol):
        return INCREASING
    if np.all(diffs < -tol):
        return DECREASING
    if np.all(np.abs(diffs) <= tol):
        return CONSTANT
    return MIXED


def expected_directions(param):
    """Claimed direction of each decision along a weight sweep (sign of its Jacobian column).

    The column signs are the same at every interior point, so they can be read off
    any interior instance; ``tau`` and ``w`` sweeps carry no claims.
    """
    if not param.startswith("gamma"):
        return {}
    J = analytic_jacobian(PreferenceWeights.ones(), EconomyParams(w=1.0, tau=0.1))
    j = int(param[5:])
    out = {}
    for d in DECISIONS:
        v = J[d, j]
        out[d] = INCREASING if v > 0 else DECREASING if v < 0 else CONSTANT
    return out


def _evaluate_point(spec, value, tol):
    prefs, econ = with_param(spec.prefs, spec.econ, spec.param, value)
    try:
        cls = validate(prefs, econ, check_discount=spec.strict_discount, tol=tol)
        if not cls.is_interior:
            return SweepRow(value, regime=cls.regime.value,
                            reason=f"gamma2 + gamma5 - gamma3 = {cls.mqqt_margin:.17g}")
        alloc = solve_closed_form(prefs, econ, check_discount=spec.strict_discount, tol=tol)
    except ModelError as exc:
        return SweepRow(value, regime=type(exc).__name__, reason=str(exc))
    sens = {}
    if spec.param.startswith("gamma"):
        J = analytic_jacobian(prefs, econ, tol)
        j = int(spec.param[5:])
        sens = {d: J[d, j] for d in spec.outputs}
    return SweepRow(value, alloc, evaluate_utility(alloc, prefs, econ), "Interior", sens)


def run_sweep(spec, tol=DEFAULT_TOL, name="sweep", expected=None):
    """Evaluate the closed form at each grid point; regime failures become skipped rows."""
    if len(spec.grid) == 0:
        raise EmptyGrid("sweep grid is empty")
    if any(not (math.isfinite(v) and v > 0) for v in spec.grid):
        raise ValueError(f"grid values must be positive and finite: {spec.grid}")
    if any(b <= a for a, b in zip(spec.grid, spec.grid[1:])):
        raise ValueError("grid must be strictly increasing")
    base = validate(spec.prefs, spec.econ, check_discount=spec.strict_discount, tol=tol)
    if not base.is_interior:
        raise BaseNotInterior(base)

    # points are independent; order is fixed by the grid
    rows = [_evaluate_point(spec, v, tol) for v in spec.grid]

    interior = [r for r in rows if not r.skipped]
    verdicts, ranges = {}, {}
    for d in spec.outputs:
        col = [getattr(r.allocation, d) for r in interior]
        verdicts[d] = monotonicity(col, tol.monotone)
        if col:
            ranges[d] = (min(col), max(col))
    if expected is None:
        expected = expected_directions(spec.param)
    expected = {k: v for k, v in expected.items() if k in spec.outputs}
    return ScenarioResult(spec.param, rows, verdicts, expected, ranges, name)


def crowd_out_analysis(prefs, econ, gamma7_grid, tol=DEFAULT_TOL):
    """Savings, consumption, health spending and fertility against the pension weight."""
    spec = SweepSpec(prefs, econ, "gamma7", gamma7_grid, outputs=("s", "c", "p", "n", "q"))
    expected = {"s": DECREASING, "c": DECREASING, "p": DECREASING,
                "n": DECREASING, "q": INCREASING}
    return run_sweep(spec, tol, name="crowd_out", expected=expected)


def quantity_quality_frontier(prefs, econ, grid, param="gamma3", tol=DEFAULT_TOL):
    """(n, e) pairs as the education weight or the child-quantity weight moves."""
    param = canonical_param(param)
    if param == "gamma3":
        expected = {"n": DECREASING, "e": INCREASING}
    elif param == "gamma2":
        expected = {"n": INCREASING, "e": DECREASING}
    else:
        raise ValueError(f"quantity-quality frontier sweeps gamma2 or gamma3, not {param}")
    spec = SweepSpec(prefs, econ, param, grid, outputs=("n", "e"))
    return run_sweep(spec, tol, name="qq_frontier", expected=expected)


def future_earnings_scenario(prefs, econ, gamma5_grid, tol=DEFAULT_TOL):
    """All six decisions against the weight on children's future earnings."""
    for v in gamma5_grid:
        if v > 1.0:
            raise DiscountOutOfRange("gamma5", v, "discount factor must lie in (0, 1]")
    spec = SweepSpec(prefs, econ, "gamma5", gamma5_grid, strict_discount=True)
    expected = {"c": DECREASING, "s": DECREASING, "p": DECREASING, "q": DECREASING,
                "n": INCREASING, "e": DECREASING}
    return run_sweep(spec, tol, name="future_earnings", expected=expected)


def format_float(x):
    # repr is the shortest string that round-trips, at most 17 significant digits
    return repr(float(x))


def csv_text(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        if row.skipped:
            cells = [""] * 7
        else:
            a = row.allocation
            cells = [format_float(getattr(a, d)) for d in DECISIONS] + [format_float(row.utility)]
        writer.writerow([result.param, format_float(row.value), *cells, row.regime])
    return buf.getvalue()


def export_csv(result, destination):
    """Write the sweep as CSV (UTF-8, LF endings) to a path or an open text stream."""
    text = csv_text(result)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
