"""Sensitivity of the optimal allocation to the utility weights.

Three routes to the same 6x7 matrix d(decision)/d(gamma_j):

* ``analytic_jacobian`` differentiates the closed form exactly,
* ``tabulated_jacobian`` reproduces the published summary table formula by formula,
  including its inconsistent cells,
* ``finite_difference_jacobian`` takes central differences of ``solve_closed_form``.

``discrepancy_report`` lines the three up cell by cell, and ``verify_paper_claims``
turns the published sign results into executable checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStep, ModelError, NotInterior
from .model import DEFAULT_TOL, solve_closed_form, utility_weight_sum, validate

# Row order follows the published table: c, n, e, p, s, q.
ROWS = ("c", "n", "e", "p", "s", "q")
# own weight of each budget-share decision
OWN_WEIGHT = {"c": 1, "p": 4, "s": 6, "q": 7}
_ROW = {name: i for i, name in enumerate(ROWS)}


@dataclass
class SensitivityMatrix:
    entries: np.ndarray  # shape (6, 7); NaN where unavailable
    beta: float  # w / S**2
    available: np.ndarray | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.shape != (6, 7):
            raise ValueError(f"sensitivity matrix must be 6x7, got {self.entries.shape}")
        if self.available is None:
            self.available = np.ones((6, 7), dtype=bool)

    def __getitem__(self, key):
        decision, weight = key
        return float(self.entries[_ROW[decision], weight - 1])

    def row(self, decision):
        return self.entries[_ROW[decision]]

    def column(self, weight):
        return self.entries[:, weight - 1]

    def is_available(self, decision, weight):
        return bool(self.available[_ROW[decision], weight - 1])


@dataclass
class SignPattern:
    signs: np.ndarray  # int8 in {-1, 0, 1}

    def __getitem__(self, key):
        decision, weight = key
        return int(self.signs[_ROW[decision], weight - 1])

    def row(self, decision):
        return tuple(int(v) for v in self.signs[_ROW[decision]])

    def symbols(self):
        sym = {1: "+", -1: "-", 0: "0"}
        return [[sym[int(v)] for v in row] for row in self.signs]


@dataclass
class ClaimVerdict:
    claim: str
    statement: str
    passed: bool
    witness: dict = field(default_factory=dict)


@dataclass
class ClaimReport:
    verdicts: list

    @property
    def all_passed(self):
        return all(v.passed for v in self.verdicts)

    def __getitem__(self, claim):
        for v in self.verdicts:
            if v.claim == claim:
                return v
        raise KeyError(claim)

    def __iter__(self):
        return iter(self.verdicts)


@dataclass
class DiscrepancyCell:
    decision: str
    weight: int
    analytic: float
    tabulated: float
    finite_difference: float
    abs_diff: float
    flagged: bool
    verdict: str


@dataclass
class DiscrepancyReport:
    cells: list

    @property
    def flagged(self):
        return [c for c in self.cells if c.flagged]

    def flagged_cells(self):
        return {(c.decision, c.weight) for c in self.flagged}


def _require_interior(prefs, econ, tol):
    # derivatives are taken on the closed form, which is meaningful for any positive weights
    cls = validate(prefs, econ, check_discount=False, tol=tol)
    if not cls.is_interior:
        raise NotInterior(cls)
    return cls.mqqt_margin


def analytic_jacobian(prefs, econ, tol=DEFAULT_TOL):
    m = _require_interior(prefs, econ, tol)
    g = prefs.as_tuple()
    w, tau = econ.w, econ.tau
    S = utility_weight_sum(prefs)
    beta = w / S**2
    J = np.zeros((6, 7))

    # shares x = g_x w / S depend on every weight in S; gamma3 is not in S
    for x, own in OWN_WEIGHT.items():
        gx = g[own - 1]
        for j in (1, 2, 4, 5, 6, 7):
            J[_ROW[x], j - 1] = -gx * beta
        J[_ROW[x], own - 1] = w * (S - gx) / S**2

    # n = m / (tau S)
    dn_other = -m / (tau * S**2)
    dn_child = (S - m) / (tau * S**2)
    for j in (1, 4, 6, 7):
        J[_ROW["n"], j - 1] = dn_other
    J[_ROW["n"], 1] = dn_child
    J[_ROW["n"], 4] = dn_child
    J[_ROW["n"], 2] = -1.0 / (tau * S)

    # e = g3 w tau / m, free of the weights inside S other than gamma2, gamma5
    g2, g3, g5 = g[1], g[2], g[4]
    de_child = -g3 * w * tau / m**2
    J[_ROW["e"], 1] = de_child
    J[_ROW["e"], 4] = de_child
    J[_ROW["e"], 2] = w * tau * (g2 + g5) / m**2

    return SensitivityMatrix(J, beta)


def tabulated_jacobian(prefs, econ, tol=DEFAULT_TOL):
    """The summary table as printed, typos included.

    Diagonal cells of c, p, s, q read ``(S - (g_x + g3)) beta``; the n entries for
    gamma2/gamma5 read ``(S - (g2 + g5)) / (tau S^2)``; the e entry for gamma3 reads
    ``w tau (1 + g3) / m^2``.
    """
    m = _require_interior(prefs, econ, tol)
    g = prefs.as_tuple()
    w, tau = econ.w, econ.tau
    S = utility_weight_sum(prefs)
    beta = w / S**2
    g1, g2, g3, g4, g5, g6, g7 = g

    T = np.zeros((6, 7))
    c, n, e, p, s, q = (_ROW[k] for k in ROWS)

    # column by column, as the table lists one weight per line
    T[c, 0] = (S - (g1 + g3)) * beta
    T[n, 0] = -m / (tau * S**2)
    T[e, 0] = 0.0
    T[p, 0] = -beta * g4
    T[s, 0] = -beta * g6
    T[q, 0] = -beta * g7

    T[c, 1] = -beta * g1
    T[n, 1] = (S - (g2 + g5)) / (tau * S**2)
    T[e, 1] = -(w * g3 * tau) / m**2
    T[p, 1] = -beta * g4
    T[s, 1] = -beta * g6
    T[q, 1] = -beta * g7

    T[c, 2] = 0.0
    T[n, 2] = -1.0 / (tau * S)
    T[e, 2] = w * tau * (1 + g3) / m**2
    T[p, 2] = 0.0
    T[s, 2] = 0.0
    T[q, 2] = 0.0

    T[c, 3] = -beta * g1
    T[n, 3] = -m / (tau * S**2)
    T[e, 3] = 0.0
    T[p, 3] = (S - (g4 + g3)) * beta
    T[s, 3] = -beta * g6
    T[q, 3] = -beta * g7

    T[c, 4] = -beta * g1
    T[n, 4] = (S - (g2 + g5)) / (tau * S**2)
    T[e, 4] = -(w * g3 * tau) / m**2
    T[p, 4] = -beta * g4
    T[s, 4] = -beta * g6
    T[q, 4] = -beta * g7

    T[c, 5] = -beta * g1
    T[n, 5] = -m / (tau * S**2)
    T[e, 5] = 0.0
    T[p, 5] = -beta * g4
    T[s, 5] = (S - (g6 + g3)) * beta
    T[q, 5] = -beta * g7

    T[c, 6] = -beta * g1
    T[n, 6] = -m / (tau * S**2)
    T[e, 6] = 0.0
    T[p, 6] = -beta * g4
    T[s, 6] = -beta * g6
    T[q, 6] = (S - (g7 + g3)) * beta

    return SensitivityMatrix(T, beta)


def _decision_vector(alloc):
    return np.array([getattr(alloc, k) for k in ROWS])


def finite_difference_jacobian(prefs, econ, h=None, tol=DEFAULT_TOL):
    """Central differences with step ``h * max(1, gamma_j)`` in each weight.

    A column whose perturbed instance leaves the interior regime is marked
    unavailable (NaN) rather than raising.
    """
    if h is None:
        h = tol.fd_step
    if not (math.isfinite(h) and h > 0):
        raise InvalidStep(f"finite-difference step must be positive and finite, got {h!r}")
    _require_interior(prefs, econ, tol)
    S = utility_weight_sum(prefs)

    J = np.full((6, 7), np.nan)
    avail = np.zeros((6, 7), dtype=bool)
    for j in range(1, 8):
        gj = prefs.get(j)
        step = h * max(1.0, abs(gj))
        try:
            up = solve_closed_form(prefs.with_weight(j, gj + step), econ, check_discount=False, tol=tol)
            down = solve_closed_form(prefs.with_weight(j, gj - step), econ, check_discount=False, tol=tol)
        except ModelError:
            continue
        J[:, j - 1] = (_decision_vector(up) - _decision_vector(down)) / (2.0 * step)
        avail[:, j - 1] = True
    return SensitivityMatrix(J, econ.w / S**2, avail)


def sign_pattern(m, zero_tol=DEFAULT_TOL.sign_zero):
    x = np.nan_to_num(m.entries, nan=0.0)
    signs = np.where(np.abs(x) <= zero_tol, 0, np.sign(x)).astype(np.int8)
    return SignPattern(signs)


def verify_paper_claims(prefs, econ, tol=DEFAULT_TOL):
    """Evaluate each published sign/equality result on the analytic matrix."""
    J = analytic_jacobian(prefs, econ, tol)
    z = tol.sign_zero
    verdicts = []

    diag = {
        "dc/dg1": J["c", 1], "dn/dg2": J["n", 2], "de/dg3": J["e", 3],
        "dp/dg4": J["p", 4], "ds/dg6": J["s", 6], "dq/dg7": J["q", 7],
    }
    verdicts.append(ClaimVerdict(
        "Lemma 1", "each decision rises with its own weight",
        all(v > 0 for v in diag.values()), diag,
    ))

    l2 = {f"d{x}/dg3": J[x, 3] for x in ("c", "s", "p", "q")}
    verdicts.append(ClaimVerdict(
        "Lemma 2", "education weight leaves c, s, p, q unchanged",
        all(abs(v) <= z for v in l2.values()), l2,
    ))

    eq7 = {f"de/dg{j}": J["e", j] for j in (1, 4, 6, 7)}
    verdicts.append(ClaimVerdict(
        "Eq. 7", "education spending is independent of gamma1, gamma4, gamma6, gamma7",
        all(abs(v) <= z for v in eq7.values()), eq7,
    ))

    l3 = {f"dn/dg{j}": J["n", j] for j in (1, 4, 6)}
    a, b, c = l3.values()
    verdicts.append(ClaimVerdict(
        "Lemma 3", "dn/dg1 = dn/dg4 = dn/dg6 < 0",
        a == b == c and a < 0, l3,
    ))

    l4 = {"dc/dg7": J["c", 7], "dp/dg7": J["p", 7], "dn/dg7": J["n", 7]}
    verdicts.append(ClaimVerdict(
        "Lemma 4", "pension weight lowers c, p and n",
        all(v < 0 for v in l4.values()), l4,
    ))

    t5 = {"ds/dg7": J["s", 7]}
    verdicts.append(ClaimVerdict(
        "Theorem 5", "pension weight lowers savings", t5["ds/dg7"] < 0, t5,
    ))

    p6 = {"dn/dg3": J["n", 3]}
    verdicts.append(ClaimVerdict(
        "Proposition 6", "education weight lowers the number of children", p6["dn/dg3"] < 0, p6,
    ))

    p7 = {"de/dg2": J["e", 2]}
    verdicts.append(ClaimVerdict(
        "Proposition 7", "child-quantity weight lowers education spending", p7["de/dg2"] < 0, p7,
    ))

    t8 = {f"d{x}/dg5": J[x, 5] for x in ("c", "s", "p", "q", "n")}
    verdicts.append(ClaimVerdict(
        "Theorem 8", "future-earnings weight lowers c, s, p, q and raises n",
        all(t8[f"d{x}/dg5"] < 0 for x in "cspq") and t8["dn/dg5"] > 0, t8,
    ))

    return ClaimReport(verdicts)


def discrepancy_report(prefs, econ, h=None, tol=DEFAULT_TOL):
    A = analytic_jacobian(prefs, econ, tol)
    T = tabulated_jacobian(prefs, econ, tol)
    F = finite_difference_jacobian(prefs, econ, h, tol)
    cells = []
    for i, decision in enumerate(ROWS):
        for j in range(1, 8):
            a = float(A.entries[i, j - 1])
            t = float(T.entries[i, j - 1])
            f = float(F.entries[i, j - 1])
            diff = abs(a - t)
            flagged = diff > tol.table_flag * max(1.0, abs(a))
            if not flagged:
                verdict = "agree"
            elif not F.available[i, j - 1]:
                verdict = "differs; finite difference unavailable"
            elif abs(f - a) < abs(f - t):
                verdict = "differs; finite difference sides with analytic"
            else:
                verdict = "differs; finite difference sides with table"
            cells.append(DiscrepancyCell(decision, j, a, t, f, diff, flagged, verdict))
    return DiscrepancyReport(cells)
