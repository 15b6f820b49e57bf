"""Independent numerical route to the optimum, and first-order-condition residuals.

``maximize_numerically`` never looks at the closed form.  It eliminates ``e``
through the budget, ``e = (w (1 - tau n) - c - s - p - q) / n``, and runs cyclic
coordinate ascent over ``(c, s, p, q, n)`` with a golden-section line search,
followed each cycle by one extrapolation search along the net cycle displacement.
Every accepted move strictly raises utility.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import NoFeasibleStart, NotConverged, NotInterior, NonPositiveArgument
from .model import (
    Allocation,
    EconomyParams,
    PreferenceWeights,
    budget_residual,
    evaluate_utility,
    solve_closed_form,
    validate,
)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo, hi, xtol):
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns the abscissa."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 > f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


@dataclass
class OracleResult:
    allocation: Allocation
    utility: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)  # start utility plus accumulated gain, per cycle


@dataclass
class FocResiduals:
    lambda_hat: float
    r_n: float
    r_e: float
    r_p: float
    r_s: float
    r_q: float
    r_budget: float

    def max_abs(self):
        return max(abs(v) for v in (self.r_n, self.r_e, self.r_p, self.r_s, self.r_q, self.r_budget))


@dataclass
class CrossValidation:
    closed_form: Allocation
    numerical: OracleResult
    max_rel_gap: float
    utility_rel_gap: float
    residual_closed_form: float
    residual_numerical: float
    passed: bool


class _ReducedProblem:
    """Utility over x = (c, s, p, q, n) with e eliminated through the budget."""

    # coefficients on ln c, ln s, ln p, ln q, ln n, ln(remaining budget):
    # ln e = ln R - ln n, so n carries g2 + g5 - g3 and R carries g3
    def __init__(self, prefs, econ):
        g = prefs
        self.prefs = prefs
        self.econ = econ
        self.coef = (g.gamma1, g.gamma6, g.gamma4, g.gamma7, g.gamma2 + g.gamma5 - g.gamma3)
        self.g3 = g.gamma3
        self.w = econ.w
        self.wtau = econ.w * econ.tau

    def remaining(self, x):
        """Budget left for education, ``e * n``."""
        return self.w - self.wtau * x[4] - (x[0] + x[1] + x[2] + x[3])

    def utility(self, x):
        c, s, p, q, n = x
        r = self.remaining(x)
        if min(x) <= 0 or r <= 0:
            return -math.inf
        g = self.prefs
        e = r / n
        return (
            g.gamma1 * math.log(c)
            + g.gamma2 * math.log(n)
            + g.gamma3 * math.log(e)
            + g.gamma4 * math.log(p)
            + g.gamma5 * math.log(n * self.econ.w_next)
            + g.gamma6 * math.log(self.econ.R_next * s)
            + g.gamma7 * math.log(self.econ.Rp_next * q)
        )

    def line_search(self, x, d, xtol):
        """Best step along ``d`` from ``x``; returns (new point, utility gain).

        The objective is the utility *increment*, built from log1p terms, so the
        comparisons inside the search keep full precision near the optimum.
        """
        r = self.remaining(x)
        dr = -(d[0] + d[1] + d[2] + d[3]) - self.wtau * d[4]
        lo, hi = -math.inf, math.inf
        for xi, di in zip((*x, r), (*d, dr)):
            if di > 0:
                lo = max(lo, -xi / di)
            elif di < 0:
                hi = min(hi, -xi / di)
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            return x, 0.0

        coef, g3 = self.coef, self.g3

        def gain(a):
            v = g3 * math.log1p(a * dr / r) if dr else 0.0
            for k, xi, di in zip(coef, x, d):
                if di:
                    v += k * math.log1p(a * di / xi)
            return v

        # the open interval endpoints are log singularities
        span = hi - lo
        a = golden_section_max(gain, lo + 1e-15 * span, hi - 1e-15 * span, xtol * span)
        best = gain(a)
        if best > 0.0:
            new = tuple(xi + a * di for xi, di in zip(x, d))
            if min(new) > 0 and self.remaining(new) > 0:
                return new, best
        return x, 0.0


def feasible_start(econ, max_halvings=60):
    """Equal split of w over c, s, p, q and n = 0.5 / tau, shrunk until e > 0."""
    w, tau = econ.w, econ.tau
    x = [w / 4.0] * 4 + [0.5 / tau]
    for _ in range(max_halvings):
        x = [v * 0.5 for v in x]
        if w * (1.0 - tau * x[4]) - sum(x[:4]) > 0:
            return tuple(x)
    raise NoFeasibleStart(f"no strictly positive feasible start for w = {w!r}, tau = {tau!r}")


def maximize_numerically(prefs, econ, tol=1e-10, max_iter=2000, xtol=1e-9, line_tol=1e-14):
    """Derivative-free maximisation of utility subject to the budget.

    Converged when one full cycle raises utility by at most ``tol * max(1, |u|)``
    and moves no coordinate by more than ``xtol`` relative.  Raises
    ``NotConverged`` (carrying the partial result) when ``max_iter`` cycles pass
    without meeting both.
    """
    cls = validate(prefs, econ)
    if not cls.is_interior:
        raise NotInterior(cls)

    prob = _ReducedProblem(prefs, econ)
    x = feasible_start(econ)
    u = prob.utility(x)
    history = [u]
    basis = [tuple(1.0 if k == i else 0.0 for k in range(5)) for i in range(5)]

    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        x0 = x
        gain = 0.0
        for d in basis:  # fixed order c, s, p, q, n
            x, g = prob.line_search(x, d, line_tol)
            gain += g
        d = tuple(a - b for a, b in zip(x, x0))
        if any(d):
            x, g = prob.line_search(x, d, line_tol)
            gain += g
        # accumulate exact increments; re-evaluating u would add last-digit noise
        history.append(history[-1] + gain)
        step = max(abs(a - b) / abs(a) for a, b in zip(x, x0))
        if gain <= tol * max(1.0, abs(history[-1])) and step <= xtol:
            converged = True
            break
    u = prob.utility(x)

    c, s, p, q, n = x
    alloc = Allocation(c=c, s=s, p=p, q=q, n=n, e=prob.remaining(x) / n)
    result = OracleResult(alloc, u, it, converged, history)
    if not converged:
        raise NotConverged(result)
    return result


def foc_residuals(alloc, prefs, econ):
    """Stationarity residuals of the Lagrangian with the multiplier taken as g1 / c."""
    a, g = alloc, prefs
    for name in ("c", "s", "p", "q", "n", "e"):
        if not getattr(a, name) > 0:
            raise NonPositiveArgument(f"{name} = {getattr(a, name)!r} is not positive")
    lam = g.gamma1 / a.c
    return FocResiduals(
        lambda_hat=lam,
        r_n=(g.gamma2 + g.gamma5) / a.n - lam * (econ.tau * econ.w + a.e),
        r_e=g.gamma3 / a.e - lam * a.n,
        r_p=g.gamma4 / a.p - lam,
        r_s=g.gamma6 / a.s - lam,
        r_q=g.gamma7 / a.q - lam,
        r_budget=budget_residual(a, econ),
    )


GAP_TOL = 1e-4
RESIDUAL_TOL = 1e-5


def cross_validate(prefs, econ, tol=1e-10, closed_form=solve_closed_form):
    """Closed form against the numerical maximiser, plus FOC residuals on both.

    ``closed_form`` is injectable so the failure path can be exercised.
    """
    cf = closed_form(prefs, econ)
    num = maximize_numerically(prefs, econ, tol=tol)
    gap = max(
        abs(x - y) / abs(y) for x, y in zip(num.allocation.as_tuple(), cf.as_tuple())
    )
    try:
        u_cf = evaluate_utility(cf, prefs, econ)
        res_cf = foc_residuals(cf, prefs, econ).max_abs()
        u_gap = abs(num.utility - u_cf) / max(1.0, abs(u_cf))
    except NonPositiveArgument:
        u_gap = res_cf = math.inf
    res_num = foc_residuals(num.allocation, prefs, econ).max_abs()
    passed = gap <= GAP_TOL and res_cf <= RESIDUAL_TOL and res_num <= RESIDUAL_TOL
    return CrossValidation(cf, num, gap, u_gap, res_cf, res_num, passed)


def random_interior_instance(rng, min_margin=0.05):
    """Draw an admissible interior instance from the verification ranges.

    gamma1..gamma4 ~ U[0.1, 5], gamma5..gamma7 ~ U[0.1, 1], tau ~ U[0.01, 0.5],
    w ~ U[0.5, 10]; redrawn until g2 + g5 - g3 >= ``min_margin``.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    while True:
        g = [rng.uniform(0.1, 5.0) for _ in range(4)] + [rng.uniform(0.1, 1.0) for _ in range(3)]
        if g[1] + g[4] - g[2] >= min_margin:
            break
    econ = EconomyParams(
        w=rng.uniform(0.5, 10.0),
        tau=rng.uniform(0.01, 0.5),
        w_next=rng.uniform(0.5, 2.0),
        R_next=rng.uniform(0.9, 1.5),
        Rp_next=rng.uniform(0.9, 1.5),
    )
    return PreferenceWeights.from_sequence(g), econ
