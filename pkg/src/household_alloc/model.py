"""Household allocation model: parameter types, regime checks and the closed-form optimum.

A single-period household chooses consumption ``c``, savings ``s``, health
spending ``p``, pension premiums ``q``, the number of children ``n`` (continuous)
and education spending per child ``e`` to maximise a weighted sum of logs

    u = g1 ln c + g2 ln n + g3 ln e + g4 ln p
        + g5 ln(n w_next) + g6 ln(R_next s) + g7 ln(Rp_next q)

subject to ``w (1 - tau n) = c + s + e n + p + q``.  With the utility weight
sum ``S = g1 + g2 + g4 + g5 + g6 + g7`` and ``m = g2 + g5 - g3`` the interior
optimum is

    c = g1 w / S,  s = g6 w / S,  p = g4 w / S,  q = g7 w / S,
    n = m / (tau S),  e = g3 w tau / m,

which exists only when ``m > 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import astuple, dataclass, fields, replace

from .errors import (
    DiscountOutOfRange,
    InvalidParameter,
    NetIncomeNonPositive,
    NonPositiveArgument,
    NonPositiveParameter,
    NotInterior,
)

WEIGHT_NAMES = tuple(f"gamma{i}" for i in range(1, 8))
# weights read as discount factors; admissible range (0, 1]
DISCOUNT_WEIGHTS = ("gamma5", "gamma6", "gamma7")
DECISIONS = ("c", "s", "p", "q", "n", "e")


@dataclass(frozen=True)
class Tolerances:
    budget: float = 1e-10  # relative to w
    margin: float = 1e-12  # |g2 + g5 - g3| at or below this is Singular
    fd_step: float = 1e-6
    sign_zero: float = 1e-12
    table_flag: float = 1e-8
    monotone: float = 1e-12


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class PreferenceWeights:
    gamma1: float  # consumption
    gamma2: float  # number of children
    gamma3: float  # child education
    gamma4: float  # health spending
    gamma5: float  # children's future earnings
    gamma6: float  # savings
    gamma7: float  # pension premiums

    @classmethod
    def from_sequence(cls, values):
        values = tuple(float(v) for v in values)
        if len(values) != 7:
            raise ValueError(f"expected 7 weights, got {len(values)}")
        return cls(*values)

    @classmethod
    def ones(cls):
        return cls(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)

    def as_tuple(self):
        return astuple(self)

    def get(self, i):
        """Weight by 1-based index."""
        return getattr(self, f"gamma{i}")

    def with_weight(self, i, value):
        return replace(self, **{f"gamma{i}": float(value)})

    def scaled(self, k):
        return PreferenceWeights(*(k * g for g in self.as_tuple()))


@dataclass(frozen=True)
class EconomyParams:
    w: float  # current wage
    tau: float  # fixed cost per child, fraction of the wage
    w_next: float = 1.0  # children's wage next period
    R_next: float = 1.0  # gross return on savings
    Rp_next: float = 1.0  # gross return on pension premiums


@dataclass(frozen=True)
class Allocation:
    c: float
    s: float
    p: float
    q: float
    n: float
    e: float

    def as_tuple(self):
        return astuple(self)

    def replace(self, **changes):
        return replace(self, **changes)


class Regime(enum.Enum):
    INTERIOR = "Interior"
    CORNER = "Corner"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class RegimeClassification:
    regime: Regime
    mqqt_margin: float

    @property
    def is_interior(self):
        return self.regime is Regime.INTERIOR


def _check_finite_positive(name, value):
    if not math.isfinite(value):
        raise InvalidParameter(name, value, "must be a finite number")
    if value <= 0:
        raise NonPositiveParameter(name, value, "must be strictly positive")


def validate(prefs, econ, *, check_discount=True, tol=DEFAULT_TOL):
    """Check admissibility and classify the regime by the sign of ``g2 + g5 - g3``.

    Inadmissible instances raise; Corner and Singular are returned, not raised,
    since they are legitimate model states.  ``check_discount=False`` skips the
    (0, 1] range check on gamma5..gamma7 (used by derivative probes and sweeps
    that step weights past 1).
    """
    for f in fields(prefs):
        _check_finite_positive(f.name, getattr(prefs, f.name))
    for f in fields(econ):
        _check_finite_positive(f.name, getattr(econ, f.name))
    if check_discount:
        for name in DISCOUNT_WEIGHTS:
            value = getattr(prefs, name)
            if value > 1.0:
                raise DiscountOutOfRange(name, value, "discount factor must lie in (0, 1]")

    margin = prefs.gamma2 + prefs.gamma5 - prefs.gamma3
    if abs(margin) <= tol.margin:
        regime = Regime.SINGULAR
    elif margin > 0:
        regime = Regime.INTERIOR
    else:
        regime = Regime.CORNER
    return RegimeClassification(regime, margin)


def utility_weight_sum(prefs):
    """S: the sum of all seven weights except the education weight gamma3."""
    g = prefs
    return g.gamma1 + g.gamma2 + g.gamma4 + g.gamma5 + g.gamma6 + g.gamma7


def solve_closed_form(prefs, econ, *, check_discount=True, tol=DEFAULT_TOL):
    cls = validate(prefs, econ, check_discount=check_discount, tol=tol)
    if not cls.is_interior:
        raise NotInterior(cls)

    g = prefs
    w, tau = econ.w, econ.tau
    S = utility_weight_sum(g)
    m = cls.mqqt_margin
    alloc = Allocation(
        c=g.gamma1 * w / S,
        s=g.gamma6 * w / S,
        p=g.gamma4 * w / S,
        q=g.gamma7 * w / S,
        n=m / (tau * S),
        e=g.gamma3 * w * tau / m,
    )
    # tau * n = m / S < 1 analytically; only rounding at extreme weights gets here
    if 1.0 - tau * alloc.n <= 0.0:
        raise NetIncomeNonPositive(
            f"1 - tau * n = {1.0 - tau * alloc.n:.17g} <= 0 "
            f"(tau = {tau!r}, n = {alloc.n!r})"
        )
    return alloc


def evaluate_utility(alloc, prefs, econ):
    g = prefs
    terms = (
        (g.gamma1, alloc.c, "c"),
        (g.gamma2, alloc.n, "n"),
        (g.gamma3, alloc.e, "e"),
        (g.gamma4, alloc.p, "p"),
        (g.gamma5, alloc.n * econ.w_next, "n * w_next"),
        (g.gamma6, econ.R_next * alloc.s, "R_next * s"),
        (g.gamma7, econ.Rp_next * alloc.q, "Rp_next * q"),
    )
    u = 0.0
    for weight, arg, label in terms:
        if not arg > 0:
            raise NonPositiveArgument(f"log argument {label} = {arg!r} is not positive")
        u += weight * math.log(arg)
    return u


def budget_residual(alloc, econ):
    """Income net of child costs minus spending; positive means slack."""
    a = alloc
    return econ.w * (1.0 - econ.tau * a.n) - (a.c + a.s + a.e * a.n + a.p + a.q)


def on_budget(alloc, econ, tol=DEFAULT_TOL):
    return abs(budget_residual(alloc, econ)) <= tol.budget * econ.w
