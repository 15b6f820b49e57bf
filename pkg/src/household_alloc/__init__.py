"""Closed-form household allocation model with comparative statics and a numerical cross-check."""

from .errors import (
    BaseNotInterior,
    DiscountOutOfRange,
    EmptyGrid,
    InvalidParameter,
    InvalidStep,
    ModelError,
    NetIncomeNonPositive,
    NoFeasibleStart,
    NonPositiveArgument,
    NonPositiveParameter,
    NotConverged,
    NotInterior,
)
from .model import (
    DEFAULT_TOL,
    Allocation,
    EconomyParams,
    PreferenceWeights,
    Regime,
    RegimeClassification,
    Tolerances,
    budget_residual,
    evaluate_utility,
    solve_closed_form,
    utility_weight_sum,
    validate,
)
from .oracle import cross_validate, foc_residuals, maximize_numerically
from .statics import (
    analytic_jacobian,
    discrepancy_report,
    finite_difference_jacobian,
    sign_pattern,
    tabulated_jacobian,
    verify_paper_claims,
)
from .scenarios import (
    SweepSpec,
    crowd_out_analysis,
    export_csv,
    future_earnings_scenario,
    quantity_quality_frontier,
    run_sweep,
)

__version__ = "0.1.0"
