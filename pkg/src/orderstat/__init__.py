"""Expected order statistics as functions of the sample size.

Computes ``mu_{k:n}`` for parametric continuous distributions by quantile-space
quadrature, certifies monotonicity and discrete convexity/concavity in n, and
applies the results to choosing the number of bidders in an independent
private values auction, with or without a reserve price.
"""

from .auction import (
    AuctionResult,
    CostModel,
    ReserveAuctionResult,
    objective,
    optimize,
    optimize_with_reserve,
    parse_cost,
    reserve_analysis,
    reserve_revenue,
)
from .distributions import (
    Distribution,
    Exponential,
    Gamma,
    Gumbel,
    NegatedPareto,
    Normal,
    Pareto,
    Uniform,
    Weibull,
    classify,
    hazard,
    parse_distribution,
    reverse_hazard,
)
from .errors import BoundaryMaximizer, DomainError, NonexistentMoment, NumericalFailure, OrderStatError
from .mc_oracle import Estimate, SimConfig, sim_order_stat, sim_reserve_revenue
from .order_stats import OrderStatQuery, Side, expected_order_stat, pareto_closed_form
from .shape import ShapeReport, sequence

__version__ = "0.1.0"
