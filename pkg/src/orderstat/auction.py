"""Auctioneer objective, optimal bidder count, and reserve-price analysis.

With n bidders drawing i.i.d. private values, the expected revenue of a
standard auction is the expected second-highest value ``mu_{n-1:n}``.  The
reserve-price formulas below assume values are nonnegative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .distributions import Distribution, classify
from .errors import BoundaryMaximizer, DomainError
from .order_stats import _check_int, expected_order_stat
from .quadrature import beta_breaks, integrate, integrate_unit
from .shape import shape_tolerance

__all__ = [
    "CostModel",
    "parse_cost",
    "objective",
    "AuctionResult",
    "optimize",
    "LowerStat",
    "conditional_lower_os",
    "reserve_revenue",
    "reserve_revenue_by_conditioning",
    "reserve_tail_integral",
    "reserve_second_difference",
    "reserve_j",
    "reserve_j_at_threshold",
    "reserve_condition",
    "ReserveAuctionResult",
    "reserve_analysis",
    "optimize_with_reserve",
    "TIE_TOL",
    "DEFAULT_N_MAX",
]

TIE_TOL = 1e-9
DEFAULT_N_MAX = 10_000


@dataclass(frozen=True)
class CostModel:
    """Cost ``c(n)`` of attracting n bidders.

    ``kind="poly"``: ``c(n) = sum_i coefficients[i] * n**i``.
    ``kind="table"``: ``coefficients[j]`` is ``c(j + 2)``; only n >= 2 is priced
    (n < 2 means no auction, so no cost is ever charged there).
    """

    kind: str
    coefficients: tuple[float, ...]
    n_max_hint: int | None = None

    def __post_init__(self):
        if self.kind not in ("poly", "table"):
            raise DomainError(f"unknown cost kind {self.kind!r}")
        if not self.coefficients:
            raise DomainError("cost model needs at least one value")
        coeffs = tuple(float(c) for c in self.coefficients)
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("cost values must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        if self.kind == "table":
            object.__setattr__(self, "n_max_hint", len(coeffs) + 1)

    @classmethod
    def polynomial(cls, *coefficients: float) -> "CostModel":
        return cls("poly", tuple(coefficients))

    @classmethod
    def table(cls, values) -> "CostModel":
        return cls("table", tuple(values))

    def __call__(self, n: int) -> float:
        if self.kind == "poly":
            return float(np.polynomial.polynomial.polyval(float(n), self.coefficients))
        if n < 2:
            return 0.0
        if n > self.n_max_hint:
            raise DomainError(f"cost table covers n <= {self.n_max_hint}, asked for n={n}")
        return self.coefficients[n - 2]

    def grid(self, n_max: int) -> np.ndarray:
        """Costs on the integer grid the model is validated on."""
        if self.kind == "poly":
            return np.polynomial.polynomial.polyval(np.arange(n_max + 1, dtype=float), self.coefficients)
        return np.asarray(self.coefficients[: max(n_max - 1, 0)])

    def validate(self, n_max: int) -> None:
        """Check nonnegativity and discrete convexity on the grid up to ``n_max``."""
        if self.kind == "table" and n_max > self.n_max_hint:
            raise DomainError(f"n_max={n_max} exceeds the cost table (last n={self.n_max_hint})")
        c = self.grid(n_max)
        if np.any(c < 0):
            raise DomainError("cost must be nonnegative on the evaluation range")
        if c.size >= 3:
            d2 = c[:-2] - 2.0 * c[1:-1] + c[2:]
            if np.any(d2 < -1e-12 * max(1.0, float(np.max(np.abs(c))))):
                raise DomainError("cost must be discretely convex on the evaluation range")

    def eventually_increasing(self, n_max: int) -> bool:
        c = self.grid(n_max)
        return c.size >= 2 and c[-1] > c[-2]

    def spec(self) -> str:
        return f"{self.kind}:" + ",".join(repr(c) for c in self.coefficients)


def parse_cost(text: str) -> CostModel:
    """Parse ``poly:c0,c1,...,cd`` or ``table:v2,v3,...``."""
    kind, sep, rest = text.strip().lower().partition(":")
    if not sep or kind not in ("poly", "table"):
        raise DomainError(f"cost spec must look like 'poly:c0,c1,...' or 'table:v2,v3,...', got {text!r}")
    try:
        values = [float(v) for v in rest.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"non-numeric cost value in {text!r}") from None
    return CostModel(kind, tuple(values))


def _require_nonnegative_support(dist: Distribution) -> None:
    if dist.support[0] < 0.0:
        raise DomainError(f"reserve analysis needs support in [0, inf); {dist.spec()} has negative part")


def objective(dist: Distribution, cost: CostModel, n: int) -> float:
    """Auctioneer payoff ``g(n) = mu_{n-1:n} - c(n)`` for n >= 2, else 0."""
    n = _check_int(n, "n")
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n < 2:
        return 0.0
    return expected_order_stat(dist, 2, n, "top") - cost(n)


@dataclass(frozen=True)
class AuctionResult:
    """``g_values[n]`` holds g(n) for every n the search evaluated (from n=0)."""

    n_star: int
    g_values: tuple[float, ...]
    concavity_certified: bool
    tie_broken: bool
    reserve: float | None = None
    revenues: tuple[float, ...] = field(default=(), repr=False)


def _argmax(g: list[float]) -> tuple[int, bool]:
    best = max(g)
    n_star = next(n for n, v in enumerate(g) if v >= best - TIE_TOL)
    if n_star == 0:
        tie = any(v >= best - TIE_TOL for v in g[2:])
    else:
        tie = n_star + 1 < len(g) and g[n_star + 1] >= best - TIE_TOL
    return n_star, tie


def _search(payoff, n_max: int, certified_from: int | None, revenue_check):
    """Scan g over n = 0..n_max, stopping early once concavity makes later n useless.

    ``certified_from`` is the first n from which g is known concave (None: never).
    ``revenue_check(revenues)`` re-certifies concavity of the scanned revenues;
    a failed check falls back to the exhaustive scan.
    """
    g = [0.0, 0.0]
    revenues = [math.nan, math.nan]
    stopped = False
    for n in range(2, n_max + 1):
        rev, val = payoff(n)
        g.append(val)
        revenues.append(rev)
        if (
            certified_from is not None
            and n - 1 >= max(certified_from, 2)
            and g[n] < g[n - 1] - TIE_TOL
        ):
            stopped = True
            break
    certified = certified_from is not None
    if stopped and not revenue_check(revenues[2:]):
        # Numerical concavity failed on the scanned prefix: finish exhaustively.
        certified = False
        for n in range(len(g), n_max + 1):
            rev, val = payoff(n)
            g.append(val)
            revenues.append(rev)
    return g, revenues, certified


def _concave_prefix(revenues: list[float]) -> bool:
    if len(revenues) < 3:
        return True
    v = np.asarray(revenues)
    d2 = v[:-2] - 2.0 * v[1:-1] + v[2:]
    return bool(np.all(d2 <= shape_tolerance(v)))


def _finish(g, revenues, certified, n_max, reserve) -> AuctionResult:
    n_star, tie = _argmax(g)
    result = AuctionResult(n_star, tuple(g), certified, tie, reserve, tuple(revenues))
    if n_star == n_max and len(g) == n_max + 1:
        raise BoundaryMaximizer(n_max, result)
    return result


def optimize(dist: Distribution, cost: CostModel, n_max: int = DEFAULT_N_MAX, *, shortcut: bool = True) -> AuctionResult:
    """Smallest maximizer of g over ``{0, ..., n_max}``.

    With an MHR value distribution the expected second-highest value is
    concave in n, so with a convex cost g is concave from n=2 on and the scan
    stops at the first strict decrease.  Otherwise every n is evaluated.
    """
    n_max = _check_int(n_max, "n_max")
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    cost.validate(n_max)
    certified_from = 2 if shortcut and classify(dist).is_mhr else None

    def payoff(n):
        rev = expected_order_stat(dist, 2, n, "top")
        return rev, rev - cost(n)

    g, revenues, certified = _search(payoff, n_max, certified_from, _concave_prefix)
    return _finish(g, revenues, certified, n_max, None)


class LowerStat(enum.Enum):
    MAX_OF_N = "max_of_n"
    SECOND_OF_N = "second_of_n"


def conditional_lower_os(dist: Distribution, r: float, which: LowerStat | str, n: int) -> float:
    """Expected largest / second-largest of n draws, given all n fall at or below r.

    ``max_of_n``: ``int_0^r 1 - F^n(y)/F^n(r) dy``.
    ``second_of_n``: ``int_0^r 1 - n F^(n-1)(y)/F^(n-1)(r) + (n-1) F^n(y)/F^n(r) dy``.
    Integrated directly in y, so it shares no code path with ``reserve_revenue``.
    """
    which = LowerStat(which)
    n = _check_int(n, "n")
    _require_nonnegative_support(dist)
    if n < 1 or (which is LowerStat.SECOND_OF_N and n < 2):
        raise DomainError("need n >= 1 (max_of_n) or n >= 2 (second_of_n)")
    Fr = float(dist.cdf(r))
    if Fr <= 0.0:
        raise DomainError("conditioning on F(r) = 0 is undefined")
    lo = max(dist.support[0], 0.0)

    if which is LowerStat.MAX_OF_N:
        def f(y):
            return 1.0 - (dist.cdf(y) / Fr) ** n
    else:
        def f(y):
            p = dist.cdf(y) / Fr
            return 1.0 - n * p ** (n - 1) + (n - 1) * p**n

    # On [0, lo) no draw is possible, so the integrand is exactly 1 there.
    return lo + integrate(f, lo, r).value


def _check_reserve(dist: Distribution, r: float, n: int, n_min: int = 2) -> int:
    n = _check_int(n, "n")
    _require_nonnegative_support(dist)
    if n < n_min:
        raise DomainError(f"need n >= {n_min}, got {n}")
    lo, hi = dist.support
    if not (lo <= r <= hi):
        raise DomainError(f"reserve r={r} lies outside the support [{lo}, {hi}]")
    return n


def _tail_dy(dist: Distribution, r: float, n: int, poly) -> float:
    """``int_r^inf poly(F(y)) dy`` in quantile space; ``poly`` vanishes at u=1."""
    lo, lo_c = float(dist.cdf(r)), float(dist.sf(r))
    if lo_c == 0.0:
        return 0.0

    def f(u, c):
        w = poly(u, c)
        dens = dist.density_quantile(u, c)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = w / dens
        return np.where(w == 0.0, 0.0, out)

    return integrate_unit(f, lo, 1.0, lo_c=lo_c, hi_c=0.0, breaks=beta_breaks(max(n - 1, 1), 2)).value


def _tail_survival(n: int):
    """``1 - n u^(n-1) + (n-1) u^n`` = P(second-highest of n exceeds y) at u = F(y).

    Evaluated as the binomial tail ``P(Bin(n, 1-u) >= 2) = I_{1-u}(2, n-1)``,
    which stays accurate as u -> 1 where the polynomial form cancels.
    """

    def poly(u, c):
        return special.betainc(2.0, n - 1.0, c)

    return poly


def reserve_tail_integral(dist: Distribution, r: float, n: int) -> float:
    """``I_n = int_r^inf 1 - n F^(n-1)(y) + (n-1) F^n(y) dy`` (zero for n = 1)."""
    n = _check_reserve(dist, r, n, n_min=1)
    if n == 1:
        return 0.0
    return _tail_dy(dist, r, n, _tail_survival(n))


def reserve_revenue(dist: Distribution, r: float, n: int) -> float:
    """Expected revenue with reserve r: ``r (1 - F^n(r)) + I_n``."""
    n = _check_reserve(dist, r, n)
    Fr = float(dist.cdf(r))
    return r * (1.0 - Fr**n) + reserve_tail_integral(dist, r, n)


def reserve_revenue_by_conditioning(dist: Distribution, r: float, n: int) -> float:
    """The same revenue assembled by iterated expectations over how many values clear r.

    ``mu_{n-1:n} + (r - mu^-_{n-1:n-1}) n F^(n-1)(r) Fbar(r) - mu^-_{n-1:n} F^n(r)``.
    """
    n = _check_reserve(dist, r, n)
    Fr = float(dist.cdf(r))
    Sr = float(dist.sf(r))
    mu = expected_order_stat(dist, 2, n, "top")
    if Fr == 0.0:
        return mu
    below_max = conditional_lower_os(dist, r, LowerStat.MAX_OF_N, n - 1)
    below_second = conditional_lower_os(dist, r, LowerStat.SECOND_OF_N, n)
    return mu + (r - below_max) * n * Fr ** (n - 1) * Sr - below_second * Fr**n


def reserve_second_difference(dist: Distribution, r: float, n: int) -> float:
    """``I_(n+1) - 2 I_n + I_(n-1) = int_r^inf Fbar^2 F^(n-2) (n F - n + 1) dy``."""
    n = _check_reserve(dist, r, n)

    def poly(u, c):
        return c * c * u ** (n - 2) * (1.0 - n * c)

    return _tail_dy(dist, r, n, poly)


def reserve_j(F_r: float, n: int) -> float:
    """``int_{F_r}^1 (1-u) u^(n-2) (n u - n + 1) du`` in closed form."""
    n = _check_int(n, "n")
    if n < 2:
        raise DomainError("reserve_j needs n >= 2")
    if not 0.0 <= F_r <= 1.0:
        raise DomainError(f"F_r must be a probability, got {F_r}")
    S = 1.0 - F_r
    return (-1.0 + F_r ** (n - 1) * (n * n * S * S + n * S - S + 1.0)) / (n * (n + 1))


def reserve_j_at_threshold(n: int) -> float:
    """``reserve_j(1 - 2/n, n)`` simplified: ``(-1 + (n-2)^(n-1) n^(-n) (7n-2)) / (n(n+1))``."""
    n = _check_int(n, "n")
    if n < 2:
        raise DomainError("needs n >= 2")
    # (n-2)^(n-1) n^(-n) = (1 - 2/n)^(n-1) / n
    power = math.exp((n - 1) * math.log1p(-2.0 / n)) / n if n > 2 else 0.0
    return (-1.0 + power * (7 * n - 2)) / (n * (n + 1))


def reserve_condition(dist: Distribution, r: float, n: int) -> bool:
    """Sufficient condition for concavity of reserve revenue at n: ``F(r) <= 1 - 2/n``."""
    n = _check_int(n, "n")
    if n < 2:
        raise DomainError("needs n >= 2")
    return float(dist.cdf(r)) <= 1.0 - 2.0 / n


@dataclass(frozen=True)
class ReserveAuctionResult:
    r: float
    n: int
    F_r: float
    revenue: float
    condition_ok: bool
    reserve_j: float
    second_diff_I: float


def reserve_analysis(dist: Distribution, r: float, n: int) -> ReserveAuctionResult:
    n = _check_reserve(dist, r, n)
    F_r = float(dist.cdf(r))
    return ReserveAuctionResult(
        r=float(r),
        n=n,
        F_r=F_r,
        revenue=reserve_revenue(dist, r, n),
        condition_ok=reserve_condition(dist, r, n),
        reserve_j=reserve_j(F_r, n),
        second_diff_I=reserve_second_difference(dist, r, n),
    )


def optimize_with_reserve(
    dist: Distribution,
    cost: CostModel,
    r: float,
    n_max: int = DEFAULT_N_MAX,
    *,
    shortcut: bool = True,
) -> AuctionResult:
    """Smallest maximizer of ``reserve_revenue(n) - c(n)`` (0 for n < 2).

    Early stopping is only trusted from the first n at which ``F(r) <= 1 - 2/n``
    holds (it then holds for every larger n) and only for MHR distributions.
    """
    n_max = _check_int(n_max, "n_max")
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    _check_reserve(dist, r, 2)
    cost.validate(n_max)
    certified_from = None
    F_r = float(dist.cdf(r))
    if shortcut and F_r < 1.0 and classify(dist).is_mhr:
        certified_from = max(2, math.ceil(2.0 / (1.0 - F_r) - 1e-12))
        while not reserve_condition(dist, r, certified_from):
            certified_from += 1

    def payoff(n):
        rev = reserve_revenue(dist, r, n)
        return rev, rev - cost(n)

    def check(revenues):
        start = certified_from - 2
        return _concave_prefix(revenues[max(start - 1, 0):])

    g, revenues, certified = _search(payoff, n_max, certified_from, check)
    return _finish(g, revenues, certified, n_max, float(r))
