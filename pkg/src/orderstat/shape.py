"""Discrete shape certification of expected order statistics as functions of n."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import Distribution, classify
from .errors import DomainError
from .order_stats import (
    Side,
    bottom_gap,
    bottom_second_difference,
    expected_order_stat,
    top_gap,
    top_second_difference,
)

__all__ = [
    "Trend",
    "Curvature",
    "ShapeReport",
    "sequence",
    "GapCheck",
    "gap_consistency",
    "curvature_identity",
    "Prediction",
    "predicted_shape",
    "shape_tolerance",
]


class Trend(enum.Enum):
    NON_INCREASING = "NonIncreasing"
    NON_DECREASING = "NonDecreasing"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


class Curvature(enum.Enum):
    CONVEX = "Convex"
    CONCAVE = "Concave"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


_CLAIMED_TREND = {Side.BOTTOM: Trend.NON_INCREASING, Side.TOP: Trend.NON_DECREASING}
_CLAIMED_CURVATURE = {Side.BOTTOM: Curvature.CONVEX, Side.TOP: Curvature.CONCAVE}


def shape_tolerance(values) -> float:
    """Scale-adjusted band that separates quadrature noise from genuine sign changes."""
    return 1e-7 * max(1.0, float(np.max(np.abs(values))) if len(values) else 1.0)


@dataclass(frozen=True)
class ShapeReport:
    """mu over ``n in [n_min, n_max]`` with its discrete differences.

    ``first_diffs[i] = values[i+1] - values[i]`` and
    ``second_diffs[i] = values[i] - 2 values[i+1] + values[i+2]`` (centred at
    ``n_min + i + 1``).  ``violations`` pairs each centre ``n`` whose second
    difference breaks the curvature expected for this side (convex for BOTTOM,
    concave for TOP) with the signed second difference.  When a sequence is
    both convex and concave within tolerance, the expected shape is reported.
    """

    dist: Distribution
    k: int
    side: Side
    n_min: int
    n_max: int
    values: tuple[float, ...]
    first_diffs: tuple[float, ...]
    second_diffs: tuple[float, ...]
    monotone: Trend
    curvature: Curvature
    tolerance: float
    violations: tuple[tuple[int, float], ...]

    @property
    def ns(self) -> range:
        return range(self.n_min, self.n_max + 1)

    @property
    def is_convex(self) -> bool:
        return all(d >= -self.tolerance for d in self.second_diffs)

    @property
    def is_concave(self) -> bool:
        return all(d <= self.tolerance for d in self.second_diffs)

    @property
    def claimed_curvature(self) -> Curvature:
        return _CLAIMED_CURVATURE[self.side]

    @property
    def claimed_trend(self) -> Trend:
        return _CLAIMED_TREND[self.side]

    def matches_claim(self) -> bool:
        """True when both the monotonicity and the curvature claimed for this side hold."""
        curv_ok = self.is_convex if self.side is Side.BOTTOM else self.is_concave
        tol = self.tolerance
        if self.side is Side.BOTTOM:
            mono_ok = all(d <= tol for d in self.first_diffs)
        else:
            mono_ok = all(d >= -tol for d in self.first_diffs)
        return curv_ok and mono_ok


def _trend(diffs: np.ndarray, tol: float, prefer: Trend) -> Trend:
    down = bool(np.all(diffs <= tol))
    up = bool(np.all(diffs >= -tol))
    if down and up:
        return prefer
    if down:
        return Trend.NON_INCREASING
    if up:
        return Trend.NON_DECREASING
    return Trend.NEITHER


def _curvature(diffs: np.ndarray, tol: float, prefer: Curvature) -> Curvature:
    convex = bool(np.all(diffs >= -tol))
    concave = bool(np.all(diffs <= tol))
    if convex and concave:
        return prefer
    if convex:
        return Curvature.CONVEX
    if concave:
        return Curvature.CONCAVE
    return Curvature.NEITHER


def sequence(dist: Distribution, k: int, side: Side | str, n_min: int, n_max: int) -> ShapeReport:
    """Evaluate mu for every n in ``[n_min, n_max]`` and classify its shape."""
    side = Side.parse(side)
    if not 1 <= k <= n_min <= n_max:
        raise DomainError(f"need 1 <= k <= n_min <= n_max, got k={k}, n=[{n_min}, {n_max}]")
    values = np.array([expected_order_stat(dist, k, n, side) for n in range(n_min, n_max + 1)])
    d1 = np.diff(values)
    d2 = values[:-2] - 2.0 * values[1:-1] + values[2:]
    tol = shape_tolerance(values)
    if side is Side.BOTTOM:
        bad = np.flatnonzero(d2 < -tol)
    else:
        bad = np.flatnonzero(d2 > tol)
    violations = tuple((n_min + int(i) + 1, float(d2[i])) for i in bad)
    return ShapeReport(
        dist=dist,
        k=k,
        side=side,
        n_min=n_min,
        n_max=n_max,
        values=tuple(values.tolist()),
        first_diffs=tuple(d1.tolist()),
        second_diffs=tuple(d2.tolist()),
        monotone=_trend(d1, tol, _CLAIMED_TREND[side]),
        curvature=_curvature(d2, tol, _CLAIMED_CURVATURE[side]),
        tolerance=tol,
        violations=violations,
    )


class GapCheck(NamedTuple):
    direct: float
    identity: float
    abs_err: float


def gap_consistency(dist: Distribution, k: int, side: Side | str, n: int) -> GapCheck:
    """Compare the step from n to n+1 computed two ways.

    BOTTOM: ``mu_{k:n} - mu_{k:n+1}`` against ``bottom_gap(k, n)``.
    TOP: ``mu_{n-k+2:n+1} - mu_{n-k+1:n}`` against ``top_gap(k, n+1)``.
    Both steps are nonnegative for every distribution.
    """
    side = Side.parse(side)
    here = expected_order_stat(dist, k, n, side)
    there = expected_order_stat(dist, k, n + 1, side)
    if side is Side.BOTTOM:
        direct = here - there
        identity = bottom_gap(dist, k, n)
    else:
        direct = there - here
        identity = top_gap(dist, k, n + 1)
    return GapCheck(direct, identity, abs(direct - identity))


def curvature_identity(dist: Distribution, k: int, side: Side | str, n: int) -> float:
    """Second difference of mu centred at n, ``mu(n-1) - 2 mu(n) + mu(n+1)``, from the single-integral form."""
    side = Side.parse(side)
    if side is Side.BOTTOM:
        return bottom_second_difference(dist, k, n - 1)
    return top_second_difference(dist, k, n)


class Prediction(NamedTuple):
    applies: bool
    curvature: Curvature
    hypothesis: str


def predicted_shape(dist: Distribution, k: int, side: Side | str) -> Prediction:
    """The shape guaranteed for this query, if any.

    BOTTOM sequences are convex under a nonincreasing reverse hazard (MRHR),
    TOP sequences concave under a nondecreasing hazard (MHR); for k = 1 both
    hold with no condition on the distribution.
    """
    side = Side.parse(side)
    verdict = classify(dist)
    if side is Side.BOTTOM:
        if k == 1:
            return Prediction(True, Curvature.CONVEX, "k=1")
        return Prediction(verdict.is_mrhr, Curvature.CONVEX, "MRHR" if verdict.is_mrhr else "none")
    if k == 1:
        return Prediction(True, Curvature.CONCAVE, "k=1")
    return Prediction(verdict.is_mhr, Curvature.CONCAVE, "MHR" if verdict.is_mhr else "none")
