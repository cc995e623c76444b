"""Expected order statistics, their gap identities, and the sign integrals J and K.

Everything is integrated in quantile space ``u = F(x)``.  An expectation
``mu_{r:n}`` becomes ``int_0^1 Q(u) beta(u; r, n-r+1) du``; an integral against
``dx`` picks up the Jacobian ``dQ/du = 1 / f(Q(u))``.  Integrands are written in
terms of ``(u, c)`` with ``c = 1 - u`` carried separately so the upper tail is
resolved without cancellation.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import Distribution, NegatedPareto, Pareto
from .errors import DomainError, NonexistentMoment
from .quadrature import beta_breaks, integrate_unit

__all__ = [
    "Side",
    "OrderStatQuery",
    "MomentExistence",
    "moment_existence",
    "expected_order_stat",
    "pareto_closed_form",
    "bottom_gap",
    "top_gap",
    "bottom_second_difference",
    "top_second_difference",
    "bottom_curvature_kernel",
    "top_curvature_kernel",
    "j_integral",
    "k_integral",
    "j_limit_closed_form",
    "k_limit_closed_form",
    "SignChangePoints",
    "sign_change_points",
    "log_binom",
]


class Side(enum.Enum):
    """``BOTTOM`` fixes the rank k from below; ``TOP`` fixes it from above (rank n-k+1)."""

    BOTTOM = "bottom"
    TOP = "top"

    @classmethod
    def parse(cls, value: "Side | str") -> "Side":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"side must be 'bottom' or 'top', got {value!r}") from None

    def __str__(self) -> str:
        return self.value


def _check_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


def _check_kn(k, n) -> tuple[int, int]:
    k = _check_int(k, "k")
    n = _check_int(n, "n")
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    return k, n


def log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class OrderStatQuery:
    dist: Distribution
    k: int
    n: int
    side: Side = Side.BOTTOM

    def __post_init__(self):
        k, n = _check_kn(self.k, self.n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "side", Side.parse(self.side))

    @property
    def rank(self) -> int:
        """Rank from below: k for BOTTOM, n-k+1 for TOP."""
        return self.k if self.side is Side.BOTTOM else self.n - self.k + 1

    def expectation(self) -> float:
        return expected_order_stat(self.dist, self.k, self.n, self.side)


@dataclass(frozen=True)
class MomentExistence:
    exists: bool
    reason: str


def moment_existence(dist: Distribution, r: int, n: int) -> MomentExistence:
    """Whether ``mu_{r:n}`` (rank r counted from below) is finite.

    Only the Pareto families have a divergent tail among the built-ins.  Near
    the heavy tail the integrand behaves like a power of the distance to the
    tail end, and the expectation exists iff that power exceeds -1.
    """
    r, n = _check_kn(r, n)
    if isinstance(dist, Pareto):
        ok = n - r + 1 > 1.0 / dist.v
        why = f"Pareto upper tail needs n-r+1 > 1/v: {n - r + 1} vs {1.0 / dist.v:.6g}"
        return MomentExistence(ok, why)
    if isinstance(dist, NegatedPareto):
        ok = r > 1.0 / dist.v
        why = f"negated Pareto lower tail needs r > 1/v: {r} vs {1.0 / dist.v:.6g}"
        return MomentExistence(ok, why)
    return MomentExistence(True, f"{dist.family} has all order-statistic moments")


def _require(dist: Distribution, r: int, n: int) -> None:
    me = moment_existence(dist, r, n)
    if not me.exists:
        raise NonexistentMoment(f"mu_{{{r}:{n}}} does not exist for {dist.spec()}: {me.reason}")


def _log_weight(u, c, a: int, b: int, log_coef: float):
    """log of ``coef * u**a * c**b`` (a, b >= 0)."""
    out = np.full(np.shape(u), log_coef)
    if a:
        out = out + a * np.log(u)
    if b:
        out = out + b * np.log(c)
    return out


def _dx_integrand(dist: Distribution, a: int, b: int, log_coef: float, bracket=None):
    """Integrand of ``coef * int F^a Fbar^b [bracket] dx`` in quantile space."""

    def f(u, c):
        w = np.exp(_log_weight(u, c, a, b, log_coef))
        if bracket is not None:
            w = w * bracket(u, c)
        dens = dist.density_quantile(u, c)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = w / dens
        return np.where(w == 0.0, 0.0, out)

    return f


@functools.lru_cache(maxsize=65536)
def _mu(dist: Distribution, r: int, n: int) -> float:
    log_coef = log_binom(n, r - 1) + math.log(n - r + 1)  # n! / ((r-1)! (n-r)!)

    def f(u, c):
        w = np.exp(_log_weight(u, c, r - 1, n - r, log_coef))
        return np.where(w == 0.0, 0.0, w * dist.quantile_pair(u, c))

    return integrate_unit(f, breaks=beta_breaks(r, n - r + 1)).value


def expected_order_stat(dist: Distribution, k: int, n: int, side: Side | str = Side.BOTTOM) -> float:
    """Expected k-th bottom (``mu_{k:n}``) or k-th top (``mu_{n-k+1:n}``) order statistic."""
    q = OrderStatQuery(dist, k, n, Side.parse(side))
    _require(dist, q.rank, q.n)
    return _mu(dist, q.rank, q.n)


def pareto_closed_form(a: float, v: float, k: int, n: int) -> float:
    """Exact ``mu_{k:n} = a n! G(n-k+1-1/v) / ((n-k)! G(n+1-1/v))`` for Pareto(a, v).

    The Gamma ratio telescopes to ``prod_{j=n-k+1}^{n} j v / (j v - 1)``, which
    is evaluated directly for moderate k (a few roundings in total) and
    through log-gamma beyond that.
    """
    k, n = _check_kn(k, n)
    if not (a > 0 and v > 0 and math.isfinite(a) and math.isfinite(v)):
        raise DomainError("Pareto needs finite a > 0 and v > 0")
    if not n - k + 1 > 1.0 / v:
        raise NonexistentMoment(f"Pareto mu_{{{k}:{n}}} diverges: need n-k+1 > 1/v")
    if k <= _PARETO_PRODUCT_MAX:
        value = a
        for j in range(n - k + 1, n + 1):
            value *= j * v / (j * v - 1.0)
        return value
    log_val = (
        math.lgamma(n + 1)
        + math.lgamma(n - k - 1.0 / v + 1.0)
        - math.lgamma(n - k + 1)
        - math.lgamma(n - 1.0 / v + 1.0)
    )
    return a * math.exp(log_val)


_PARETO_PRODUCT_MAX = 4096


def bottom_gap(dist: Distribution, k: int, n: int) -> float:
    """``mu_{k:n} - mu_{k:n+1} = C(n, k-1) int F^k Fbar^(n-k+1) dx``."""
    k, n = _check_kn(k, n)
    _require(dist, k, n)
    _require(dist, k, n + 1)
    f = _dx_integrand(dist, k, n - k + 1, log_binom(n, k - 1))
    return integrate_unit(f, breaks=beta_breaks(k + 1, n - k + 2)).value


def top_gap(dist: Distribution, k: int, n: int) -> float:
    """``mu_{n-k+1:n} - mu_{n-k:n-1} = C(n-1, n-k) int F^(n-k) Fbar^k dx`` (needs n > k)."""
    k, n = _check_kn(k, n)
    if n == k:
        raise DomainError("top gap needs n > k so that mu_{n-k:n-1} is defined")
    _require(dist, n - k + 1, n)
    _require(dist, n - k, n - 1)
    f = _dx_integrand(dist, n - k, k, log_binom(n - 1, n - k))
    return integrate_unit(f, breaks=beta_breaks(n - k + 1, k + 1)).value


def bottom_curvature_kernel(k: int, n: int, u, c):
    """``u^k c^(n-k+1) [1 - (n+1)/(n-k+2) c]``: changes sign at ``u = (k-1)/(n+1)``."""
    return u**k * c ** (n - k + 1) * (1.0 - (n + 1) / (n - k + 2) * c)


def top_curvature_kernel(k: int, n: int, u, c):
    """``u^(n-k) c^k [n/(n-k+1) u - 1]``: changes sign at ``u = (n-k+1)/n``."""
    return u ** (n - k) * c**k * (n / (n - k + 1) * u - 1.0)


def bottom_second_difference(dist: Distribution, k: int, n: int) -> float:
    """``Delta_{k:n} - Delta_{k:n+1}`` as one integral; >= 0 means convex at n+1."""
    k, n = _check_kn(k, n)
    for m in (n, n + 1, n + 2):
        _require(dist, k, m)
    ratio = (n + 1) / (n - k + 2)
    f = _dx_integrand(dist, k, n - k + 1, log_binom(n, k - 1), lambda u, c: 1.0 - ratio * c)
    breaks = beta_breaks(k + 1, n - k + 2) + [((k - 1) / (n + 1), (n - k + 2) / (n + 1))]
    return integrate_unit(f, breaks=[p for p in breaks if 0 < p[0] < 1]).value


def top_second_difference(dist: Distribution, k: int, n: int) -> float:
    """``delta_{k:n+1} - delta_{k:n}`` as one integral; <= 0 means concave at n (needs n > k)."""
    k, n = _check_kn(k, n)
    if n == k:
        raise DomainError("top second difference needs n > k")
    for m in (n - 1, n, n + 1):
        _require(dist, m - k + 1, m)
    ratio = n / (n - k + 1)
    f = _dx_integrand(dist, n - k, k, log_binom(n - 1, n - k), lambda u, c: ratio * u - 1.0)
    breaks = beta_breaks(n - k + 1, k + 1) + [((n - k + 1) / n, (k - 1) / n)]
    return integrate_unit(f, breaks=[p for p in breaks if 0 < p[0] < 1]).value


def _prob_pair(dist: Distribution, t: float) -> tuple[float, float]:
    if t == -math.inf:
        return 0.0, 1.0
    if t == math.inf:
        return 1.0, 0.0
    return float(dist.cdf(t)), float(dist.sf(t))


def j_integral(dist: Distribution, k: int, n: int, t: float = -math.inf) -> float:
    """``J(t) = int_t^inf F^(k-1) Fbar^(n-k+1) [1 - (n+1)/(n-k+2) Fbar] f dx``.

    After ``u = F(x)`` this is a polynomial integral over ``[F(t), 1]``; at
    ``t = -inf`` it no longer depends on the distribution.
    """
    k, n = _check_kn(k, n)
    lo, lo_c = _prob_pair(dist, t)
    ratio = (n + 1) / (n - k + 2)

    def f(u, c):
        return u ** (k - 1) * c ** (n - k + 1) * (1.0 - ratio * c)

    return integrate_unit(f, lo, 1.0, lo_c=lo_c, hi_c=0.0, breaks=beta_breaks(k, n - k + 2)).value


def k_integral(dist: Distribution, k: int, n: int, t: float = math.inf) -> float:
    """``K(t) = int_-inf^t F^(n-k) Fbar^(k-1) [n/(n-k+1) F - 1] f dx`` over ``u in [0, F(t)]``."""
    k, n = _check_kn(k, n)
    hi, hi_c = _prob_pair(dist, t)
    ratio = n / (n - k + 1)

    def f(u, c):
        return u ** (n - k) * c ** (k - 1) * (ratio * u - 1.0)

    return integrate_unit(f, 0.0, hi, lo_c=1.0, hi_c=hi_c, breaks=beta_breaks(n - k + 1, k)).value


def j_limit_closed_form(k: int, n: int) -> float:
    """``J(-inf) = (k-1)! (n-k+1)! / (n+2)!``."""
    k, n = _check_kn(k, n)
    return math.exp(math.lgamma(k) + math.lgamma(n - k + 2) - math.lgamma(n + 3))


def k_limit_closed_form(k: int, n: int) -> float:
    """``K(+inf) = -(n-k)! (k-1)! / (n+1)!``.

    The Beta-integral evaluation gives ``n B(n-k+2, k)/(n-k+1) - B(n-k+1, k)``,
    which reduces to this; the denominator is ``(n+1)!``, not ``(n+2)!``.
    """
    k, n = _check_kn(k, n)
    return -math.exp(math.lgamma(n - k + 1) + math.lgamma(k) - math.lgamma(n + 2))


class SignChangePoints(NamedTuple):
    x_star: float
    x_dagger: float


def sign_change_points(dist: Distribution, k: int, n: int) -> SignChangePoints:
    """Points where the curvature integrands change sign.

    ``F(x_star) = (k-1)/(n+1)`` and ``F(x_dagger) = (n-k+1)/n``.  Probabilities
    of 0 or 1 map to the support endpoints (possibly infinite).
    """
    k, n = _check_kn(k, n)
    lo, hi = dist.support
    x_star = lo if k == 1 else float(dist.quantile((k - 1) / (n + 1)))
    if k == 1:
        x_dagger = hi
    else:
        x_dagger = float(dist.quantile_pair(np.array([(n - k + 1) / n]), np.array([(k - 1) / n]))[0])
    return SignChangePoints(x_star, x_dagger)
