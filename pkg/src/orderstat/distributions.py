"""Parametric continuous distributions and hazard-rate classification.

Every family exposes the same vectorized surface: ``cdf``, ``sf`` (reliability
``1 - F``), ``pdf``, ``quantile`` and ``isf`` (inverse survival).  ``isf`` is
what lets the quadrature and the Monte-Carlo sampler reach deep into an upper
tail without losing the complement ``1 - u`` to cancellation.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "Distribution",
    "Uniform",
    "Exponential",
    "Normal",
    "Weibull",
    "Gamma",
    "Gumbel",
    "Pareto",
    "NegatedPareto",
    "Monotone",
    "MonotonicityVerdict",
    "hazard",
    "reverse_hazard",
    "classify",
    "parse_distribution",
    "FAMILIES",
]


def _scalar_or_array(x: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(x)
    return x


def _check_prob(p, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError(f"{name} must lie in the open interval (0, 1)")
    return p


def _as_floats(obj) -> None:
    for f in dataclasses.fields(obj):
        object.__setattr__(obj, f.name, float(getattr(obj, f.name)))


def _positive(value: float, name: str) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


class Distribution(ABC):
    """A continuous distribution on the real line.

    Subclasses are frozen dataclasses whose fields are the family parameters,
    in the order used by the ``family:key=value`` spec grammar.
    """

    family: ClassVar[str]

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]:
        """Closure of the support, endpoints possibly infinite."""

    def cdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        return _scalar_or_array(self._cdf(x_arr), x)

    def sf(self, x):
        x_arr = np.asarray(x, dtype=float)
        return _scalar_or_array(self._sf(x_arr), x)

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        return _scalar_or_array(self._pdf(x_arr), x)

    def quantile(self, u):
        """Inverse CDF on (0, 1); raises ``DomainError`` outside it."""
        u_arr = _check_prob(u, "u")
        return _scalar_or_array(self._ppf(u_arr), u)

    def isf(self, s):
        """Inverse survival function: the x with ``sf(x) == s``."""
        s_arr = _check_prob(s, "s")
        return _scalar_or_array(self._isf(s_arr), s)

    def quantile_pair(self, u: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Quantile at probability ``u`` whose complement ``c = 1 - u`` is known exactly.

        Uses the lower-tail inverse for ``u <= 1/2`` and the upper-tail inverse
        otherwise.  No domain checks: callers pass interior points.
        """
        u = np.asarray(u, dtype=float)
        c = np.asarray(c, dtype=float)
        lower = u <= 0.5
        out = np.empty(np.broadcast(u, c).shape)
        if np.any(lower):
            out[lower] = self._ppf(u[lower])
        if np.any(~lower):
            out[~lower] = self._isf(c[~lower])
        return out

    def density_quantile(self, u: np.ndarray, c: np.ndarray) -> np.ndarray:
        """``f(Q(u))``; its reciprocal is ``dQ/du``."""
        return self._pdf(self.quantile_pair(u, c))

    def spec(self) -> str:
        params = ",".join(f"{f.name}={getattr(self, f.name)!r}" for f in dataclasses.fields(self))
        return f"{self.family}:{params}"

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _sf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _pdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _ppf(self, u: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _isf(self, s: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Uniform(Distribution):
    lo: float = 0.0
    hi: float = 1.0

    family: ClassVar[str] = "uniform"

    def __post_init__(self):
        _as_floats(self)
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise DomainError(f"uniform requires finite lo < hi, got lo={self.lo}, hi={self.hi}")

    @property
    def support(self):
        return (self.lo, self.hi)

    def _cdf(self, x):
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def _sf(self, x):
        return np.clip((self.hi - x) / (self.hi - self.lo), 0.0, 1.0)

    def _pdf(self, x):
        return np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)

    def _ppf(self, u):
        return self.lo + u * (self.hi - self.lo)

    def _isf(self, s):
        return self.hi - s * (self.hi - self.lo)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float = 1.0

    family: ClassVar[str] = "exponential"

    def __post_init__(self):
        _as_floats(self)
        _positive(self.rate, "rate")

    @property
    def support(self):
        return (0.0, math.inf)

    def _cdf(self, x):
        return np.where(x > 0.0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _sf(self, x):
        return np.exp(-self.rate * np.maximum(x, 0.0))

    def _pdf(self, x):
        return np.where(x >= 0.0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _ppf(self, u):
        return -np.log1p(-u) / self.rate

    def _isf(self, s):
        return -np.log(s) / self.rate


@dataclass(frozen=True)
class Normal(Distribution):
    mean: float = 0.0
    stddev: float = 1.0

    family: ClassVar[str] = "normal"

    def __post_init__(self):
        _as_floats(self)
        if not math.isfinite(self.mean):
            raise DomainError("mean must be finite")
        _positive(self.stddev, "stddev")

    @property
    def support(self):
        return (-math.inf, math.inf)

    def _z(self, x):
        return (x - self.mean) / self.stddev

    def _cdf(self, x):
        return special.ndtr(self._z(x))

    def _sf(self, x):
        return special.ndtr(-self._z(x))

    def _pdf(self, x):
        z = self._z(x)
        return np.exp(-0.5 * z * z) / (self.stddev * math.sqrt(2.0 * math.pi))

    def _ppf(self, u):
        return self.mean + self.stddev * special.ndtri(u)

    def _isf(self, s):
        return self.mean - self.stddev * special.ndtri(s)


@dataclass(frozen=True)
class Weibull(Distribution):
    shape: float
    scale: float = 1.0

    family: ClassVar[str] = "weibull"

    def __post_init__(self):
        _as_floats(self)
        _positive(self.shape, "shape")
        _positive(self.scale, "scale")

    @property
    def support(self):
        return (0.0, math.inf)

    def _t(self, x):
        return (np.maximum(x, 0.0) / self.scale) ** self.shape

    def _cdf(self, x):
        return -np.expm1(-self._t(x))

    def _sf(self, x):
        return np.exp(-self._t(x))

    def _pdf(self, x):
        z = np.maximum(x, 0.0) / self.scale
        with np.errstate(divide="ignore"):
            dens = (self.shape / self.scale) * z ** (self.shape - 1.0) * np.exp(-(z**self.shape))
        return np.where(x >= 0.0, dens, 0.0)

    def _ppf(self, u):
        return self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)

    def _isf(self, s):
        return self.scale * (-np.log(s)) ** (1.0 / self.shape)


@dataclass(frozen=True)
class Gamma(Distribution):
    shape: float
    scale: float = 1.0

    family: ClassVar[str] = "gamma"

    def __post_init__(self):
        _as_floats(self)
        _positive(self.shape, "shape")
        _positive(self.scale, "scale")

    @property
    def support(self):
        return (0.0, math.inf)

    def _cdf(self, x):
        return special.gammainc(self.shape, np.maximum(x, 0.0) / self.scale)

    def _sf(self, x):
        return special.gammaincc(self.shape, np.maximum(x, 0.0) / self.scale)

    def _pdf(self, x):
        z = np.maximum(x, 0.0) / self.scale
        with np.errstate(divide="ignore"):
            logf = special.xlogy(self.shape - 1.0, z) - z - special.gammaln(self.shape)
        return np.where(x >= 0.0, np.exp(logf) / self.scale, 0.0)

    def _ppf(self, u):
        return self.scale * special.gammaincinv(self.shape, u)

    def _isf(self, s):
        return self.scale * special.gammainccinv(self.shape, s)


@dataclass(frozen=True)
class Gumbel(Distribution):
    """Gumbel law of the maximum: ``F(x) = exp(-exp(-(x - location) / scale))``."""

    location: float = 0.0
    scale: float = 1.0

    family: ClassVar[str] = "gumbel"

    def __post_init__(self):
        _as_floats(self)
        if not math.isfinite(self.location):
            raise DomainError("location must be finite")
        _positive(self.scale, "scale")

    @property
    def support(self):
        return (-math.inf, math.inf)

    def _e(self, x):
        # overflows to inf far left, where F and f are then exactly 0
        with np.errstate(over="ignore"):
            return np.exp(-(x - self.location) / self.scale)

    def _cdf(self, x):
        return np.exp(-self._e(x))

    def _sf(self, x):
        return -np.expm1(-self._e(x))

    def _pdf(self, x):
        e = self._e(x)
        with np.errstate(over="ignore", invalid="ignore"):
            dens = e * np.exp(-e) / self.scale
        return np.nan_to_num(dens, nan=0.0)

    def _ppf(self, u):
        return self.location - self.scale * np.log(-np.log(u))

    def _isf(self, s):
        return self.location - self.scale * np.log(-np.log1p(-s))


@dataclass(frozen=True)
class Pareto(Distribution):
    """Pareto with scale ``a`` and tail index ``v``: ``F(x) = 1 - (a/x)^v`` on ``[a, inf)``."""

    a: float = 1.0
    v: float = 1.0

    family: ClassVar[str] = "pareto"

    def __post_init__(self):
        _as_floats(self)
        _positive(self.a, "a")
        _positive(self.v, "v")

    @property
    def support(self):
        return (self.a, math.inf)

    def _tail(self, x):
        # (a/x)^v, clamped to 1 below the support; x = inf gives log 0 = -inf
        with np.errstate(divide="ignore"):
            return np.exp(self.v * np.minimum(np.log(self.a / np.maximum(x, self.a)), 0.0))

    def _cdf(self, x):
        with np.errstate(divide="ignore"):
            return np.where(x > self.a, -np.expm1(self.v * np.log(self.a / np.maximum(x, self.a))), 0.0)

    def _sf(self, x):
        return self._tail(x)

    def _pdf(self, x):
        xa = np.maximum(x, self.a)
        dens = self.v / self.a * (self.a / xa) ** (self.v + 1.0)
        return np.where(x >= self.a, dens, 0.0)

    def _ppf(self, u):
        return self.a * np.exp(-np.log1p(-u) / self.v)

    def _isf(self, s):
        with np.errstate(over="ignore"):
            return self.a * s ** (-1.0 / self.v)


@dataclass(frozen=True)
class NegatedPareto(Distribution):
    """Law of ``-X`` for ``X ~ Pareto(a, v)``; support ``(-inf, -a]``."""

    a: float = 1.0
    v: float = 1.0

    family: ClassVar[str] = "negatedpareto"

    def __post_init__(self):
        _as_floats(self)
        _positive(self.a, "a")
        _positive(self.v, "v")

    @property
    def support(self):
        return (-math.inf, -self.a)

    def _mirror(self) -> Pareto:
        return Pareto(self.a, self.v)

    def _cdf(self, x):
        return self._mirror()._sf(-x)

    def _sf(self, x):
        return self._mirror()._cdf(-x)

    def _pdf(self, x):
        return self._mirror()._pdf(-x)

    def _ppf(self, u):
        return -self._mirror()._isf(u)

    def _isf(self, s):
        return -self._mirror()._ppf(s)


FAMILIES: dict[str, type[Distribution]] = {
    cls.family: cls
    for cls in (Uniform, Exponential, Normal, Weibull, Gamma, Gumbel, Pareto, NegatedPareto)
}
_ALIASES = {"negpareto": "negatedpareto", "negated_pareto": "negatedpareto", "exp": "exponential"}


def parse_distribution(text: str) -> Distribution:
    """Parse ``family:key=value,key=value`` (case-insensitive).

    >>> parse_distribution("Pareto:a=1,V=0.75")
    Pareto(a=1.0, v=0.75)
    """
    spec = text.strip().lower()
    name, _, rest = spec.partition(":")
    name = _ALIASES.get(name.strip(), name.strip())
    if name not in FAMILIES:
        raise DomainError(f"unknown distribution family {name!r}; expected one of {sorted(FAMILIES)}")
    cls = FAMILIES[name]
    allowed = {f.name for f in dataclasses.fields(cls)}
    kwargs: dict[str, float] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise DomainError(f"expected key=value, got {item!r}")
        if key not in allowed:
            raise DomainError(f"unknown parameter {key!r} for {name}; allowed: {sorted(allowed)}")
        if key in kwargs:
            raise DomainError(f"duplicate parameter {key!r}")
        try:
            kwargs[key] = float(value)
        except ValueError:
            raise DomainError(f"parameter {key!r} is not a number: {value!r}") from None
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise DomainError(f"missing parameters for {name}: {exc}") from None


def hazard(dist: Distribution, x):
    """Hazard rate ``f(x) / (1 - F(x))``."""
    x_arr = np.asarray(x, dtype=float)
    denom = dist._sf(x_arr)
    if np.any(denom <= 0.0):
        raise DomainError("hazard undefined where the reliability function is 0")
    return _scalar_or_array(dist._pdf(x_arr) / denom, x)


def reverse_hazard(dist: Distribution, x):
    """Reverse hazard rate ``f(x) / F(x)``."""
    x_arr = np.asarray(x, dtype=float)
    denom = dist._cdf(x_arr)
    if np.any(denom <= 0.0):
        raise DomainError("reverse hazard undefined where the CDF is 0")
    return _scalar_or_array(dist._pdf(x_arr) / denom, x)


class Monotone(enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    CONSTANT = "Constant"
    NON_MONOTONE = "NonMonotone"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MonotonicityVerdict:
    mhr: Monotone
    mrhr: Monotone
    grid_size: int
    u_margin: float

    @property
    def is_mhr(self) -> bool:
        """Hazard nondecreasing."""
        return self.mhr in (Monotone.INCREASING, Monotone.CONSTANT)

    @property
    def is_mrhr(self) -> bool:
        """Reverse hazard nonincreasing."""
        return self.mrhr in (Monotone.DECREASING, Monotone.CONSTANT)


_CONSTANT_TOL = 1e-9


def _trend(values: np.ndarray) -> Monotone:
    ratios = values[1:] / values[:-1]
    if np.all(np.abs(ratios - 1.0) <= _CONSTANT_TOL):
        return Monotone.CONSTANT
    if np.all(ratios >= 1.0 - _CONSTANT_TOL):
        return Monotone.INCREASING
    if np.all(ratios <= 1.0 + _CONSTANT_TOL):
        return Monotone.DECREASING
    return Monotone.NON_MONOTONE


def classify(dist: Distribution, grid_size: int = 512, u_margin: float = 1e-4) -> MonotonicityVerdict:
    """Scan hazard and reverse hazard on an equally spaced quantile grid.

    The grid covers ``u`` in ``[u_margin, 1 - u_margin]``; a family is called
    Constant only if every consecutive ratio is within 1e-9 of 1.
    """
    if grid_size < 16:
        raise DomainError("grid_size must be at least 16")
    if not 0.0 < u_margin < 0.5:
        raise DomainError("u_margin must lie in (0, 0.5)")
    u = np.linspace(u_margin, 1.0 - u_margin, grid_size)
    c = np.linspace(1.0 - u_margin, u_margin, grid_size)
    x = dist.quantile_pair(u, c)
    h = np.asarray(hazard(dist, x))
    rh = np.asarray(reverse_hazard(dist, x))
    return MonotonicityVerdict(_trend(h), _trend(rh), grid_size, u_margin)
