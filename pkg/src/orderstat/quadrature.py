"""Adaptive Gauss-Kronrod quadrature on finite intervals and on the unit interval.

The rule is the 7-point Gauss / 15-point Kronrod pair (open: no node sits on a
panel endpoint), so integrable endpoint singularities are never evaluated.
Refinement is by bisection of the panels carrying the bulk of the error
estimate, evaluated panel-batch-wise with numpy.

``integrate_unit`` handles integrals over sub-intervals of [0, 1] whose
integrand is written in terms of the pair ``(u, 1 - u)``.  The half above 1/2
is integrated in the complement variable ``s = 1 - u`` so that panels can
shrink toward ``u = 1`` below double-precision spacing of 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import NumericalFailure

__all__ = ["QuadResult", "integrate", "integrate_unit", "beta_breaks", "ABS_TOL", "REL_TOL", "MAX_PANELS"]

ABS_TOL = 1e-12
REL_TOL = 1e-10
MAX_PANELS = 2**16

_EPS = np.finfo(float).eps

# Kronrod abscissae on [0, 1); the Gauss nodes are the odd-indexed ones.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric 15-point layout on [-1, 1].
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int


def _rule(func: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray):
    """Apply GK15 on each panel [a_i, b_i]; return (value, error, roundoff floor)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NumericalFailure(f"integrand is not finite at x={bad!r}")
    resk = fx @ _KW
    resg = fx @ _GW
    reskh = 0.5 * resk
    resabs = np.abs(fx) @ _KW * np.abs(half)
    resasc = np.abs(fx - reskh[:, None]) @ _KW * np.abs(half)
    err = np.abs((resk - resg) * half)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0.0) & (err != 0.0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return resk * half, err, floor


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    max_panels: int = MAX_PANELS,
    breaks=(),
) -> QuadResult:
    """Integrate a vectorized ``func`` over the finite interval [a, b].

    ``breaks`` are interior points used to seed the initial panels; pass them
    wherever the integrand has a feature narrower than the interval, which a
    single 15-point panel could otherwise step over.

    Converges when the summed panel error estimate is at most
    ``max(abs_tol, rel_tol * |value|)``.  Raises ``NumericalFailure`` when the
    panel budget is exhausted first.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integration limits must be finite")
    if a == b:
        return QuadResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    edges = np.unique(np.concatenate([[a, b], [p for p in breaks if a < p < b]]))
    lo = edges[:-1]
    hi = edges[1:]
    val, err, floor = _rule(func, lo, hi)
    # Panels too narrow to bisect are frozen: their contribution is kept but
    # no longer refined.
    frozen_val = 0.0
    frozen_err = 0.0
    frozen_floor = 0.0
    while True:
        total = float(val.sum()) + frozen_val
        total_err = float(err.sum()) + frozen_err
        tol = max(abs_tol, rel_tol * abs(total))
        if total_err <= tol:
            return QuadResult(sign * total, total_err, lo.size)
        # Error already at the roundoff floor cannot be reduced further.
        if total_err - float(floor.sum()) - frozen_floor <= 0.0 and total_err <= 100.0 * tol:
            return QuadResult(sign * total, total_err, lo.size)
        if lo.size >= max_panels:
            raise NumericalFailure(
                f"no convergence after {lo.size} panels", sign * total, total_err
            )

        order = np.argsort(err)[::-1]
        excess = err[order]
        cum = np.cumsum(excess)
        take = int(np.searchsorted(cum, 0.5 * cum[-1])) + 1
        take = min(take, max_panels - lo.size) or 1
        chosen = order[:take]

        mid = 0.5 * (lo[chosen] + hi[chosen])
        splittable = (mid > lo[chosen]) & (mid < hi[chosen]) & (err[chosen] > floor[chosen])
        if not np.any(splittable):
            if total_err - float(floor.sum()) - frozen_floor <= tol:
                return QuadResult(sign * total, total_err, lo.size)
            raise NumericalFailure("panels cannot be refined further", sign * total, total_err)

        stuck = chosen[~splittable]
        if stuck.size:
            frozen_val += float(val[stuck].sum())
            frozen_err += float(err[stuck].sum())
            frozen_floor += float(floor[stuck].sum())
        chosen = chosen[splittable]
        mid = mid[splittable]

        keep = np.ones(lo.size, dtype=bool)
        keep[order[:take]] = False
        new_lo = np.concatenate([lo[chosen], mid])
        new_hi = np.concatenate([mid, hi[chosen]])
        nv, ne, nf = _rule(func, new_lo, new_hi)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])


def integrate_unit(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lo: float = 0.0,
    hi: float = 1.0,
    *,
    lo_c: float | None = None,
    hi_c: float | None = None,
    abs_tol: float = ABS_TOL,
    rel_tol: float = REL_TOL,
    max_panels: int = MAX_PANELS,
    breaks=(),
) -> QuadResult:
    """Integrate ``func(u, 1 - u)`` over [lo, hi] within [0, 1].

    ``breaks`` is an iterable of ``(u, 1 - u)`` pairs seeding the panels.

    ``lo_c``/``hi_c`` optionally give ``1 - lo``/``1 - hi`` computed without
    cancellation (e.g. a survival function value), which matters when a limit
    sits closer to 1 than double spacing resolves.
    """
    if lo_c is None:
        lo_c = 1.0 - lo
    if hi_c is None:
        hi_c = 1.0 - hi
    if not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise ValueError(f"limits must lie in [0, 1], got [{lo}, {hi}]")
    if hi < lo or (hi == lo and hi_c >= lo_c):
        return QuadResult(0.0, 0.0, 0)

    value = 0.0
    error = 0.0
    panels = 0
    kw = dict(abs_tol=0.5 * abs_tol, rel_tol=rel_tol, max_panels=max_panels)
    breaks = list(breaks)
    if lo < 0.5:
        ub = [u for u, _ in breaks if u < 0.5]
        res = integrate(lambda u: func(u, 1.0 - u), lo, min(hi, 0.5), breaks=ub, **kw)
        value += res.value
        error += res.error
        panels += res.panels
    if hi_c < 0.5:
        cb = [c for u, c in breaks if u >= 0.5]
        res = integrate(lambda s: func(1.0 - s, s), hi_c, min(lo_c, 0.5), breaks=cb, **kw)
        value += res.value
        error += res.error
        panels += res.panels
    return QuadResult(value, error, panels)


_BREAK_PROBS = np.array([1e-16, 1e-13, 1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 0.01, 0.05, 0.2, 0.5])


def beta_breaks(a: float, b: float) -> list[tuple[float, float]]:
    """Quantile pairs ``(u, 1 - u)`` of a Beta(a, b) law, for seeding panels.

    Integrands weighted by ``u**(a-1) * (1-u)**(b-1)`` concentrate where this
    law does; for large ``a + b`` that is a spike of width ``O((a+b)**-0.5)``.
    """
    u = special.betaincinv(a, b, _BREAK_PROBS)
    c = special.betainccinv(b, a, _BREAK_PROBS)
    u_hi = special.betaincinv(b, a, _BREAK_PROBS)
    c_hi = special.betainccinv(a, b, _BREAK_PROBS)
    pairs = [(float(x), float(y)) for x, y in zip(u, c)]
    pairs += [(float(y), float(x)) for x, y in zip(u_hi, c_hi)]
    return sorted((x, y) for x, y in pairs if 0.0 < x < 1.0 and 0.0 < y < 1.0)
