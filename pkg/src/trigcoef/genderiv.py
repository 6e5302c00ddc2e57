"""Numerical estimators for generalized derivatives.

Every ``h -> 0`` limit runs over a geometric :class:`LimitSchedule`. The
difference quotients are tabulated, optionally Richardson-extrapolated one
level, and the trend of the last few values decides convergence, so an
oscillating quotient (``cos(1/h)``) is reported as non-convergent instead of
being averaged into a number.

Estimators:

========================  ==================================================
``sym_derivative``        (G(x+h) - G(x-h)) / 2h
``schwarz_derivative``    (G(x+h) + G(x-h) - 2G(x)) / h^2
``smoothness_check``      (G(x+h) + G(x-h) - 2G(x)) / h
``borel_derivative``      (1/h) int_0^h (G(x+t) - G(x)) / t dt
``sym_borel_derivative``  (1/h) int_0^h (G(x+t) - G(x-t)) / 2t dt
``cesaro_derivative``     (2/h^2) int_0^h (G(x+t) - G(x)) dt
``sym_cesaro_derivative`` (1/h^2) int_0^h (G(x+u) - G(x-u)) du
``approx_sym_derivative`` symmetric quotient restricted to a dense set
========================  ==================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DensityTooLow, EvaluationFailure, EvenPartNeedsCenter, QuadratureFailure
from .handles import EPS, FunctionHandle
from .quadrature import integrate_abs


@dataclass(frozen=True)
class LimitSchedule:
    """Step sizes ``h0 * ratio**i`` for ``i < steps`` plus extrapolation settings.

    ``richardson_order`` is the leading error order of symmetric quotients
    (even); ``None`` disables extrapolation. One-sided quotients, whose error
    expansions contain every power of h, eliminate orders 1 and 2 instead
    (1 and 3 for ``Delta^2 G / h``) whenever extrapolation is enabled.
    """

    h0: float = 0.1
    ratio: float = 0.5
    steps: int = 8
    richardson_order: int | None = 2
    abs_tol: float = 1e-9
    rel_tol: float = 1e-7

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValueError("h0 must be positive")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.steps < 3:
            raise ValueError("steps must be >= 3")
        if self.richardson_order is not None and (self.richardson_order < 2 or self.richardson_order % 2):
            raise ValueError("richardson_order must be an even integer >= 2")
        if not self.h0 * self.ratio ** (self.steps - 1) > 0:
            raise ValueError("smallest step underflows")

    def hs(self) -> np.ndarray:
        return self.h0 * self.ratio ** np.arange(self.steps)

    def capped(self, h_max: float) -> "LimitSchedule":
        """Same schedule started at ``min(h0, h_max)``."""
        if h_max >= self.h0:
            return self
        return LimitSchedule(h_max, self.ratio, self.steps, self.richardson_order, self.abs_tol, self.rel_tol)


DEFAULT_SCHEDULE = LimitSchedule()


@dataclass
class DerivativeEstimate:
    value: float
    error_estimate: float
    converged: bool
    trace: list[tuple[float, float]]
    extrapolated: list[float] = field(default_factory=list)
    failures: list[tuple[float, str]] = field(default_factory=list)
    density_profile: list[tuple[float, float]] = field(default_factory=list)

    def within(self, target: float, slack: float = 1.0) -> bool:
        return abs(self.value - target) <= slack * self.error_estimate


Quotient = Callable[[float], "tuple[float, float]"]


def estimate_limit(
    quotient: Quotient,
    hs,
    orders: tuple[int, ...] = (),
    abs_tol: float = 1e-9,
    rel_tol: float = 1e-7,
    skip: Callable[[float], bool] | None = None,
) -> DerivativeEstimate:
    """Tabulate ``quotient(h) -> (q, noise)`` over ``hs`` and extrapolate.

    ``noise`` bounds the rounding/evaluation error of ``q``. One Richardson
    level is applied per entry of ``orders`` (the successive error orders
    eliminated), as long as at least three values remain. Points where
    ``skip(h)`` is true are left out silently; evaluation failures are
    recorded in ``failures``. Richardson uses the actual ratio between
    consecutive retained steps.
    """
    trace: list[tuple[float, float]] = []
    noise: list[float] = []
    failures: list[tuple[float, str]] = []
    for h in hs:
        h = float(h)
        if skip is not None and skip(h):
            continue
        try:
            q, n = quotient(h)
        except (EvaluationFailure, QuadratureFailure) as exc:
            failures.append((h, str(exc)))
            continue
        trace.append((h, float(q)))
        noise.append(float(n))
    if len(trace) < 2:
        raise EvaluationFailure(f"only {len(trace)} usable step(s) in the schedule; failures: {failures}")

    h_arr = np.array([t[0] for t in trace])
    q_arr = np.array([t[1] for t in trace])
    n_arr = np.array(noise)
    v, nv = q_arr, n_arr
    for level, order in enumerate(orders):
        if len(v) < 3:
            break
        t = (h_arr[level:-1] / h_arr[level + 1 :]) ** order
        v = (t * v[1:] - v[:-1]) / (t - 1)
        nv = (t * nv[1:] + nv[:-1]) / (t - 1)

    value = float(v[-1])
    diffs = np.abs(np.diff(v))
    # differences at a few ulps of the values are rounding, not trend
    floors = nv[1:] + nv[:-1] + 8 * np.finfo(float).eps * np.maximum(np.abs(v[1:]), np.abs(v[:-1]))
    clamped = np.where(diffs <= floors, 0.0, diffs)
    error = float(diffs[-1] + nv[-1]) if len(diffs) else float(nv[-1])
    tail = clamped[-3:]
    monotone = bool(np.all(tail[1:] <= tail[:-1])) if len(tail) > 1 else True
    small = bool(len(clamped)) and clamped[-1] <= max(abs_tol, rel_tol * abs(value))
    return DerivativeEstimate(value, error, monotone and small, trace, [float(x) for x in v], failures)


def _run(quotient: Quotient, sched: LimitSchedule, one_sided: tuple[int, ...] | None = None, skip=None) -> DerivativeEstimate:
    """Symmetric quotients use the schedule's order; others pass their own."""
    if sched.richardson_order is None:
        orders: tuple[int, ...] = ()
    elif one_sided is None:
        orders = (sched.richardson_order,)
    else:
        orders = one_sided
    return estimate_limit(quotient, sched.hs(), orders, sched.abs_tol, sched.rel_tol, skip)


# ------------------------------------------------------------ pointwise parts


def even_odd_parts(G: FunctionHandle, x: float, t: float, need_even: bool = True) -> tuple[float | None, float]:
    """Increments of the even and odd parts of G at x.

    ``odd = (G(x+t) - G(x-t))/2`` and ``even = (G(x+t) + G(x-t) - 2G(x))/2``.
    With ``need_even=False`` G(x) is never evaluated and ``even`` is None.
    """
    gp, gm = G(x + t), G(x - t)
    odd = 0.5 * (gp - gm)
    if not need_even:
        return None, odd
    try:
        g0 = G(x)
    except EvaluationFailure as exc:
        raise EvenPartNeedsCenter(f"even part at x={x!r} needs G(x): {exc}", x) from exc
    return 0.5 * (gp + gm - 2.0 * g0), odd


def _delta2(G: FunctionHandle, x: float, h: float) -> tuple[float, float]:
    (gp, tp), (gm, tm), (g0, t0) = G.evaluate(x + h), G.evaluate(x - h), G.evaluate(x)
    d2 = gp + gm - 2.0 * g0
    noise = tp + tm + 2 * t0 + 4 * EPS * (abs(gp) + abs(gm) + 2 * abs(g0))
    return d2, noise


def sym_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE) -> DerivativeEstimate:
    """First symmetric derivative; G(x) itself is never evaluated."""

    def quotient(h):
        (gp, tp), (gm, tm) = G.evaluate(x + h), G.evaluate(x - h)
        return (gp - gm) / (2 * h), (tp + tm + 2 * EPS * (abs(gp) + abs(gm))) / (2 * h)

    return _run(quotient, sched)


def schwarz_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE) -> DerivativeEstimate:
    """Second symmetric (Schwarz) derivative."""

    def quotient(h):
        d2, noise = _delta2(G, x, h)
        return d2 / (h * h), noise / (h * h)

    return _run(quotient, sched)


def smoothness_check(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE) -> DerivativeEstimate:
    """Limit of ``Delta^2 G(x; h) / h``; G is smooth at x when it is 0."""

    def quotient(h):
        d2, noise = _delta2(G, x, h)
        return d2 / h, noise / h

    return _run(quotient, sched, one_sided=(1, 3))


def is_smooth(est: DerivativeEstimate, atol: float = 1e-6) -> bool:
    """Verdict for a :func:`smoothness_check` estimate."""
    return est.converged and abs(est.value) <= atol + est.error_estimate


# ----------------------------------------------------- integral-mean derivatives


def _mean_quotient(integrand: Callable[[float, float], float], noise_per_h: Callable[[float], float], quad_tol: float) -> Quotient:
    """``h -> int_0^1 integrand(h, u) du``; endpoints are never sampled."""

    def quotient(h):
        value, err = integrate_abs(lambda u: integrand(h, u), 0.0, 1.0, quad_tol)
        return value, err + noise_per_h(h)

    return quotient


def borel_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE, quad_tol: float = 1e-11) -> DerivativeEstimate:
    """Borel mean-value derivative ``(1/h) int_0^h (G(x+t) - G(x))/t dt``."""
    g0, t0 = G.evaluate(x)
    quotient = _mean_quotient(
        lambda h, u: (G(x + h * u) - g0) / (h * u),
        lambda h: 20 * (t0 + 4 * EPS * abs(g0)) / h,
        quad_tol,
    )
    return _run(quotient, sched, one_sided=(1, 2))


def sym_borel_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE, quad_tol: float = 1e-11) -> DerivativeEstimate:
    """Symmetric Borel derivative ``(1/h) int_0^h (G(x+t) - G(x-t))/2t dt``."""
    _, scale = _local_scale(G, x, sched)
    quotient = _mean_quotient(
        lambda h, u: (G(x + h * u) - G(x - h * u)) / (2 * h * u),
        lambda h: 20 * scale / h,
        quad_tol,
    )
    return _run(quotient, sched)


def cesaro_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE, quad_tol: float = 1e-11) -> DerivativeEstimate:
    """Cesàro derivative ``(2/h^2) int_0^h (G(x+t) - G(x)) dt``."""
    g0, t0 = G.evaluate(x)
    quotient = _mean_quotient(
        lambda h, u: 2.0 * (G(x + h * u) - g0) / h,
        lambda h: 4 * (t0 + 4 * EPS * abs(g0)) / h,
        quad_tol,
    )
    return _run(quotient, sched, one_sided=(1, 2))


def sym_cesaro_derivative(G: FunctionHandle, x: float, sched: LimitSchedule = DEFAULT_SCHEDULE, quad_tol: float = 1e-11) -> DerivativeEstimate:
    """Symmetric Cesàro derivative ``(1/h^2) int_0^h (G(x+u) - G(x-u)) du``."""
    _, scale = _local_scale(G, x, sched)
    quotient = _mean_quotient(
        lambda h, v: (G(x + h * v) - G(x - h * v)) / h,
        lambda h: 2 * scale / h,
        quad_tol,
    )
    return _run(quotient, sched)


def _local_scale(G: FunctionHandle, x: float, sched: LimitSchedule) -> tuple[float, float]:
    """Typical value and evaluation-noise level of G near x (G(x) not used)."""
    h = float(sched.h0)
    (gp, tp), (gm, tm) = G.evaluate(x + h), G.evaluate(x - h)
    mag = max(abs(gp), abs(gm))
    return mag, max(tp, tm) + 4 * EPS * mag


# ------------------------------------------------------------ approximate limits


@dataclass
class DensitySet:
    """A finite union of disjoint open intervals, used near ``base_point``."""

    base_point: float
    intervals: list[tuple[float, float]]

    def __post_init__(self):
        ivs = sorted((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
        for (_, h1), (l2, _) in zip(ivs, ivs[1:]):
            if l2 < h1:
                raise ValueError("intervals must be pairwise disjoint")
        self.intervals = ivs

    @classmethod
    def punctured(cls, base_point: float, radius: float, holes) -> "DensitySet":
        """``(x - radius, x + radius)`` minus closures of the given open ``holes``."""
        lo, hi = base_point - radius, base_point + radius
        cuts = sorted((max(a, lo), min(b, hi)) for a, b in holes if b > lo and a < hi)
        pieces, cur = [], lo
        for a, b in cuts:
            if a > cur:
                pieces.append((cur, a))
            cur = max(cur, b)
        if cur < hi:
            pieces.append((cur, hi))
        return cls(base_point, pieces)

    def contains(self, t: float) -> bool:
        return any(lo < t < hi for lo, hi in self.intervals)

    def density(self, h: float) -> float:
        """``|E ∩ [x-h, x+h]| / 2h``."""
        x = self.base_point
        covered = sum(max(0.0, min(hi, x + h) - max(lo, x - h)) for lo, hi in self.intervals)
        return min(1.0, covered / (2 * h))

    def profile(self, hs) -> list[tuple[float, float]]:
        return [(float(h), self.density(float(h))) for h in hs]


#: required density at the finest scheduled scale
DENSITY_THRESHOLD = 1 - 1e-2


def approx_sym_derivative(G: FunctionHandle, x: float, E: DensitySet, sched: LimitSchedule = DEFAULT_SCHEDULE) -> DerivativeEstimate:
    """Symmetric quotient taken only over ``h`` with ``x ± h`` both in E."""
    if E.base_point != x:
        raise ValueError("density set is based at a different point")
    hs = sched.hs()
    profile = E.profile(hs)
    if profile[-1][1] < DENSITY_THRESHOLD:
        raise DensityTooLow(f"density {profile[-1][1]:.4f} at h={hs[-1]:.3g} is below {DENSITY_THRESHOLD}")
    admissible = [E.contains(x + h) and E.contains(x - h) for h in hs]
    fine = admissible[len(admissible) // 2 :]
    if sum(fine) < 0.5 * len(fine):
        raise DensityTooLow(f"only {sum(fine)}/{len(fine)} fine-scale steps are admissible")

    def quotient(h):
        (gp, tp), (gm, tm) = G.evaluate(x + h), G.evaluate(x - h)
        return (gp - gm) / (2 * h), (tp + tm + 2 * EPS * (abs(gp) + abs(gm))) / (2 * h)

    est = _run(quotient, sched, skip=lambda h: not (E.contains(x + h) and E.contains(x - h)))
    est.density_profile = profile
    return est


def one_sided_quotients(G: FunctionHandle, x: float, hs) -> np.ndarray:
    """Right difference quotients ``(G(x+h) - G(x)) / h``."""
    g0 = G(x)
    return np.array([(G(x + h) - g0) / h for h in hs])


__all__ = [
    "LimitSchedule",
    "DEFAULT_SCHEDULE",
    "DerivativeEstimate",
    "DensitySet",
    "estimate_limit",
    "even_odd_parts",
    "sym_derivative",
    "schwarz_derivative",
    "smoothness_check",
    "is_smooth",
    "borel_derivative",
    "sym_borel_derivative",
    "cesaro_derivative",
    "sym_cesaro_derivative",
    "approx_sym_derivative",
    "one_sided_quotients",
]

