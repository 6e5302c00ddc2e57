"""Trigonometric series with a polynomial part.

A :class:`PolyTrigSeries` is ``c0 + c1 x + c2 x**2 + sum_k a_k cos kx + b_k sin kx``
with finitely many stored harmonics and an optional closed-form tail.
The constant term of the classical series is ``a_0/2``, stored as ``c0``.

Infinite tails are summed by repeated summation by parts (Abel's
transformation) on the complex sequence ``c_k = a_k - i b_k``::

    sum_{k>=M} c_k z^k = sum_{q<p} (-z)^q (D^q c)_M z^M / (1-z)^(q+1)
                         + (-z)^p / (1-z)^p * sum_{k>=M} (D^p c)_k z^k

with ``z = exp(ix)`` and ``(Dc)_k = c_k - c_{k+1}``. When each component of
the tail is completely monotone up to sign, ``sum |D^p c_k|`` telescopes to
``|D^(p-1) c_M|``, giving a rigorous remainder bound. With ``p = 1`` and
only monotonicity this is the classical conjugate Dirichlet kernel bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from .errors import (
    DegreeOverflow,
    InfiniteTailWithoutRule,
    NonSummableAtPoint,
    SingularWindow,
)
from .handles import EPS, FunctionHandle
from .quadrature import integrate_abs

TWO_PI = 2.0 * math.pi
_CHUNK = 1 << 18
_MAX_LEVELS = 24
_START_RATIO = 32.0


@dataclass(frozen=True)
class TailRule:
    """Closed-form generator ``k -> (a_k, b_k)`` for the harmonics past the stored ones.

    ``base`` works on float arrays, ``base_mp`` on mpmath numbers (used for
    high-order differences, which cancel catastrophically in floating point).
    ``integrations`` counts formal integrations applied on top of the base,
    and ``scale`` a constant factor. ``completely_monotone`` asserts that
    ``|a_k|`` and ``|b_k|`` are completely monotone sequences of fixed sign.
    """

    name: str
    base: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    base_mp: Callable[[object], tuple[object, object]]
    completely_monotone: bool = False
    integrations: int = 0
    scale: float = 1.0

    def coefficients(self, k) -> tuple[np.ndarray, np.ndarray]:
        k = np.asarray(k, dtype=float)
        a, b = self.base(k)
        a = np.broadcast_to(np.asarray(a, dtype=float), k.shape)
        b = np.broadcast_to(np.asarray(b, dtype=float), k.shape)
        for _ in range(self.integrations):
            a, b = -b / k, a / k
        return self.scale * a, self.scale * b

    def coefficients_mp(self, k: int):
        kk = mpmath.mpf(k)
        a, b = self.base_mp(kk)
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        for _ in range(self.integrations):
            a, b = -b / kk, a / kk
        return self.scale * a, self.scale * b

    def integrated(self) -> "TailRule":
        return replace(self, integrations=self.integrations + 1)

    def scaled(self, c: float) -> "TailRule":
        return replace(self, scale=self.scale * c)

    @property
    def label(self) -> str:
        return self.name if self.integrations == 0 else f"{self.name} {self.integrations}"


def _fatou_base(k):
    return 0.0, 1.0 / np.log(k + 1.0)


def _fatou_base_mp(k):
    return 0, 1 / mpmath.log(k + 1)


FATOU_TAIL = TailRule("fatou", _fatou_base, _fatou_base_mp, completely_monotone=True)

TAIL_PRESETS: dict[str, TailRule] = {"fatou": FATOU_TAIL}


@dataclass(frozen=True)
class PolyTrigSeries:
    """``poly(x) + sum_k a_k cos kx + b_k sin kx``.

    ``harmonics[k-1]`` holds ``(a_k, b_k)`` for ``k = 1..K_stored``; the
    tail rule, if any, generates every ``k > K_stored``.
    """

    poly: tuple[float, float, float] = (0.0, 0.0, 0.0)
    harmonics: tuple[tuple[float, float], ...] = ()
    tail_rule: TailRule | None = None
    tail_monotone_sine: bool = False

    def __post_init__(self):
        poly = tuple(float(c) for c in self.poly)
        if len(poly) != 3:
            raise ValueError("poly must hold exactly three coefficients (c0, c1, c2)")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "harmonics", tuple((float(a), float(b)) for a, b in self.harmonics))

    @classmethod
    def from_coefficients(cls, a, b, poly12=(0.0, 0.0)) -> "PolyTrigSeries":
        """Build from classical coefficients ``a_0..a_K`` and ``b_1..b_K``."""
        a = list(a)
        b = list(b)
        K = max(len(a) - 1, len(b))
        a += [0.0] * (K + 1 - len(a))
        b += [0.0] * (K - len(b))
        return cls((a[0] / 2.0, *poly12), tuple(zip(a[1:], b)))

    @property
    def K_stored(self) -> int:
        return len(self.harmonics)

    @property
    def is_finite(self) -> bool:
        return self.tail_rule is None

    @property
    def degree(self) -> int:
        """Highest stored harmonic with a nonzero coefficient (finite series)."""
        for k in range(self.K_stored, 0, -1):
            if self.harmonics[k - 1] != (0.0, 0.0):
                return k
        return 0

    @property
    def poly_degree(self) -> int:
        for d in (2, 1, 0):
            if self.poly[d] != 0.0:
                return d
        return 0

    def coefficients(self, n: int, start: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``a_k, b_k`` for ``k = start..n`` (zeros past a finite series)."""
        if start < 1:
            raise ValueError("harmonic indices start at 1; use classical() for a_0")
        k = np.arange(start, n + 1)
        a = np.zeros(k.shape)
        b = np.zeros(k.shape)
        stored = k <= self.K_stored
        if stored.any():
            h = np.asarray(self.harmonics)[k[stored] - 1]
            a[stored], b[stored] = h[:, 0], h[:, 1]
        if self.tail_rule is not None and (~stored).any():
            a[~stored], b[~stored] = self.tail_rule.coefficients(k[~stored])
        return a, b

    def classical(self, K: int) -> tuple[np.ndarray, np.ndarray]:
        """``a_0..a_K`` and ``b_0..b_K`` (``b_0 = 0``) in the ``a_0/2`` convention."""
        a = np.zeros(K + 1)
        b = np.zeros(K + 1)
        a[0] = 2.0 * self.poly[0]
        if K:
            a[1:], b[1:] = self.coefficients(K)
        return a, b

    def a(self, k: int) -> float:
        if k == 0:
            return 2.0 * self.poly[0]
        return float(self.coefficients(k, k)[0][0])

    def b(self, k: int) -> float:
        return float(self.coefficients(k, k)[1][0])

    def poly_value(self, x: float) -> float:
        c0, c1, c2 = self.poly
        return c0 + x * (c1 + x * c2)

    def check_tail(self, n: int = 10_000) -> bool:
        """Spot-check the monotone-sine assertion on ``k <= n``."""
        if not self.tail_monotone_sine:
            return True
        a, b = self.coefficients(n, self.K_stored + 1)
        return bool(np.all(a == 0.0) and np.all(b > 0) and np.all(np.diff(b) <= 0))

    def __add__(self, other: "PolyTrigSeries") -> "PolyTrigSeries":
        if not isinstance(other, PolyTrigSeries):
            return NotImplemented
        if self.tail_rule is not None and other.tail_rule is not None:
            raise NotImplementedError("sum of two series with tail rules")
        if (self.tail_rule or other.tail_rule) and self.K_stored != other.K_stored:
            raise NotImplementedError("tail rules require matching stored lengths")
        K = max(self.K_stored, other.K_stored)
        h1 = list(self.harmonics) + [(0.0, 0.0)] * (K - self.K_stored)
        h2 = list(other.harmonics) + [(0.0, 0.0)] * (K - other.K_stored)
        return PolyTrigSeries(
            tuple(p + q for p, q in zip(self.poly, other.poly)),
            tuple((a1 + a2, b1 + b2) for (a1, b1), (a2, b2) in zip(h1, h2)),
            self.tail_rule or other.tail_rule,
            False,
        )

    def __mul__(self, c: float) -> "PolyTrigSeries":
        c = float(c)
        return PolyTrigSeries(
            tuple(c * p for p in self.poly),
            tuple((c * a, c * b) for a, b in self.harmonics),
            None if self.tail_rule is None else self.tail_rule.scaled(c),
            self.tail_monotone_sine and c > 0,
        )

    __rmul__ = __mul__


def fatou_series() -> PolyTrigSeries:
    """``sum_k sin(kx)/log(k+1)``: converges everywhere, its formal integral does not."""
    return PolyTrigSeries(tail_rule=FATOU_TAIL, tail_monotone_sine=True)


def partial_sum(S: PolyTrigSeries, n: int, x: float) -> float:
    """``poly(x) + sum_{k<=n} a_k cos kx + b_k sin kx``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = S.poly_value(x)
    acc = 0.0
    for start in range(1, n + 1, _CHUNK):
        stop = min(n, start + _CHUNK - 1)
        k = np.arange(start, stop + 1, dtype=float)
        a, b = S.coefficients(stop, start)
        kx = k * x
        acc += float(np.sum(a * np.cos(kx) + b * np.sin(kx)))
    return total + acc


def partial_sums(S: PolyTrigSeries, n: int, x: float) -> np.ndarray:
    """All partial sums ``s_1..s_n`` at ``x`` (brute force; memory O(n))."""
    k = np.arange(1, n + 1, dtype=float)
    a, b = S.coefficients(n)
    return S.poly_value(x) + np.cumsum(a * np.cos(k * x) + b * np.sin(k * x))


@lru_cache(maxsize=512)
def _tail_differences(rule: TailRule, M: int, levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Forward differences ``D^q a_M, D^q b_M`` for ``q = 0..levels``, in high precision."""
    dps = 30 + int(levels * math.log10(M + levels + 1)) + 1
    with mpmath.workdps(dps):
        pairs = [rule.coefficients_mp(M + j) for j in range(levels + 1)]
        a = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        da, db = [], []
        for _ in range(levels + 1):
            da.append(float(a[0]))
            db.append(float(b[0]))
            a = [a[i] - a[i + 1] for i in range(len(a) - 1)]
            b = [b[i] - b[i + 1] for i in range(len(b) - 1)]
    return np.array(da), np.array(db)


def _direct_tail(rule: TailRule, start: int, stop: int, t: float) -> tuple[complex, float]:
    """``sum_{k=start}^{stop-1} c_k z^k`` and ``sum |c_k|``."""
    total = 0j
    mass = 0.0
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        k = np.arange(lo, hi, dtype=float)
        a, b = rule.coefficients(k)
        kt = k * t
        total += complex(np.sum(a * np.cos(kt) + b * np.sin(kt)), 0.0)
        mass += float(np.sum(np.abs(a) + np.abs(b)))
    return total, mass


@dataclass
class _TailPlan:
    M: int
    levels: int
    bound: float


def _plan_tail(rule: TailRule, m0: int, t: float, tol: float, max_terms: int, cm: bool) -> _TailPlan:
    """Smallest power-of-two cut M (and level count) meeting ``tol``."""
    omega = abs(2.0 * math.sin(t / 2.0))
    M = max(m0, 1 << max(0, math.ceil(math.log2(_START_RATIO / omega))))
    best = None
    while True:
        M_eff = min(M, max(max_terms, m0))
        levels = _MAX_LEVELS if cm else 1
        da, db = _tail_differences(rule, M_eff, levels)
        mags = np.abs(da) + np.abs(db)
        if cm:
            p = np.arange(1, levels + 1)
            bounds = mags[:levels] / omega ** p
            i = int(np.argmin(bounds))
            plan = _TailPlan(M_eff, i + 1, float(bounds[i]))
        else:
            # monotone only: D b >= 0 telescopes to b_M
            plan = _TailPlan(M_eff, 1, float(mags[0] / omega))
        if best is None or plan.bound < best.bound:
            best = plan
        if best.bound <= tol or M_eff >= max_terms or M_eff != M:
            return best
        M *= 2


def sum_series(S: PolyTrigSeries, x: float, tol: float = 1e-10, max_terms: int = 10**7) -> tuple[float, float]:
    """Sum of the series at ``x`` and a bound on the absolute error.

    Finite series are summed directly. An infinite tail is accepted when it
    is flagged monotone-sine or its rule is completely monotone; it is cut at
    ``M`` terms and the rest handled by summation by parts. When the cut would
    exceed ``max_terms`` the attained bound is reported instead of ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = float(x)
    value = S.poly_value(x)
    rounding = 4 * EPS * abs(value)
    K = S.K_stored
    if K:
        k = np.arange(1, K + 1, dtype=float)
        h = np.asarray(S.harmonics)
        terms = h[:, 0] * np.cos(k * x) + h[:, 1] * np.sin(k * x)
        value += float(np.sum(terms))
        rounding += EPS * (math.log2(K + 1) + 2 + K * abs(x)) * float(np.sum(np.abs(h)))
    rule = S.tail_rule
    if rule is None:
        if S.tail_monotone_sine:
            raise InfiniteTailWithoutRule("series is flagged monotone-sine but has no tail rule")
        return float(value), float(rounding)
    cm = rule.completely_monotone
    if not (S.tail_monotone_sine or cm):
        raise InfiniteTailWithoutRule(
            f"tail '{rule.label}' carries no monotonicity certificate; only finite series can be summed"
        )
    m0 = K + 1
    t = math.remainder(x, TWO_PI)
    if t == 0.0:
        a0, _ = rule.coefficients(np.array([float(m0)]))
        if a0[0] != 0.0:
            raise NonSummableAtPoint(f"cosine tail '{rule.label}' cannot be summed at x={x!r} (multiple of 2*pi)")
        # every sine term vanishes exactly
        return float(value), float(rounding)
    plan = _plan_tail(rule, m0, t, tol, max_terms, cm)
    direct, mass = _direct_tail(rule, m0, plan.M, t)
    da, db = _tail_differences(rule, plan.M, max(plan.levels, 1))
    z = complex(math.cos(t), math.sin(t))
    zM = complex(math.cos(plan.M * t), math.sin(plan.M * t))
    one_minus_z = 1.0 - z
    corr = 0j
    coef = zM / one_minus_z
    for q in range(plan.levels):
        corr += coef * complex(da[q], -db[q])
        coef *= -z / one_minus_z
    value += direct.real + corr.real
    n_direct = max(plan.M - m0, 1)
    rounding += EPS * (math.log2(n_direct + 1) + 2 + abs(plan.M * t)) * (mass + abs(corr))
    return float(value), float(plan.bound + rounding)


def series_function(S: PolyTrigSeries, tol: float = 1e-12, max_terms: int = 10**7, name: str = "") -> FunctionHandle:
    """The sum of ``S`` as a :class:`FunctionHandle` (accuracy from :func:`sum_series`)."""
    return FunctionHandle(lambda x: sum_series(S, x, tol, max_terms), name=name or "series")


def formal_integrate(S: PolyTrigSeries) -> PolyTrigSeries:
    """Term-by-term integral with integration constant 0.

    ``a cos kx + b sin kx`` becomes ``(a sin kx - b cos kx)/k`` and the
    polynomial part ``c0 + c1 x`` becomes ``c0 x + c1 x**2/2``.
    """
    c0, c1, c2 = S.poly
    if c2 != 0.0:
        raise DegreeOverflow("integrating a degree-2 polynomial part would exceed degree 2")
    harmonics = tuple((-b / k, a / k) for k, (a, b) in enumerate(S.harmonics, start=1))
    rule = None if S.tail_rule is None else S.tail_rule.integrated()
    return PolyTrigSeries((0.0, c0, c1 / 2.0), harmonics, rule, False)


def _even_part(f: FunctionHandle, x: float, s: float) -> float:
    return 0.5 * (f(x + s) + f(x - s))


def _dirichlet_ratio(n: int, t: float) -> float:
    st = math.sin(t)
    if abs(t) < 1e-8:
        return 2 * n + 1 - (2 * n + 1) * ((2 * n + 1) ** 2 - 1) * t * t / 6.0
    return math.sin((2 * n + 1) * t) / st


def _check_window(f: FunctionHandle, x: float):
    bad = f.singular_in(x - math.pi, x + math.pi)
    if bad:
        raise SingularWindow(f"singular point(s) {bad} inside [x-pi, x+pi] around x={x}")


def dirichlet_partial_sum_from_function(f: FunctionHandle, n: int, x: float, quad_tol: float = 1e-10) -> float:
    """``s_n(x) = (2/pi) int_0^{pi/2} (f(x+2t) + f(x-2t))/2 * sin((2n+1)t)/sin t dt``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_window(f, x)
    value, _ = integrate_abs(
        lambda t: _even_part(f, x, 2 * t) * _dirichlet_ratio(n, t),
        0.0,
        math.pi / 2,
        quad_tol * math.pi / 2,
        limit=max(400, 50 * n),
    )
    return 2.0 / math.pi * value


def dirichlet_partial_sum_full(f: FunctionHandle, n: int, x: float, quad_tol: float = 1e-10) -> float:
    """``s_n(x) = (1/pi) int_{-pi/2}^{pi/2} f(x+2t) sin((2n+1)t)/sin t dt`` (no symmetrisation)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_window(f, x)
    value, _ = integrate_abs(
        lambda t: f(x + 2 * t) * _dirichlet_ratio(n, t),
        -math.pi / 2,
        math.pi / 2,
        quad_tol * math.pi,
        limit=max(400, 100 * n),
    )
    return value / math.pi


# ---------------------------------------------------------------- text format


def format_series(S: PolyTrigSeries) -> str:
    """Serialize: ``poly c0 c1 c2``, then ``k a_k b_k`` rows, then ``tail <preset> [n]``."""
    lines = ["poly " + " ".join(repr(c) for c in S.poly)]
    lines += [f"{k} {a!r} {b!r}" for k, (a, b) in enumerate(S.harmonics, start=1)]
    if S.tail_rule is not None:
        if S.tail_rule.name not in TAIL_PRESETS or S.tail_rule.scale != 1.0:
            raise ValueError(f"tail rule '{S.tail_rule.name}' is not a named preset")
        lines.append(f"tail {S.tail_rule.label}")
    return "\n".join(lines) + "\n"


def parse_series(text: str) -> PolyTrigSeries:
    """Inverse of :func:`format_series`. Blank lines and ``#`` comments are ignored."""
    poly = (0.0, 0.0, 0.0)
    harmonics: dict[int, tuple[float, float]] = {}
    rule = None
    monotone = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "poly":
                if len(parts) != 4:
                    raise ValueError("expected 'poly c0 c1 c2'")
                poly = tuple(float(p) for p in parts[1:])
            elif parts[0] == "tail":
                if len(parts) not in (2, 3) or parts[1] not in TAIL_PRESETS:
                    raise ValueError(f"unknown tail preset; known: {sorted(TAIL_PRESETS)}")
                rule = TAIL_PRESETS[parts[1]]
                for _ in range(int(parts[2]) if len(parts) == 3 else 0):
                    rule = rule.integrated()
                monotone = rule.integrations == 0 and parts[1] == "fatou"
            else:
                if len(parts) != 3:
                    raise ValueError("expected 'k a_k b_k'")
                k = int(parts[0])
                if k < 1 or k in harmonics:
                    raise ValueError(f"bad or repeated harmonic index {k}")
                harmonics[k] = (float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"series literal line {lineno}: {exc}") from None
    K = max(harmonics, default=0)
    stored = tuple(harmonics.get(k, (0.0, 0.0)) for k in range(1, K + 1))
    return PolyTrigSeries(poly, stored, rule, monotone)


def random_finite_series(rng: np.random.Generator, degree: int = 8, with_a0: bool = True) -> PolyTrigSeries:
    """Degree-``degree`` series with coefficients uniform in [-1, 1]."""
    a = rng.uniform(-1, 1, degree + 1)
    b = rng.uniform(-1, 1, degree)
    if not with_a0:
        a[0] = 0.0
    return PolyTrigSeries.from_coefficients(a, b)


__all__ = [
    "TailRule",
    "TAIL_PRESETS",
    "FATOU_TAIL",
    "PolyTrigSeries",
    "fatou_series",
    "partial_sum",
    "partial_sums",
    "sum_series",
    "series_function",
    "formal_integrate",
    "dirichlet_partial_sum_from_function",
    "dirichlet_partial_sum_full",
    "format_series",
    "parse_series",
    "random_finite_series",
]
