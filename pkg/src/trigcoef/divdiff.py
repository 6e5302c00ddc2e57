"""First and second divided differences and their elementary identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoincidentNodes
from .handles import FunctionHandle

#: nodes closer than this (relative to their scale) are rejected
COINCIDENCE_RTOL = 1e-9
#: agreement required between the two algebraic forms
FORM_RTOL = 1e-12


def _check_distinct(*nodes: float) -> None:
    scale = max(1.0, *(abs(t) for t in nodes))
    for i, s in enumerate(nodes):
        for t in nodes[i + 1 :]:
            if abs(s - t) < COINCIDENCE_RTOL * scale:
                raise CoincidentNodes(f"nodes {s!r} and {t!r} coincide (scale {scale:g})")


def first_divdiff(G: FunctionHandle, a: float, x: float) -> float:
    """``[a, x; G] = (G(x) - G(a)) / (x - a)``."""
    _check_distinct(a, x)
    return (G(x) - G(a)) / (x - a)


def second_divdiff_values(a: float, x: float, b: float, Ga: float, Gx: float, Gb: float) -> float:
    """Partial-fraction form of ``[a, x, b; G]`` from known values."""
    return Ga / ((a - x) * (a - b)) + Gx / ((x - b) * (x - a)) + Gb / ((b - a) * (b - x))


def nested_divdiff_values(a: float, x: float, b: float, Ga: float, Gx: float, Gb: float) -> float:
    """Nested form ``([x, b; G] - [a, x; G]) / (b - a)`` from known values."""
    return ((Gb - Gx) / (b - x) - (Gx - Ga) / (x - a)) / (b - a)


def second_divdiff(G: FunctionHandle, a: float, x: float, b: float) -> float:
    """``[a, x, b; G]``, symmetric in its three nodes.

    Computed in partial-fraction form and cross-checked against the nested
    form; a disagreement beyond rounding raises ``ArithmeticError``.
    """
    _check_distinct(a, x, b)
    Ga, Gx, Gb = G(a), G(x), G(b)
    value = second_divdiff_values(a, x, b, Ga, Gx, Gb)
    nested = nested_divdiff_values(a, x, b, Ga, Gx, Gb)
    # rounding in either form is bounded by eps * sum of |terms|
    terms = abs(Ga / ((a - x) * (a - b))) + abs(Gx / ((x - b) * (x - a))) + abs(Gb / ((b - a) * (b - x)))
    if abs(value - nested) > FORM_RTOL * max(abs(value), 1.0) + 64 * np.finfo(float).eps * terms:
        raise ArithmeticError(f"divided-difference forms disagree: {value!r} vs {nested!r}")
    return value


def check_identity17(G: FunctionHandle, a: float, b: float, c: float, x: float) -> tuple[float, float, float]:
    """Four-point identity ``(c-x)[a,x,c] = (c-b)[a,b,c] + (b-x)[a,x,b]``.

    Returns ``(lhs, rhs, |lhs - rhs|)``.
    """
    _check_distinct(a, b, c, x)
    Ga, Gb, Gc, Gx = G(a), G(b), G(c), G(x)
    lhs = (c - x) * second_divdiff_values(a, x, c, Ga, Gx, Gc)
    rhs = (c - b) * second_divdiff_values(a, b, c, Ga, Gb, Gc) + (b - x) * second_divdiff_values(a, x, b, Ga, Gx, Gb)
    return lhs, rhs, abs(lhs - rhs)


def convexity_indicator(G: FunctionHandle, interval: tuple[float, float], n_samples: int = 50) -> bool:
    """Sampled necessary test for convexity on ``interval``.

    Every triple from an equispaced grid of ``n_samples`` points plus the
    midpoints between neighbours must have ``[x, y, z; G] >= -1e-12``.
    A ``True`` answer does not prove convexity.
    """
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    lo, hi = interval
    grid = np.linspace(lo, hi, n_samples)
    pts = np.sort(np.concatenate([grid, 0.5 * (grid[1:] + grid[:-1])]))
    vals = np.array([G(t) for t in pts])
    n = len(pts)
    # all triples i < j < k, vectorised over k
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            k = np.arange(j + 1, n)
            x, y, z = pts[i], pts[j], pts[k]
            d = (
                vals[i] / ((x - y) * (x - z))
                + vals[j] / ((y - z) * (y - x))
                + vals[k] / ((z - x) * (z - y))
            )
            if np.any(d < -1e-12):
                return False
    return True


# ------------------------------------------------------------ identity suite

IDENTITY_CHECKS = ("quadratic", "harmonic", "identity17", "forms")


def _smooth_handles() -> list[tuple[str, FunctionHandle]]:
    from math import cos, exp, sin

    fns = [
        ("t^4 - 2t^2 + t", lambda t: t**4 - 2 * t**2 + t),
        ("t^3", lambda t: t**3),
        ("1/(1+t^2)", lambda t: 1 / (1 + t * t)),
        ("sin t", sin),
        ("cos 3t", lambda t: cos(3 * t)),
        ("exp(t/2)", lambda t: exp(t / 2)),
        ("|t|", abs),
        ("t cos(1/t)", lambda t: t * cos(1 / t) if t else 0.0),
        ("sign(t)", lambda t: float(np.sign(t))),
        ("floor(t)", lambda t: float(np.floor(t))),
    ]
    return [(name, FunctionHandle.from_callable(f, name=name)) for name, f in fns]


def _spread_nodes(rng: np.random.Generator, n: int, lo: float = -3.0, hi: float = 3.0, gap: float = 0.05) -> list[float]:
    while True:
        pts = rng.uniform(lo, hi, n)
        if np.min(np.diff(np.sort(pts))) >= gap:
            return [float(p) for p in pts]


@dataclass
class SuiteResult:
    check: str
    trials: int
    passed: int
    worst: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def line(self) -> str:
        return f"{self.check}: {self.passed}/{self.trials} within {self.tol:g} (worst relative residual {self.worst:.2e})"


def identity_suite(check: str, trials: int = 1000, seed: int = 0, tol: float = 1e-12) -> SuiteResult:
    """Randomized checks of the elementary divided-difference facts.

    ``quadratic``: ``[a, x, b; At^2 + Bt + C] = A``. ``harmonic``:
    ``[-2pi, 0, 2pi; sin nt] = [-2pi, 0, 2pi; cos nt] = 0``. ``identity17``:
    the four-point identity over ten handles. ``forms``: nested and
    partial-fraction forms agree for random polynomials. Residuals are
    relative to ``max(1, |expected|)``; nodes stay at least 0.05 apart.
    """
    if check not in IDENTITY_CHECKS:
        raise ValueError(f"unknown check {check!r}; choose from {IDENTITY_CHECKS}")
    rng = np.random.default_rng(seed)
    handles = _smooth_handles()
    two_pi = 2 * np.pi
    worst, passed = 0.0, 0
    for i in range(trials):
        if check == "quadratic":
            A, B, C = rng.uniform(-1, 1, 3)
            G = FunctionHandle.from_callable(lambda t, A=A, B=B, C=C: (A * t + B) * t + C)
            a, x, b = _spread_nodes(rng, 3)
            got, want = second_divdiff(G, a, x, b), A
            rel = abs(got - want) / max(1.0, abs(want))
        elif check == "harmonic":
            n = int(rng.integers(0, 51))
            trig = np.sin if rng.random() < 0.5 else np.cos
            G = FunctionHandle.from_callable(lambda t, n=n, trig=trig: trig(n * t))
            rel = abs(second_divdiff(G, -two_pi, 0.0, two_pi))
        elif check == "identity17":
            _, G = handles[i % len(handles)]
            a, b, c, x = _spread_nodes(rng, 4, 0.05, 3.0) if i % len(handles) == 7 else _spread_nodes(rng, 4)
            lhs, _, res = check_identity17(G, a, b, c, x)
            rel = res / max(1.0, abs(lhs))
        else:
            coef = rng.uniform(-1, 1, int(rng.integers(1, 6)))
            a, x, b = _spread_nodes(rng, 3)
            vals = [float(np.polyval(coef, t)) for t in (a, x, b)]
            p = second_divdiff_values(a, x, b, *vals)
            q = nested_divdiff_values(a, x, b, *vals)
            rel = abs(p - q) / max(1.0, abs(p))
        worst = max(worst, rel)
        passed += rel <= tol
    return SuiteResult(check, trials, passed, worst, tol)
