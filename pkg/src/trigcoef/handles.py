"""Black-box real functions with a domain, singular points and error reporting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import EvaluationFailure

EPS = np.finfo(float).eps

Evaluator = Callable[[float], "tuple[float, float]"]


@dataclass(frozen=True)
class FunctionHandle:
    """A real function of one real variable.

    ``evaluator(x)`` returns ``(value, achieved_tolerance)``, where the
    tolerance is the producer's bound on the absolute error of ``value``.
    Evaluation at a flagged singular point, outside the domain, or any
    non-finite result raises :class:`EvaluationFailure`.
    """

    evaluator: Evaluator
    domain: tuple[float, float] = (-math.inf, math.inf)
    singular_points: tuple[float, ...] = ()
    name: str = ""

    def __post_init__(self):
        lo, hi = self.domain
        if not lo <= hi:
            raise ValueError(f"empty domain {self.domain}")
        object.__setattr__(self, "singular_points", tuple(sorted(float(s) for s in self.singular_points)))

    @classmethod
    def from_callable(
        cls,
        fn: Callable[[float], float],
        *,
        abs_tol: float | None = None,
        domain: tuple[float, float] = (-math.inf, math.inf),
        singular_points: Iterable[float] = (),
        name: str = "",
    ) -> "FunctionHandle":
        """Wrap a plain ``x -> value`` callable.

        Without ``abs_tol`` the claimed accuracy is a few ulps of the value.
        """

        def evaluator(x):
            v = float(fn(x))
            tol = 4.0 * EPS * max(1.0, abs(v)) if abs_tol is None else abs_tol
            return v, tol

        return cls(evaluator, domain, tuple(singular_points), name or getattr(fn, "__name__", ""))

    def is_singular(self, x: float) -> bool:
        return any(x == s for s in self.singular_points)

    def singular_in(self, lo: float, hi: float) -> list[float]:
        """Flagged singular points inside the closed interval [lo, hi]."""
        return [s for s in self.singular_points if lo <= s <= hi]

    def evaluate(self, x: float) -> tuple[float, float]:
        x = float(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise EvaluationFailure(f"{self.name or 'function'}: x={x!r} outside domain {self.domain}", x)
        if self.is_singular(x):
            raise EvaluationFailure(f"{self.name or 'function'}: x={x!r} is a flagged singular point", x)
        try:
            value, tol = self.evaluator(x)
        except EvaluationFailure:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationFailure(f"{self.name or 'function'}: evaluation at {x!r} failed: {exc}", x) from exc
        if not (math.isfinite(value) and math.isfinite(tol)):
            raise EvaluationFailure(f"{self.name or 'function'}: non-finite value at x={x!r}", x)
        return float(value), float(tol)

    def __call__(self, x: float) -> float:
        return self.evaluate(x)[0]

    def evaluate_many(self, xs) -> tuple[np.ndarray, np.ndarray]:
        xs = np.asarray(xs, dtype=float)
        values = np.empty(xs.shape)
        tols = np.empty(xs.shape)
        for i, x in enumerate(xs.flat):
            values.flat[i], tols.flat[i] = self.evaluate(x)
        return values, tols


def product(handle: FunctionHandle, weight: Callable[[float], float], name: str = "") -> FunctionHandle:
    """Pointwise product with a smooth bounded weight such as ``cos(k*x)``."""

    def evaluator(x):
        v, tol = handle.evaluate(x)
        w = float(weight(x))
        return v * w, tol * abs(w) + 2 * EPS * abs(v * w)

    return FunctionHandle(evaluator, handle.domain, handle.singular_points, name or handle.name)


def linear_combination(terms: Iterable[tuple[float, FunctionHandle]], name: str = "") -> FunctionHandle:
    """The handle ``x -> sum(c * h(x))`` with tolerances combined."""
    terms = [(float(c), h) for c, h in terms]
    lo = max(h.domain[0] for _, h in terms)
    hi = min(h.domain[1] for _, h in terms)
    singular = sorted({s for _, h in terms for s in h.singular_points})

    def evaluator(x):
        total = 0.0
        tol = 0.0
        for c, h in terms:
            v, t = h.evaluate(x)
            total += c * v
            tol += abs(c) * t
        return total, tol + 2 * EPS * abs(total)

    return FunctionHandle(evaluator, (lo, hi), tuple(singular), name)


@dataclass
class CountingHandle:
    """Test helper: wraps a handle, counts calls and faults at forbidden points."""

    inner: FunctionHandle
    forbidden: tuple[float, ...] = ()
    calls: list[float] = field(default_factory=list)

    def handle(self) -> FunctionHandle:
        def evaluator(x):
            self.calls.append(x)
            if x in self.forbidden:
                raise EvaluationFailure(f"forbidden evaluation at {x!r}", x)
            return self.inner.evaluate(x)

        return FunctionHandle(evaluator, self.inner.domain, self.inner.singular_points, self.inner.name)
