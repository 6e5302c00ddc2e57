"""Second primitives: normalized integrals, a discrete Schwarz inverse, patching
across a split point, and consistency audits.

A *second primitive* of ``f`` on ``[a, b]`` is a function ``F`` with
``F(a) = F(b) = 0`` whose Schwarz derivative is ``f``. It is stored either as
a closed-form :class:`FunctionHandle` or as values on a uniform grid.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .divdiff import second_divdiff_values
from .errors import EvaluationFailure, NonConvergentBracket, SingularPointInside
from .genderiv import (
    DEFAULT_SCHEDULE,
    DerivativeEstimate,
    LimitSchedule,
    estimate_limit,
    is_smooth,
    schwarz_derivative,
    smoothness_check,
)
from .handles import EPS, FunctionHandle
from .quadrature import integrate_abs

PROVENANCES = ("formal_series", "lebesgue_formula", "discrete_solve", "user_supplied")
#: relative size allowed for F(a), F(b) after normalization
BOUNDARY_RTOL = 1e-12


@dataclass
class SecondPrimitive:
    """A function on ``interval`` vanishing at both endpoints.

    Exactly one of ``closed_form`` and ``values`` is set. Grid values sit at
    ``a + j (b - a)/N``, ``j = 0..N``. ``eval_tol`` bounds the error that the
    grid inherits from the right-hand side's evaluation tolerances.
    """

    interval: tuple[float, float]
    provenance: str
    closed_form: FunctionHandle | None = None
    values: np.ndarray | None = None
    flagged_nodes: tuple[int, ...] = ()
    eval_tol: float = 0.0
    _spline: CubicSpline | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b = map(float, self.interval)
        if not a < b:
            raise ValueError(f"empty interval {self.interval}")
        self.interval = (a, b)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if (self.closed_form is None) == (self.values is None):
            raise ValueError("give exactly one of closed_form and values")
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=float)
            N = len(self.values) - 1
            if N < 4 or N % 2:
                raise ValueError(f"grid N must be even and >= 4, got {N}")

    # grid accessors
    @property
    def is_grid(self) -> bool:
        return self.values is not None

    @property
    def N(self) -> int:
        if self.values is None:
            raise AttributeError("closed-form primitive has no grid")
        return len(self.values) - 1

    @property
    def step(self) -> float:
        a, b = self.interval
        return (b - a) / self.N

    @property
    def nodes(self) -> np.ndarray:
        a, b = self.interval
        return np.linspace(a, b, self.N + 1)

    def node_value(self, j: int) -> float:
        return float(self.values[j])

    # evaluation
    def evaluate(self, x: float) -> tuple[float, float]:
        a, b = self.interval
        if not a <= x <= b:
            raise EvaluationFailure(f"x={x!r} outside [{a}, {b}]", x)
        if self.closed_form is not None:
            return self.closed_form.evaluate(x)
        pos = (x - a) / self.step
        j = round(pos)
        if abs(pos - j) < 1e-9:
            v = self.node_value(j)
        else:
            if self._spline is None:
                self._spline = CubicSpline(self.nodes, self.values)
            v = float(self._spline(x))
        return v, self.eval_tol + 4 * EPS * abs(v)

    def __call__(self, x: float) -> float:
        return self.evaluate(x)[0]

    def handle(self, name: str = "F") -> FunctionHandle:
        return FunctionHandle(self.evaluate, self.interval, (), name)

    def boundary_values(self) -> tuple[float, float]:
        a, b = self.interval
        return self(a), self(b)

    def scale(self) -> float:
        if self.values is not None:
            return max(1.0, float(np.max(np.abs(self.values))))
        a, b = self.interval
        xs = np.linspace(a, b, 33)[1:-1]
        return max([1.0] + [abs(self(x)) for x in xs])

    def is_normalized(self) -> bool:
        fa, fb = self.boundary_values()
        limit = BOUNDARY_RTOL * self.scale()
        return abs(fa) <= limit and abs(fb) <= limit

    # text table
    def to_table(self) -> str:
        if self.values is None:
            raise ValueError("only grid primitives serialize as tables")
        a, b = self.interval
        out = io.StringIO()
        out.write(f"# a={a!r} b={b!r} N={self.N} provenance={self.provenance}\n")
        for x, v in zip(self.nodes, self.values):
            out.write(f"{float(x)!r} {float(v)!r}\n")
        return out.getvalue()

    @classmethod
    def from_table(cls, text: str) -> "SecondPrimitive":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("missing header line")
        header = dict(item.split("=", 1) for item in lines[0].lstrip("#").split())
        a, b, N = float(header["a"]), float(header["b"]), int(header["N"])
        rows = np.array([[float(t) for t in ln.split()] for ln in lines[1:]])
        if rows.shape != (N + 1, 2):
            raise ValueError(f"expected {N + 1} rows of two columns, got shape {rows.shape}")
        if not np.allclose(rows[:, 0], np.linspace(a, b, N + 1), rtol=0, atol=1e-12 * max(1.0, abs(a), abs(b))):
            raise ValueError("x column is not the uniform grid named in the header")
        return cls((a, b), header.get("provenance", "user_supplied"), values=rows[:, 1])


# ------------------------------------------------------------- normalization


def normalize_to_interval(G: FunctionHandle, a: float, b: float, provenance: str = "user_supplied", n_checks: int = 7) -> SecondPrimitive:
    """``G(x) - G(a) - (x - a)/(b - a) (G(b) - G(a))`` as a closed form.

    The result is cross-checked against ``(x - a)(x - b)[a, x, b; G]`` at
    ``n_checks`` interior points.
    """
    if not a < b:
        raise ValueError("need a < b")
    (ga, ta), (gb, tb) = G.evaluate(a), G.evaluate(b)
    slope = (gb - ga) / (b - a)

    def evaluator(x):
        if x == a or x == b:
            return 0.0, 0.0
        gx, tx = G.evaluate(x)
        v = gx - ga - (x - a) * slope
        return v, tx + ta + tb + 4 * EPS * (abs(gx) + abs(ga) + abs(gb))

    F = FunctionHandle(evaluator, (a, b), tuple(G.singular_in(a, b)), G.name + "~" if G.name else "")
    for x in a + (b - a) * (np.arange(1, n_checks + 1) / (n_checks + 1)):
        if G.is_singular(x):
            continue
        v, tol = F.evaluate(x)
        other = (x - a) * (x - b) * second_divdiff_values(a, x, b, ga, G(x), gb)
        if abs(v - other) > 64 * tol + 1e-9 * max(1.0, abs(ga), abs(gb), abs(v)):
            raise ArithmeticError(f"normalization forms disagree at {x}: {v!r} vs {other!r}")
    return SecondPrimitive((a, b), provenance, closed_form=F)


def t2s_of_summable(g: FunctionHandle, a: float, b: float, x: float, quad_tol: float = 1e-10) -> float:
    """Second primitive of an integrable ``g`` vanishing at a and b, at x.

    ``((x - b) int_a^x (t - a) g dt + (x - a) int_x^b (t - b) g dt) / (b - a)``
    """
    if not a < b:
        raise ValueError("need a < b")
    if not a <= x <= b:
        raise ValueError(f"x={x} outside [{a}, {b}]")
    inside = g.singular_in(a, b)
    if inside:
        raise SingularPointInside(f"flagged singular point(s) {inside} in [{a}, {b}]")
    if x == a or x == b:
        return 0.0
    # each integral is scaled by at most (b - a) in the combination
    tol = quad_tol / 2
    left, _ = integrate_abs(lambda t: (t - a) * g(t), a, x, tol)
    right, _ = integrate_abs(lambda t: (t - b) * g(t), x, b, tol)
    return ((x - b) * left + (x - a) * right) / (b - a)


def lebesgue_primitive(g: FunctionHandle, a: float, b: float, quad_tol: float = 1e-10) -> SecondPrimitive:
    """:func:`t2s_of_summable` wrapped as a closed-form second primitive."""

    def evaluator(x):
        return t2s_of_summable(g, a, b, x, quad_tol), quad_tol

    return SecondPrimitive((a, b), "lebesgue_formula", closed_form=FunctionHandle(evaluator, (a, b)))


# ------------------------------------------------------------ discrete solve


def _sample_rhs(f: FunctionHandle, nodes: np.ndarray, step: float) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Values and tolerances of f at ``nodes``; undefined nodes are patched."""
    vals = np.empty(len(nodes))
    tols = np.empty(len(nodes))
    flagged = []
    for i, x in enumerate(nodes):
        try:
            vals[i], tols[i] = f.evaluate(x)
        except EvaluationFailure:
            # average of two adjacent evaluations
            (vl, tl), (vr, tr) = f.evaluate(x - step / 2), f.evaluate(x + step / 2)
            vals[i], tols[i] = 0.5 * (vl + vr), max(tl, tr) + 0.5 * abs(vl - vr)
            flagged.append(i)
    return vals, tols, flagged


def dirichlet_solve(rhs: np.ndarray, step: float) -> np.ndarray:
    """Solve ``F[j-1] - 2F[j] + F[j+1] = step^2 rhs[j]`` with zero ends.

    ``rhs`` holds the interior values, shape ``(N - 1,)`` or ``(N - 1, m)``;
    the result includes both boundary zeros.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.shape[0]
    ab = np.empty((3, n))
    ab[0, :] = 1.0
    ab[1, :] = -2.0
    ab[2, :] = 1.0
    inner = solve_banded((1, 1), ab, step * step * rhs, check_finite=False)
    pad = [(1, 1)] + [(0, 0)] * (rhs.ndim - 1)
    return np.pad(inner, pad)


def amplification(a: float, b: float) -> float:
    """Max-norm bound of the continuous inverse, ``(b - a)^2 / 8``."""
    return (b - a) ** 2 / 8


def discrete_schwarz_solve(f: FunctionHandle, a: float, b: float, N: int) -> SecondPrimitive:
    """Grid second primitive from the symmetric second difference at step ``(b-a)/N``."""
    if N < 4 or N % 2:
        raise ValueError(f"N must be even and >= 4, got {N}")
    if not a < b:
        raise ValueError("need a < b")
    nodes = np.linspace(a, b, N + 1)
    step = (b - a) / N
    vals, tols, flagged = _sample_rhs(f, nodes[1:-1], step)
    F = dirichlet_solve(vals, step)
    eval_tol = amplification(a, b) * float(np.max(tols)) + 4 * N * EPS * float(np.max(np.abs(F)))
    return SecondPrimitive((a, b), "discrete_solve", values=F, flagged_nodes=tuple(i + 1 for i in flagged), eval_tol=eval_tol)


# ------------------------------------------------------------------ patching


@dataclass
class PatchResult:
    """Patched normalized integral over ``[a, c]`` from pieces split at b."""

    a: float
    b: float
    c: float
    bracket: DerivativeEstimate
    G1: SecondPrimitive
    G2: SecondPrimitive

    @property
    def bracket_abc(self) -> float:
        return self.bracket.value

    def evaluate(self, x: float) -> float:
        a, b, c, A = self.a, self.b, self.c, self.bracket.value
        if not a <= x <= c:
            raise EvaluationFailure(f"x={x!r} outside [{a}, {c}]", x)
        if x < b:
            return (b - c) * (x - a) * A + self.G1(x)
        if x > b:
            return (b - a) * (x - c) * A + self.G2(x)
        return (b - a) * (b - c) * A

    __call__ = evaluate


def patch_second_primitives(G1: SecondPrimitive, G2: SecondPrimitive, sched: LimitSchedule = DEFAULT_SCHEDULE) -> PatchResult:
    """Join second primitives on ``[a, b]`` and ``[b, c]`` into one on ``[a, c]``.

    The bracket ``[a, b, c; G]`` is the limit as ``h -> 0`` of
    ``((b-h-a)[a, b-h, b; G1] + (c-b+h)[b, b+h, c; G2]) / (c - a)``. For
    smooth pieces the quotient's error carries every power of h, so orders 1
    and 2 are extrapolated away unless the schedule disables Richardson;
    oscillating pieces stay visibly non-convergent. Raises :class:`NonConvergentBracket` (carrying the
    estimate) when the limit does not settle.
    """
    (a, b), (b2, c) = G1.interval, G2.interval
    if b != b2:
        raise ValueError(f"pieces do not meet: {G1.interval} and {G2.interval}")
    sched = sched.capped(0.5 * min(b - a, c - b))

    def quotient(h):
        (g1m, t1), (g2p, t2) = G1.evaluate(b - h), G2.evaluate(b + h)
        # G1(a) = G1(b) = 0 and G2(b) = G2(c) = 0 reduce both brackets
        left = (b - h - a) * second_divdiff_values(a, b - h, b, 0.0, g1m, 0.0)
        right = (c - b + h) * second_divdiff_values(b, b + h, c, 0.0, g2p, 0.0)
        noise = (t1 + t2 + 4 * EPS * (abs(g1m) + abs(g2p))) * (1 + (c - b + h) / (c - b - h)) / h
        return (left + right) / (c - a), noise / (c - a)

    orders = () if sched.richardson_order is None else (1, 2)
    est = estimate_limit(quotient, sched.hs(), orders, sched.abs_tol, sched.rel_tol)
    if not est.converged:
        raise NonConvergentBracket(f"bracket over [{a}, {b}, {c}] did not settle (last value {est.value:.6g})", est)
    return PatchResult(a, b, c, est, G1, G2)


# ------------------------------------------------------------------- audits


@dataclass
class ResidualSample:
    x: float
    f: float
    estimate: float
    error_estimate: float
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass
class P2Report:
    interval: tuple[float, float]
    boundary: tuple[float, float]
    boundary_ok: bool
    samples: list[ResidualSample]
    skipped: list[tuple[float, str]]
    smoothness: list[tuple[float, DerivativeEstimate, bool]]
    integral_values: list[tuple[float, float]]
    required_rate: float = 0.95

    @property
    def pass_rate(self) -> float:
        if not self.samples:
            return 0.0
        return sum(s.passed for s in self.samples) / len(self.samples)

    @property
    def consistent(self) -> bool:
        return self.boundary_ok and self.pass_rate >= self.required_rate

    @property
    def verdict(self) -> str:
        return "consistent" if self.consistent else "inconsistent"

    def to_text(self) -> str:
        a, b = self.interval
        lines = [
            f"interval [{a:.6g}, {b:.6g}]  boundary F(a)={self.boundary[0]:.3e} F(b)={self.boundary[1]:.3e}  ok={self.boundary_ok}",
            f"residuals passed {sum(s.passed for s in self.samples)}/{len(self.samples)} ({self.pass_rate:.1%}), skipped {len(self.skipped)}",
        ]
        lines += [f"smooth at {x:.6g}: {ok} (quotient {e.value:.3e})" for x, e, ok in self.smoothness]
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def _sample_points(a: float, b: float, n: int) -> np.ndarray:
    """``n`` interior points, equispaced and avoiding the endpoints."""
    return a + (b - a) * (np.arange(1, n + 1) / (n + 1))


def _grid_schwarz(F: SecondPrimitive, j: int, steps: int, richardson: int | None) -> DerivativeEstimate:
    """Schwarz quotients at node j with steps ``2^m`` grid spacings."""
    hg = F.step
    reach = min(j, F.N - j)
    top = min(steps - 1, int(math.floor(math.log2(reach))))
    mults = [2**m for m in range(top, -1, -1)]

    def quotient(h):
        m = int(round(h / hg))
        fm, f0, fp = F.values[j - m], F.values[j], F.values[j + m]
        noise = 4 * EPS * (abs(fm) + 2 * abs(f0) + abs(fp)) * F.N
        return (fm + fp - 2 * f0) / (h * h), noise / (h * h)

    orders = () if richardson is None else (richardson,)
    return estimate_limit(quotient, [m * hg for m in mults], orders)


def p2_certificate_check(
    f: FunctionHandle,
    F: SecondPrimitive,
    sched: LimitSchedule = DEFAULT_SCHEDULE,
    n_samples: int = 50,
    suspicious: Iterable[float] = (),
    rtol: float = 1e-6,
    err_factor: float = 10.0,
) -> P2Report:
    """Audit a candidate second primitive F of f.

    Checks ``F(a) = F(b) = 0``, compares Schwarz-derivative estimates of F
    with f at interior samples, and runs the smoothness test at the given
    suspicious points. A sample passes when
    ``|D2 F - f| <= rtol (1 + |f|) + err_factor * error_estimate``.
    For grid primitives the samples are nodes, the steps are grid
    multiples, and the tolerance gains ``err_factor * step^2 * scale`` with
    scale ``max(|f|, |f''|)`` (f'' by a second difference); otherwise each point gets the schedule capped at half its
    distance to the boundary.
    """
    a, b = F.interval
    fa, fb = F.boundary_values()
    boundary_ok = F.is_normalized()
    samples, skipped, integral_values = [], [], []
    if F.is_grid:
        js = sorted({int(round(j)) for j in np.linspace(0, F.N, n_samples + 2)[1:-1]})
        js = [j for j in js if min(j, F.N - j) >= 4]
        points = [(float(F.nodes[j]), j) for j in js]
    else:
        points = [(float(x), None) for x in _sample_points(a, b, n_samples)]
    for x, j in points:
        if f.is_singular(x):
            skipped.append((x, "singular point of f"))
            continue
        try:
            fx = f(x)
            if j is not None:
                est = _grid_schwarz(F, j, sched.steps, sched.richardson_order)
            else:
                est = schwarz_derivative(F.handle(), x, sched.capped(0.5 * min(x - a, b - x)))
        except EvaluationFailure as exc:
            skipped.append((x, str(exc)))
            continue
        tol = rtol * (1 + abs(fx)) + err_factor * est.error_estimate
        if j is not None:
            # grid primitives only resolve f up to O(step^2 * local scale)
            hg = F.step
            try:
                curv = abs(f(x + hg) + f(x - hg) - 2 * fx) / hg**2
            except EvaluationFailure:
                curv = 0.0
            tol += err_factor * hg**2 * max(abs(fx), curv)
        samples.append(ResidualSample(x, fx, est.value, est.error_estimate, abs(est.value - fx), tol))
        integral_values.append((x, (x - a) * (x - b) * second_divdiff_values(a, x, b, fa, F(x), fb)))
    smooth = []
    for x in suspicious:
        est = smoothness_check(F.handle(), x, sched.capped(0.5 * min(x - a, b - x)))
        smooth.append((float(x), est, is_smooth(est)))
    return P2Report((a, b), (fa, fb), boundary_ok, samples, skipped, smooth, integral_values)


@dataclass
class AuditReport:
    interval: tuple[float, float]
    boundary_violations: list[str]
    major_violations: list[tuple[float, float, float, float]]
    minor_violations: list[tuple[float, float, float, float]]
    monotone_violations: list[tuple[float, float]]

    @property
    def passed(self) -> bool:
        return not (self.boundary_violations or self.major_violations or self.minor_violations or self.monotone_violations)

    def to_text(self) -> str:
        return (
            f"boundary violations {len(self.boundary_violations)}, major {len(self.major_violations)}, "
            f"minor {len(self.minor_violations)}, M-m monotonicity {len(self.monotone_violations)}: "
            + ("passed" if self.passed else "failed")
        )


def major_minor_audit(
    f: FunctionHandle,
    M: FunctionHandle,
    m: FunctionHandle,
    interval: tuple[float, float],
    sched: LimitSchedule = DEFAULT_SCHEDULE,
    n_samples: int = 50,
    audit_tol: Callable[[float], float] | None = None,
) -> AuditReport:
    """Necessary conditions for M, m to be major and minor functions of f.

    Violations are recorded as ``(x, h, quotient, f(x))``; finite steps make
    this a falsifier only.
    """
    a, b = interval
    tol_of = audit_tol or (lambda fx: 1e-6 * (1 + abs(fx)))
    bnd = []
    for name, G in (("M", M), ("m", m)):
        for end in (a, b):
            v = G(end)
            if abs(v) > 1e-12 * max(1.0, abs(b - a)):
                bnd.append(f"{name}({end:g}) = {v:.3e}")
    major, minor = [], []
    xs = _sample_points(a, b, n_samples)
    for x in xs:
        if f.is_singular(x):
            continue
        fx = f(x)
        tol = tol_of(fx)
        for h in sched.capped(min(x - a, b - x)).hs():
            qM = (M(x + h) + M(x - h) - 2 * M(x)) / (h * h)
            qm = (m(x + h) + m(x - h) - 2 * m(x)) / (h * h)
            if qM < fx - tol:
                major.append((float(x), float(h), qM, fx))
            if qm > fx + tol:
                minor.append((float(x), float(h), qm, fx))
    grid = np.concatenate([[a], xs, [b]])
    diff = np.array([M(t) - m(t) for t in grid])
    mono = [(float(grid[i + 1]), float(diff[i + 1] - diff[i])) for i in range(len(grid) - 1) if diff[i + 1] < diff[i] - 1e-12 * max(1.0, abs(diff[i]))]
    return AuditReport((a, b), bnd, major, minor, mono)


__all__ = [
    "SecondPrimitive",
    "PatchResult",
    "P2Report",
    "ResidualSample",
    "AuditReport",
    "normalize_to_interval",
    "t2s_of_summable",
    "lebesgue_primitive",
    "dirichlet_solve",
    "discrete_schwarz_solve",
    "patch_second_primitives",
    "p2_certificate_check",
    "major_minor_audit",
]
