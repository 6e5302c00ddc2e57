"""Named counterexamples, rebuilt numerically and audited.

* Fatou: ``sum sin(kx)/log(k+1)`` converges everywhere, but its formal
  integral ``Xi(x) = -sum cos(kx)/(k log(k+1))`` diverges at 0; the audit
  checks that Xi tracks ``-sum_{k<=m(x)} 1/(k log(k+1))`` with ``m = ceil(1/x)``.
* James: ``H(x) = x cos(1/x)`` is continuous and smooth with Schwarz
  derivative ``h(x) = -x^-3 cos(1/x)``, yet has no derivative at 0.
* Skvortsov: ``g = 0`` on the left of 0 and ``h`` on the right has second
  primitives on each side that cannot be joined into one across 0.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BudgetExhausted, NonConvergentBracket
from .genderiv import DEFAULT_SCHEDULE, DerivativeEstimate, LimitSchedule, is_smooth, schwarz_derivative, smoothness_check
from .handles import EPS, FunctionHandle
from .schwarzsolve import P2Report, normalize_to_interval, p2_certificate_check, patch_second_primitives, t2s_of_summable
from .trigseries import fatou_series, formal_integrate, sum_series

JAMES_END = 2 / math.pi


def _csv(header: list[str], rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return out.getvalue()


# -------------------------------------------------------------------- Fatou


def fatou_comparison_sum(m: int, chunk: int = 1 << 20) -> float:
    """``sum_{k=1}^m 1/(k log(k+1))``."""
    total = 0.0
    for start in range(1, m + 1, chunk):
        k = np.arange(start, min(m, start + chunk - 1) + 1, dtype=float)
        total += float(np.sum(1.0 / (k * np.log1p(k))))
    return total


@dataclass
class FatouRow:
    alpha: float
    xi: float
    xi_tol: float
    m: int
    S: float

    @property
    def compensated(self) -> float:
        return self.xi + self.S


@dataclass
class FatouReport:
    rows: list[FatouRow]
    band: float = 2.0

    @property
    def xi_decreasing(self) -> bool:
        """Xi strictly decreases as alpha decreases, beyond the error bounds."""
        rows = sorted(self.rows, key=lambda r: -r.alpha)
        return all(q.xi + q.xi_tol < p.xi - p.xi_tol for p, q in zip(rows, rows[1:]))

    @property
    def S_increasing(self) -> bool:
        rows = sorted(self.rows, key=lambda r: -r.alpha)
        return all(q.S > p.S for p, q in zip(rows, rows[1:]))

    @property
    def compensated_spread(self) -> float:
        vals = [r.compensated for r in self.rows]
        return max(vals) - min(vals)

    @property
    def S_growth(self) -> float:
        vals = [r.S for r in self.rows]
        return max(vals) - min(vals)

    @property
    def verdict(self) -> str:
        # a trend needs at least two rows
        ok = len(self.rows) >= 2 and self.xi_decreasing and self.S_increasing and self.compensated_spread <= self.band
        return "divergence-consistent" if ok else "inconclusive"

    def to_csv(self) -> str:
        return _csv(
            ["alpha", "xi", "xi_tol", "m", "S", "compensated"],
            [[repr(r.alpha), repr(r.xi), f"{r.xi_tol:.3g}", r.m, repr(r.S), repr(r.compensated)] for r in self.rows],
        )

    def to_text(self) -> str:
        lines = [f"{'alpha':>12} {'Xi(alpha)':>14} {'tol':>9} {'m':>9} {'S(m)':>10} {'Xi+S':>10}"]
        lines += [
            f"{r.alpha:>12.6g} {r.xi:>14.8f} {r.xi_tol:>9.2g} {r.m:>9d} {r.S:>10.6f} {r.compensated:>10.6f}"
            for r in self.rows
        ]
        lines.append(
            f"Xi decreasing: {self.xi_decreasing}; S increasing: {self.S_increasing} (growth {self.S_growth:.4f}); "
            f"compensated spread {self.compensated_spread:.4f} (band {self.band})"
        )
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def fatou_report(alphas, term_budget: int = 10**7, xi_tol: float = 1e-10) -> FatouReport:
    """Tabulate Xi, the comparison sum and their sum for each alpha.

    Raises :class:`BudgetExhausted` (with the rows done so far) when
    ``ceil(1/alpha)`` exceeds ``term_budget`` or Xi cannot be bounded to
    within ``1e-3`` inside the budget.
    """
    if term_budget < 10**4:
        raise ValueError("term_budget must be >= 1e4")
    Phi = formal_integrate(fatou_series())
    rows: list[FatouRow] = []
    for alpha in alphas:
        alpha = float(alpha)
        if not 0 < alpha < math.pi:
            raise ValueError(f"alpha={alpha} outside (0, pi)")
        m = math.ceil(1 / alpha)
        if m > term_budget:
            raise BudgetExhausted(f"m(alpha)={m} exceeds the term budget {term_budget}", FatouReport(rows))
        xi, tol = sum_series(Phi, alpha, xi_tol, term_budget)
        if tol > 1e-3:
            raise BudgetExhausted(f"Xi({alpha}) only bounded to {tol:.3g} within {term_budget} terms", FatouReport(rows))
        rows.append(FatouRow(alpha, xi, tol, m, fatou_comparison_sum(m)))
    return FatouReport(rows)


# -------------------------------------------------------------------- James


def _james_H(x):
    if x == 0:
        return 0.0, 0.0
    v = x * math.cos(1 / x)
    # an ulp error in 1/x moves the phase by ~eps/|x|
    return v, EPS * (4 * abs(v) + 2)


def _james_h(x):
    if x == 0:
        return 0.0, 0.0
    scale = abs(x) ** -3
    v = -(x**-3) * math.cos(1 / x)
    return v, EPS * scale * (4 + 2 / abs(x))


def james_pair() -> tuple[FunctionHandle, FunctionHandle]:
    """``H(x) = x cos(1/x)`` and ``h(x) = -x^-3 cos(1/x)``, both 0 at 0."""
    return FunctionHandle(_james_H, name="H"), FunctionHandle(_james_h, name="h")


@dataclass
class JamesProbe:
    x: float
    h: float
    estimate: DerivativeEstimate

    @property
    def residual(self) -> float:
        return abs(self.estimate.value - self.h)

    @property
    def within_bounds(self) -> bool:
        return self.estimate.converged and self.residual <= self.estimate.error_estimate


@dataclass
class JamesReport:
    probes: list[JamesProbe]
    smoothness_at_0: DerivativeEstimate
    smooth_quotients: list[float]
    right_h: np.ndarray
    right_quotients: np.ndarray
    spread_limit: float = 1.5

    @property
    def smooth_at_0(self) -> bool:
        return is_smooth(self.smoothness_at_0) and all(q == 0.0 for q in self.smooth_quotients)

    @property
    def right_min(self) -> float:
        return float(np.min(self.right_quotients))

    @property
    def right_max(self) -> float:
        return float(np.max(self.right_quotients))

    @property
    def no_right_derivative(self) -> bool:
        return self.right_max - self.right_min > self.spread_limit

    def to_text(self) -> str:
        lines = [f"{'x':>8} {'h(x)':>16} {'D2 H(x)':>16} {'residual':>10} {'err est':>10} ok"]
        for p in self.probes:
            lines.append(
                f"{p.x:>8.4g} {p.h:>16.9g} {p.estimate.value:>16.9g} {p.residual:>10.3g} {p.estimate.error_estimate:>10.3g} {p.within_bounds}"
            )
        lines.append(f"smoothness quotients at 0: max |q| = {max(map(abs, self.smooth_quotients)):.3g}; smooth: {self.smooth_at_0}")
        lines.append(
            f"right quotients at 0: min {self.right_min:.4f}, max {self.right_max:.4f} over {len(self.right_quotients)} steps; "
            + ("no right derivative" if self.no_right_derivative else "right derivative not excluded")
        )
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        return _csv(
            ["x", "h", "estimate", "error_estimate", "residual", "converged"],
            [[repr(p.x), repr(p.h), repr(p.estimate.value), f"{p.estimate.error_estimate:.3g}", f"{p.residual:.3g}", p.estimate.converged] for p in self.probes],
        )


def right_quotient_samples(sched: LimitSchedule, phase_step: float = 0.05) -> np.ndarray:
    """Steps t in the schedule's range, equispaced in the phase ``1/t``.

    ``(H(t) - H(0))/t = cos(1/t)``; geometric steps alone alias the phase.
    """
    hs = sched.hs()
    phases = np.arange(1 / hs[0], 1 / hs[-1], phase_step)
    return 1 / phases


def probe_schedule(sched: LimitSchedule, x: float, resolve: float = 0.01) -> LimitSchedule:
    """``sched`` started at ``x/2`` and lengthened until its finest step is
    below ``resolve * x^2``, the local oscillation length of H."""
    base = sched.capped(0.5 * x)
    need = math.ceil(math.log(base.h0 / (resolve * x * x)) / math.log(1 / base.ratio)) + 1
    return replace(base, steps=max(base.steps, need))


def james_report(sched: LimitSchedule = DEFAULT_SCHEDULE, probe_points=(0.1, 0.25, 0.5)) -> JamesReport:
    """Schwarz residuals at the probes, smoothness at 0, right quotients at 0."""
    H, h = james_pair()
    probes = []
    for x in probe_points:
        x = float(x)
        if not 0 < x <= JAMES_END:
            raise ValueError(f"probe {x} outside (0, 2/pi]")
        probes.append(JamesProbe(x, h(x), schwarz_derivative(H, x, probe_schedule(sched, x))))
    smooth = smoothness_check(H, 0.0, sched)
    ts = right_quotient_samples(sched)
    quotients = np.array([(H(t) - H(0.0)) / t for t in ts])
    return JamesReport(probes, smooth, [q for _, q in smooth.trace], ts, quotients)


# ---------------------------------------------------------------- Skvortsov


def skvortsov_g() -> FunctionHandle:
    """``0`` on ``[-2/pi, 0]`` and ``-x^-3 cos(1/x)`` on ``(0, 2/pi]``."""

    def evaluator(x):
        return (0.0, 0.0) if x <= 0 else _james_h(x)

    return FunctionHandle(evaluator, (-JAMES_END, JAMES_END), name="g")


@dataclass
class SkvortsovReport:
    left_t2s_max: float
    left_certificate: P2Report
    right_certificate: P2Report
    right_delta: float
    left_quotients: list[float]
    james: JamesReport
    bracket_converged: bool
    bracket_trace: list[tuple[float, float]]
    bracket_message: str

    @property
    def left_derivative_exists(self) -> bool:
        q = self.left_quotients
        return max(q) - min(q) <= 1e-12

    @property
    def additivity_fails(self) -> bool:
        return self.left_derivative_exists and self.james.no_right_derivative and not self.bracket_converged

    def to_text(self) -> str:
        lines = [
            f"left piece: second primitive of g vanishes (max |t2s| = {self.left_t2s_max:.3g}); "
            f"certificate {self.left_certificate.verdict}",
            f"right piece on [{self.right_delta:g}, 2/pi]: certificate {self.right_certificate.verdict} "
            f"({self.right_certificate.pass_rate:.0%} of residuals pass)",
            f"left quotients of G1 at 0 constant: {self.left_derivative_exists}; "
            f"right quotients of H at 0 spread over [{self.james.right_min:.3f}, {self.james.right_max:.3f}]",
            "a global integral would be linear on the left and H plus a linear function on the right, "
            "so it would have a left but no right derivative at 0 and could not be smooth there",
            f"patched bracket across 0: {'converged' if self.bracket_converged else 'did not converge'} ({self.bracket_message})",
            f"verdict: {'additivity fails' if self.additivity_fails else 'inconclusive'}",
        ]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        return _csv(["h", "bracket_quotient"], [[repr(h), repr(q)] for h, q in self.bracket_trace])


def skvortsov_report(sched: LimitSchedule = DEFAULT_SCHEDULE, delta: float = 1e-3, n_samples: int = 50) -> SkvortsovReport:
    """Audit the failure of additivity for the second-order integral at 0."""
    g = skvortsov_g()
    H, h = james_pair()
    zero = FunctionHandle.from_callable(lambda x: 0.0, name="0")
    left_pts = np.linspace(-JAMES_END, -0.01, 9)
    left_t2s = max(abs(t2s_of_summable(g, -JAMES_END, -0.01, float(x))) for x in left_pts)

    G1 = normalize_to_interval(zero, -JAMES_END, 0.0)
    G2 = normalize_to_interval(H, 0.0, JAMES_END)
    left_cert = p2_certificate_check(g, G1, sched, n_samples)
    right_cert = p2_certificate_check(h, normalize_to_interval(H, delta, JAMES_END), sched, n_samples)
    left_quotients = [(G1(0.0) - G1(-t)) / t for t in sched.hs()]
    james = james_report(sched)

    try:
        patch = patch_second_primitives(G1, G2, sched)
        converged, trace, msg = True, patch.bracket.trace, f"bracket {patch.bracket_abc:.6g}"
    except NonConvergentBracket as exc:
        converged, trace, msg = False, exc.estimate.trace, str(exc)
    return SkvortsovReport(left_t2s, left_cert, right_cert, delta, left_quotients, james, converged, trace, msg)


__all__ = [
    "fatou_comparison_sum",
    "fatou_report",
    "FatouReport",
    "FatouRow",
    "james_pair",
    "james_report",
    "JamesReport",
    "right_quotient_samples",
    "skvortsov_g",
    "skvortsov_report",
    "SkvortsovReport",
]

