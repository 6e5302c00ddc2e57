"""The ten acceptance criteria at their stated tolerances.

Each test prints one ``PASS``/``FAIL`` line; the lines are also collected
into a section of the pytest terminal summary.
"""

from __future__ import annotations

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from trigcoef.divdiff import identity_suite
from trigcoef.gallery import fatou_comparison_sum, fatou_report, james_report, skvortsov_report
from trigcoef.genderiv import DEFAULT_SCHEDULE, schwarz_derivative, sym_cesaro_derivative
from trigcoef.handles import FunctionHandle
from trigcoef.recover import classical_coefficients, riemann_recover
from trigcoef.schwarzsolve import discrete_schwarz_solve
from trigcoef.trigseries import fatou_series, formal_integrate, random_finite_series, series_function, sum_series

TWO_PI = 2 * math.pi


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_1_round_trip():
    rng = np.random.default_rng(1001)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        S = random_finite_series(rng, degree=int(rng.integers(0, 9)))
        rep = riemann_recover(series_function(S), 8, N=4096)
        a, b = S.classical(8)
        worst = max(worst, float(np.max(np.abs(rep.a - a))), float(np.max(np.abs(rep.b - b))))
    elapsed = time.perf_counter() - t0
    verdict(1, worst <= 1e-6 and elapsed <= 120, f"100 series, max coefficient error {worst:.2e} (<= 1e-6), {elapsed:.1f} s (<= 120 s)")


def test_2_cross_check():
    rng = np.random.default_rng(1002)
    worst = 0.0
    for _ in range(20):
        S = random_finite_series(rng, degree=8)
        f = series_function(S)
        r, c = riemann_recover(f, 8, N=4096), classical_coefficients(f, 8)
        worst = max(worst, float(np.max(np.abs(r.a - c.a))), float(np.max(np.abs(r.b - c.b))))
    verdict(2, worst <= 1e-6, f"20 series, max riemann/classical disagreement {worst:.2e} (<= 1e-6)")


def test_3_fatou_recovery():
    f = series_function(fatou_series())
    exact = 1 / np.log(np.arange(2, 7))
    errs = []
    for N in (1024, 2048, 4096, 8192):
        errs.append(np.abs(riemann_recover(f, 5, N=N).b[1:] - exact))
    errs = np.array(errs)
    factors = errs[:-1] / errs[1:]
    rel = float(np.max(errs[-1] / exact))
    ok = bool(np.all(factors >= 2)) and rel <= 1e-2
    verdict(3, ok, f"b_1..b_5, min error factor per doubling {factors.min():.3f} (>= 2), final relative error {rel:.2e} (<= 1e-2)")


def test_4_identity_suite():
    results = [identity_suite(c, trials=1000, seed=1004, tol=1e-12) for c in ("quadratic", "harmonic", "identity17")]
    ok = all(r.ok for r in results)
    verdict(4, ok, "; ".join(r.line() for r in results))


def test_5_riemann_theorem():
    rng = np.random.default_rng(1005)
    misses, worst_err, n = 0, 0.0, 0
    for _ in range(20):
        S = random_finite_series(rng, degree=8)
        F = series_function(formal_integrate(formal_integrate(S)))
        for x in rng.uniform(-math.pi, math.pi, 50):
            est = schwarz_derivative(F, float(x))
            n += 1
            misses += (not est.converged) or abs(est.value - sum_series(S, float(x))[0]) > est.error_estimate
            worst_err = max(worst_err, est.error_estimate)
    ok = misses == 0 and worst_err <= 1e-6
    verdict(5, ok, f"{n - misses}/{n} points within estimator error, max estimator error {worst_err:.2e} (<= 1e-6)")


def test_6_solver_order():
    errs = []
    for N in (128, 256, 512, 1024):
        F = discrete_schwarz_solve(FunctionHandle.from_callable(math.cos), -TWO_PI, TWO_PI, N)
        errs.append(float(np.max(np.abs(F.values - (1 - np.cos(F.nodes))))))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    Q = discrete_schwarz_solve(FunctionHandle.from_callable(lambda t: 2.0), -1.0, 3.0, 256)
    quad_res = float(np.max(np.abs(Q.values - (Q.nodes + 1) * (Q.nodes - 3))) / Q.scale())
    ok = bool(np.all(orders >= 1.9)) and quad_res <= 1e-10
    verdict(6, ok, f"orders {', '.join(f'{o:.3f}' for o in orders)} (>= 1.9), quadratic residual {quad_res:.1e} (<= 1e-10)")


def test_7_james():
    rep = james_report(DEFAULT_SCHEDULE, (0.1, 0.25, 0.5))
    probes_ok = all(p.within_bounds for p in rep.probes)
    near_plus = bool(np.any(np.abs(rep.right_quotients - 1) <= 0.05))
    near_minus = bool(np.any(np.abs(rep.right_quotients + 1) <= 0.05))
    ok = probes_ok and rep.smooth_at_0 and near_plus and near_minus
    res = ", ".join(f"x={p.x}: {p.residual:.1e}<={p.estimate.error_estimate:.1e}" for p in rep.probes)
    verdict(7, ok, f"residuals {res}; smoothness quotient exactly 0: {rep.smooth_at_0}; right quotients in [{rep.right_min:.4f}, {rep.right_max:.4f}]")


def test_8_fatou_audit():
    S6 = fatou_comparison_sum(10**6)
    rep = fatou_report([2.0**-k for k in range(4, 21)])
    ok = S6 >= 4 and rep.xi_decreasing and rep.compensated_spread <= 2
    verdict(8, ok, f"S(1e6) = {S6:.4f} (>= 4), Xi strictly decreasing: {rep.xi_decreasing}, compensated spread {rep.compensated_spread:.4f} (<= 2)")


def test_9_skvortsov():
    rep = skvortsov_report(DEFAULT_SCHEDULE)
    ok = (not rep.bracket_converged) and rep.left_certificate.consistent and rep.right_certificate.consistent
    verdict(
        9,
        ok,
        f"bracket converged: {rep.bracket_converged}; left certificate {rep.left_certificate.verdict}, "
        f"right certificate {rep.right_certificate.verdict}",
    )


def test_10_cesaro_equals_schwarz():
    rng = np.random.default_rng(1010)
    misses, n = 0, 0
    for _ in range(10):
        S = random_finite_series(rng, degree=8)
        Phi = series_function(formal_integrate(S))
        F = series_function(formal_integrate(formal_integrate(S)))
        for x in rng.uniform(-math.pi, math.pi, 50):
            c, d = sym_cesaro_derivative(Phi, float(x)), schwarz_derivative(F, float(x))
            n += 1
            misses += abs(c.value - d.value) > c.error_estimate + d.error_estimate
    verdict(10, misses == 0, f"{n - misses}/{n} points agree within combined estimator error")
