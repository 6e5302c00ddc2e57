"""Recovering trigonometric coefficients from the sum function.

Three routes:

* :func:`classical_coefficients` integrates ``f cos kx`` and ``f sin kx``
  over ``[-pi, pi]`` (needs f integrable).
* :func:`a0_via_phi` reads ``a_0`` off the once-integrated series.
* :func:`riemann_recover` only needs point values of f. For every k it solves
  the discrete Schwarz problem for ``f(y) cos ky`` on ``[-2pi, 2pi]`` with zero
  boundary values and reads ``a_k = -F_k(0) / pi^2`` (likewise ``b_k`` with
  ``sin``). With ``F_k(+-2pi) = 0`` the normalized integral at 0 is
  ``(0 + 2pi)(0 - 2pi)[-2pi, 0, 2pi; F_k] = F_k(0)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularPointInside
from .handles import EPS, FunctionHandle
from .quadrature import integrate_abs
from .schwarzsolve import _sample_rhs, amplification, dirichlet_solve

METHODS = ("classical_F", "phi_difference", "riemann_p2")
RIEMANN_INTERVAL = (-2 * math.pi, 2 * math.pi)


@dataclass
class RecoveryReport:
    """Recovered ``a_0..a_K`` and ``b_1..b_K`` (``b[0]`` is always 0)."""

    K: int
    a: np.ndarray
    b: np.ndarray
    a_err: np.ndarray
    b_err: np.ndarray
    method: str
    grids_used: list[int] = field(default_factory=list)
    interval: tuple[float, float] = (-math.pi, math.pi)
    ratio_a: np.ndarray | None = None
    ratio_b: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        for name in ("a", "b", "a_err", "b_err"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.K + 1,):
                raise ValueError(f"{name} must have length K + 1 = {self.K + 1}")
            setattr(self, name, arr)
        if np.any(self.a_err < 0) or np.any(self.b_err < 0):
            raise ValueError("error estimates must be non-negative")

    @property
    def per_coeff_error(self) -> np.ndarray:
        """``max(a_err[k], b_err[k])`` per harmonic."""
        return np.maximum(self.a_err, self.b_err)

    def refinement_ratio(self, k: int) -> float:
        if self.ratio_a is None:
            return math.nan
        # ratio of whichever component dominates the error
        return float(self.ratio_a[k] if self.a_err[k] >= self.b_err[k] else self.ratio_b[k])

    def header(self) -> str:
        lo, hi = self.interval
        grids = ",".join(map(str, self.grids_used)) or "-"
        return f"method={self.method} K={self.K} N={grids} interval=[{lo!r},{hi!r}]"

    def to_text(self) -> str:
        lines = [self.header(), f"{'k':>3} {'a_k':>22} {'b_k':>22} {'error':>10} {'ratio':>8}"]
        for k in range(self.K + 1):
            lines.append(
                f"{k:>3} {self.a[k]:>22.15g} {self.b[k]:>22.15g} {self.per_coeff_error[k]:>10.3g} {self.refinement_ratio(k):>8.3g}"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(f"# {self.header()}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "a", "b", "a_err", "b_err", "ratio"])
        for k in range(self.K + 1):
            w.writerow([k, repr(float(self.a[k])), repr(float(self.b[k])), f"{self.a_err[k]:.6g}", f"{self.b_err[k]:.6g}", f"{self.refinement_ratio(k):.6g}"])
        return out.getvalue()

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "K": self.K,
            "grids": list(self.grids_used),
            "interval": list(self.interval),
            "a": [float(v) for v in self.a],
            "b": [float(v) for v in self.b],
            "a_err": [float(v) for v in self.a_err],
            "b_err": [float(v) for v in self.b_err],
        }


def classical_coefficients(f: FunctionHandle, K: int, quad_tol: float = 1e-10) -> RecoveryReport:
    """``a_k = (1/pi) int f cos kx``, ``b_k = (1/pi) int f sin kx`` over ``[-pi, pi]``."""
    if K < 0:
        raise ValueError("K must be >= 0")
    inside = f.singular_in(-math.pi, math.pi)
    if inside:
        raise SingularPointInside(f"flagged singular point(s) {inside} in [-pi, pi]")
    a, b, ea, eb = (np.zeros(K + 1) for _ in range(4))
    limit = 200 + 20 * K
    for k in range(K + 1):
        a[k], ea[k] = integrate_abs(lambda x: f(x) * math.cos(k * x), -math.pi, math.pi, quad_tol, limit=limit)
        if k:
            b[k], eb[k] = integrate_abs(lambda x: f(x) * math.sin(k * x), -math.pi, math.pi, quad_tol, limit=limit)
    return RecoveryReport(K, a / math.pi, b / math.pi, ea / math.pi, eb / math.pi, "classical_F")


def a0_via_phi(Phi: FunctionHandle, alpha: float) -> float:
    """``(Phi(alpha + 2pi) - Phi(alpha)) / pi``."""
    return (Phi(alpha + 2 * math.pi) - Phi(alpha)) / math.pi


def _center_values(fvals: np.ndarray, y: np.ndarray, K: int, step: float) -> tuple[np.ndarray, np.ndarray]:
    """``F_k(0)`` for the cosine and sine products, k = 0..K, on one grid."""
    ks = np.arange(K + 1)
    ky = np.outer(y[1:-1], ks)
    rhs = np.concatenate([fvals[1:-1, None] * np.cos(ky), fvals[1:-1, None] * np.sin(ky)], axis=1)
    F = dirichlet_solve(rhs, step)
    mid = (len(y) - 1) // 2
    return F[mid, : K + 1], F[mid, K + 1 :]


def riemann_recover(f: FunctionHandle, K: int, N: int = 4096, eval_tol: float | None = None) -> RecoveryReport:
    """Coefficients from point values of f via discrete second primitives.

    Estimates on grids N and 2N are Richardson-combined (order 2); the
    reported error is ``|E_N - E_2N|`` plus the worst evaluation tolerance
    amplified by the inverse operator. When ``N/2`` is an even integer the
    refinement ratio ``|E_{N/2} - E_N| / |E_N - E_2N|`` is reported as well
    (about 4 for smooth f). ``eval_tol`` overrides the tolerances reported by
    the handle.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    if N < 4 or N % 2:
        raise ValueError(f"N must be even and >= 4, got {N}")
    lo, hi = RIEMANN_INTERVAL
    fine = 2 * N
    y = np.linspace(lo, hi, fine + 1)
    step = (hi - lo) / fine
    fvals = np.zeros(fine + 1)
    fvals[1:-1], tols, flagged = _sample_rhs(f, y[1:-1], step)
    worst_tol = float(np.max(tols)) if eval_tol is None else float(eval_tol)

    estimates = {}
    levels = [N, fine] + ([N // 2] if N % 4 == 0 and N // 2 >= 4 else [])
    for n in levels:
        stride = fine // n
        Fc, Fs = _center_values(fvals[::stride], y[::stride], K, step * stride)
        estimates[n] = (-Fc / math.pi**2, -Fs / math.pi**2)

    (aN, bN), (a2, b2) = estimates[N], estimates[fine]
    a = (4 * a2 - aN) / 3
    b = (4 * b2 - bN) / 3
    b[0] = 0.0
    # |F_k(0)| error <= amplification * sup|f_k| error, divided by pi^2
    noise = amplification(lo, hi) * worst_tol / math.pi**2 + 64 * fine * EPS * max(1.0, float(np.max(np.abs(fvals))))
    a_err = np.abs(aN - a2) + noise
    b_err = np.abs(bN - b2) + noise
    b_err[0] = 0.0
    ratio_a = ratio_b = None
    if N // 2 in estimates:
        ah, bh = estimates[N // 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio_a = np.abs(ah - aN) / np.abs(aN - a2)
            ratio_b = np.abs(bh - bN) / np.abs(bN - b2)
        ratio_b[0] = math.nan
    diagnostics = {"flagged_nodes": [float(y[i + 1]) for i in flagged], "eval_tol": worst_tol, "raw": estimates}
    return RecoveryReport(K, a, b, a_err, b_err, "riemann_p2", [N, fine], RIEMANN_INTERVAL, ratio_a, ratio_b, diagnostics)


__all__ = ["RecoveryReport", "classical_coefficients", "a0_via_phi", "riemann_recover", "METHODS"]
