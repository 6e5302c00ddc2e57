"""Adaptive quadrature with an absolute-error target.

Thin layer over QUADPACK's adaptive Gauss-Kronrod bisection
(``scipy.integrate.quad``). Its rules never sample the interval endpoints,
which is what the integrals defined only by continuous extension at an
endpoint need.
"""

from __future__ import annotations

import warnings

from scipy import integrate

from .errors import QuadratureFailure

DEFAULT_LIMIT = 400


def integrate_abs(fn, a: float, b: float, tol: float, *, limit: int = DEFAULT_LIMIT, points=None) -> tuple[float, float]:
    """Integrate ``fn`` over [a, b] to absolute error ``tol``.

    Returns ``(value, error_estimate)``. Raises :class:`QuadratureFailure`
    when the estimate exceeds ``tol`` after ``limit`` subdivisions.
    Exceptions raised by ``fn`` propagate unchanged.
    """
    if tol <= 0:
        raise ValueError("quadrature tolerance must be positive")
    if a == b:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info, *_ = integrate.quad(
            fn, a, b, epsabs=tol, epsrel=0.0, limit=limit, points=points, full_output=1
        )
    if err > tol:
        raise QuadratureFailure(
            f"quadrature on [{a}, {b}] reached error {err:.3g} > tol {tol:.3g} after {info['last']} subintervals",
            value,
            err,
        )
    return float(value), float(err)
