"""
Coefficients of a non-integrable trigonometric sum
==================================================

The sine series with coefficients 1/log(k+1) converges everywhere, but its
sum is not Lebesgue integrable near 0, so the classical coefficient
integrals do not exist. Its coefficients can still be read off point values:
solve the second-difference problem for f(y) sin ky on [-2pi, 2pi] with zero
boundary values and take -F_k(0)/pi^2.
"""

from __future__ import annotations

import numpy as np

from trigcoef.recover import riemann_recover
from trigcoef.trigseries import fatou_series, series_function

f = series_function(fatou_series())
exact = 1 / np.log(np.arange(2, 7))

print(f"{'N':>6} " + " ".join(f"{'b_' + str(k):>12}" for k in range(1, 6)) + f" {'max rel err':>12}")
for N in (1024, 2048, 4096, 8192):
    rep = riemann_recover(f, 5, N=N)
    rel = np.abs(rep.b[1:] - exact) / exact
    print(f"{N:>6} " + " ".join(f"{v:>12.8f}" for v in rep.b[1:]) + f" {rel.max():>12.2e}")
print(f"{'exact':>6} " + " ".join(f"{v:>12.8f}" for v in exact))

# the cosine coefficients of a sine series come back as (numerical) zeros
print("largest |a_k|:", float(np.max(np.abs(rep.a))))
