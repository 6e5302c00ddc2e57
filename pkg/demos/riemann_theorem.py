"""
The Schwarz derivative of the twice-integrated series
=====================================================

Integrating a trigonometric series twice term by term gives a continuous
function F whose second symmetric derivative equals the sum of the original
series. The first integral Phi has the same property for the symmetric
Cesaro derivative.
"""

from __future__ import annotations

import numpy as np

from trigcoef.genderiv import schwarz_derivative, sym_cesaro_derivative
from trigcoef.trigseries import format_series, formal_integrate, random_finite_series, series_function, sum_series

rng = np.random.default_rng(7)
S = random_finite_series(rng, degree=4)
print("series:")
print(format_series(S))

Phi = series_function(formal_integrate(S))
F = series_function(formal_integrate(formal_integrate(S)))

print(f"{'x':>8} {'sum':>14} {'Schwarz of F':>14} {'err est':>9} {'Cesaro of Phi':>14} {'err est':>9}")
for x in np.linspace(-3, 3, 7):
    s, _ = sum_series(S, x)
    d = schwarz_derivative(F, x)
    c = sym_cesaro_derivative(Phi, x)
    print(f"{x:>8.3f} {s:>14.10f} {d.value:>14.10f} {d.error_estimate:>9.1e} {c.value:>14.10f} {c.error_estimate:>9.1e}")
