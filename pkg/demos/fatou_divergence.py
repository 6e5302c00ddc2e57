"""
Why the Fatou series has no integrable sum
==========================================

Integrating the sine series term by term gives Xi(alpha), a cosine series
whose value at 0 would be -sum 1/(k log(k+1)), which diverges. As alpha
shrinks, Xi(alpha) falls without bound while Xi(alpha) + S(ceil(1/alpha))
stays in a narrow band.
"""

from __future__ import annotations

from trigcoef.gallery import fatou_report

rep = fatou_report([2.0**-k for k in range(4, 21, 2)])
print(rep.to_text())
