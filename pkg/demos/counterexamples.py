"""
Counterexamples: James and Skvortsov
====================================

H(x) = x cos(1/x) is smooth at 0 and its second symmetric derivative is
h(x) = -x^-3 cos(1/x) away from 0, yet H has no right derivative at 0.
Gluing H to the zero function at 0 gives a function whose second-order
integrals on each half exist but do not patch into one on the whole
interval.
"""

from __future__ import annotations

from trigcoef.gallery import james_report, skvortsov_report

james = james_report()
print(james.to_text())

skv = skvortsov_report()
print(skv.to_text())
print("first bracket quotients across the split (h, value):")
for h, q in skv.bracket_trace[:6]:
    print(f"  {h:.3e}  {q: .6f}")
