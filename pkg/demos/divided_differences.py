"""
Divided-difference identities
=============================

Second divided differences recover the leading coefficient of a quadratic,
vanish for every harmonic on the triple (-2pi, 0, 2pi), and satisfy the
four-point splitting identity. Each is checked on 1000 random cases.
"""

from __future__ import annotations

from trigcoef.divdiff import IDENTITY_CHECKS, identity_suite

for check in IDENTITY_CHECKS:
    print(identity_suite(check, trials=1000, seed=0).line())
