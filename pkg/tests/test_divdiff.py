from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from trigcoef.divdiff import (
    IDENTITY_CHECKS,
    check_identity17,
    convexity_indicator,
    first_divdiff,
    identity_suite,
    nested_divdiff_values,
    second_divdiff,
    second_divdiff_values,
)
from trigcoef.errors import CoincidentNodes
from trigcoef.gallery import james_pair
from trigcoef.handles import FunctionHandle


def h(fn):
    return FunctionHandle.from_callable(fn)


class TestFirst:
    def test_square(self):
        assert first_divdiff(h(lambda t: t * t), 0.0, 2.0) == 2.0

    def test_constant(self):
        assert first_divdiff(h(lambda t: 7.0), -3.0, 5.0) == 0.0

    def test_abs_symmetric(self):
        assert first_divdiff(h(abs), -1.0, 1.0) == 0.0

    def test_coincident(self):
        with pytest.raises(CoincidentNodes):
            first_divdiff(h(abs), 1.0, 1.0)
        with pytest.raises(CoincidentNodes):
            first_divdiff(h(abs), 1.0, 1.0 + 1e-12)


class TestSecond:
    def test_quadratic_gives_leading_coefficient(self, rng):
        for _ in range(20):
            A, B, C = rng.uniform(-2, 2, 3)
            a, x, b = rng.uniform(-5, 5, 3)
            assert second_divdiff(h(lambda t: A * t * t + B * t + C), a, x, b) == pytest.approx(A, rel=1e-9, abs=1e-9)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 13])
    def test_harmonics_vanish_on_symmetric_triple(self, n):
        for trig in (math.sin, math.cos):
            v = second_divdiff(h(lambda t: trig(n * t)), -2 * math.pi, 0.0, 2 * math.pi)
            assert abs(v) <= 1e-12

    def test_cube(self):
        assert second_divdiff(h(lambda t: t**3), 0.0, 1.0, 2.0) == pytest.approx(3.0, abs=1e-14)

    def test_permutation_symmetry(self, rng):
        G = h(lambda t: math.exp(t) * math.sin(3 * t))
        for _ in range(20):
            nodes = rng.uniform(-2, 2, 3)
            vals = [second_divdiff(G, *p) for p in itertools.permutations(nodes)]
            assert max(vals) - min(vals) <= 1e-12 * max(1.0, abs(vals[0]))

    def test_forms_agree(self, rng):
        done = 0
        while done < 1000:
            coef = rng.uniform(-1, 1, 5)
            a, x, b = rng.uniform(-3, 3, 3)
            if min(abs(a - x), abs(x - b), abs(a - b)) < 0.05:
                continue
            done += 1
            vals = [np.polyval(coef, t) for t in (a, x, b)]
            p = second_divdiff_values(a, x, b, *vals)
            q = nested_divdiff_values(a, x, b, *vals)
            assert abs(p - q) <= 1e-12 * max(1.0, abs(p))

    def test_degree_reduction(self):
        G = h(lambda t: 3 * t * t - t)
        vals = [second_divdiff(G, -1.0, x, 2.0) for x in np.linspace(-0.9, 1.9, 9)]
        assert np.ptp(vals) <= 1e-13

    def test_coincident(self):
        with pytest.raises(CoincidentNodes):
            second_divdiff(h(abs), 0.0, 1.0, 0.0)


class TestIdentity17:
    def test_polynomial(self, rng):
        for _ in range(20):
            coef = rng.uniform(-1, 1, 5)
            a, b, c, x = rng.permutation([-1.3, 0.2, 0.9, 2.1])
            lhs, rhs, res = check_identity17(h(lambda t: np.polyval(coef, t)), a, b, c, x)
            assert res <= 1e-12 * max(abs(lhs), 1.0)

    def test_rational(self):
        lhs, rhs, res = check_identity17(h(lambda t: 1 / (1 + t * t)), 0.0, 1.0, 2.0, 0.5)
        assert res <= 1e-12 * max(abs(lhs), 1.0)

    def test_james(self):
        H, _ = james_pair()
        lhs, rhs, res = check_identity17(H, 0.1, 0.2, 0.3, 0.15)
        assert res <= 1e-12 * max(abs(lhs), 1.0)

    def test_coincident(self):
        with pytest.raises(CoincidentNodes):
            check_identity17(h(abs), 0.0, 1.0, 2.0, 1.0)


class TestConvexity:
    def test_square_convex(self):
        assert convexity_indicator(h(lambda t: t * t), (-1, 1), 50)

    def test_negative_square(self):
        assert not convexity_indicator(h(lambda t: -t * t), (-1, 1), 50)

    def test_cube(self):
        assert not convexity_indicator(h(lambda t: t**3), (-1, 1), 50)

    def test_abs_convex(self):
        assert convexity_indicator(h(abs), (-1, 1), 20)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            convexity_indicator(h(abs), (0, 1), 2)


class TestSuite:
    @pytest.mark.parametrize("check", IDENTITY_CHECKS)
    def test_small_runs_pass(self, check):
        r = identity_suite(check, trials=100, seed=5)
        assert r.ok, r.line()
        assert "100/100" in r.line()

    def test_unknown(self):
        with pytest.raises(ValueError):
            identity_suite("nope")
