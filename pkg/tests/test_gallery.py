from __future__ import annotations

import math

import numpy as np
import pytest

from trigcoef.errors import BudgetExhausted
from trigcoef.gallery import (
    JAMES_END,
    fatou_comparison_sum,
    fatou_report,
    james_pair,
    james_report,
    probe_schedule,
    right_quotient_samples,
    skvortsov_g,
    skvortsov_report,
)
from trigcoef.genderiv import DEFAULT_SCHEDULE
from trigcoef.schwarzsolve import t2s_of_summable


class TestFatou:
    def test_comparison_sum_small(self):
        assert fatou_comparison_sum(3) == pytest.approx(1 / math.log(2) + 1 / (2 * math.log(3)) + 1 / (3 * math.log(4)))

    def test_comparison_sum_chunks(self):
        assert fatou_comparison_sum(10_000, chunk=777) == pytest.approx(fatou_comparison_sum(10_000), rel=1e-13)

    def test_comparison_sum_large(self):
        assert fatou_comparison_sum(10**6) >= 4

    def test_small_report(self):
        rep = fatou_report([2.0**-k for k in range(4, 11)])
        assert rep.xi_decreasing and rep.S_increasing
        assert rep.compensated_spread <= 2
        assert [r.m for r in rep.rows] == [2**k for k in range(4, 11)]
        assert rep.rows[0].xi == pytest.approx(-2.6758424217954375, abs=1e-8)
        assert rep.to_csv().splitlines()[0].startswith("alpha,")

    def test_budget(self):
        with pytest.raises(BudgetExhausted) as info:
            fatou_report([0.1, 1e-5], term_budget=10**4)
        assert len(info.value.partial.rows) == 1

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            fatou_report([4.0])
        with pytest.raises(ValueError):
            fatou_report([0.1], term_budget=100)


class TestJamesPair:
    def test_values(self):
        H, hf = james_pair()
        assert abs(H(JAMES_END)) <= 1e-16
        assert H(0.0) == 0.0 and hf(0.0) == 0.0

    def test_odd(self, rng):
        H, _ = james_pair()
        for x in rng.uniform(-1, 1, 50):
            assert H(-x) == -H(x)

    def test_formula(self, rng):
        H, hf = james_pair()
        for x in rng.uniform(-1, 1, 100):
            assert H(x) == pytest.approx(x * math.cos(1 / x), rel=1e-12, abs=0)
            assert hf(x) == pytest.approx(-(x**-3) * math.cos(1 / x), rel=1e-12, abs=0)

    def test_tolerance_grows_near_zero(self):
        _, hf = james_pair()
        assert hf.evaluate(1e-3)[1] > hf.evaluate(0.5)[1]


@pytest.fixture(scope="module")
def jreport():
    return james_report()


@pytest.fixture(scope="module")
def sreport():
    return skvortsov_report()


class TestJamesReport:
    def test_probes(self, jreport):
        for p in jreport.probes:
            assert p.within_bounds, (p.x, p.residual, p.estimate.error_estimate)

    def test_quarter(self, jreport):
        p = next(p for p in jreport.probes if p.x == 0.25)
        assert abs(p.estimate.value + 64 * math.cos(4)) <= p.estimate.error_estimate

    def test_smoothness_exact_zero(self, jreport):
        assert jreport.smooth_at_0
        assert all(q == 0.0 for q in jreport.smooth_quotients)

    def test_right_quotients(self, jreport):
        assert jreport.right_min <= -0.95 and jreport.right_max >= 0.95
        assert jreport.no_right_derivative

    def test_alternating_steps_oracle(self):
        H, _ = james_pair()
        # cos(pi (2j+1)/2) vanishes in exact arithmetic, so this grid only sees 0
        q = [H(2 / (math.pi * (2 * j + 1))) * math.pi * (2 * j + 1) / 2 for j in range(1, 21)]
        assert max(abs(v) for v in q) <= 1e-12

    def test_right_samples_in_range(self):
        hs = DEFAULT_SCHEDULE.hs()
        ts = right_quotient_samples(DEFAULT_SCHEDULE)
        assert ts.max() <= hs[0] and ts.min() >= hs[-1]
        assert np.all(np.abs(np.diff(1 / ts) - 0.05) <= 1e-9)

    def test_probe_schedule(self):
        s = probe_schedule(DEFAULT_SCHEDULE, 0.1)
        assert s.h0 == pytest.approx(0.05)
        assert s.hs()[-1] <= 0.01 * 0.1**2
        assert probe_schedule(DEFAULT_SCHEDULE, 0.5).steps >= DEFAULT_SCHEDULE.steps

    def test_probe_range(self):
        with pytest.raises(ValueError):
            james_report(probe_points=(1.0,))

    def test_csv(self, jreport):
        assert jreport.to_csv().splitlines()[0]


class TestSkvortsov:
    def test_g(self):
        g = skvortsov_g()
        assert g(-0.3) == 0.0 and g(0.0) == 0.0
        assert g(0.25) == pytest.approx(-64 * math.cos(4), rel=1e-12)

    def test_left_t2s_zero(self):
        g = skvortsov_g()
        for x in np.linspace(-JAMES_END, -0.01, 7)[1:-1]:
            assert t2s_of_summable(g, -JAMES_END, -0.01, x) == 0.0

    def test_certificates(self, sreport):
        assert sreport.left_certificate.consistent
        assert sreport.right_certificate.consistent

    def test_bracket_not_converged(self, sreport):
        assert not sreport.bracket_converged
        assert len(sreport.bracket_trace) >= 3

    def test_verdict(self, sreport):
        assert sreport.left_derivative_exists
        assert sreport.additivity_fails
        assert "additivity fails" in sreport.to_text()
