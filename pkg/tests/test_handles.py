from __future__ import annotations

import math

import pytest

from trigcoef.errors import EvaluationFailure
from trigcoef.handles import CountingHandle, FunctionHandle, linear_combination, product


class TestFunctionHandle:
    def test_from_callable_reports_ulp_tolerance(self):
        h = FunctionHandle.from_callable(lambda x: 3.0 * x)
        v, tol = h.evaluate(2.0)
        assert v == 6.0
        assert 0 < tol < 1e-14

    def test_explicit_tolerance(self):
        h = FunctionHandle.from_callable(math.sin, abs_tol=1e-6)
        assert h.evaluate(0.3)[1] == 1e-6

    def test_outside_domain(self):
        h = FunctionHandle.from_callable(math.sqrt, domain=(0.0, 1.0))
        with pytest.raises(EvaluationFailure):
            h(2.0)

    def test_singular_point_fails(self):
        h = FunctionHandle.from_callable(lambda x: 1 / x, singular_points=[0.0])
        with pytest.raises(EvaluationFailure):
            h(0.0)
        assert h.singular_in(-1, 1) == [0.0]
        assert h.singular_in(0.5, 1) == []

    def test_arithmetic_errors_become_evaluation_failures(self):
        h = FunctionHandle.from_callable(lambda x: math.log(x))
        with pytest.raises(EvaluationFailure):
            h(-1.0)

    def test_non_finite_rejected(self):
        h = FunctionHandle.from_callable(lambda x: math.inf)
        with pytest.raises(EvaluationFailure):
            h(1.0)

    def test_evaluate_many(self):
        h = FunctionHandle.from_callable(lambda x: x * x)
        vals, tols = h.evaluate_many([1.0, 2.0, 3.0])
        assert list(vals) == [1.0, 4.0, 9.0]
        assert tols.shape == (3,)


class TestCombinators:
    def test_product(self):
        f = FunctionHandle.from_callable(lambda x: 2.0, abs_tol=1e-8)
        g = product(f, math.cos)
        v, tol = g.evaluate(0.0)
        assert v == 2.0
        assert tol >= 1e-8

    def test_linear_combination(self):
        f = FunctionHandle.from_callable(lambda x: x, singular_points=[1.0])
        g = FunctionHandle.from_callable(lambda x: x * x)
        h = linear_combination([(2.0, f), (-1.0, g)])
        assert h(3.0) == 2 * 3.0 - 9.0
        assert h.singular_points == (1.0,)

    def test_counting_handle_faults(self):
        c = CountingHandle(FunctionHandle.from_callable(abs), forbidden=(0.0,))
        h = c.handle()
        assert h(1.0) == 1.0
        with pytest.raises(EvaluationFailure):
            h(0.0)
        assert c.calls == [1.0, 0.0]
