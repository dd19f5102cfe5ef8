"""Self-check suites and their building blocks."""

import math

import numpy as np
import pytest

from jacobispec.radial_ops import d_matrix_j02
from jacobispec.selftest import (
    SUITES,
    Check,
    SuiteResult,
    exact_derivative_matrix,
    exact_moments,
    kernel_residuals,
    moment_error,
    operator_identity_errors,
    run_selftest,
)


def test_check_constructors():
    assert Check.at_most("a", 1e-12, 1e-11).passed
    assert not Check.at_most("a", float("nan"), 1e-11).passed
    assert Check.at_least("b", 0.5, 1e-3).passed


def test_suite_result_failures():
    res = SuiteResult("x", [Check.at_most("ok", 0, 1), Check.at_most("bad", 2, 1)])
    assert not res.passed and [c.name for c in res.failures()] == ["bad"]


@pytest.mark.parametrize(
    "index,expected",
    [
        ((0, 0), [2, 0, 2 / 3, 0, 2 / 5]),
        ((0, 2), [8 / 3, 4 / 3, 16 / 15, 4 / 5, 24 / 35]),
        ((-0.5, -0.5), [math.pi, 0, math.pi / 2, 0, 3 * math.pi / 8]),
    ],
)
def test_exact_moments(index, expected):
    assert np.allclose(exact_moments(index, 4), expected, rtol=1e-15, atol=1e-15)


def test_moment_error_degree_limit():
    assert moment_error((0, 2), 2, 3) <= 1e-15
    # the rule gives 8/9 against 24/35; the scale is the larger absolute moment 8/9
    assert moment_error((0, 2), 2, 4) == pytest.approx((8 / 9 - 24 / 35) / (8 / 9), rel=1e-12)


def test_exact_derivative_matrix_matches_recurrence():
    assert np.max(np.abs(exact_derivative_matrix(12) - d_matrix_j02(12).entries)) <= 1e-12


def test_operator_identities_small():
    errs = operator_identity_errors(8)
    assert set(errs) == {"D int = I", "div mul = I", "D vs analytic derivative"}
    assert max(errs.values()) <= 1e-12


def test_kernel_residual_keys():
    errs = kernel_residuals(0, 16)
    assert set(errs) == {"nucleus r^l", "shell r^l", "shell r^-(l+1)", "external r^-(l+1)"}
    assert errs["nucleus r^l"] <= 1e-13 and errs["external r^-(l+1)"] <= 1e-13


@pytest.mark.parametrize("name", ["weights", "links", "operators"])
def test_cheap_suites_pass(name):
    (res,) = run_selftest([name])
    assert res.name == name and res.passed and res.seconds > 0


def test_perturbed_weight_is_caught():
    (res,) = run_selftest(["weights"], perturb_weight=1e-6)
    assert [c.name for c in res.failures()] == ["weight sums equal int w"]


def test_order_follows_request():
    assert [r.name for r in run_selftest(["links", "weights"])] == ["links", "weights"]


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_selftest(["links", "bogus"])


def test_registry():
    assert list(SUITES) == ["quadrature", "weights", "transform", "operators", "links", "kernels"]
