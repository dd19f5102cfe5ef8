"""Built-in problems and convergence-rate fitting."""

import math

import numpy as np
import pytest
import sympy as sp
from numpy.testing import assert_allclose

from jacobispec.convergence import (
    ConvergenceRecord,
    fit_algebraic_rate,
    fit_exponential_rate,
    run_case,
    sweep,
)
from jacobispec.problems import PROBLEMS, get_problem


class TestProblems:
    def test_smooth_pair_is_consistent(self):
        x, y, z = sp.symbols("x y z", real=True)
        r2 = x**2 + y**2 + z**2
        f = sp.exp(-r2 - z**2)
        lap = sp.diff(f, x, 2) + sp.diff(f, y, 2) + sp.diff(f, z, 2)
        expected = 4 * (r2 - 2 + 3 * z**2) * sp.exp(-r2 - z**2)
        assert sp.simplify(lap - expected) == 0
        p = get_problem("smooth")
        r, th, ph = 0.9, 0.4, 1.1
        pt = {x: r * math.sin(th) * math.cos(ph), y: r * math.sin(th) * math.sin(ph), z: r * math.cos(th)}
        assert p.source(r, th, ph) == pytest.approx(float(expected.subs(pt)), rel=1e-13)
        assert p.solution(r, th, ph) == pytest.approx(float(f.subs(pt)), rel=1e-13)

    def test_sqrt_pair_is_consistent(self):
        r = sp.symbols("r", positive=True)
        f = r ** sp.Rational(5, 2)
        lap = sp.diff(r**2 * sp.diff(f, r), r) / r**2
        assert sp.simplify(lap - sp.Rational(35, 4) * sp.sqrt(r)) == 0

    @pytest.mark.parametrize("name,r0", [("sqrt", 2.0), ("uniform-ball", 1.0)])
    def test_piecewise_solutions_are_c1(self, name, r0):
        f = get_problem(name).solution
        h = 1e-6
        left = (f(r0, 0, 0) - f(r0 - h, 0, 0)) / h
        right = (f(r0 + h, 0, 0) - f(r0, 0, 0)) / h
        assert f(r0 - 1e-12, 0, 0) == pytest.approx(f(r0 + 1e-12, 0, 0), abs=1e-10)
        assert left == pytest.approx(right, rel=1e-4)

    def test_sources_vanish_at_infinity(self):
        for name, p in PROBLEMS.items():
            sources = p.source if isinstance(p.source, tuple) else (p.source,)
            assert sources[-1](np.inf, 0.3, 0.2) == 0.0

    def test_ball_values(self):
        f = get_problem("uniform-ball").solution
        assert_allclose(f(np.array([0.0, 1.0, 2.0]), 0, 0), [-0.5, -1 / 3, -1 / 6])

    def test_unknown(self):
        with pytest.raises(ValueError):
            get_problem("gaussian")


class TestRateFits:
    def test_algebraic_exact_power_law(self):
        n = np.array([9, 13, 17, 21, 25, 33, 41])
        assert fit_algebraic_rate(n, 3.0 * n**-4.62) == pytest.approx(4.62, rel=1e-12)

    def test_exponential_exact(self):
        n = np.array([9, 13, 17, 21])
        assert fit_exponential_rate(n, 10.0 ** (-0.35 * n)) == pytest.approx(0.35, rel=1e-12)

    def test_floor_excluded(self):
        n = np.array([9, 13, 17, 21, 25])
        e = np.array([1e-6, 1e-8, 1e-10, 1e-13, 1e-14])
        assert fit_exponential_rate(n, e) == pytest.approx(0.5, rel=1e-12)

    def test_largest_decade_window(self):
        # N_r = 2 lies outside [40/10, 40] and is off the N^-3 trend on purpose
        n = np.array([2, 5, 10, 20, 40])
        e = 125.0 * n.astype(float) ** -3
        e[0] = 1e3
        assert fit_algebraic_rate(n, e) == pytest.approx(3.0, rel=1e-12)

    def test_too_few_points(self):
        assert math.isnan(fit_algebraic_rate([9], [1e-3]))
        assert math.isnan(fit_exponential_rate([9, 13], [1e-13, 1e-14]))


class TestSweep:
    def test_run_case_records(self):
        recs = run_case("uniform-ball", 9)
        assert [r.domain for r in recs] == ["nucleus", "shell", "external"]
        assert all(r.error >= 0 and r.seconds > 0 and r.n_r == 9 for r in recs)

    def test_sorted_and_deterministic(self):
        a = sweep("smooth", [9, 13], bases=("jacobi02", "chebyshev"), max_workers=4)
        b = sweep("smooth", [9, 13], bases=("jacobi02", "chebyshev"), max_workers=1)
        key = lambda r: (r.basis, r.n_r, r.domain, r.error)
        assert [key(r) for r in a] == [key(r) for r in b]
        assert [(r.basis, r.n_r) for r in a][::3] == [("chebyshev", 9), ("chebyshev", 13), ("jacobi02", 9), ("jacobi02", 13)]

    @pytest.mark.parametrize("bad", [[5, 9], [13, 9], [9, 9]])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            sweep("smooth", bad)

    def test_record_row(self):
        rec = ConvergenceRecord(9, "shell", 1e-3, 0.1)
        assert rec.as_row() == {"n_r": 9, "domain": "shell", "error": 1e-3, "seconds": 0.1, "basis": "jacobi02"}
