"""scikit-learn style wrappers."""

import pickle

import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from jacobispec import JacobiTransformer, SpectralPoissonSolver
from jacobispec.jacobi import eval_upto
from jacobispec.problems import get_problem


class TestJacobiTransformer:
    def test_params(self):
        t = JacobiTransformer(order=8)
        assert t.get_params() == {"alpha": 0.0, "beta": 2.0, "order": 8}
        t.set_params(alpha=1.0)
        assert clone(t).get_params()["alpha"] == 1.0

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            JacobiTransformer().transform(np.ones((1, 17)))

    def test_transform_rows(self):
        t = JacobiTransformer(order=6).fit()
        X = eval_upto((0, 2), 6, t.nodes_)[[2, 4]]
        assert_allclose(t.transform(X), np.eye(7)[[2, 4]], atol=1e-12)

    def test_inverse_round_trip(self):
        t = JacobiTransformer(alpha=0, beta=1, order=12)
        X = np.random.default_rng(0).normal(size=(5, 13))
        assert_allclose(t.fit(X).inverse_transform(t.transform(X)), X, atol=1e-12)

    def test_fit_transform(self):
        X = np.random.default_rng(1).normal(size=(3, 9))
        a = JacobiTransformer(order=8).fit_transform(X)
        b = JacobiTransformer(order=8).fit(X).transform(X)
        assert_allclose(a, b)

    def test_wrong_width(self):
        t = JacobiTransformer(order=4).fit()
        with pytest.raises(ValueError):
            t.transform(np.ones((2, 4)))

    def test_rejects_nan(self):
        t = JacobiTransformer(order=2).fit()
        with pytest.raises(ValueError):
            t.transform([[1.0, np.nan, 2.0]])

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            JacobiTransformer(order=0).fit()

    def test_feature_names(self):
        names = JacobiTransformer(order=2).fit().get_feature_names_out()
        assert list(names) == ["J0", "J1", "J2"]

    def test_pipeline_and_pickle(self):
        pipe = make_pipeline(FunctionTransformer(np.square), JacobiTransformer(order=4))
        X = np.random.default_rng(2).uniform(size=(4, 5))
        out = pipe.fit_transform(X)
        again = pickle.loads(pickle.dumps(pipe)).transform(X)
        assert_allclose(out, again)


class TestSpectralPoissonSolver:
    def test_params(self):
        s = SpectralPoissonSolver(n_r=9)
        assert s.get_params()["n_r"] == 9
        assert clone(s).get_params() == s.get_params()

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SpectralPoissonSolver().predict(np.zeros((1, 3)))

    def test_named_problem(self):
        s = SpectralPoissonSolver(n_r=17).fit("uniform-ball")
        errs = s.collocation_errors()
        assert max(errs.values()) <= 1e-11
        pts = np.array([[0.0, 0.3, 0.1], [0.5, 1.0, 2.0], [3.0, 2.0, 0.5], [np.inf, 0.0, 0.0]])
        assert_allclose(s.predict(pts), get_problem("uniform-ball").solution(pts[:, 0], 0, 0), atol=1e-12)

    def test_callable_source(self):
        p = get_problem("smooth")
        s = SpectralPoissonSolver(n_r=25).fit(p.source)
        pts = np.array([[0.3, 0.5, 0.2], [1.5, 2.0, 4.0], [2.5, 1.0, 1.0]])
        assert_allclose(s.predict(pts), p.solution(pts[:, 0], pts[:, 1], pts[:, 2]), atol=1e-6)
        with pytest.raises(ValueError):
            s.collocation_errors()
        assert s.collocation_errors(p.solution)["nucleus"] <= 1e-7

    def test_predict_validation(self):
        s = SpectralPoissonSolver(n_r=9, n_theta=5, n_phi=4).fit("zero")
        with pytest.raises(ValueError):
            s.predict(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            s.predict([[np.nan, 0, 0]])

    def test_unknown_source(self):
        with pytest.raises(ValueError):
            SpectralPoissonSolver().fit("plasma")
