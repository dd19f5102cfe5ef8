"""scikit-learn style wrappers over the functional core.

``JacobiTransformer`` maps rows of nodal values on a Gauss-Lobatto grid to
Jacobi coefficients and back. ``SpectralPoissonSolver`` fits a solution of
Laplacian(f) = S and predicts f at arbitrary (r, theta, phi) points.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .poisson import JACOBI02, max_collocation_error, solve_3d
from .problems import get_problem
from .quadrature import build_rule
from .transform import forward_array, inverse_array

__all__ = ["JacobiTransformer", "SpectralPoissonSolver"]


class JacobiTransformer(TransformerMixin, BaseEstimator):
    """Discrete Jacobi transform applied row-wise.

    Each sample is the vector of values at the N+1 Gauss-Lobatto nodes
    (ascending) of the (alpha, beta) weight; ``transform`` returns the N+1
    expansion coefficients.
    """

    def __init__(self, alpha: float = 0.0, beta: float = 2.0, order: int = 16):
        self.alpha = alpha
        self.beta = beta
        self.order = order

    def fit(self, X=None, y=None):
        if int(self.order) < 1:
            raise ValueError("order must be >= 1")
        self.rule_ = build_rule((self.alpha, self.beta), int(self.order))
        self.nodes_ = self.rule_.nodes
        self.n_features_in_ = self.rule_.size
        if X is not None:
            self._check(X)
        return self

    def _check(self, X) -> np.ndarray:
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_} nodal values")
        return X

    def transform(self, X):
        check_is_fitted(self, "rule_")
        X = self._check(X)
        return forward_array(self.rule_, X.T).T

    def inverse_transform(self, X):
        check_is_fitted(self, "rule_")
        X = self._check(X)
        return inverse_array(self.rule_, X.T).T

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "rule_")
        return np.array([f"J{m}" for m in range(self.n_features_in_)], dtype=object)


class SpectralPoissonSolver(BaseEstimator):
    """Three-domain spectral solver for Laplacian(f) = S with f -> 0 at infinity.

    ``fit`` takes the source: a built-in problem name, a vectorized callable
    S(r, theta, phi), or a triple of per-domain callables. ``predict`` takes
    an (n, 3) array of (r, theta, phi) points.
    """

    def __init__(self, n_r: int = 17, n_theta: int = 17, n_phi: int = 16, nucleus_basis: str = JACOBI02):
        self.n_r = n_r
        self.n_theta = n_theta
        self.n_phi = n_phi
        self.nucleus_basis = nucleus_basis

    def fit(self, source, y=None):
        self.analytic_ = None
        if isinstance(source, str):
            problem = get_problem(source)
            source, self.analytic_ = problem.source, problem.solution
        self.solution_ = solve_3d(
            source, n_r=self.n_r, n_theta=self.n_theta, n_phi=self.n_phi, nucleus_basis=self.nucleus_basis
        )
        return self

    def predict(self, X):
        check_is_fitted(self, "solution_")
        # r = inf is a valid point, so only NaN is rejected
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != 3:
            raise ValueError("X must be an (n, 3) array of (r, theta, phi)")
        if np.isnan(X).any():
            raise ValueError("X contains NaN")
        return self.solution_.evaluate(X[:, 0], X[:, 1], X[:, 2])

    def collocation_errors(self, analytic=None) -> dict[str, float]:
        """Max collocation error per domain against ``analytic`` (default: the built-in solution)."""
        check_is_fitted(self, "solution_")
        analytic = analytic or self.analytic_
        if analytic is None:
            raise ValueError("no analytic solution available for this source")
        return {d: max_collocation_error(self.solution_, analytic, d) for d in ("nucleus", "shell", "external")}
