"""Discrete transforms between Gauss-Lobatto nodal values and coefficients.

Jacobi grids use the closed-form discrete transform (endpoint factors
(1+beta) at x_0 and (1+alpha) at x_N, separate formula for the last
coefficient). Chebyshev grids use the usual cosine-sum transform on
x_i = -cos(pi i / N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .jacobi import (
    JacobiIndex,
    _recurrence,
    as_index,
    chebyshev_eval_upto,
    eval_upto,
    gamma_ratio,
    norm_sq,
)
from .quadrature import QuadratureRule, build_rule

__all__ = [
    "CHEBYSHEV",
    "CoeffVector",
    "NodalValues",
    "chebyshev_nodes",
    "forward",
    "forward_projection",
    "forward_matrix",
    "forward_array",
    "inverse",
    "inverse_array",
    "interp_eval",
    "cheb_forward",
    "cheb_forward_matrix",
    "cheb_inverse",
    "cheb_interp_eval",
]

CHEBYSHEV = "chebyshev"

Basis = Union[JacobiIndex, str]

@dataclass(frozen=True)
class CoeffVector:
    """Coefficients in a tagged 1D basis, with a free-form domain mapping tag."""

    basis: Basis
    coeffs: np.ndarray
    mapping: str = "identity"

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite 1D array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.basis != CHEBYSHEV:
            object.__setattr__(self, "basis", as_index(self.basis))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def truncate(self, k: int) -> "CoeffVector":
        return CoeffVector(self.basis, self.coeffs[:k], self.mapping)


@dataclass(frozen=True)
class NodalValues:
    rule: QuadratureRule
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape[0] != self.rule.size:
            raise ValueError(
                f"nodal values have length {v.shape[0]}, rule expects {self.rule.size}"
            )
        object.__setattr__(self, "values", v)


def _gamma_ratio_ld(num, den):
    """Gamma ratio in long double when every argument pairs at an integer distance."""
    den = list(den)
    value = np.longdouble(1)
    for a in num:
        match = next((j for j, b in enumerate(den) if float(a - b).is_integer()), None)
        if match is None:
            return np.longdouble(gamma_ratio(num, den))
        b = den.pop(match)
        if a >= b:
            for k in range(int(a - b)):
                value *= np.longdouble(b + k)
        else:
            for k in range(int(b - a)):
                value /= np.longdouble(a + k)
    if den:
        return np.longdouble(gamma_ratio(num, den))
    return value


def _prefactors(index: JacobiIndex, N: int) -> np.ndarray:
    """Gamma-ratio prefactors of the closed-form transform for m = 0..N-1."""
    a, b = index.alpha, index.beta
    s = a + b
    out = np.empty(N, dtype=np.longdouble)
    for m in range(N):
        # (2m+s+1) Gamma(m+s+1) -> Gamma(s+2) at m = 0 (removes the s = -1 pole)
        if m == 0:
            lead, top = 1.0, s + 2
        else:
            lead, top = 2 * m + s + 1, m + s + 1
        ratio = _gamma_ratio_ld(
            [m + 1, N + 1 + a, N + 1 + b, top],
            [N + 1, m + 1 + a, m + 1 + b, N + s + 1],
        )
        out[m] = np.longdouble(lead) * ratio / np.longdouble(N * (N + s + 1))
    return out


def _refined_nodes(rule: QuadratureRule) -> np.ndarray:
    """Rule nodes polished to long double by Newton steps on J_N'."""
    index, N = rule.index, rule.order
    x = rule.nodes.astype(np.longdouble)
    if N >= 2:
        a, b, s = index.alpha, index.beta, index.alpha + index.beta
        inner = x[1:-1]
        for _ in range(2):
            d1 = _recurrence(a + 1, b + 1, N - 1, inner)[N - 1] * ((N + s + 1) / 2)
            d2 = _recurrence(a + 2, b + 2, N - 2, inner)[N - 2] * ((N + s + 1) * (N + s + 2) / 4)
            inner = inner - d1 / d2
        x[1:-1] = inner
    return x


@lru_cache(maxsize=128)
def _synthesis_ld(index: JacobiIndex, N: int) -> np.ndarray:
    """J_m(x_i) in long double, shape (N+1, N+1) indexed [m, i]."""
    x = _refined_nodes(build_rule(index, N))
    vals = _recurrence(index.alpha, index.beta, N, x)
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=128)
def _forward_ld(index: JacobiIndex, N: int) -> np.ndarray:
    vals = _synthesis_ld(index, N)
    jn = vals[N]
    ends = np.ones(N + 1, dtype=np.longdouble)
    ends[0] = 1 + index.beta
    ends[-1] = 1 + index.alpha
    mat = np.empty((N + 1, N + 1), dtype=np.longdouble)
    mat[:N] = _prefactors(index, N)[:, None] * vals[:N] * (ends / jn**2)[None, :]
    mat[N] = ends / jn / np.longdouble(N + index.alpha + index.beta + 1)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=128)
def _forward_matrix_cached(index: JacobiIndex, N: int) -> np.ndarray:
    mat = _forward_ld(index, N).astype(float)
    mat.setflags(write=False)
    return mat


def forward_matrix(rule_or_index, N: int | None = None) -> np.ndarray:
    """(N+1)x(N+1) analysis matrix of the closed-form transform (read-only)."""
    if isinstance(rule_or_index, QuadratureRule):
        return _forward_matrix_cached(rule_or_index.index, rule_or_index.order)
    return _forward_matrix_cached(as_index(rule_or_index), int(N))


def _apply_ld(mat_ld: np.ndarray, values) -> np.ndarray:
    """Apply a long-double matrix to float data along axis 0; result in float64."""
    values = np.asarray(values, dtype=float)
    return (mat_ld @ values.astype(np.longdouble)).astype(float)


def forward(nodal: NodalValues, mapping: str = "identity") -> CoeffVector:
    """Coefficients of the degree-N interpolant on the rule's Gauss-Lobatto grid."""
    rule = nodal.rule
    coeffs = _apply_ld(_forward_ld(rule.index, rule.order), nodal.values)
    return CoeffVector(rule.index, coeffs, mapping)


def forward_array(rule: QuadratureRule, values) -> np.ndarray:
    """Forward transform of an array of nodal values along its first axis."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] != rule.size:
        raise ValueError(f"expected {rule.size} nodal values, got {values.shape[0]}")
    return _apply_ld(_forward_ld(rule.index, rule.order), values)


def inverse_array(rule: QuadratureRule, coeffs) -> np.ndarray:
    """Synthesis of coefficient arrays (first axis) at the rule nodes."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != rule.size:
        raise ValueError(f"{coeffs.shape[0]} coefficients for a rule of size {rule.size}")
    return _apply_ld(_synthesis_ld(rule.index, rule.order).T, coeffs)


def forward_projection(nodal: NodalValues) -> np.ndarray:
    """Same coefficients by discrete projection: sum rho_i f_i J_m(x_i) / ||J_m||^2.

    The last coefficient divides by the discrete norm sum rho_i J_N(x_i)^2,
    which differs from ||J_N||^2.
    """
    rule = nodal.rule
    N = rule.order
    vals = eval_upto(rule.index, N, rule.nodes)
    wf = rule.weights * nodal.values
    out = np.empty(N + 1)
    for m in range(N):
        out[m] = math.fsum(wf * vals[m]) / norm_sq(rule.index, m)
    out[N] = math.fsum(wf * vals[N]) / math.fsum(rule.weights * vals[N] ** 2)
    return out


def inverse(coeffs: CoeffVector, rule: QuadratureRule) -> NodalValues:
    c = coeffs.coeffs
    if c.size != rule.size:
        raise ValueError(f"{c.size} coefficients for a rule of size {rule.size}")
    if coeffs.basis != rule.index:
        raise ValueError("coefficient basis does not match the rule index")
    return NodalValues(rule, inverse_array(rule, c))


def _clenshaw_jacobi(index: JacobiIndex, c: np.ndarray, x):
    # J_{k+1} = (A_k x + B_k) J_k - C_k J_{k-1}
    a, b = index.alpha, index.beta
    s = a + b
    n = c.size - 1
    x = np.asarray(x, dtype=float)
    if n == 0:
        return c[0] * np.ones_like(x)

    def alpha_k(k):
        if k == 0:
            return 0.5 * (s + 2) * x + 0.5 * (a - b)
        m = 2 * k + s
        lead = 2 * (k + 1) * (k + s + 1) * m
        return (m * (m + 1) * (m + 2) * x + (m + 1) * (a * a - b * b)) / lead

    def beta_k(k):  # coefficient multiplying J_{k-1} in J_{k+1}
        m = 2 * k + s
        lead = 2 * (k + 1) * (k + s + 1) * m
        return -2 * (k + a) * (k + b) * (m + 2) / lead

    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(n, 0, -1):
        bk = c[k] + alpha_k(k) * b1 + (beta_k(k + 1) * b2 if k + 1 <= n else 0.0)
        b2, b1 = b1, bk
    # S = c_0 J_0 + b_1 J_1 + beta_1 J_0 b_2
    return c[0] + b1 * alpha_k(0) + beta_k(1) * b2


def interp_eval(coeffs: CoeffVector, x):
    """Evaluate the expansion at arbitrary x in [-1, 1] by Clenshaw summation."""
    c = coeffs.coeffs
    if coeffs.basis == CHEBYSHEV:
        return cheb_interp_eval(c, x)
    return _clenshaw_jacobi(coeffs.basis, c, x)


# --- Chebyshev --------------------------------------------------------------


def chebyshev_nodes(N: int) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto nodes -cos(pi i / N), ascending."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x = -np.cos(np.pi * np.arange(N + 1) / N)
    # exact symmetry and endpoints
    x = 0.5 * (x - x[::-1])
    return x


@lru_cache(maxsize=128)
def _cheb_forward_cached(N: int) -> np.ndarray:
    i = np.arange(N + 1)
    # T_k(x_i) with x_i = -cos(pi i/N) is cos(k (pi - pi i/N)) = (-1)^k cos(pi k i / N)
    k = i[:, None]
    t = (-1.0) ** k * np.cos(np.pi * k * i[None, :] / N)
    cbar = np.ones(N + 1)
    cbar[0] = cbar[-1] = 2.0
    mat = (2.0 / N) * t / cbar[None, :] / cbar[:, None]
    mat.setflags(write=False)
    return mat


def cheb_forward_matrix(N: int) -> np.ndarray:
    return _cheb_forward_cached(int(N))


def cheb_forward(values, mapping: str = "identity") -> CoeffVector:
    values = np.asarray(values, dtype=float)
    N = values.shape[0] - 1
    return CoeffVector(CHEBYSHEV, cheb_forward_matrix(N) @ values, mapping)


def cheb_inverse(coeffs) -> np.ndarray:
    c = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    N = c.size - 1
    return c @ chebyshev_eval_upto(N, chebyshev_nodes(N))


def cheb_interp_eval(c, x):
    """Clenshaw summation of sum c_k T_k(x)."""
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(c.size - 1, 0, -1):
        b1, b2 = c[k] + 2 * x * b1 - b2, b1
    return c[0] + x * b1 - b2
