"""Jacobi-Gauss-Lobatto quadrature.

Interior nodes are the eigenvalues of a symmetric tridiagonal matrix (the
Jacobi matrix of the normalized (alpha+1, beta+1) family); the weights use
closed forms in 1 / J_N(x_i)^2 with factors (beta+1) and (alpha+1) at the
endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .jacobi import (
    IndexLike,
    JacobiIndex,
    as_index,
    eval_derivative_upto,
    eval_second_derivative_upto,
    eval_upto,
    gamma_ratio,
    weight_integral,
)

__all__ = [
    "TridiagSpec",
    "QuadratureRule",
    "EigenvalueError",
    "tridiag_coeffs",
    "symmetric_tridiag_eigenvalues",
    "sturm_bisection_eigenvalues",
    "build_rule",
    "integrate",
    "legendre_weight_check",
    "m01_weight_check",
    "inverse_inequality_ratio",
]


class EigenvalueError(RuntimeError):
    pass


@dataclass(frozen=True)
class TridiagSpec:
    """Symmetric tridiagonal matrix: ``diag`` (length n), ``offdiag`` (length n-1)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or off.ndim != 1 or off.size != max(diag.size - 1, 0):
            raise ValueError("inconsistent tridiagonal dimensions")
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
            raise ValueError("tridiagonal entries must be finite")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)

    @property
    def size(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """N+1 point Gauss-Lobatto rule for the weight of ``index``."""

    index: JacobiIndex
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != (self.order + 1,) or self.weights.shape != (self.order + 1,):
            raise ValueError("rule arrays must have length order + 1")

    @property
    def size(self) -> int:
        return self.order + 1


def tridiag_coeffs(index: IndexLike, N: int) -> TridiagSpec:
    """delta_1..delta_{N-1} and gamma_1..gamma_{N-2}; empty for N < 2."""
    index = as_index(index)
    a, b = index.alpha, index.beta
    s = a + b
    if N < 2:
        return TridiagSpec(np.zeros(0), np.zeros(0))
    n = np.arange(1, N, dtype=float)
    delta = -(a - b) * (s + 2) / ((2 * n + s) * (2 * n + s + 2))
    m = np.arange(1, N - 1, dtype=float)
    gamma = (2 / (2 * m + s + 2)) * np.sqrt(
        m * (m + a + 1) * (m + b + 1) * (m + s + 2) / ((2 * m + s + 1) * (2 * m + s + 3))
    )
    return TridiagSpec(delta, gamma)


def _ql_implicit(d: np.ndarray, e: np.ndarray, max_iter: int = 60) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.

    ``d`` is the diagonal, ``e`` the subdiagonal padded with a trailing zero.
    Raises EigenvalueError when an eigenvalue fails to converge.
    """
    d = d.copy()
    e = e.copy()
    n = d.size
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise EigenvalueError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(d)


def _sturm_count(diag: np.ndarray, off2: np.ndarray, x: float) -> int:
    """Number of eigenvalues strictly less than x."""
    count = 0
    q = diag[0] - x
    tiny = np.finfo(float).tiny
    if q < 0:
        count += 1
    for i in range(1, diag.size):
        if q == 0.0:
            q = tiny
        q = diag[i] - x - off2[i - 1] / q
        if q < 0:
            count += 1
    return count


def sturm_bisection_eigenvalues(spec: TridiagSpec, tol: float = 1e-15) -> np.ndarray:
    """All eigenvalues by Sturm-sequence bisection (slow, robust)."""
    n = spec.size
    if n == 0:
        return np.zeros(0)
    diag, off = spec.diag, spec.offdiag
    off2 = off**2
    radius = np.abs(diag).copy()
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo0 = float(np.min(diag - (radius - np.abs(diag))))
    hi0 = float(np.max(diag + (radius - np.abs(diag))))
    out = np.empty(n)
    for k in range(n):
        lo, hi = lo0, hi0
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _sturm_count(diag, off2, mid) > k:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def symmetric_tridiag_eigenvalues(spec: TridiagSpec) -> np.ndarray:
    """Ascending eigenvalues; implicit QL with a bisection fallback."""
    if spec.size == 0:
        return np.zeros(0)
    try:
        return _ql_implicit(spec.diag, np.append(spec.offdiag, 0.0))
    except EigenvalueError:
        return sturm_bisection_eigenvalues(spec)


def _weight_constant(index: JacobiIndex, N: int) -> float:
    a, b = index.alpha, index.beta
    s = a + b
    return (
        2.0 ** (s + 1)
        / (N * (N + s + 1))
        * gamma_ratio([N + 1 + a, N + 1 + b], [N + 1, N + 1 + s])
    )


@lru_cache(maxsize=256)
def _build_rule_cached(index: JacobiIndex, N: int) -> QuadratureRule:
    interior = symmetric_tridiag_eigenvalues(tridiag_coeffs(index, N))
    if interior.size:
        # one Newton step on J_N' to tighten the nodes
        d1 = eval_derivative_upto(index, N, interior)[N]
        d2 = eval_second_derivative_upto(index, N, interior)[N]
        interior = interior - d1 / d2
        if index.alpha == index.beta:
            interior = 0.5 * (interior - interior[::-1])
    nodes = np.concatenate(([-1.0], interior, [1.0]))
    jn = eval_upto(index, N, nodes)[N]
    factor = np.ones(N + 1)
    factor[0] = index.beta + 1
    factor[-1] = index.alpha + 1
    weights = factor * _weight_constant(index, N) / jn**2
    return QuadratureRule(index, N, nodes, weights)


def build_rule(index: IndexLike, N: int) -> QuadratureRule:
    """Gauss-Lobatto rule with N+1 nodes, exact on polynomials of degree <= 2N-1.

    Rules are immutable and cached per (index, N).
    """
    if N < 1:
        raise ValueError("Gauss-Lobatto order must be >= 1")
    return _build_rule_cached(as_index(index), int(N))


def integrate(rule: QuadratureRule, values) -> float:
    values = np.asarray(values, dtype=float)
    if values.shape[0] != rule.size:
        raise ValueError(f"expected {rule.size} nodal values, got {values.shape[0]}")
    return rule.weights @ values


def legendre_weight_check(N: int) -> float:
    """Max relative deviation from rho_i = 2 / (N(N+1) L_N(x_i)^2)."""
    rule = build_rule((0, 0), N)
    leg = eval_upto((0, 0), N, rule.nodes)[N]
    expected = 2.0 / (N * (N + 1) * leg**2)
    return float(np.max(np.abs(rule.weights - expected) / expected))


def m01_weight_check(N: int) -> float:
    """Max relative deviation from the (0, 1) formulas 8/[N(N+2)M_N^2] and 4/[N(N+2)M_N^2]."""
    rule = build_rule((0, 1), N)
    m = eval_upto((0, 1), N, rule.nodes)[N]
    expected = 4.0 / (N * (N + 2) * m**2)
    expected[0] *= 2
    return float(np.max(np.abs(rule.weights - expected) / expected))


def inverse_inequality_ratio(index: IndexLike, N: int) -> float:
    """||J_N''||_w / ||J_N'||_w, both integrals done with an exact rule."""
    index = as_index(index)
    if N < 1:
        raise ValueError("N must be >= 1")
    rule = build_rule(index, N)  # exact up to degree 2N-1 >= deg (J_N')^2
    d1 = eval_derivative_upto(index, N, rule.nodes)[N]
    d2 = eval_second_derivative_upto(index, N, rule.nodes)[N]
    return math.sqrt(integrate(rule, d2**2) / integrate(rule, d1**2))


def exact_weight_sum(index: IndexLike) -> float:
    return weight_integral(index)
