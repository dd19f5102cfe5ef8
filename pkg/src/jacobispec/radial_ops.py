"""Coefficient-space operator matrices.

Jacobi (0,2) matrices for d/dx, integration from x=1, regularized division
by (1+x) and multiplication by (1+x), plus the Chebyshev counterparts used by
the shell and exterior domains. Column n of every matrix holds the expansion
of the operator applied to the n-th basis polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .jacobi import J02, eval_derivative_upto
from .transform import CHEBYSHEV

__all__ = [
    "SpectralMatrix",
    "d_matrix_j02",
    "int_matrix_j02",
    "div1px_matrix_j02",
    "mul1px_matrix_j02",
    "endpoint_row_value",
    "endpoint_row_derivative",
    "j02_boundary_rows",
    "cheb_d_matrix",
    "cheb_mul_affine_matrix",
    "cheb_div_affine",
    "cheb_endpoint_rows",
]


@dataclass(frozen=True)
class SpectralMatrix:
    """Dense operator matrix acting on coefficient vectors of ``basis``."""

    basis: object
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2:
            raise ValueError("operator entries must be a 2D array")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def apply(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != self.cols:
            raise ValueError(f"{self.label or 'operator'} expects {self.cols} coefficients")
        return self.entries @ coeffs

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _check_order(N: int) -> int:
    N = int(N)
    if N < 0:
        raise ValueError("truncation order must be >= 0")
    return N


def d_matrix_j02(N: int) -> SpectralMatrix:
    """Derivative: strictly upper triangular in (row j, column n) layout, j < n."""
    N = _check_order(N)
    out = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        j = np.arange(n)
        sign = np.where((n - j) % 2 == 0, 1.0, -1.0)
        out[j, n] = (j + 1.5) * (1 - sign * (j + 1) * (j + 2) / ((n + 1) * (n + 2)))
    return SpectralMatrix(J02, out, "d/dx")


def int_matrix_j02(N: int) -> SpectralMatrix:
    """Primitive vanishing at x = 1; maps degree N to degree N+1, shape (N+2, N+1)."""
    N = _check_order(N)
    out = np.zeros((N + 2, N + 1))
    for n in range(N + 1):
        out[n + 1, n] = (n + 3) / ((n + 2) * (2 * n + 3))
        out[n, n] = -1 / ((n + 1) * (n + 2))
        if n >= 1:
            out[n - 1, n] = -n / ((n + 1) * (2 * n + 3))
    return SpectralMatrix(J02, out, "integral from 1")


def div1px_matrix_j02(N: int) -> SpectralMatrix:
    """f -> (f - f(-1)) / (1 + x) on coefficients."""
    N = _check_order(N)
    out = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        j = np.arange(n)
        sign = np.where((n - 1 - j) % 2 == 0, 1.0, -1.0)
        pn = (n + 1) * (n + 2)
        pj = (j + 1) * (j + 2)
        out[j, n] = sign * (2 * j + 3) / 4 * (pn / pj - pj / pn)
    return SpectralMatrix(J02, out, "regularized 1/(1+x)")


def mul1px_matrix_j02(N: int) -> SpectralMatrix:
    """Multiplication by (1 + x), shape (N+2, N+1)."""
    N = _check_order(N)
    out = np.zeros((N + 2, N + 1))
    for n in range(N + 1):
        out[n + 1, n] = (n + 1) * (n + 3) / ((n + 2) * (2 * n + 3))
        out[n, n] = (n * n + 3 * n + 3) / ((n + 1) * (n + 2))
        if n >= 1:
            out[n - 1, n] = n * (n + 2) / ((n + 1) * (2 * n + 3))
    return SpectralMatrix(J02, out, "(1+x)*")


def endpoint_row_value(N: int) -> np.ndarray:
    """J_n(-1) = (-1)^n (n+1)(n+2)/2 for n = 0..N."""
    n = np.arange(_check_order(N) + 1)
    return np.where(n % 2 == 0, 1.0, -1.0) * (n + 1) * (n + 2) / 2


def endpoint_row_derivative(N: int) -> np.ndarray:
    """J_n'(-1) for n = 0..N."""
    return eval_derivative_upto(J02, _check_order(N), -1.0)


def j02_boundary_rows(N: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """(value row, d/dx row) of the (0,2) basis at x = +1 or -1."""
    N = _check_order(N)
    if x == -1:
        return endpoint_row_value(N), endpoint_row_derivative(N)
    if x == 1:
        # J_n(1) = 1 for (0, 2)
        return np.ones(N + 1), eval_derivative_upto(J02, N, 1.0)
    raise ValueError("boundary rows exist only at x = -1 and x = 1")


def cheb_d_matrix(N: int) -> SpectralMatrix:
    """T_n' = 2n sum over j < n, n - j odd, of T_j / c_j (c_0 = 2)."""
    N = _check_order(N)
    out = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        j = np.arange(n - 1, -1, -2)
        out[j, n] = 2.0 * n
        if j[-1] == 0:
            out[0, n] = n
    return SpectralMatrix(CHEBYSHEV, out, "d/dx")


def cheb_mul_affine_matrix(N: int, a: float, b: float) -> SpectralMatrix:
    """Multiplication by (a + b x), shape (N+2, N+1); x T_n = (T_{n+1} + T_{|n-1|}) / 2."""
    N = _check_order(N)
    out = np.zeros((N + 2, N + 1))
    for n in range(N + 1):
        out[n, n] += a
        if n == 0:
            out[1, 0] += b
        else:
            out[n + 1, n] += b / 2
            out[n - 1, n] += b / 2
    return SpectralMatrix(CHEBYSHEV, out, f"({a}+{b}x)*")


def cheb_div_affine(coeffs, a: float, b: float) -> np.ndarray:
    """Chebyshev coefficients of q with (a + b x) q = f, truncated at deg f.

    Solves the square tridiagonal part of the multiplication system, which is
    diagonally dominant when a + b x has no zero on [-1, 1]. Exact whenever f
    is divisible by (a + b x).
    """
    c = np.asarray(coeffs, dtype=float)
    if abs(a) <= abs(b):
        raise ValueError("a + b x vanishes on [-1, 1]")
    n = c.shape[0]
    if n == 1:
        return c / a
    mul = cheb_mul_affine_matrix(n - 1, a, b).entries[:n]
    banded = np.zeros((3, n))
    banded[0, 1:] = np.diag(mul, 1)
    banded[1] = np.diag(mul)
    banded[2, :-1] = np.diag(mul, -1)
    return solve_banded((1, 1), banded, c)


def cheb_endpoint_rows(N: int) -> dict[str, np.ndarray]:
    """Value and d/dx rows at x = -1 and x = +1."""
    n = np.arange(_check_order(N) + 1, dtype=float)
    alt = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
    return {
        "value_minus": alt,
        "value_plus": np.ones(N + 1),
        "deriv_minus": -alt * n**2,
        "deriv_plus": n**2,
    }
