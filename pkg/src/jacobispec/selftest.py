"""Closed-form self checks, grouped in suites.

Suites: quadrature (moment exactness), weights (closed-form rules and weight
sums), transform (round trip, two forward paths, Vandermonde oracle),
operators (coefficient-matrix identities), links (Legendre link identity),
kernels (harmonic solutions annihilated by the radial operators).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from .exact import affine_power, chebyshev_coeffs_mp, expand_chebyshev, expand_jacobi, jacobi_monomials
from .jacobi import J02, as_index, eval_upto, legendre_link_residual, weight_integral
from .poisson import external_operator, nucleus_operator, shell_operator
from .quadrature import build_rule, integrate, legendre_weight_check, m01_weight_check
from .radial_ops import d_matrix_j02, div1px_matrix_j02, int_matrix_j02, mul1px_matrix_j02
from .transform import NodalValues, forward, forward_array, forward_projection, inverse_array

__all__ = ["Check", "SuiteResult", "SUITES", "run_selftest"]

QUAD_INDICES = ((0, 0), (0, 1), (0, 2), (1, 1), (-0.5, -0.5))
QUAD_ORDERS = (2, 4, 8, 16, 32, 64)
TRANSFORM_INDICES = ((0, 0), (0, 1), (0, 2))


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    passed: bool

    @classmethod
    def at_most(cls, name: str, value: float, tol: float) -> "Check":
        value = float(value)
        return cls(name, value, tol, bool(value <= tol))

    @classmethod
    def at_least(cls, name: str, value: float, tol: float) -> "Check":
        value = float(value)
        return cls(name, value, tol, bool(value >= tol))


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


# --- quadrature -------------------------------------------------------------


@lru_cache(maxsize=64)
def exact_moments(index, kmax: int) -> tuple[float, ...]:
    """mu_k = int x^k w for k = 0..kmax in 60-digit arithmetic.

    mu_0 is a Beta function; integrating d/dx[(1-x)^(a+1) (1+x)^(b+1) x^k] = 0
    gives mu_{k+1} = (k mu_{k-1} + (b - a) mu_k) / (k + a + b + 2).
    """
    a, b = as_index(index)
    with mpmath.workdps(60):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        mu = [mpmath.mpf(2) ** (a + b + 1) * mpmath.beta(a + 1, b + 1)]
        for k in range(kmax):
            lower = mu[k - 1] if k else 0
            mu.append((k * lower + (b - a) * mu[k]) / (k + a + b + 2))
        out = [float(m) for m in mu]
    return tuple(out)


def moment_error(index, N: int, k: int) -> float:
    """Relative error of the rule's k-th moment.

    Vanishing moments are scaled by the rule's absolute moment sum rho_i |x_i|^k.
    """
    rule = build_rule(index, N)
    mu = exact_moments(as_index(index), 2 * N)[k]
    got = integrate(rule, rule.nodes**k)
    return abs(got - mu) / max(abs(mu), integrate(rule, np.abs(rule.nodes) ** k))


def suite_quadrature(indices=QUAD_INDICES, orders=QUAD_ORDERS) -> list[Check]:
    checks = []
    for idx in indices:
        for N in orders:
            worst = max(moment_error(idx, N, k) for k in range(2 * N))
            checks.append(Check.at_most(f"moments deg<=2N-1 {idx} N={N}", worst, 1e-11))
    checks.append(Check.at_least("degree-2N moment fails (0,2) N=2", moment_error((0, 2), 2, 4), 1e-3))
    return checks


# --- weights ----------------------------------------------------------------


def suite_weights(perturb_weight: float = 0.0, max_order: int = 32) -> list[Check]:
    checks = []
    rule = build_rule(J02, 2)
    checks.append(Check.at_most("(0,2) N=2 nodes", np.max(np.abs(rule.nodes - [-1, 1 / 3, 1])), 1e-13))
    checks.append(Check.at_most("(0,2) N=2 weights", np.max(np.abs(rule.weights - [1 / 15, 9 / 5, 4 / 5])), 1e-13))
    cheb = max(
        np.max(np.abs(build_rule((-0.5, -0.5), N).weights[1:-1] - math.pi / N)) for N in range(2, max_order + 1)
    )
    checks.append(Check.at_most("Chebyshev interior weights pi/N", cheb, 1e-13))
    checks.append(
        Check.at_most("Legendre weight formula", max(legendre_weight_check(N) for N in range(1, max_order + 1)), 1e-12)
    )
    checks.append(Check.at_most("(0,1) weight formula", max(m01_weight_check(N) for N in range(1, max_order + 1)), 1e-12))
    worst = 0.0
    for idx in QUAD_INDICES:
        for N in QUAD_ORDERS:
            w = np.array(build_rule(idx, N).weights)
            w[0] += perturb_weight
            worst = max(worst, abs(w.sum() - weight_integral(idx)) / weight_integral(idx))
    checks.append(Check.at_most("weight sums equal int w", worst, 1e-13))
    return checks


# --- transform ----------------------------------------------------------------


def round_trip_error(index, N: int, seed: int = 0, columns: int = 4) -> float:
    rule = build_rule(index, N)
    rng = np.random.default_rng([seed, N])
    v = rng.uniform(-1, 1, (N + 1, columns))
    return float(np.max(np.abs(inverse_array(rule, forward_array(rule, v)) - v)))


def forward_paths_gap(index, N: int, seed: int = 0) -> float:
    rule = build_rule(index, N)
    v = np.random.default_rng([seed, N, 1]).uniform(-1, 1, N + 1)
    nodal = NodalValues(rule, v)
    return float(np.max(np.abs(forward(nodal).coeffs - forward_projection(nodal))))


def vandermonde_gap(index, N: int, seed: int = 0) -> float:
    rule = build_rule(index, N)
    v = np.random.default_rng([seed, N, 2]).uniform(-1, 1, N + 1)
    vander = eval_upto(index, N, rule.nodes).T
    oracle = np.linalg.solve(vander, v)
    return float(np.max(np.abs(forward_array(rule, v) - oracle)))


def suite_transform(orders=None, vander_max: int = 24) -> list[Check]:
    orders = list(orders or (1, 2, 4, 8, 16, 32, 48, 64, 96, 128))
    checks = []
    for idx in TRANSFORM_INDICES:
        checks.append(
            Check.at_most(f"round trip {idx} N<=128", max(round_trip_error(idx, N) for N in orders), 1e-12)
        )
        checks.append(
            Check.at_most(f"forward paths agree {idx}", max(forward_paths_gap(idx, N) for N in orders), 1e-12)
        )
        checks.append(
            Check.at_most(
                f"Vandermonde oracle {idx} N<={vander_max}",
                max(vandermonde_gap(idx, N) for N in range(1, vander_max + 1)),
                1e-10,
            )
        )
    return checks


# --- operators ----------------------------------------------------------------


@lru_cache(maxsize=8)
def exact_derivative_matrix(N: int) -> np.ndarray:
    """(0,2) derivative matrix built column by column in rational arithmetic."""
    out = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        mono = jacobi_monomials(J02, n)
        deriv = [k * c for k, c in enumerate(mono)][1:]
        out[:n, n] = expand_jacobi(J02, deriv)
    return out


def operator_identity_errors(N: int, n_random: int = 50, seed: int = 0) -> dict[str, float]:
    rng = np.random.default_rng([seed, N])
    d_next = d_matrix_j02(N + 1).entries
    integ = int_matrix_j02(N).entries
    eye = np.eye(N + 2)[:, : N + 1]
    div_next = div1px_matrix_j02(N + 1).entries
    mul = mul1px_matrix_j02(N).entries
    d = d_matrix_j02(N).entries
    exact = exact_derivative_matrix(N)
    coeffs = rng.uniform(-1, 1, (N + 1, n_random))
    return {
        "D int = I": float(np.max(np.abs(d_next @ integ - eye))),
        "div mul = I": float(np.max(np.abs(div_next @ mul - eye))),
        "D vs analytic derivative": float(np.max(np.abs(d @ coeffs - exact @ coeffs))),
    }


def suite_operators(orders=(8, 16, 32, 48)) -> list[Check]:
    worst: dict[str, float] = {}
    for N in orders:
        for name, err in operator_identity_errors(N).items():
            worst[name] = max(worst.get(name, 0.0), err)
    return [Check.at_most(f"{name} N<={max(orders)}", err, 1e-11) for name, err in worst.items()]


def suite_links(n_max: int = 25) -> list[Check]:
    x = np.linspace(-1, 1, 201)
    worst = max(float(np.max(legendre_link_residual(n, x))) for n in range(n_max + 1))
    return [Check.at_most(f"Legendre link n<={n_max}", worst, 1e-11)]


# --- kernels ------------------------------------------------------------------


def kernel_residuals(l: int, N: int = 24) -> dict[str, float]:
    """Max coefficient of the operator applied to each harmonic solution.

    Polynomial solutions are expanded exactly; 1/r^{l+1} on the shell is
    expanded from a 40-digit interpolant and truncated at degree N.
    """
    r_nuc = [c / 2**l for c in affine_power(1, 1, l)]
    r_shell = [c / 2**l for c in affine_power(3, 1, l)]
    inv_ext = [c / 4 ** (l + 1) for c in affine_power(1, -1, l + 1)]
    inv_shell = chebyshev_coeffs_mp(lambda x: (2 / (3 + x)) ** (l + 1), N + 1)
    return {
        "nucleus r^l": float(np.max(np.abs(nucleus_operator(l, N).entries @ expand_jacobi(J02, r_nuc, N + 1)))),
        "shell r^l": float(np.max(np.abs(shell_operator(l, N).entries @ expand_chebyshev(r_shell, N + 1)))),
        "shell r^-(l+1)": float(np.max(np.abs(shell_operator(l, N).entries @ inv_shell))),
        "external r^-(l+1)": float(
            np.max(np.abs(external_operator(l, N).entries @ expand_chebyshev(inv_ext, N + 1)))
        ),
    }


def suite_kernels(l_max: int = 8, N: int = 24) -> list[Check]:
    checks = []
    for l in range(l_max + 1):
        for name, err in kernel_residuals(l, N).items():
            checks.append(Check.at_most(f"{name} l={l} N={N}", err, 1e-10))
    return checks


SUITES = {
    "quadrature": suite_quadrature,
    "weights": suite_weights,
    "transform": suite_transform,
    "operators": suite_operators,
    "links": suite_links,
    "kernels": suite_kernels,
}


def run_selftest(suites=None, perturb_weight: float = 0.0) -> list[SuiteResult]:
    names = list(suites or SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    results = []
    for name in names:
        t0 = time.perf_counter()
        if name == "weights":
            checks = suite_weights(perturb_weight=perturb_weight)
        else:
            checks = SUITES[name]()
        results.append(SuiteResult(name, checks, time.perf_counter() - t0))
    return results
