"""Jacobi polynomials J_n^(alpha, beta): evaluation and closed-form properties.

Normalization is J_n(1) = Gamma(n+1+alpha) / (Gamma(1+alpha) Gamma(n+1)),
the classical one. Legendre is (0, 0); Chebyshev polynomials are kept as a
separate basis with the usual T_n normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

__all__ = [
    "JacobiIndex",
    "as_index",
    "gamma_ratio",
    "eval_upto",
    "eval_analytic",
    "eval_derivative_upto",
    "eval_second_derivative_upto",
    "value_at_one",
    "norm_sq",
    "deriv_norm_sq",
    "weight_integral",
    "sturm_eigenvalue",
    "leading_coeff",
    "legendre_link_residual",
    "connection_residuals",
    "chebyshev_eval_upto",
    "gram_schmidt_monic_oracle",
    "weighted_energy",
]

# Caps on the test oracles, chosen for conditioning / combinatorial size.
ANALYTIC_MAX_DEGREE = 40
GRAM_SCHMIDT_MAX_DEGREE = 12

_X_SLACK = 1e-12


@dataclass(frozen=True)
class JacobiIndex:
    """Index (alpha, beta) of the weight (1-x)^alpha (1+x)^beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"Jacobi index requires alpha > -1 and beta > -1, "
                f"got ({self.alpha}, {self.beta})"
            )

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer() and float(self.beta).is_integer()

    def __iter__(self):
        yield self.alpha
        yield self.beta


IndexLike = Union[JacobiIndex, Sequence[float]]

J02 = JacobiIndex(0, 2)
LEGENDRE = JacobiIndex(0, 0)


def as_index(index: IndexLike) -> JacobiIndex:
    if isinstance(index, JacobiIndex):
        return index
    alpha, beta = index
    return JacobiIndex(alpha, beta)


# B_{2k} / (2k (2k-1)) for the Stirling series of log Gamma
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def _log_gamma_shift(b: float, f: float) -> float:
    """log Gamma(b+f) - log Gamma(b) for b > 0, b+f > 0, |f| < 1, without cancellation."""
    shift = 0.0
    while b < 20 or b + f < 20:
        shift += math.log(b) - math.log(b + f)
        b += 1
    bf = b + f
    out = (b - 0.5) * math.log1p(f / b) + f * math.log(bf) - f
    for k, c in enumerate(_STIRLING, start=1):
        out += c * (bf ** (1 - 2 * k) - b ** (1 - 2 * k))
    return out + shift


def gamma_ratio(num: Sequence[float], den: Sequence[float]) -> float:
    """Return prod Gamma(num) / prod Gamma(den) without forming Gamma alone.

    Numerator and denominator arguments are paired, closest pairs first. A pair with integer difference reduces to a
    finite product of rationals; otherwise the fractional part of the
    difference goes through a cancellation-free Stirling difference, good to
    about 1e-15 relative. The running product is kept as mantissa and binary
    exponent so it cannot overflow before the final result. All arguments
    must be positive.
    """
    num = [float(a) for a in num]
    den = [float(a) for a in den]
    if min(num + den, default=1.0) <= 0:
        raise ValueError("gamma_ratio arguments must be positive")
    pairs = sorted(
        (abs(a - b), not float(a - b).is_integer(), i, j)
        for i, a in enumerate(num)
        for j, b in enumerate(den)
    )
    used_num: set[int] = set()
    used_den: set[int] = set()
    factors: list[float] = []
    divisors: list[float] = []
    log_rest = 0.0
    for _, _, i, j in pairs:
        if i in used_num or j in used_den:
            continue
        used_num.add(i)
        used_den.add(j)
        a, b = num[i], den[j]
        n = math.ceil(a - b)
        f = (a - b) - n  # in (-1, 0]
        if f:
            # Gamma(a)/Gamma(b+n), with b + n = a - f >= a > 0
            log_rest += _log_gamma_shift(b + n, f)
        if n >= 0:
            factors.extend(b + k for k in range(n))
        else:
            divisors.extend(b + n + k for k in range(-n))
    for i, a in enumerate(num):
        if i not in used_num:
            if a < 170:
                factors.append(math.gamma(a))
            else:
                log_rest += math.lgamma(a)
    for j, b in enumerate(den):
        if j not in used_den:
            if b < 170:
                divisors.append(math.gamma(b))
            else:
                log_rest -= math.lgamma(b)
    mant, expo = 1.0, 0
    for f in factors:
        mant, e = math.frexp(mant * f)
        expo += e
    for d in divisors:
        mant, e = math.frexp(mant / d)
        expo += e
    k = round(log_rest / math.log(2))
    return math.ldexp(mant * math.exp(log_rest - k * math.log(2)), expo + k)


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + _X_SLACK):
        raise ValueError("Jacobi evaluation is restricted to -1 <= x <= 1")
    return x


def _recurrence(alpha: float, beta: float, n: int, x) -> np.ndarray:
    """Three-term recurrence with no index validation.

    Used directly for the shifted families in the connection identities,
    where alpha - 1 may fall to -1 (still a well defined polynomial).
    Long-double input is evaluated in long double.
    """
    x = np.asarray(x)
    if x.dtype != np.longdouble:
        x = x.astype(float)
    out = np.empty((n + 1,) + x.shape, dtype=x.dtype)
    out[0] = 1.0
    if n == 0:
        return out
    s = alpha + beta
    out[1] = 0.5 * ((s + 2) * x + (alpha - beta))
    a2b2 = alpha * alpha - beta * beta
    for k in range(1, n):
        c = 2 * k + s
        lead = 2 * (k + 1) * (k + s + 1) * c
        # Gamma(c+3)/Gamma(c) = c(c+1)(c+2)
        out[k + 1] = (
            ((c + 1) * a2b2 + x * c * (c + 1) * (c + 2)) * out[k]
            - 2 * (k + alpha) * (k + beta) * (c + 2) * out[k - 1]
        ) / lead
    return out


def eval_upto(index: IndexLike, n: int, x) -> np.ndarray:
    """Values J_0(x), ..., J_n(x) by forward recurrence.

    ``x`` may be a scalar or an array; the result has shape ``(n + 1,) + x.shape``.
    """
    index = as_index(index)
    if n < 0:
        raise ValueError("degree must be non-negative")
    return _recurrence(index.alpha, index.beta, n, _check_x(x))


def eval_derivative_upto(index: IndexLike, n: int, x) -> np.ndarray:
    """Derivatives J_0'(x), ..., J_n'(x) via d/dx J_k = (k+a+b+1)/2 J_{k-1}^(a+1,b+1)."""
    index = as_index(index)
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = _check_x(x)
    out = np.zeros((n + 1,) + x.shape)
    if n == 0:
        return out
    shifted = _recurrence(index.alpha + 1, index.beta + 1, n - 1, x)
    k = np.arange(1, n + 1).reshape((n,) + (1,) * x.ndim)
    out[1:] = 0.5 * (k + index.alpha + index.beta + 1) * shifted
    return out


def eval_second_derivative_upto(index: IndexLike, n: int, x) -> np.ndarray:
    index = as_index(index)
    x = _check_x(x)
    out = np.zeros((n + 1,) + x.shape)
    if n < 2:
        return out
    a, b = index.alpha, index.beta
    shifted = _recurrence(a + 2, b + 2, n - 2, x)
    k = np.arange(2, n + 1).reshape((n - 1,) + (1,) * x.ndim)
    out[2:] = 0.25 * (k + a + b + 1) * (k + a + b + 2) * shifted
    return out


def eval_analytic(index: IndexLike, n: int, x: float) -> float:
    """Binomial double-sum expression of J_n, evaluated in exact rationals.

    Independent of the recurrence; intended as a test oracle. Only integer
    indices are supported (the binomials are then ordinary integers).
    """
    index = as_index(index)
    if not index.is_integer:
        raise NotImplementedError("analytic oracle supports integer (alpha, beta) only")
    if not 0 <= n <= ANALYTIC_MAX_DEGREE:
        raise ValueError(f"analytic oracle limited to 0 <= n <= {ANALYTIC_MAX_DEGREE}")
    a, b = int(index.alpha), int(index.beta)
    xf = Fraction(float(x))
    xm, xp = xf - 1, xf + 1
    total = Fraction(0)
    for l in range(n + 1):
        total += math.comb(n + a, n - l) * math.comb(n + b, l) * xm**l * xp ** (n - l)
    return float(total / 2**n)


def value_at_one(index: IndexLike, n: int) -> float:
    """J_n(1) = Gamma(n+1+alpha) / (Gamma(1+alpha) Gamma(n+1))."""
    index = as_index(index)
    return gamma_ratio([n + 1 + index.alpha], [1 + index.alpha, n + 1])


def weight_integral(index: IndexLike) -> float:
    """Integral of (1-x)^a (1+x)^b over [-1, 1]."""
    return norm_sq(index, 0)


def norm_sq(index: IndexLike, n: int) -> float:
    """Squared L2_w norm of J_n."""
    index = as_index(index)
    a, b = index.alpha, index.beta
    s = a + b
    if n == 0:
        # (2n+s+1) Gamma(n+s+1) -> Gamma(s+2) removes the s = -1 pole
        return 2.0 ** (s + 1) * gamma_ratio([a + 1, b + 1], [s + 2])
    return (
        2.0 ** (s + 1)
        / (2 * n + s + 1)
        * gamma_ratio([n + a + 1, n + b + 1], [n + 1, n + s + 1])
    )


def deriv_norm_sq(index: IndexLike, n: int) -> float:
    """Squared L2_w norm (weight w, not (1-x^2) w) of J_n'.

    Equals rho_0 J_n'(-1)^2 + rho_n J_n'(1)^2 for the n-point Lobatto rule;
    for (0, 2) this is (8/3) n (n+3).
    """
    index = as_index(index)
    if n == 0:
        return 0.0
    a, b = index.alpha, index.beta
    s = a + b
    return (
        2.0 ** (s - 1)
        * n
        * (n + s + 1)
        * (1 / (a + 1) + 1 / (b + 1))
        * gamma_ratio([n + 1 + a, n + 1 + b], [n + 1, n + 1 + s])
    )


def sturm_eigenvalue(index: IndexLike, n: int):
    """lambda_n = n (n + alpha + beta + 1); an int when the index is integral."""
    index = as_index(index)
    if index.is_integer:
        return n * (n + int(index.alpha) + int(index.beta) + 1)
    return n * (n + index.alpha + index.beta + 1)


def leading_coeff(index: IndexLike, n: int) -> float:
    """Coefficient of x^n in J_n."""
    index = as_index(index)
    s = index.alpha + index.beta
    if n == 0:
        return 1.0
    k = 0.5 * (s + 2)
    # k_m / k_{m-1} = (2m+s)(2m+s-1) / (2m(m+s)), valid from m = 2 on
    for m in range(2, n + 1):
        k *= (2 * m + s) * (2 * m + s - 1) / (2 * m * (m + s))
    return k


def legendre_link_residual(n: int, x) -> np.ndarray:
    """|(n+3/2)(1+x)^2 J_n^(0,2) - [(n+2) L_n + (2n+3) L_{n+1} + (n+1) L_{n+2}]|."""
    x = _check_x(x)
    j = eval_upto(J02, n, x)[n]
    leg = eval_upto(LEGENDRE, n + 2, x)
    lhs = (n + 1.5) * (1 + x) ** 2 * j
    rhs = (n + 2) * leg[n] + (2 * n + 3) * leg[n + 1] + (n + 1) * leg[n + 2]
    return np.abs(lhs - rhs)


def connection_residuals(index: IndexLike, n: int, x) -> np.ndarray:
    """Relative residuals of the five identities linking neighbouring families.

    Order: raise alpha, raise beta, lower alpha, lower beta, reflection.
    Each residual is |lhs - rhs| / (|lhs| + |terms of rhs| + tiny).
    """
    index = as_index(index)
    a, b = index.alpha, index.beta
    x = _check_x(x)
    base = _recurrence(a, b, n + 1, x)
    jn, jn1 = base[n], base[n + 1]
    jm1 = base[n - 1] if n >= 1 else np.zeros_like(x)
    h = n + a / 2 + b / 2 + 1

    def rel(lhs, *terms):
        scale = np.abs(lhs) + sum(np.abs(t) for t in terms) + 1e-300
        return np.max(np.abs(lhs - sum(terms)) / scale)

    res = np.empty(5)
    res[0] = rel(h * (1 - x) * _recurrence(a + 1, b, n, x)[n], (n + a + 1) * jn, -(n + 1) * jn1)
    res[1] = rel(h * (1 + x) * _recurrence(a, b + 1, n, x)[n], (n + b + 1) * jn, (n + 1) * jn1)
    c = 2 * n + a + b
    res[2] = rel(c * _recurrence(a - 1, b, n, x)[n], (n + a + b) * jn, -(n + b) * jm1)
    res[3] = rel(c * _recurrence(a, b - 1, n, x)[n], (n + a + b) * jn, (n + a) * jm1)
    res[4] = rel(_recurrence(a, b, n, -x)[n], (-1) ** n * _recurrence(b, a, n, x)[n])
    return res


def chebyshev_eval_upto(n: int, x) -> np.ndarray:
    """T_0(x), ..., T_n(x) by T_{k+1} = 2x T_k - T_{k-1}."""
    x = _check_x(x)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for k in range(1, n):
        out[k + 1] = 2 * x * out[k] - out[k - 1]
    return out


def _exact_moments(a: int, b: int, kmax: int) -> list[Fraction]:
    """mu_k = int x^k (1-x)^a (1+x)^b dx over [-1, 1], exactly."""
    # expand the weight into monomials with integer coefficients
    w = [Fraction(0)] * (a + b + 1)
    for i in range(a + 1):
        for j in range(b + 1):
            w[i + j] += math.comb(a, i) * (-1) ** i * math.comb(b, j)
    mono = [Fraction(2, p + 1) if p % 2 == 0 else Fraction(0) for p in range(kmax + a + b + 1)]
    return [sum(w[p] * mono[k + p] for p in range(len(w))) for k in range(kmax + 1)]


def gram_schmidt_monic_oracle(index: IndexLike, n: int) -> list[np.ndarray]:
    """Monic orthogonal polynomials p_0..p_n from Gram-Schmidt on 1, x, x^2, ...

    Inner products are exact rationals (integer indices only). Each entry is
    the ascending coefficient array of p_k.
    """
    index = as_index(index)
    if not index.is_integer:
        raise NotImplementedError("Gram-Schmidt oracle supports integer (alpha, beta) only")
    if not 0 <= n <= GRAM_SCHMIDT_MAX_DEGREE:
        raise ValueError(f"Gram-Schmidt oracle limited to 0 <= n <= {GRAM_SCHMIDT_MAX_DEGREE}")
    mu = _exact_moments(int(index.alpha), int(index.beta), 2 * n)

    def inner(p, q):
        return sum(pi * qj * mu[i + j] for i, pi in enumerate(p) for j, qj in enumerate(q))

    basis: list[list[Fraction]] = []
    for k in range(n + 1):
        p = [Fraction(0)] * k + [Fraction(1)]
        for q in basis:
            coef = inner(p, q) / inner(q, q)
            for i, qi in enumerate(q):
                p[i] -= coef * qi
        basis.append(p)
    return [np.array([float(c) for c in p]) for p in basis]


def weighted_energy(coeffs, index: IndexLike = J02) -> float:
    """sum_n b_n^2 ||J_n||^2, the weighted L2 energy of an expansion."""
    coeffs = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    norms = np.array([norm_sq(index, n) for n in range(coeffs.size)])
    return float(np.sum(coeffs**2 * norms))
