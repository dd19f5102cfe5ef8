"""High-accuracy coefficient oracles.

Polynomials are expanded in the Jacobi or Chebyshev basis in exact rational
arithmetic; smooth non-polynomial functions go through an mpmath Chebyshev
interpolant on a fine grid. Used by the self-test and the test suite, where
float64 transforms would add noise that the operator matrices amplify.
"""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .jacobi import IndexLike, as_index

__all__ = [
    "affine_power",
    "jacobi_monomials",
    "expand_jacobi",
    "expand_chebyshev",
    "chebyshev_coeffs_mp",
]


def _polymul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return out


def affine_power(a, b, k: int) -> list[Fraction]:
    """Ascending monomial coefficients of (a + b x)^k."""
    a, b = Fraction(a), Fraction(b)
    return [math.comb(k, j) * a ** (k - j) * b**j for j in range(k + 1)]


def jacobi_monomials(index: IndexLike, n: int) -> list[Fraction]:
    """Ascending monomial coefficients of J_n (integer indices)."""
    return list(_jacobi_monomials(as_index(index), n))


@lru_cache(maxsize=512)
def _jacobi_monomials(index, n: int) -> tuple[Fraction, ...]:
    if not index.is_integer:
        raise NotImplementedError("exact expansion needs integer (alpha, beta)")
    a, b = int(index.alpha), int(index.beta)
    total = [Fraction(0)] * (n + 1)
    for l in range(n + 1):
        term = _polymul(affine_power(-1, 1, l), affine_power(1, 1, n - l))
        c = math.comb(n + a, n - l) * math.comb(n + b, l)
        for i, t in enumerate(term):
            total[i] += c * t
    return tuple(t / 2**n for t in total)


def _triangular_expand(poly, basis_of) -> np.ndarray:
    poly = [Fraction(p) for p in poly]
    n = len(poly) - 1
    rem = list(poly)
    out = [Fraction(0)] * (n + 1)
    for k in range(n, -1, -1):
        bk = basis_of(k)
        out[k] = rem[k] / bk[k]
        for i in range(k + 1):
            rem[i] -= out[k] * bk[i]
    return np.array([float(c) for c in out])


def expand_jacobi(index: IndexLike, poly, size: int | None = None) -> np.ndarray:
    """Jacobi coefficients of the polynomial with ascending monomial coefficients ``poly``."""
    index = as_index(index)
    out = _triangular_expand(poly, lambda k: _jacobi_monomials(index, k))
    return _pad(out, size)


@lru_cache(maxsize=512)
def _cheb_monomials(k: int) -> tuple[Fraction, ...]:
    t0, t1 = [Fraction(1)], [Fraction(0), Fraction(1)]
    if k == 0:
        return tuple(t0)
    for _ in range(k - 1):
        t0, t1 = t1, [-c for c in t0] + [Fraction(0)] * 2
        for i in range(len(t0)):
            t1[i + 1] += 2 * t0[i]
        t1 = t1[: len(t0) + 1]
    return tuple(t1)


def expand_chebyshev(poly, size: int | None = None) -> np.ndarray:
    out = _triangular_expand(poly, _cheb_monomials)
    return _pad(out, size)


def _pad(c: np.ndarray, size: int | None) -> np.ndarray:
    if size is None:
        return c
    if c.size > size:
        raise ValueError(f"polynomial degree {c.size - 1} exceeds {size - 1}")
    return np.concatenate([c, np.zeros(size - c.size)])


def chebyshev_coeffs_mp(f: Callable, size: int, fine: int = 96, dps: int = 40) -> np.ndarray:
    """First ``size`` Chebyshev coefficients of f from a ``fine``-point interpolant in mpmath."""
    with mpmath.workdps(dps):
        M = fine
        xs = [mpmath.cos(mpmath.pi * j / M) for j in range(M + 1)]
        fx = [f(x) for x in xs]
        out = []
        for k in range(size):
            s = mpmath.mpf(0)
            for j in range(M + 1):
                w = mpmath.mpf(1) / 2 if j in (0, M) else 1
                s += w * fx[j] * mpmath.cos(mpmath.pi * k * j / M)
            c = 2 * s / M
            if k in (0, M):
                c /= 2
            out.append(float(c))
    return np.array(out)
