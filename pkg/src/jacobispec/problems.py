"""Built-in sources with known solutions: S(r, theta, phi) and f(r, theta, phi).

Every source vanishes at r = inf so it can be sampled at the exterior endpoint.
Sources with a jump at an interface are given per domain so that the shared
interface node is sampled from the correct side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["Problem", "PROBLEMS", "get_problem"]

_SQRT_INNER = 7 * 2**2.5 / 2
_SQRT_OUTER = 5 * 2**3.5 / 2


@dataclass(frozen=True)
class Problem:
    name: str
    source: Callable | tuple
    solution: Callable | None


def _finite_r(r):
    return np.where(np.isfinite(r), r, 0.0)


def _smooth_source(r, theta, phi):
    rf = _finite_r(r)
    z = rf * np.cos(theta)
    s = 4 * (rf**2 - 2 + 3 * z**2) * np.exp(-(rf**2) - z**2)
    return np.where(np.isfinite(r), s, 0.0)


def _smooth_solution(r, theta, phi):
    rf = _finite_r(r)
    z = rf * np.cos(theta)
    return np.where(np.isfinite(r), np.exp(-(rf**2) - z**2), 0.0)


def _sqrt_source(r, theta, phi):
    return 35 * np.sqrt(np.abs(r)) / 4


def _sqrt_solution(r, theta, phi):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        outer = -_SQRT_OUTER / r
    return np.where(r <= 2, np.abs(r) ** 2.5 - _SQRT_INNER, outer)


def _ones(r, theta, phi):
    return np.ones(np.broadcast(r, theta, phi).shape)


def _ball_solution(r, theta, phi):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        outer = -1 / (3 * r)
    return np.where(r <= 1, r**2 / 6 - 0.5, outer)


def _zero(r, theta, phi):
    return np.zeros(np.broadcast(r, theta, phi).shape)


PROBLEMS = {
    "smooth": Problem("smooth", _smooth_source, _smooth_solution),
    "sqrt": Problem("sqrt", (_sqrt_source, _sqrt_source, _zero), _sqrt_solution),
    "uniform-ball": Problem("uniform-ball", (_ones, _zero, _zero), _ball_solution),
    "zero": Problem("zero", _zero, _zero),
}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown source {name!r}; choose from {sorted(PROBLEMS)}") from None
