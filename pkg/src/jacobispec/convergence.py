"""Convergence sweeps over N_r and rate fitting."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .poisson import JACOBI02, _max_workers, max_collocation_error, solve_3d
from .problems import get_problem

__all__ = [
    "ConvergenceRecord",
    "run_case",
    "sweep",
    "fit_algebraic_rate",
    "fit_exponential_rate",
    "ROUNDOFF_FLOOR",
]

DOMAINS = ("nucleus", "shell", "external")
ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True, order=True)
class ConvergenceRecord:
    n_r: int
    domain: str
    error: float
    seconds: float
    basis: str = JACOBI02

    def as_row(self) -> dict:
        return asdict(self)


def run_case(
    source: str, n_r: int, basis: str = JACOBI02, n_theta: int = 17, n_phi: int = 16
) -> list[ConvergenceRecord]:
    """One solve; one record per domain (wall time of the whole solve)."""
    problem = get_problem(source)
    t0 = time.perf_counter()
    sol = solve_3d(problem.source, n_r=n_r, n_theta=n_theta, n_phi=n_phi, nucleus_basis=basis, max_workers=1)
    seconds = time.perf_counter() - t0
    errors = [max_collocation_error(sol, problem.solution, d) for d in DOMAINS]
    return [ConvergenceRecord(n_r, d, e, seconds, basis) for d, e in zip(DOMAINS, errors)]


def sweep(
    source: str,
    n_r_values,
    bases=(JACOBI02,),
    n_theta: int = 17,
    n_phi: int = 16,
    max_workers: int | None = None,
) -> list[ConvergenceRecord]:
    """Independent (N_r, basis) jobs, run concurrently; rows sorted by (basis, N_r, domain)."""
    n_r_values = [int(n) for n in n_r_values]
    if any(n < 6 for n in n_r_values):
        raise ValueError("N_r values must be >= 6")
    if n_r_values != sorted(set(n_r_values)):
        raise ValueError("N_r values must be strictly ascending")
    jobs = [(n, b) for b in bases for n in n_r_values]
    workers = max_workers or _max_workers()

    def job(item):
        n, b = item
        return run_case(source, n, b, n_theta, n_phi)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(job, jobs))
    else:
        chunks = [job(j) for j in jobs]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: (r.basis, r.n_r, DOMAINS.index(r.domain)))


def _fit_window(n_r, errors, floor: float):
    n = np.asarray(n_r, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = e >= floor
    n, e = n[keep], e[keep]
    if n.size:
        # largest decade of N_r ending at the last unsaturated point
        keep = n >= n.max() / 10
        n, e = n[keep], e[keep]
    if n.size < 2:
        return None
    return n, e


def fit_algebraic_rate(n_r, errors, floor: float = ROUNDOFF_FLOOR) -> float:
    """p in error ~ N_r^{-p}: minus the least-squares slope of log10(error) vs log10(N_r)."""
    window = _fit_window(n_r, errors, floor)
    if window is None:
        return math.nan
    n, e = window
    return float(-np.polyfit(np.log10(n), np.log10(e), 1)[0])


def fit_exponential_rate(n_r, errors, floor: float = ROUNDOFF_FLOOR) -> float:
    """Decades lost per unit N_r: minus the slope of log10(error) vs N_r."""
    window = _fit_window(n_r, errors, floor)
    if window is None:
        return math.nan
    n, e = window
    return float(-np.polyfit(n, np.log10(e), 1)[0])
