"""Three-domain tau solver for the Poisson equation Laplacian(f) = S.

Domains: a nucleus r in [0, 1] (Jacobi (0,2) basis with r = (1+x)/2, or a
Chebyshev basis of fixed parity with r = x in comparison mode), a shell
r in [1, 2] with r = (3+x)/2, and a compactified exterior r in [2, inf) with
r = 4/(1-x). Each (l, m) harmonic gives one radial block system.

Tau rows. The regularized nucleus operator kills 1 and (1+x) for every l
(and (1+x)^l for l >= 2) and maps P_N into P_{N-2}, so it gives up two (l <= 1)
or three (l >= 2) rows: regularity rows plus f continuity at r = 1. The shell
gives up two rows for df/dr continuity at r = 1 and f continuity at r = 2; the
exterior gives up two for df/dr continuity at r = 2 and decay f(x=1) = 0.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .jacobi import J02, chebyshev_eval_upto, eval_upto
from .quadrature import build_rule
from .radial_ops import (
    SpectralMatrix,
    cheb_d_matrix,
    cheb_endpoint_rows,
    cheb_mul_affine_matrix,
    d_matrix_j02,
    div1px_matrix_j02,
    j02_boundary_rows,
)
from .sph_harm import AngularGrid, HarmonicCoeffs, analyze, assoc_legendre_normalized, build_grid, synthesize
from .transform import CHEBYSHEV, chebyshev_nodes, cheb_forward_matrix, forward_array, inverse_array

__all__ = [
    "JACOBI02",
    "CHEBYSHEV_PARITY",
    "SingularSystemError",
    "DomainSpec",
    "default_domains",
    "nucleus_operator",
    "nucleus_operator_cheb",
    "shell_operator",
    "external_operator",
    "RadialBlockSystem",
    "assemble_block_system",
    "radial_rhs",
    "solve_radial",
    "SolutionField",
    "solve_3d",
    "max_collocation_error",
    "interface_mismatch",
]

JACOBI02 = "jacobi02"
CHEBYSHEV_PARITY = "chebyshev"
_KINDS = ("nucleus", "shell", "external")
_SINGULAR_PIVOT = 1e-13


class SingularSystemError(np.linalg.LinAlgError):
    def __init__(self, l: int, n_r: int, detail: str = ""):
        self.l, self.n_r = l, n_r
        super().__init__(f"singular radial system for l={l}, N_r={n_r}" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    n_r: int
    basis: str = CHEBYSHEV_PARITY

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n_r < 2:
            raise ValueError("n_r must be >= 2")
        if self.kind == "nucleus":
            if self.basis not in (JACOBI02, CHEBYSHEV_PARITY):
                raise ValueError(f"unknown nucleus basis {self.basis!r}")
        elif self.basis != CHEBYSHEV_PARITY:
            object.__setattr__(self, "basis", CHEBYSHEV_PARITY)

    @property
    def size(self) -> int:
        return self.n_r + 1

    @property
    def is_jacobi(self) -> bool:
        return self.kind == "nucleus" and self.basis == JACOBI02

    @property
    def is_parity(self) -> bool:
        return self.kind == "nucleus" and self.basis == CHEBYSHEV_PARITY

    def nodes(self) -> np.ndarray:
        """Radial collocation points in x, ascending."""
        if self.is_jacobi:
            return build_rule(J02, self.n_r).nodes
        if self.is_parity:
            return chebyshev_nodes(2 * self.n_r)[self.n_r :]
        return chebyshev_nodes(self.n_r)

    def r_of_x(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "nucleus":
            return (1 + x) / 2 if self.is_jacobi else x.copy()
        if self.kind == "shell":
            return (3 + x) / 2
        with np.errstate(divide="ignore"):
            return np.where(x < 1, 4 / np.where(x < 1, 1 - x, 1.0), np.inf)

    def r_nodes(self) -> np.ndarray:
        return self.r_of_x(self.nodes())

    def dr_factor(self, x: float) -> float:
        """d/dr = factor * d/dx at x."""
        if self.kind == "external":
            return (1 - x) ** 2 / 4
        return 1.0 if self.is_parity else 2.0

    def source_factor(self, x):
        """Nodal multiplier turning S into the right-hand side of the premultiplied equation."""
        x = np.asarray(x, dtype=float)
        if self.kind == "nucleus":
            return x**2 if self.is_parity else np.ones_like(x)
        if self.kind == "shell":
            return (3 + x) ** 2 / 4
        return np.full_like(x, 16.0)


def default_domains(n_r: int, nucleus_basis: str = JACOBI02) -> tuple[DomainSpec, DomainSpec, DomainSpec]:
    return (
        DomainSpec("nucleus", n_r, nucleus_basis),
        DomainSpec("shell", n_r),
        DomainSpec("external", n_r),
    )


def _check_l(l: int) -> int:
    if l < 0:
        raise ValueError("l must be >= 0")
    return int(l)


def nucleus_operator(l: int, N: int) -> SpectralMatrix:
    """4 [f'' + 2 (f' - f'(-1))/(1+x) - l(l+1) (f - f(-1) - (1+x) f'(-1))/(1+x)^2]."""
    l = _check_l(l)
    d = d_matrix_j02(N).entries
    v = div1px_matrix_j02(N).entries
    # v @ v already subtracts g(-1) = f'(-1) at the second division
    op = 4 * (d @ d + 2 * v @ d - l * (l + 1) * v @ v)
    return SpectralMatrix(J02, op, f"nucleus l={l}")


def _cheb_poly_operator(N: int, terms, pad: int = 4) -> np.ndarray:
    """sum_k p_k(x) d^k/dx^k on P_N, products formed exactly then truncated to N+1 rows.

    ``terms`` maps derivative order to the roots-free affine factor list of p_k,
    each factor (a, b) meaning (a + b x), plus a scalar.
    """
    K = N + pad
    d = cheb_d_matrix(K).entries
    out = np.zeros((K + 1, K + 1))
    for order, (scale, factors) in terms.items():
        m = np.linalg.matrix_power(d, order) * scale
        for a, b in factors:
            m = cheb_mul_affine_matrix(K, a, b).entries[: K + 1] @ m
        out += m
    return out[: N + 1, : N + 1]


def shell_operator(l: int, N: int) -> SpectralMatrix:
    """(3+x)^2 f'' + 2 (3+x) f' - l(l+1) f; right-hand side (3+x)^2 S / 4."""
    l = _check_l(l)
    op = _cheb_poly_operator(
        N,
        {2: (1.0, [(3, 1), (3, 1)]), 1: (2.0, [(3, 1)]), 0: (-l * (l + 1.0), [])},
    )
    return SpectralMatrix(CHEBYSHEV, op, f"shell l={l}")


def external_operator(l: int, N: int) -> SpectralMatrix:
    """(1-x)^4 f'' - l(l+1) (1-x)^2 f; right-hand side 16 S."""
    l = _check_l(l)
    op = _cheb_poly_operator(
        N,
        {2: (1.0, [(1, -1)] * 4), 0: (-l * (l + 1.0), [(1, -1)] * 2)},
    )
    return SpectralMatrix(CHEBYSHEV, op, f"external l={l}")


def nucleus_operator_cheb(l: int, N: int) -> SpectralMatrix:
    """x^2 f'' + 2 x f' - l(l+1) f on T_{2k+p}, k = 0..N, p = l mod 2; right-hand side x^2 S."""
    l = _check_l(l)
    p = l % 2
    full = _cheb_poly_operator(
        2 * N + 1,
        {2: (1.0, [(0, 1), (0, 1)]), 1: (2.0, [(0, 1)]), 0: (-l * (l + 1.0), [])},
    )
    idx = np.arange(p, 2 * N + 2, 2)[: N + 1]
    return SpectralMatrix(CHEBYSHEV, full[np.ix_(idx, idx)], f"nucleus (parity) l={l}")


# --- block system -------------------------------------------------------------


def _boundary_rows(dom: DomainSpec, l: int, side: int) -> tuple[np.ndarray, np.ndarray]:
    """(value row, d/dx row) at x = side for the domain's basis (parity-restricted if needed)."""
    N = dom.n_r
    if dom.is_jacobi:
        return j02_boundary_rows(N, float(side))
    if dom.is_parity:
        n = np.arange(l % 2, 2 * N + 2, 2)[: N + 1].astype(float)
        return np.ones(N + 1), n**2
    rows = cheb_endpoint_rows(N)
    key = "plus" if side == 1 else "minus"
    return rows["value_" + key], rows["deriv_" + key]


def _operator(dom: DomainSpec, l: int) -> np.ndarray:
    if dom.kind == "nucleus":
        return (nucleus_operator(l, dom.n_r) if dom.is_jacobi else nucleus_operator_cheb(l, dom.n_r)).entries
    if dom.kind == "shell":
        return shell_operator(l, dom.n_r).entries
    return external_operator(l, dom.n_r).entries


def _nucleus_drop(dom: DomainSpec, l: int) -> int:
    if dom.is_parity:
        return 1
    return 2 if l <= 1 else 3


@dataclass(frozen=True)
class RadialBlockSystem:
    """Assembled tau system for one l; ``condition_rows`` maps condition names to row indices."""

    l: int
    domains: tuple[DomainSpec, DomainSpec, DomainSpec]
    matrix: np.ndarray = field(repr=False)
    operator_rows: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)
    condition_rows: Mapping[str, int] = field(default_factory=dict)
    _lu: tuple = field(default=None, repr=False, compare=False)

    @property
    def n_r(self) -> int:
        return self.domains[0].n_r

    @property
    def offsets(self) -> tuple[int, int, int, int]:
        o = [0]
        for d in self.domains:
            o.append(o[-1] + d.size)
        return tuple(o)

    @property
    def size(self) -> int:
        return self.offsets[-1]

    def rhs(self, sources, condition_values: Mapping[str, float] | None = None) -> np.ndarray:
        """Right-hand side from per-domain source coefficient arrays (first axis radial)."""
        sources = [np.asarray(s) for s in sources]
        trailing = sources[0].shape[1:]
        dtype = np.result_type(*sources, float)
        out = np.zeros((self.size,) + trailing, dtype=dtype)
        off = self.offsets
        for k, (rows, s) in enumerate(zip(self.operator_rows, sources)):
            if s.shape[0] != self.domains[k].size:
                raise ValueError(f"{self.domains[k].kind} source has {s.shape[0]} coefficients")
            out[off[k] + rows] = s[rows]
        for name, value in (condition_values or {}).items():
            if name not in self.condition_rows:
                raise KeyError(f"unknown condition {name!r}")
            out[self.condition_rows[name]] = value
        return out


def assemble_block_system(
    l: int, n_r: int | None = None, domains=None, nucleus_basis: str = JACOBI02
) -> RadialBlockSystem:
    """Three-block tau matrix for harmonic degree l."""
    l = _check_l(l)
    if domains is None:
        if n_r is None:
            raise ValueError("give n_r or domains")
        if n_r < 6:
            raise ValueError("N_r must be >= 6")
        domains = default_domains(n_r, nucleus_basis)
    nuc, shell, ext = domains
    sizes = [d.size for d in domains]
    off = np.concatenate(([0], np.cumsum(sizes)))
    A = np.zeros((off[-1], off[-1]))
    cond: dict[str, int] = {}
    kept = []

    drops = (_nucleus_drop(nuc, l), 2, 2)
    for k, dom in enumerate(domains):
        op = _operator(dom, l)
        rows = np.arange(dom.size - drops[k])
        A[off[k] + rows, off[k] : off[k + 1]] = op[rows]
        kept.append(rows)

    def put(name, k, entries):
        r = off[k] + dom_free[k].pop(0)
        cond[name] = int(r)
        for blk, row in entries:
            A[r, off[blk] : off[blk + 1]] = row

    dom_free = [list(range(d.size - drops[k], d.size)) for k, d in enumerate(domains)]

    nv_m, nd_m = _boundary_rows(nuc, l, -1)
    nv_p, nd_p = _boundary_rows(nuc, l, 1)
    sv_m, sd_m = _boundary_rows(shell, l, -1)
    sv_p, sd_p = _boundary_rows(shell, l, 1)
    ev_m, ed_m = _boundary_rows(ext, l, -1)
    ev_p, _ = _boundary_rows(ext, l, 1)

    if nuc.is_jacobi:
        if l == 0:
            put("regularity_derivative", 0, [(0, nd_m)])
        elif l == 1:
            put("regularity_value", 0, [(0, nv_m)])
        else:
            put("regularity_value", 0, [(0, nv_m)])
            put("regularity_derivative", 0, [(0, nd_m)])
    put("match_value_r1", 0, [(0, nv_p), (1, -sv_m)])
    put("match_derivative_r1", 1, [(0, nuc.dr_factor(1.0) * nd_p), (1, -shell.dr_factor(-1.0) * sd_m)])
    put("match_value_r2", 1, [(1, sv_p), (2, -ev_m)])
    put("match_derivative_r2", 2, [(1, shell.dr_factor(1.0) * sd_p), (2, -ext.dr_factor(-1.0) * ed_m)])
    put("decay", 2, [(2, ev_p)])

    lu, piv = lu_factor(A, check_finite=True)
    diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(diag)) or diag.min() <= _SINGULAR_PIVOT * diag.max():
        raise SingularSystemError(l, nuc.n_r, f"pivot ratio {diag.min() / diag.max():.2e}")
    A.setflags(write=False)
    return RadialBlockSystem(l, tuple(domains), A, tuple(kept), cond, (lu, piv))


def radial_rhs(dom: DomainSpec, l: int, source_nodal) -> np.ndarray:
    """Coefficients of (source factor) * S from nodal values along the first axis."""
    s = np.asarray(source_nodal)
    if np.iscomplexobj(s):
        return radial_rhs(dom, l, s.real) + 1j * radial_rhs(dom, l, s.imag)
    x = dom.nodes()
    scaled = s * dom.source_factor(x).reshape((-1,) + (1,) * (s.ndim - 1))
    if dom.is_jacobi:
        return forward_array(build_rule(J02, dom.n_r), scaled)
    if dom.is_parity:
        return _parity_forward(dom.n_r, l % 2) @ scaled
    return cheb_forward_matrix(dom.n_r) @ scaled


@lru_cache(maxsize=64)
def _parity_forward(N: int, p: int) -> np.ndarray:
    """Half-grid values on [0, 1] -> coefficients of T_{2k+p}, k = 0..N, via parity extension."""
    full = cheb_forward_matrix(2 * N)  # nodes ascending on [-1, 1], index N is x = 0
    ext = np.zeros((2 * N + 1, N + 1))
    sign = -1.0 if p else 1.0
    for j in range(N + 1):
        ext[N + j, j] += 1.0
        if j:
            ext[N - j, j] += sign
    coeffs = full @ ext
    out = np.zeros((N + 1, N + 1))
    idx = np.arange(p, 2 * N + 1, 2)
    out[: idx.size] = coeffs[idx]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def _parity_synthesis(N: int, p: int) -> np.ndarray:
    x = chebyshev_nodes(2 * N)[N:]
    t = chebyshev_eval_upto(2 * N + 1, x)
    return t[np.arange(p, 2 * N + 2, 2)[: N + 1]]


def radial_synthesis(dom: DomainSpec, l: int, coeffs) -> np.ndarray:
    """Nodal values from radial coefficients (first axis)."""
    c = np.asarray(coeffs)
    if np.iscomplexobj(c):
        return radial_synthesis(dom, l, c.real) + 1j * radial_synthesis(dom, l, c.imag)
    if dom.is_jacobi:
        return inverse_array(build_rule(J02, dom.n_r), c)
    if dom.is_parity:
        return np.tensordot(_parity_synthesis(dom.n_r, l % 2), c, axes=(0, 0))
    x = dom.nodes()
    return np.tensordot(chebyshev_eval_upto(dom.n_r, x), c, axes=(0, 0))


def solve_radial(system: RadialBlockSystem, sources, condition_values=None, residual_check: bool = True):
    """Solve for the three coefficient blocks; ``sources`` are per-domain rhs coefficient arrays."""
    b = system.rhs(sources, condition_values)
    lu = system._lu
    if np.iscomplexobj(b):
        x = lu_solve(lu, b.real) + 1j * lu_solve(lu, b.imag)
    else:
        x = lu_solve(lu, b)
    if residual_check:
        res = np.max(np.abs(system.matrix @ x - b), initial=0.0)
        scale = np.max(np.abs(b), initial=0.0)
        if not np.isfinite(res) or res > 1e-8 * max(scale, 1e-300) and scale > 0:
            raise SingularSystemError(system.l, system.n_r, f"residual {res:.2e}")
    off = system.offsets
    return tuple(x[off[k] : off[k + 1]] for k in range(3))


# --- 3D driver ------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionField:
    """Per-domain harmonic coefficients (trailing radial-coefficient axis) and nodal values."""

    domains: tuple[DomainSpec, DomainSpec, DomainSpec]
    grid: AngularGrid
    coeffs: tuple[HarmonicCoeffs, HarmonicCoeffs, HarmonicCoeffs] = field(repr=False)
    values: tuple[np.ndarray, np.ndarray, np.ndarray] = field(repr=False)

    def domain_index(self, domain) -> int:
        if isinstance(domain, int):
            return domain
        return _KINDS.index(domain)

    def radial_profile(self, domain, l: int, m: int) -> np.ndarray:
        """Nodal values of f_lm(r) on the domain's radial grid."""
        k = self.domain_index(domain)
        return radial_synthesis(self.domains[k], l, self.coeffs[k][l, m])

    def mesh(self, domain):
        """(r, theta, phi) arrays shaped like ``values[domain]``."""
        k = self.domain_index(domain)
        return _mesh(self.domains[k], self.grid)

    def evaluate(self, r, theta, phi) -> np.ndarray:
        """Spectral interpolant of the solution at arbitrary points (r may be inf)."""
        r, theta, phi = np.broadcast_arrays(
            np.asarray(r, dtype=float), np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
        )
        shape = r.shape
        r, theta, phi = r.ravel(), theta.ravel(), phi.ravel()
        if np.any(r < 0) or np.any(np.isnan(r)):
            raise ValueError("r must be >= 0")
        out = np.zeros(r.size)
        which = np.where(r <= 1, 0, np.where(r <= 2, 1, 2))
        L, M = self.grid.l_max, self.grid.m_max
        for k, dom in enumerate(self.domains):
            sel = np.flatnonzero(which == k)
            if not sel.size:
                continue
            x = np.clip(_x_of_r(dom, r[sel]), -1.0, 1.0)
            radial = np.zeros((L + 1, 2 * M + 1, sel.size), dtype=complex)
            for l in range(L + 1):
                basis = _radial_basis(dom, l, x)
                radial[l] = np.tensordot(self.coeffs[k].data[l], basis, axes=(1, 0))
            ct = np.cos(theta[sel])
            total = np.zeros(sel.size, dtype=complex)
            for m in range(-M, M + 1):
                p = assoc_legendre_normalized(L, m, ct)
                total += np.sum(p * radial[abs(m) :, m + M], axis=0) * np.exp(1j * m * phi[sel])
            out[sel] = total.real
        return out.reshape(shape)


def _x_of_r(dom: DomainSpec, r: np.ndarray) -> np.ndarray:
    if dom.kind == "nucleus":
        return 2 * r - 1 if dom.is_jacobi else r
    if dom.kind == "shell":
        return 2 * r - 3
    with np.errstate(divide="ignore"):
        return np.where(np.isfinite(r), 1 - 4 / np.where(np.isfinite(r), r, 1.0), 1.0)


def _radial_basis(dom: DomainSpec, l: int, x: np.ndarray) -> np.ndarray:
    """Basis functions of the domain at x, shape (N+1, len(x))."""
    N = dom.n_r
    if dom.is_jacobi:
        return eval_upto(J02, N, x)
    if dom.is_parity:
        return chebyshev_eval_upto(2 * N + 1, x)[np.arange(l % 2, 2 * N + 2, 2)[: N + 1]]
    return chebyshev_eval_upto(N, x)


def _mesh(dom: DomainSpec, grid: AngularGrid):
    r = dom.r_nodes()
    th, ph = grid.mesh()
    return (
        np.broadcast_to(r[:, None, None], (r.size,) + grid.shape),
        np.broadcast_to(th, (r.size,) + grid.shape),
        np.broadcast_to(ph, (r.size,) + grid.shape),
    )


def _sample(source, dom: DomainSpec, grid: AngularGrid) -> np.ndarray:
    shape = (dom.size,) + grid.shape
    if source is None:
        return np.zeros(shape)
    if callable(source):
        r, th, ph = _mesh(dom, grid)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = np.asarray(source(r, th, ph), dtype=float)
        vals = np.broadcast_to(vals, shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"source is not finite on the {dom.kind} grid (S must vanish at r = inf)")
        return vals
    vals = np.asarray(source, dtype=float)
    if vals.shape != shape:
        raise ValueError(f"nodal source for {dom.kind} must have shape {shape}")
    return vals


def _max_workers() -> int:
    env = os.environ.get("JACOBISPEC_MAX_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def solve_3d(
    source,
    n_r: int = 17,
    n_theta: int = 17,
    n_phi: int = 16,
    nucleus_basis: str = JACOBI02,
    domains=None,
    max_workers: int | None = None,
) -> SolutionField:
    """Solve Laplacian(f) = S on all space with decay at infinity.

    ``source`` is a callable S(r, theta, phi) (vectorized; it must return 0 at
    r = inf), a triple of nodal arrays shaped (N_r+1, n_theta, n_phi), or None.
    """
    grid = build_grid(n_theta, n_phi)
    if domains is None:
        domains = default_domains(n_r, nucleus_basis)
    domains = tuple(domains)
    if isinstance(source, (tuple, list)):
        nodal = [_sample(s, d, grid) for s, d in zip(source, domains)]
    else:
        nodal = [_sample(source, d, grid) for d in domains]

    L, M = grid.l_max, grid.m_max
    # angular analysis at every radial node: data (L+1, 2M+1, n_radial)
    ang = [analyze(grid, np.moveaxis(v, 0, -1)).data for v in nodal]

    def solve_l(l: int):
        system = assemble_block_system(l, domains=domains)
        ms = slice(M - min(l, M), M + min(l, M) + 1)
        rhs = [radial_rhs(d, l, a[l, ms].T) for d, a in zip(domains, ang)]
        return l, ms, solve_radial(system, rhs)

    workers = max_workers or _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve_l, range(L + 1)))
    else:
        results = [solve_l(l) for l in range(L + 1)]

    coeffs = [HarmonicCoeffs.zeros(L, M, (d.size,)) for d in domains]
    for l, ms, blocks in results:
        for k in range(3):
            coeffs[k].data[l, ms] = blocks[k].T

    values = []
    for k, dom in enumerate(domains):
        radial = HarmonicCoeffs.zeros(L, M, (dom.size,))
        for l in range(L + 1):
            radial.data[l] = radial_synthesis(dom, l, coeffs[k].data[l].T).T
        v = synthesize(grid, radial, real=True)  # (n_theta, n_phi, n_radial)
        values.append(np.ascontiguousarray(np.moveaxis(v, -1, 0)))
    return SolutionField(domains, grid, tuple(coeffs), tuple(values))


def max_collocation_error(solution: SolutionField, analytic: Callable, domain) -> float:
    """max |numeric - analytic| over the domain's (r, theta, phi) collocation grid."""
    k = solution.domain_index(domain)
    r, th, ph = solution.mesh(k)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        exact = np.broadcast_to(np.asarray(analytic(r, th, ph), dtype=float), r.shape)
    return float(np.max(np.abs(solution.values[k] - exact)))


def interface_mismatch(solution: SolutionField) -> float:
    """Largest jump of f_lm or df_lm/dr across r = 1 and r = 2 over all (l, m)."""
    doms = solution.domains
    L, M = solution.grid.l_max, solution.grid.m_max
    worst = 0.0
    for l in range(L + 1):
        for m in range(-min(l, M), min(l, M) + 1):
            c = [solution.coeffs[k][l, m] for k in range(3)]
            for (ka, sa), (kb, sb) in (((0, 1), (1, -1)), ((1, 1), (2, -1))):
                va, da = _boundary_rows(doms[ka], l, sa)
                vb, db = _boundary_rows(doms[kb], l, sb)
                jump_v = va @ c[ka] - vb @ c[kb]
                jump_d = doms[ka].dr_factor(sa) * (da @ c[ka]) - doms[kb].dr_factor(sb) * (db @ c[kb])
                worst = max(worst, abs(jump_v), abs(jump_d))
    return float(worst)
