"""Jacobi (0,2) spectral methods for the Poisson equation in spherical domains."""

from .estimators import JacobiTransformer, SpectralPoissonSolver
from .jacobi import J02, LEGENDRE, JacobiIndex, eval_derivative_upto, eval_upto, norm_sq
from .poisson import (
    DomainSpec,
    RadialBlockSystem,
    SingularSystemError,
    SolutionField,
    assemble_block_system,
    max_collocation_error,
    solve_3d,
    solve_radial,
)
from .quadrature import QuadratureRule, build_rule, integrate
from .sph_harm import analyze, build_grid, synthesize
from .transform import CoeffVector, NodalValues, forward, interp_eval, inverse

__version__ = "0.1.0"

__all__ = [
    "CoeffVector",
    "DomainSpec",
    "J02",
    "JacobiIndex",
    "JacobiTransformer",
    "LEGENDRE",
    "NodalValues",
    "QuadratureRule",
    "RadialBlockSystem",
    "SingularSystemError",
    "SolutionField",
    "SpectralPoissonSolver",
    "analyze",
    "assemble_block_system",
    "build_grid",
    "build_rule",
    "eval_derivative_upto",
    "eval_upto",
    "forward",
    "integrate",
    "interp_eval",
    "inverse",
    "max_collocation_error",
    "norm_sq",
    "solve_3d",
    "solve_radial",
    "synthesize",
]
