"""Spherical-harmonic analysis and synthesis on a Gauss-Legendre x uniform grid.

Harmonics are complex, orthonormal on the unit sphere, with the Condon-Shortley
phase. Coefficient arrays are indexed ``[l, m + m_max, ...]``; entries with
|m| > l are zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AngularGrid",
    "HarmonicCoeffs",
    "build_grid",
    "assoc_legendre_normalized",
    "analyze",
    "synthesize",
    "laplacian_angular_eigenvalue",
]


def _frozen(a, dtype=float) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class AngularGrid:
    n_theta: int
    n_phi: int
    cos_theta: np.ndarray = field(repr=False)
    theta_weights: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)

    @property
    def l_max(self) -> int:
        return self.n_theta - 1

    @property
    def m_max(self) -> int:
        return min(self.n_phi // 2 - 1, self.l_max)

    @property
    def theta(self) -> np.ndarray:
        return np.arccos(self.cos_theta)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_theta, self.n_phi)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta, phi) arrays of shape (n_theta, n_phi)."""
        return np.meshgrid(self.theta, self.phi, indexing="ij")


@dataclass(frozen=True)
class HarmonicCoeffs:
    """Coefficients c_lm, shape (l_max+1, 2 m_max+1) + trailing axes."""

    l_max: int
    m_max: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=complex)
        if data.shape[:2] != (self.l_max + 1, 2 * self.m_max + 1):
            raise ValueError("coefficient array does not match (l_max, m_max)")
        object.__setattr__(self, "data", data)

    def __getitem__(self, lm: tuple[int, int]):
        l, m = lm
        if not (0 <= l <= self.l_max and abs(m) <= self.m_max):
            raise IndexError(f"(l, m) = ({l}, {m}) outside the band limit")
        return self.data[l, m + self.m_max]

    @classmethod
    def zeros(cls, l_max: int, m_max: int, trailing: tuple[int, ...] = ()):
        return cls(l_max, m_max, np.zeros((l_max + 1, 2 * m_max + 1) + trailing, dtype=complex))

    def reality_defect(self) -> float:
        """max |c_{l,-m} - (-1)^m conj(c_{l,m})|; zero for real fields."""
        mm = self.m_max
        worst = 0.0
        for m in range(1, mm + 1):
            diff = self.data[:, mm - m] - (-1) ** m * np.conj(self.data[:, mm + m])
            worst = max(worst, float(np.max(np.abs(diff), initial=0.0)))
        return worst


def build_grid(n_theta: int = 17, n_phi: int = 16) -> AngularGrid:
    if n_theta < 1:
        raise ValueError("n_theta must be >= 1")
    if n_phi < 2 or n_phi % 2:
        raise ValueError("n_phi must be even and >= 2")
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    return AngularGrid(n_theta, n_phi, _frozen(x), _frozen(w), _frozen(phi))


def assoc_legendre_normalized(l_max: int, m: int, x) -> np.ndarray:
    """Normalized P_l^m(x) for l = m..l_max, rows l - m; Y_l^m = P e^{i m phi}.

    Includes the Condon-Shortley phase and the 1/sqrt(4 pi) factor. Negative
    m follows from P_l^{-m} = (-1)^m P_l^m.
    """
    x = np.asarray(x, dtype=float)
    sign = 1.0
    if m < 0:
        m = -m
        sign = (-1.0) ** m
    if m > l_max:
        return np.zeros((0,) + x.shape)
    sint = np.sqrt(np.clip(1 - x * x, 0.0, None))
    pmm = np.full(x.shape, 1 / math.sqrt(4 * math.pi))
    for k in range(1, m + 1):
        pmm = -math.sqrt((2 * k + 1) / (2 * k)) * sint * pmm
    out = np.empty((l_max - m + 1,) + x.shape)
    out[0] = pmm
    if l_max > m:
        out[1] = math.sqrt(2 * m + 3) * x * pmm
    for l in range(m + 2, l_max + 1):
        a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
        b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
        out[l - m] = a * (x * out[l - m - 1] - b * out[l - m - 2])
    return sign * out


def analyze(grid: AngularGrid, values) -> HarmonicCoeffs:
    """Harmonic coefficients of nodal values shaped (n_theta, n_phi, ...)."""
    f = np.asarray(values)
    if f.shape[:2] != grid.shape:
        raise ValueError(f"values must have leading shape {grid.shape}, got {f.shape[:2]}")
    lm, mm = grid.l_max, grid.m_max
    fm = np.fft.fft(f, axis=1) * (2 * np.pi / grid.n_phi)
    out = HarmonicCoeffs.zeros(lm, mm, f.shape[2:])
    w = grid.theta_weights
    for m in range(-mm, mm + 1):
        p = assoc_legendre_normalized(lm, m, grid.cos_theta)
        col = fm[:, m % grid.n_phi]
        out.data[abs(m) :, m + mm] = np.tensordot(p * w, col, axes=(1, 0))
    return out


def synthesize(grid: AngularGrid, coeffs: HarmonicCoeffs, real: bool = False) -> np.ndarray:
    """Nodal values (n_theta, n_phi, ...) of a band-limited coefficient set."""
    if coeffs.l_max > grid.l_max or coeffs.m_max > grid.m_max:
        raise ValueError("coefficients exceed the grid band limit")
    mm = coeffs.m_max
    trailing = coeffs.data.shape[2:]
    fm = np.zeros((grid.n_theta, grid.n_phi) + trailing, dtype=complex)
    for m in range(-mm, mm + 1):
        p = assoc_legendre_normalized(coeffs.l_max, m, grid.cos_theta)
        fm[:, m % grid.n_phi] = np.tensordot(p, coeffs.data[abs(m) :, m + mm], axes=(0, 0))
    f = np.fft.ifft(fm, axis=1) * grid.n_phi
    return f.real.copy() if real else f


def laplacian_angular_eigenvalue(l: int) -> int:
    if l < 0:
        raise ValueError("l must be >= 0")
    return -l * (l + 1)
