"""Spherical-harmonic analysis and synthesis on the Gauss-Legendre grid."""

import math

import numpy as np
import pytest
import scipy.special
from numpy.testing import assert_allclose

from jacobispec.sph_harm import (
    HarmonicCoeffs,
    analyze,
    assoc_legendre_normalized,
    build_grid,
    laplacian_angular_eigenvalue,
    synthesize,
)


def random_coeffs(grid, seed, real=False):
    rng = np.random.default_rng(seed)
    c = HarmonicCoeffs.zeros(grid.l_max, grid.m_max)
    for l in range(grid.l_max + 1):
        for m in range(-min(l, grid.m_max), min(l, grid.m_max) + 1):
            c.data[l, m + grid.m_max] = rng.normal() + 1j * rng.normal()
    if real:
        mm = grid.m_max
        c.data[:, mm] = c.data[:, mm].real
        for m in range(1, mm + 1):
            c.data[:, mm - m] = (-1) ** m * np.conj(c.data[:, mm + m])
    return c


class TestGrid:
    def test_default_band_limits(self):
        g = build_grid(17, 16)
        assert (g.l_max, g.m_max) == (16, 7)

    def test_two_nodes(self):
        assert_allclose(build_grid(2, 2).cos_theta, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)

    def test_single_node(self):
        assert_allclose(build_grid(1, 2).cos_theta, [0.0], atol=1e-16)

    def test_odd_phi_rejected(self):
        with pytest.raises(ValueError):
            build_grid(5, 7)

    def test_phi_equispaced(self):
        g = build_grid(4, 8)
        assert_allclose(g.phi, np.arange(8) * np.pi / 4)

    def test_theta_rule_exactness(self):
        g = build_grid(9, 4)
        for k in range(2 * 9):
            exact = 0.0 if k % 2 else 2 / (k + 1)
            assert g.theta_weights @ g.cos_theta**k == pytest.approx(exact, abs=1e-14)


class TestAnalyze:
    def test_constant(self):
        g = build_grid(17, 16)
        c = analyze(g, np.ones(g.shape))
        assert c[0, 0] == pytest.approx(math.sqrt(4 * math.pi), abs=1e-13)
        rest = c.data.copy()
        rest[0, g.m_max] = 0
        assert np.max(np.abs(rest)) <= 1e-13

    def test_cos_theta(self):
        g = build_grid(17, 16)
        th, _ = g.mesh()
        c = analyze(g, np.cos(th))
        assert c[1, 0] == pytest.approx(math.sqrt(4 * math.pi / 3), abs=1e-13)
        rest = c.data.copy()
        rest[1, g.m_max] = 0
        assert np.max(np.abs(rest)) <= 1e-13

    def test_cos_squared(self):
        g = build_grid(17, 16)
        th, _ = g.mesh()
        f = np.cos(th) ** 2
        c = analyze(g, f)
        # cos^2 = (1 + 2 P_2) / 3
        assert c[0, 0] == pytest.approx(math.sqrt(4 * math.pi) / 3, abs=1e-13)
        assert c[2, 0] == pytest.approx(2 / 3 * math.sqrt(4 * math.pi / 5), abs=1e-13)
        mask = np.ones(c.data.shape, bool)
        mask[0, g.m_max] = mask[2, g.m_max] = False
        assert np.max(np.abs(c.data[mask])) <= 1e-13
        assert_allclose(synthesize(g, c, real=True), f, atol=1e-13)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            analyze(build_grid(5, 4), np.ones((4, 4)))

    def test_trailing_axes(self):
        g = build_grid(6, 8)
        f = np.random.default_rng(0).normal(size=g.shape + (3,))
        batch = analyze(g, f)
        for k in range(3):
            assert_allclose(batch.data[..., k], analyze(g, f[..., k]).data, atol=1e-15)


class TestConvention:
    def test_matches_scipy(self):
        g = build_grid(9, 12)
        th, ph = g.mesh()
        for l in range(g.l_max + 1):
            for m in range(-min(l, g.m_max), min(l, g.m_max) + 1):
                y = scipy.special.sph_harm_y(l, m, th, ph)
                c = analyze(g, y)
                assert c[l, m] == pytest.approx(1.0, abs=1e-12)
                assert np.sum(np.abs(c.data)) == pytest.approx(1.0, abs=1e-11)

    def test_negative_m_relation(self):
        x = np.linspace(-1, 1, 7)
        assert_allclose(assoc_legendre_normalized(6, -3, x), -assoc_legendre_normalized(6, 3, x))

    def test_m_above_l_max(self):
        assert assoc_legendre_normalized(2, 3, 0.1).shape[0] == 0


class TestRoundTrip:
    @pytest.mark.parametrize("n_theta,n_phi", [(3, 4), (17, 16), (24, 50), (33, 64)])
    def test_analyze_synthesize(self, n_theta, n_phi):
        g = build_grid(n_theta, n_phi)
        c = random_coeffs(g, n_theta)
        back = analyze(g, synthesize(g, c))
        assert np.max(np.abs(back.data - c.data)) <= 1e-12 * np.max(np.abs(c.data))

    @pytest.mark.parametrize("n_theta,n_phi", [(8, 16), (17, 16), (33, 66)])
    def test_synthesize_analyze(self, n_theta, n_phi):
        g = build_grid(n_theta, n_phi)
        f = synthesize(g, random_coeffs(g, 1, real=True), real=True)
        # max-norm relative to the data scale
        assert np.max(np.abs(synthesize(g, analyze(g, f), real=True) - f)) <= 1e-12 * np.max(np.abs(f))

    def test_parseval(self):
        g = build_grid(17, 16)
        c = random_coeffs(g, 2)
        f = synthesize(g, c)
        energy = np.sum(g.theta_weights[:, None] * np.abs(f) ** 2) * 2 * np.pi / g.n_phi
        assert energy == pytest.approx(np.sum(np.abs(c.data) ** 2), rel=1e-11)

    def test_reality(self):
        g = build_grid(17, 16)
        f = np.random.default_rng(3).normal(size=g.shape)
        assert analyze(g, f).reality_defect() <= 1e-13

    def test_band_limit_enforced(self):
        with pytest.raises(ValueError):
            synthesize(build_grid(4, 4), HarmonicCoeffs.zeros(5, 1))
        with pytest.raises(IndexError):
            HarmonicCoeffs.zeros(3, 1)[2, 2]


@pytest.mark.parametrize("l,expected", [(0, 0), (1, -2), (16, -272)])
def test_angular_eigenvalue(l, expected):
    assert laplacian_angular_eigenvalue(l) == expected
