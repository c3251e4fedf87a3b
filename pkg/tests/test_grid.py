import numpy as np
import pytest

from polarflow import (
    ModeSpectrum,
    make_field,
    make_grid,
    mean,
    to_field,
    to_spectrum,
)
from conftest import smooth_field


class TestMakeGrid:
    def test_1d(self):
        g = make_grid(1, [1.0], [64])
        assert g.m == 1 and g.num_nodes == 64
        assert np.allclose(g.axis_coords(0), np.arange(64) / 64)

    def test_2d_node_count(self):
        g = make_grid(2, [1.0, 1.0], [32, 32])
        assert g.num_nodes == 1024

    def test_odd_resolution_rejected(self):
        with pytest.raises(ValueError, match="odd or too small"):
            make_grid(1, [1.0], [7])

    def test_small_resolution_rejected(self):
        with pytest.raises(ValueError):
            make_grid(1, [1.0], [4])

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ValueError, match="power of two"):
            make_grid(1, [1.0], [12])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            make_grid(2, [1.0], [16, 16])

    def test_non_positive_length(self):
        with pytest.raises(ValueError, match="non-positive"):
            make_grid(1, [0.0], [16])

    def test_wavenumbers(self):
        g = make_grid(1, [2.0], [16])
        k = g.wavenumbers(0)
        assert k[0] == 0.0
        assert np.isclose(k[1], 2 * np.pi / 2.0)
        assert np.isclose(k[-1], -2 * np.pi / 2.0)


class TestFieldValidation:
    def test_nan_rejected(self, grid64):
        bad = np.ones(64)
        bad[3] = np.nan
        with pytest.raises(ValueError, match="NaN"):
            make_field(grid64, bad)

    def test_shape_mismatch(self, grid64):
        with pytest.raises(ValueError, match="shape"):
            make_field(grid64, np.ones(32))

    def test_values_read_only(self, grid64):
        f = make_field(grid64, np.ones(64))
        with pytest.raises(ValueError):
            f.values[0] = 2.0


class TestTransforms:
    def test_constant_field(self, grid64):
        s = to_spectrum(make_field(grid64, np.full(64, 3.0)))
        assert np.isclose(s.amplitude(0), 3.0)
        off_modes = np.abs(s.amplitudes).copy()
        off_modes[0] = 0.0
        assert off_modes.max() < 1e-15

    def test_single_harmonic(self, grid64):
        theta = grid64.axis_coords(0)
        s = to_spectrum(make_field(grid64, np.cos(2 * np.pi * theta)))
        assert abs(s.amplitude(1) - 0.5) < 1e-12
        assert abs(s.amplitude(-1) - 0.5) < 1e-12
        rest = np.abs(s.amplitudes).copy()
        rest[1] = rest[-1] = 0.0
        assert rest.max() < 1e-12

    def test_round_trip_random(self, grid64):
        f = smooth_field(grid64, seed=5)
        back = to_field(to_spectrum(f))
        scale = np.abs(f.values).max()
        assert np.abs(back.values - f.values).max() < 1e-12 * scale

    def test_round_trip_2d(self, grid2d):
        f = smooth_field(grid2d, seed=6, n_modes=5)
        back = to_field(to_spectrum(f))
        assert np.abs(back.values - f.values).max() < 1e-12

    def test_asymmetric_spectrum_rejected(self, grid64):
        amps = np.zeros(64, dtype=complex)
        amps[1] = 1.0  # no conjugate partner at -1
        s = ModeSpectrum(grid=grid64, amplitudes=amps)
        with pytest.raises(ValueError, match="conjugate"):
            to_field(s)

    def test_parseval(self, grid64):
        f = smooth_field(grid64, seed=7, offset=0.3)
        s = to_spectrum(f)
        lhs = float((np.abs(s.amplitudes) ** 2).sum())
        rhs = float((f.values**2).mean())
        assert abs(lhs - rhs) < 1e-12 * max(1.0, rhs)

    def test_linearity(self, grid64):
        f = smooth_field(grid64, seed=8)
        g = smooth_field(grid64, seed=9)
        a, b = 2.5, -0.7
        combo = to_spectrum(make_field(grid64, a * f.values + b * g.values))
        direct = a * to_spectrum(f).amplitudes + b * to_spectrum(g).amplitudes
        assert np.abs(combo.amplitudes - direct).max() < 1e-12

    def test_mean_equals_zero_mode(self, grid64):
        f = smooth_field(grid64, seed=10, offset=1.7)
        assert abs(mean(f) - to_spectrum(f).amplitude(0).real) < 1e-14


class TestMean:
    def test_constant(self, grid64):
        assert mean(make_field(grid64, np.full(64, 5.0))) == 5.0

    def test_zero_mean_harmonic(self, grid64):
        theta = grid64.axis_coords(0)
        assert abs(mean(make_field(grid64, np.cos(2 * np.pi * theta)))) < 1e-14

    def test_ellipse_mean_vs_quadrature_oracle(self, grid128):
        # oracle: composite Gauss-Legendre quadrature of the closed-form radius
        a, b = 2.0, 1.0
        nodes, weights = np.polynomial.legendre.leggauss(32)
        total = 0.0
        for lo in np.linspace(0.0, 1.0, 65)[:-1]:
            x = lo + (nodes + 1.0) / 2.0 * (1.0 / 64.0)
            ang = 2 * np.pi * x
            total += (1.0 / 128.0) * weights @ np.sqrt(
                a**2 * np.cos(ang) ** 2 + b**2 * np.sin(ang) ** 2
            )
        theta = grid128.axis_coords(0)
        r0 = make_field(
            grid128,
            np.sqrt(a**2 * np.cos(2 * np.pi * theta) ** 2 + b**2 * np.sin(2 * np.pi * theta) ** 2),
        )
        assert abs(mean(r0) - total) < 1e-12
