import numpy as np
import pytest

from polarflow import (
    ConvergenceError,
    SolveConfig,
    burgers_flux,
    constant_flux,
    contraction_horizon,
    evolve,
    galilean_shift,
    heat_kernel_convolve,
    heat_propagate,
    kernel_gradient_l1,
    make_field,
    picard_extend,
    picard_solve,
    zero_flux,
)
from conftest import smooth_field


class TestContractionHorizon:
    def test_hand_evaluated_case_one(self):
        # min{(sqrt(pi)/4)^2, (sqrt(pi)/8)^2} = pi/64
        assert contraction_horizon(1.0, 2.0, 1) == pytest.approx(np.pi / 64, abs=1e-12)

    def test_hand_evaluated_case_two(self):
        # min{pi, pi/64} = pi/64
        assert contraction_horizon(2.0, 1.0, 2) == pytest.approx(np.pi / 64, abs=1e-12)

    def test_zero_flux_bound_returns_cap(self):
        assert contraction_horizon(1.0, 0.0, 1) == 1.0
        assert contraction_horizon(1.0, 0.0, 1, cap=2.5) == 2.5

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            contraction_horizon(-1.0, 1.0, 1)
        with pytest.raises(ValueError):
            contraction_horizon(1.0, 1.0, 0)


class TestHeatKernelConvolve:
    def test_matches_spectral_propagator(self, grid128):
        f = smooth_field(grid128, seed=30, offset=1.0)
        t = 0.01
        diff = np.abs(
            heat_kernel_convolve(f, t).values - heat_propagate(f, t).values
        ).max()
        assert diff < 1e-10

    def test_constant_field_unchanged(self, grid64):
        f = make_field(grid64, np.full(64, 2.0))
        out = heat_kernel_convolve(f, 0.05)
        assert np.abs(out.values - 2.0).max() < 1e-13  # unit kernel mass

    def test_small_time_limit_is_identity(self, grid64):
        f = smooth_field(grid64, seed=31)
        out = heat_kernel_convolve(f, 1e-12)
        assert np.abs(out.values - f.values).max() < 1e-10

    def test_2d_matches_spectral(self, grid2d):
        f = smooth_field(grid2d, seed=32, n_modes=5, offset=0.5)
        t = 0.02
        diff = np.abs(
            heat_kernel_convolve(f, t).values - heat_propagate(f, t).values
        ).max()
        assert diff < 1e-10

    def test_semigroup_crosscheck_random(self, grid64):
        rng = np.random.default_rng(33)
        worst = 0.0
        for k in range(100):
            f = smooth_field(grid64, seed=1000 + k)
            t = float(rng.uniform(0.005, 0.5))
            d = np.abs(
                heat_kernel_convolve(f, t).values - heat_propagate(f, t).values
            ).max()
            worst = max(worst, float(d))
        assert worst < 1e-10

    def test_non_positive_time_rejected(self, grid64):
        with pytest.raises(ValueError):
            heat_kernel_convolve(make_field(grid64, np.ones(64)), 0.0)


class TestKernelGradientL1:
    def test_t_equals_one(self):
        assert kernel_gradient_l1(1.0) == pytest.approx(np.pi**-0.5, rel=1e-8)

    def test_t_equals_quarter(self):
        assert kernel_gradient_l1(0.25) == pytest.approx((np.pi * 0.25) ** -0.5, rel=1e-8)

    def test_scaling_law(self):
        # value(4t) = value(t) / 2
        t = 0.13
        assert kernel_gradient_l1(4 * t) == pytest.approx(kernel_gradient_l1(t) / 2, rel=1e-8)

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            kernel_gradient_l1(0.0)


class TestPicardSolve:
    def test_zero_flux_one_iteration(self, grid64):
        f = smooth_field(grid64, seed=34, offset=1.0)
        rep = picard_solve(f, zero_flux(1))
        assert rep.iterates == 1
        assert rep.sup_deltas == [0.0]
        oracle = heat_propagate(f, rep.horizon)
        assert np.abs(rep.final.values - oracle.values).max() < 1e-10

    def test_burgers_contraction_and_spectral_agreement(self, grid128):
        theta = grid128.axis_coords(0)
        r0 = make_field(grid128, 1.0 + 0.2 * np.sin(2 * np.pi * theta))
        spec = burgers_flux(1)
        rep = picard_solve(r0, spec)
        # geometric deltas, ratio comfortably below the halving bound
        for ratio in rep.delta_ratios()[2:]:
            assert ratio <= 0.55
        # discrete sweeps respect the halving envelope once resolved
        for k, delta in enumerate(rep.sup_deltas):
            assert delta <= 1.1 * 0.5 ** (k + 1)
        ref = evolve(
            r0, spec, SolveConfig(dt=rep.horizon / 2048, t_end=rep.horizon, record_every=1 << 20)
        )
        assert np.abs(rep.final.values - ref.final.values).max() < 1e-4

    def test_constant_flux_matches_galilean_oracle(self, grid128):
        f = smooth_field(grid128, seed=35, offset=1.0)
        c = 1.0
        rep = picard_solve(f, constant_flux([c]))
        oracle = galilean_shift(heat_propagate(f, rep.horizon), [c], rep.horizon)
        assert np.abs(rep.final.values - oracle.values).max() < 1e-6

    def test_iterate_sup_bound(self, grid64):
        theta = grid64.axis_coords(0)
        r0 = make_field(grid64, 1.0 + 0.3 * np.sin(2 * np.pi * theta))
        rep = picard_solve(r0, burgers_flux(1))
        assert rep.max_iterate_sup <= 2.0 * rep.field_bound  # (m+1) M with m=1

    def test_horizon_uses_flux_envelope(self, grid64):
        theta = grid64.axis_coords(0)
        r0 = make_field(grid64, 1.0 + 0.2 * np.sin(2 * np.pi * theta))
        rep = picard_solve(r0, burgers_flux(1))
        m_bound = 1.2
        h_bound = max((2 * m_bound) ** 2 / 2.0, 2 * m_bound)
        expect = min(
            (m_bound * np.sqrt(np.pi) / (2 * h_bound)) ** 2,
            (np.sqrt(np.pi) / (4 * h_bound)) ** 2,
        )
        assert rep.horizon == pytest.approx(expect, rel=1e-12)

    def test_non_convergence_raises_with_history(self, grid64):
        theta = grid64.axis_coords(0)
        r0 = make_field(grid64, 1.0 + 0.2 * np.sin(2 * np.pi * theta))
        with pytest.raises(ConvergenceError) as err:
            picard_solve(r0, burgers_flux(1), k_max=2, tol=1e-14)
        assert len(err.value.history) == 2

    def test_t_final_shortens_window(self, grid64):
        theta = grid64.axis_coords(0)
        r0 = make_field(grid64, 1.0 + 0.2 * np.sin(2 * np.pi * theta))
        rep = picard_solve(r0, burgers_flux(1), t_final=1e-3)
        assert rep.horizon == pytest.approx(1e-3)


class TestPicardExtend:
    def test_zero_flux_heat(self, grid64):
        f = smooth_field(grid64, seed=36, offset=1.0)
        out = picard_extend(f, zero_flux(1), 2.5)
        oracle = heat_propagate(f, 2.5)
        assert np.abs(out.values - oracle.values).max() < 1e-9

    def test_burgers_three_horizons_vs_spectral(self, grid64):
        theta = grid64.axis_coords(0)
        r0 = make_field(grid64, 1.0 + 0.2 * np.sin(2 * np.pi * theta))
        spec = burgers_flux(1)
        first = picard_solve(r0, spec)
        t_end = 3 * first.horizon
        out = picard_extend(r0, spec, t_end)
        ref = evolve(r0, spec, SolveConfig(dt=t_end / 8192, t_end=t_end, record_every=1 << 20))
        assert np.abs(out.values - ref.final.values).max() < 1e-3

    def test_constant_flux_vs_galilean(self, grid64):
        f = smooth_field(grid64, seed=37, offset=1.0)
        c, t_end = 0.8, 0.12
        out = picard_extend(f, constant_flux([c]), t_end)
        oracle = galilean_shift(heat_propagate(f, t_end), [c], t_end)
        assert np.abs(out.values - oracle.values).max() < 1e-6
