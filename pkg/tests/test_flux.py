import numpy as np
import pytest

from polarflow import (
    Modulation,
    burgers_flux,
    constant_flux,
    eval_f,
    eval_g,
    eval_g_prime,
    flux_envelope_bound,
    polynomial_flux,
    with_modulation,
    zero_flux,
)

ALL_SPECS = [
    zero_flux(1),
    constant_flux([2.5]),
    burgers_flux(1),
    polynomial_flux([1.0, 0.0, 1.0]),  # f = 1 + nu^2
    polynomial_flux([0.5, -0.3, 0.1]),
]


class TestEval:
    def test_constant(self):
        spec = constant_flux([2.5])
        assert eval_f(spec, 0, -7.0) == 2.5
        assert eval_f(spec, 0, 123.4) == 2.5

    def test_burgers(self):
        spec = burgers_flux(1)
        assert eval_f(spec, 0, 3.0) == 1.5
        assert eval_g(spec, 0, 3.0) == 4.5
        assert eval_g_prime(spec, 0, 3.0) == 3.0

    def test_polynomial(self):
        spec = polynomial_flux([1.0, 0.0, 1.0])
        assert eval_f(spec, 0, 2.0) == 5.0
        assert eval_g(spec, 0, 2.0) == 10.0
        assert eval_g_prime(spec, 0, 2.0) == 13.0  # 1 + 3 nu^2 at nu=2

    def test_constant_g(self):
        spec = constant_flux([2.0])
        nu = 1.7
        assert eval_g(spec, 0, nu) == 2.0 * nu
        assert eval_g_prime(spec, 0, nu) == 2.0

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            eval_f(burgers_flux(1), 1, 0.0)

    def test_vectorized(self):
        spec = burgers_flux(1)
        nu = np.linspace(-2, 2, 11)
        assert np.allclose(eval_g(spec, 0, nu), nu**2 / 2)


class TestIdentities:
    @pytest.mark.parametrize("spec", ALL_SPECS)
    def test_g_equals_nu_f(self, spec):
        rng = np.random.default_rng(12)
        nu = rng.uniform(-10, 10, size=1000)
        gap = np.abs(eval_g(spec, 0, nu) - nu * eval_f(spec, 0, nu))
        assert gap.max() < 1e-13 * max(1.0, np.abs(eval_g(spec, 0, nu)).max())

    @pytest.mark.parametrize("spec", ALL_SPECS)
    def test_g_prime_matches_finite_differences(self, spec):
        # central-difference oracle, h = 1e-6
        rng = np.random.default_rng(13)
        nu = rng.uniform(-10, 10, size=1000)
        h = 1e-6
        fd = (eval_g(spec, 0, nu + h) - eval_g(spec, 0, nu - h)) / (2 * h)
        assert np.abs(eval_g_prime(spec, 0, nu) - fd).max() < 1e-6

    def test_g_prime_fd_oracle_at_two(self):
        spec = polynomial_flux([1.0, 0.0, 1.0])
        h = 1e-6
        fd = (eval_g(spec, 0, 2.0 + h) - eval_g(spec, 0, 2.0 - h)) / (2 * h)
        assert abs(eval_g_prime(spec, 0, 2.0) - fd) < 1e-6


def sampling_oracle(spec, field_bound, n=200001):
    """Dense sampling over the reach interval (independent of the envelope code)."""
    reach = (spec.m + 1) * field_bound
    nu = np.linspace(-reach, reach, n)
    return max(
        float(np.abs(eval_g(spec, 0, nu)).max()),
        float(np.abs(eval_g_prime(spec, 0, nu)).max()),
    )


class TestEnvelopeBound:
    def test_constant_exact(self):
        spec = constant_flux([2.0])
        h = flux_envelope_bound(spec, 1.0)
        assert h == 4.0
        assert h >= sampling_oracle(spec, 1.0)

    def test_burgers_exact(self):
        spec = burgers_flux(1)
        h = flux_envelope_bound(spec, 1.0)
        assert h == 2.0
        assert h >= sampling_oracle(spec, 1.0)

    def test_zero_flux(self):
        assert flux_envelope_bound(zero_flux(1), 1.0) == 0.0

    def test_polynomial_conservative(self):
        spec = polynomial_flux([0.5, -0.3, 0.1])
        h = flux_envelope_bound(spec, 1.5)
        assert h >= sampling_oracle(spec, 1.5)

    def test_modulation_scales_bound(self):
        base = constant_flux([1.0])
        mod = with_modulation(base, 0, Modulation(const=0.0, sin_amps=(2.0,)))
        assert flux_envelope_bound(mod, 1.0) >= 2.0 * flux_envelope_bound(base, 1.0) - 1e-15


class TestModulation:
    def test_evaluate(self):
        mod = Modulation(const=0.5, cos_amps=(1.0,), sin_amps=(0.0, 2.0))
        s = np.linspace(0, 1, 9)[:-1]
        expect = 0.5 + np.cos(2 * np.pi * s) + 2 * np.sin(4 * np.pi * s)
        assert np.allclose(mod.evaluate(s, 1.0), expect)

    def test_sup_bound(self):
        mod = Modulation(const=0.5, cos_amps=(1.0,), sin_amps=(0.0, 2.0))
        assert mod.sup_bound() == 3.5

    def test_unknown_kind_rejected(self):
        from polarflow.flux import FluxComponent

        with pytest.raises(ValueError, match="unknown flux kind"):
            FluxComponent("cubic")
