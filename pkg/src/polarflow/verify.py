"""Named verification suites behind the ``verify`` CLI subcommand.

Each suite runs a battery of quantitative checks at desk scale and returns
:class:`CheckResult` rows; the CLI renders them as a pass/fail table plus a
JSON summary.  Suites: ``heat``, ``duhamel``, ``conservation``,
``contraction``, ``cell``, ``geometry``, and ``all``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._fdcell import fd_cell_solve
from .cell import monotonicity_check, solve_cell
from .diagnostics import l1_contraction_series, mode_decay_report, sphere_deviation
from .duhamel import (
    contraction_horizon,
    heat_kernel_convolve,
    kernel_gradient_l1,
    picard_solve,
)
from .flux import Modulation, burgers_flux, constant_flux, with_modulation, zero_flux
from .geometry import decompose, ellipse_initial, perturbed_sphere_initial, reconstruct
from .grid import make_field, make_grid, mean
from .spectral import SolveConfig, evolve, heat_propagate, step
from .transport import evolve_coupled

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(name, value <= bound, f"{value:.3e} <= {bound:.3e}")


def _grid1(n: int = 128):
    return make_grid(1, [1.0], [n])


def suite_heat() -> list[CheckResult]:
    out = []
    grid = _grid1()
    theta = grid.axis_coords(0)
    f = make_field(grid, np.cos(2.0 * np.pi * theta))
    traj = evolve(f, zero_flux(1), SolveConfig(dt=1e-4, t_end=0.05, record_every=50))
    sup_err = 0.0
    for t, snap in zip(traj.times, traj.snapshots):
        exact = np.exp(-4.0 * np.pi**2 * t) * np.cos(2.0 * np.pi * theta)
        sup_err = max(sup_err, float(np.abs(snap.values - exact).max()))
    out.append(_check("heat.closed_form_sup_error", sup_err, 1e-8))
    rows = [r for r in mode_decay_report(traj) if r.index == (1,)]
    out.append(_check("heat.mode1_rate_rel_error", rows[0].rel_error, 0.01))

    const = make_field(grid, np.full(grid.shape, 3.0))
    drift = float(np.abs(heat_propagate(const, 0.3).values - 3.0).max())
    out.append(_check("heat.constant_invariant", drift, 1e-13))

    g2 = make_grid(2, [1.0, 1.0], [32, 32])
    c1, c2 = g2.coords()
    f2 = make_field(g2, np.sin(2 * np.pi * c1) * np.cos(4 * np.pi * c2))
    t = 0.01
    factor = np.exp(-(4 * np.pi**2 + 16 * np.pi**2) * t)
    err2 = float(np.abs(heat_propagate(f2, t).values - factor * f2.values).max())
    out.append(_check("heat.product_eigenfunction", err2, 1e-12))
    return out


def suite_duhamel() -> list[CheckResult]:
    out = []
    horizon_err = abs(contraction_horizon(1.0, 2.0, 1) - np.pi / 64.0)
    out.append(_check("duhamel.horizon_formula", horizon_err, 1e-12))
    l1_err = abs(kernel_gradient_l1(1.0) * np.sqrt(np.pi) - 1.0)
    out.append(_check("duhamel.kernel_gradient_l1", l1_err, 1e-8))

    grid = _grid1()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        hat = np.zeros(128, dtype=complex)
        for k in range(1, 9):
            c = (rng.normal() + 1j * rng.normal()) / (1 + k * k)
            hat[k], hat[-k] = c, np.conj(c)
        f = make_field(grid, np.fft.ifft(hat * 128).real + 1.0)
        t = rng.uniform(0.01, 0.5)
        d = np.abs(heat_kernel_convolve(f, t).values - heat_propagate(f, t).values).max()
        worst = max(worst, float(d))
    out.append(_check("duhamel.semigroup_crosscheck", worst, 1e-10))

    theta = grid.axis_coords(0)
    r0 = make_field(grid, 1.0 + 0.2 * np.sin(2.0 * np.pi * theta))
    rep = picard_solve(r0, burgers_flux(1))
    ratios = rep.delta_ratios()[2:]
    out.append(_check("duhamel.contraction_ratio", max(ratios) if ratios else 0.0, 0.55))
    ref = evolve(
        r0, burgers_flux(1), SolveConfig(dt=rep.horizon / 1024, t_end=rep.horizon, record_every=1 << 20)
    )
    diff = float(np.abs(ref.final.values - rep.final.values).max())
    out.append(_check("duhamel.vs_spectral", diff, 1e-4))
    return out


def suite_conservation() -> list[CheckResult]:
    out = []
    grid = _grid1()
    theta = grid.axis_coords(0)
    r0 = make_field(grid, 1.0 + 0.1 * np.sin(2.0 * np.pi * theta))
    for label, spec in (
        ("zero", zero_flux(1)),
        ("constant", constant_flux([1.0])),
        ("burgers", burgers_flux(1)),
    ):
        traj = evolve(r0, spec, SolveConfig(dt=1e-4, t_end=1.0, record_every=1000))
        drift = max(abs(row.mean - mean(r0)) for row in traj.diagnostics)
        out.append(_check(f"conservation.mean_drift_{label}", drift, 1e-12))
        sup0 = float(np.abs(r0.values).max())
        sup_exc = max(row.sup for row in traj.diagnostics) - sup0
        out.append(_check(f"conservation.max_principle_{label}", sup_exc, 1e-8))
        out.append(
            CheckResult(
                f"conservation.positivity_{label}",
                min(row.min for row in traj.diagnostics) > 0.0,
                f"min {min(row.min for row in traj.diagnostics):.6f} > 0",
            )
        )
    return out


def suite_contraction() -> list[CheckResult]:
    grid = _grid1()
    theta = grid.axis_coords(0)
    spec = burgers_flux(1)
    cfg = SolveConfig(dt=1e-4, t_end=0.5, record_every=250)
    up = evolve(make_field(grid, 1.0 + 0.1 * np.sin(2 * np.pi * theta)), spec, cfg)
    dn = evolve(make_field(grid, 1.0 - 0.1 * np.sin(2 * np.pi * theta)), spec, cfg)
    series = l1_contraction_series(up, dn)
    worst = max((d1 - d0) for (_, d0), (_, d1) in zip(series, series[1:]))
    return [_check("contraction.l1_nonincreasing", worst, 1e-8)]


def suite_cell() -> list[CheckResult]:
    out = []
    grid = make_grid(1, [1.0], [64])
    sol = solve_cell(burgers_flux(1), grid, 1.3)
    out.append(_check("cell.degenerate_residual", sol.residual, 1e-10))
    out.append(
        _check("cell.degenerate_is_constant", float(np.abs(sol.v.values - 1.3).max()), 1e-13)
    )

    spec = with_modulation(constant_flux([1.0]), 0, Modulation(const=0.0, sin_amps=(1.0,)))
    for p in (1.0, 0.0):
        s = solve_cell(spec, grid, p)
        ref = fd_cell_solve(spec, 512, 1.0, p)
        diff = float(np.abs(s.v.values - ref[:: 512 // 64]).max())
        out.append(_check(f"cell.modulated_vs_fd_p{p:g}", diff, 1e-8))
        out.append(_check(f"cell.mean_pinned_p{p:g}", abs(mean(s.v) - p), 1e-13))

    rng = np.random.default_rng(11)
    ok = True
    for _ in range(10):
        q, p = np.sort(rng.uniform(-1.0, 1.5, size=2))
        if p - q < 1e-3:
            p = q + 1e-3
        ok &= monotonicity_check(spec, grid, float(p), float(q))
    out.append(CheckResult("cell.monotonicity_random_pairs", bool(ok), "10 pairs"))

    s1 = solve_cell(spec, grid, 1.0)
    drift = float(np.abs(step(s1.v, spec, 1e-5).values - s1.v.values).max())
    out.append(_check("cell.stationary_under_step", drift, 1e-9))
    return out


def suite_geometry() -> list[CheckResult]:
    out = []
    grid = _grid1()
    r0, p0 = ellipse_initial(grid, 2.0, 1.0)
    out.append(_check("geometry.ellipse_r_at_0", abs(r0.values[0] - 2.0), 1e-13))
    out.append(_check("geometry.ellipse_r_at_quarter", abs(r0.values[32] - 1.0), 1e-13))
    x = reconstruct(r0, p0)
    r2, p2 = decompose(grid, x)
    round_trip = max(
        float(np.abs(r2.values - r0.values).max()),
        float(np.abs(p2.vectors - p0.vectors).max()),
    )
    out.append(_check("geometry.decompose_reconstruct", round_trip, 1e-14))

    rs, _ = perturbed_sphere_initial(grid, 1.0, 0.3, [1])
    out.append(_check("geometry.perturbed_sphere_min", abs(rs.values.min() - 0.7), 1e-12))

    traj = evolve_coupled(r0, p0, burgers_flux(1), SolveConfig(dt=5e-4, t_end=0.5, record_every=100))
    rbar = mean(r0)
    dev = sphere_deviation(traj.final, rbar)
    out.append(_check("geometry.sphere_convergence", dev, 1e-6 * rbar))
    radii = np.sqrt((reconstruct(traj.final, traj.directions[-1]) ** 2).sum(-1))
    out.append(_check("geometry.points_on_sphere", float(np.abs(radii - rbar).max()), 1e-6 * rbar))
    return out


SUITES = {
    "heat": suite_heat,
    "duhamel": suite_duhamel,
    "conservation": suite_conservation,
    "contraction": suite_contraction,
    "cell": suite_cell,
    "geometry": suite_geometry,
}


def run_suite(name: str) -> list[CheckResult]:
    """Run one named suite (or every suite for ``all``)."""
    if name == "all":
        results = []
        for fn in SUITES.values():
            results.extend(fn())
        return results
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
