"""Quantitative checks over fields and trajectories.

Everything here is a pure, deterministic function: identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ScalarField, to_spectrum
from .spectral import Trajectory

__all__ = [
    "sup_norm",
    "l1_norm",
    "min_value",
    "sphere_deviation",
    "harnack_ratio",
    "harnack_report",
    "l1_contraction_series",
    "ModeDecayRow",
    "mode_decay_report",
]

NOISE_FLOOR = 1e-14
FIT_FLOOR = 1e-12


def sup_norm(f: ScalarField) -> float:
    return float(np.abs(f.values).max())


def l1_norm(f: ScalarField) -> float:
    """Torus L1 norm, trapezoid weights (= cell volume times node sum)."""
    return float(np.abs(f.values).mean()) * f.grid.volume


def min_value(f: ScalarField) -> float:
    return float(f.values.min())


def sphere_deviation(r: ScalarField, r_bar: float) -> float:
    """Sup distance of the radius profile from the constant ``r_bar``."""
    return float(np.abs(r.values - r_bar).max())


def harnack_ratio(traj: Trajectory, t: float, tau: float) -> float:
    """Measured ``sup u(t - tau) / ||u(t)||_1`` for a positive solution.

    Scale-invariant (degree zero in u).  Raises ``KeyError`` when the needed
    snapshots are missing and ``ValueError`` when the field is not positive.
    """
    if tau <= 0.0:
        raise ValueError("lag tau must be positive")
    i_past = traj.index_at(t - tau)
    i_now = traj.index_at(t)
    past = traj.snapshots[i_past]
    now = traj.snapshots[i_now]
    if min_value(past) <= 0.0 or min_value(now) <= 0.0:
        raise ValueError("harnack ratio requires a positive solution")
    return sup_norm(past) / l1_norm(now)


def harnack_report(traj: Trajectory, tau: float) -> tuple[list[tuple[float, float]], float]:
    """Ratio series over every admissible time, plus its max (empirical constant).

    The constant is reported, never asserted against a prescribed value.
    """
    series = []
    for t in traj.times:
        try:
            series.append((t, harnack_ratio(traj, t, tau)))
        except KeyError:
            continue
    if not series:
        raise ValueError("no snapshot pairs separated by tau")
    return series, max(r for _, r in series)


def l1_contraction_series(
    traj1: Trajectory, traj2: Trajectory, tol: float = 1e-8
) -> list[tuple[float, float]]:
    """Series ``(t, ||u1(t) - u2(t)||_1)`` for two runs of the same flux.

    Appends a flag to both trajectories if the series ever increases by more
    than ``tol`` between consecutive records.
    """
    if traj1.grid != traj2.grid:
        raise ValueError("trajectories live on different grids")
    if traj1.spec != traj2.spec:
        raise ValueError("trajectories were run with different fluxes")
    if len(traj1.times) != len(traj2.times) or not np.allclose(
        traj1.times, traj2.times, atol=1e-12, rtol=0.0
    ):
        raise ValueError("trajectories have different time stamps")
    cell = traj1.grid.volume / traj1.grid.num_nodes
    series = []
    for t, a, b in zip(traj1.times, traj1.snapshots, traj2.snapshots):
        series.append((t, float(np.abs(a.values - b.values).sum()) * cell))
    for (t0, d0), (t1, d1) in zip(series, series[1:]):
        if d1 > d0 + tol:
            msg = f"L1 distance increased by {d1 - d0:.3e} over [{t0:.6g}, {t1:.6g}]"
            traj1.flags.append(msg)
            traj2.flags.append(msg)
    return series


@dataclass(frozen=True)
class ModeDecayRow:
    index: tuple[int, ...]
    fitted_rate: float
    theoretical_rate: float
    rel_error: float


def _canonical_modes(f: ScalarField) -> list[tuple[int, ...]]:
    """Multi-indices with amplitude above the noise floor, one per +/- pair."""
    spec = to_spectrum(f)
    grid = f.grid
    out = []
    for raw in np.ndindex(*grid.shape):
        signed = tuple(k if k < n // 2 else k - n for k, n in zip(raw, grid.resolution))
        first = next((s for s in signed if s != 0), 0)
        if first < 0:
            continue  # conjugate partner carries the same magnitude
        if abs(spec.amplitudes[raw]) <= NOISE_FLOOR:
            continue
        out.append(signed)
    return sorted(out)


def mode_decay_report(traj: Trajectory) -> list[ModeDecayRow]:
    """Least-squares decay rate per surviving mode vs the heat-flow rate.

    Fits the slope of ``log |amplitude|`` over the window where the amplitude
    stays above 1e-12 (avoiding noise-floor bias) and compares with
    ``sum_i kappa_i^2``, the exact rate for flux-free runs.  Needs at least
    three snapshots; modes starting below the noise floor are skipped.
    """
    if len(traj.snapshots) < 3:
        raise ValueError("mode decay fit needs at least 3 snapshots")
    spectra = [to_spectrum(s) for s in traj.snapshots]
    times = np.asarray(traj.times)
    rows = []
    for index in _canonical_modes(traj.snapshots[0]):
        amps = np.array([abs(s.amplitude(index)) for s in spectra])
        window = amps > FIT_FLOOR
        theo = 0.0
        for k, L in zip(index, traj.grid.lengths):
            theo += (2.0 * np.pi * k / L) ** 2
        if all(k == 0 for k in index):
            # conserved mean: report drift rate directly
            fitted = 0.0
            if amps[0] > FIT_FLOOR and window.sum() >= 3:
                slope, _ = np.polyfit(times[window], np.log(amps[window]), 1)
                fitted = -float(slope)
            rows.append(ModeDecayRow(index, fitted, 0.0, abs(fitted)))
            continue
        if window.sum() < 3:
            continue
        slope, _ = np.polyfit(times[window], np.log(amps[window]), 1)
        fitted = -float(slope)
        rows.append(ModeDecayRow(index, fitted, theo, abs(fitted - theo) / theo))
    return rows
