"""Initial surface data and the polar splitting ``x = r P``.

The parameter domain is ``theta in [0, L)^m``; for the planar curve presets
(``m = 1``, ambient dimension 2) the angle is ``2 pi theta / L``.  Ambient
dimension ``d`` defaults to ``m + 1`` and is otherwise independent of ``m``.
"""

from __future__ import annotations

import numpy as np

from .grid import DirectionField, PeriodicGrid, RadialField, ScalarField

__all__ = [
    "make_initial",
    "ellipse_initial",
    "perturbed_sphere_initial",
    "trig_random_initial",
    "sphere_directions",
    "reconstruct",
    "decompose",
]


def sphere_directions(grid: PeriodicGrid, d: int) -> DirectionField:
    """Smooth periodic unit-vector field built from hyperspherical angles.

    Angle ``i`` sweeps ``2 pi theta_i / L_i`` for the first ``min(m, d-1)``
    axes; remaining angles are zero.  For ``m=1, d=2`` this is the unit
    circle ``(cos, sin)``.
    """
    if d < 2:
        raise ValueError("ambient dimension must be at least 2")
    coords = grid.coords()
    angles = []
    for i in range(d - 1):
        if i < grid.m:
            angles.append(2.0 * np.pi * coords[i] / grid.lengths[i])
        else:
            angles.append(np.zeros(grid.shape))
    comps = []
    running = np.ones(grid.shape)
    for i in range(d - 1):
        comps.append(running * np.cos(angles[i]))
        running = running * np.sin(angles[i])
    comps.append(running)
    return DirectionField(grid=grid, vectors=np.stack(comps, axis=-1))


def ellipse_initial(grid: PeriodicGrid, a: float, b: float) -> tuple[RadialField, DirectionField]:
    """Planar ellipse ``(a cos, b sin)`` of the angle ``2 pi theta / L``."""
    if grid.m != 1:
        raise ValueError("ellipse preset requires a one-axis grid")
    if a <= 0.0 or b <= 0.0:
        raise ValueError("ellipse semi-axes must be positive")
    ang = 2.0 * np.pi * grid.axis_coords(0) / grid.lengths[0]
    x = np.stack([a * np.cos(ang), b * np.sin(ang)], axis=-1)
    return decompose(grid, x)


def perturbed_sphere_initial(
    grid: PeriodicGrid,
    radius: float,
    amplitude: float,
    modes,
    d: int | None = None,
) -> tuple[RadialField, DirectionField]:
    """Radius ``R + amplitude * sum_k cos(2 pi k . theta / L)`` over given modes.

    Raises when the perturbation can reach the origin (``amplitude * #modes
    >= radius``).
    """
    d = grid.m + 1 if d is None else d
    mode_list = [(k,) if isinstance(k, int) else tuple(k) for k in modes]
    for kvec in mode_list:
        if len(kvec) != grid.m:
            raise ValueError(f"mode {kvec} does not match grid dimension {grid.m}")
    if radius - abs(amplitude) * len(mode_list) <= 0.0:
        raise ValueError("perturbation amplitude too large: radius would vanish")
    coords = grid.coords()
    r = np.full(grid.shape, float(radius))
    for kvec in mode_list:
        phase = np.zeros(grid.shape)
        for k, c, L in zip(kvec, coords, grid.lengths):
            phase = phase + 2.0 * np.pi * k * c / L
        r += amplitude * np.cos(phase)
    return RadialField(grid=grid, values=r), sphere_directions(grid, d)


def trig_random_initial(
    grid: PeriodicGrid,
    seed: int,
    max_mode: int,
    amplitude: float,
    d: int | None = None,
) -> tuple[RadialField, DirectionField]:
    """Reproducible random smooth radius ``1 + amplitude * (normalized trig sum)``.

    Coefficients are drawn from a seeded generator and damped by ``1/|k|^2``;
    the perturbation is rescaled to unit sup norm so ``min r = 1 - amplitude``
    is guaranteed.  Requires ``0 <= amplitude < 1``.
    """
    if not 0.0 <= amplitude < 1.0:
        raise ValueError("amplitude must lie in [0, 1) to keep the radius positive")
    if max_mode < 1:
        raise ValueError("max_mode must be >= 1")
    d = grid.m + 1 if d is None else d
    rng = np.random.default_rng(seed)
    coords = grid.coords()
    pert = np.zeros(grid.shape)
    for kvec in np.ndindex(*((max_mode + 1,) * grid.m)):
        if all(k == 0 for k in kvec):
            continue
        damp = 1.0 / float(sum(k * k for k in kvec))
        c, s = rng.uniform(-1.0, 1.0, size=2)
        phase = np.zeros(grid.shape)
        for k, xc, L in zip(kvec, coords, grid.lengths):
            phase = phase + 2.0 * np.pi * k * xc / L
        pert += damp * (c * np.cos(phase) + s * np.sin(phase))
    sup = np.abs(pert).max()
    if sup > 0.0:
        pert = pert / sup
    r = 1.0 + amplitude * pert
    return RadialField(grid=grid, values=r), sphere_directions(grid, d)


def make_initial(
    grid: PeriodicGrid, preset: str, params, d: int | None = None
) -> tuple[RadialField, DirectionField]:
    """Dispatch on preset name; ``params`` is the positional parameter list.

    Presets: ``ellipse(a, b)``, ``perturbed_sphere(radius, amplitude, *modes)``,
    ``trig_random(seed, max_mode, amplitude)``.
    """
    params = list(params)
    if preset == "ellipse":
        if len(params) != 2:
            raise ValueError("ellipse preset takes parameters (a, b)")
        return ellipse_initial(grid, float(params[0]), float(params[1]))
    if preset == "perturbed_sphere":
        if len(params) < 3:
            raise ValueError(
                "perturbed_sphere preset takes (radius, amplitude, mode, ...)"
            )
        if grid.m == 1:
            modes = [int(k) for k in params[2:]]
        else:
            modes = [tuple(int(k) for k in params[2:])]
        return perturbed_sphere_initial(
            grid, float(params[0]), float(params[1]), modes, d=d
        )
    if preset == "trig_random":
        if len(params) != 3:
            raise ValueError("trig_random preset takes (seed, max_mode, amplitude)")
        return trig_random_initial(
            grid, int(params[0]), int(params[1]), float(params[2]), d=d
        )
    raise ValueError(f"unknown initial preset {preset!r}")


def reconstruct(r: ScalarField, p: DirectionField) -> np.ndarray:
    """Embedded points ``x = r P``, shape ``grid.shape + (d,)``."""
    if r.grid != p.grid:
        raise ValueError("radius and direction fields live on different grids")
    return r.values[..., None] * p.vectors


def decompose(grid: PeriodicGrid, points: np.ndarray) -> tuple[RadialField, DirectionField]:
    """Split embedded points into ``(|x|, x/|x|)``.

    Raises when any point sits at the origin (the splitting breaks down).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.shape[:-1] != grid.shape:
        raise ValueError("point array does not match grid shape")
    norms = np.sqrt((points**2).sum(axis=-1))
    if not (norms.min() > 0.0):
        raise ValueError("zero-norm point: polar splitting undefined")
    r = RadialField(grid=grid, values=norms)
    p = DirectionField(grid=grid, vectors=points / norms[..., None])
    return r, p
