"""Closed-form flux registry.

A flux assigns to every torus axis ``i`` a smooth scalar function ``f_i``; the
transported quantity in divergence form is ``g_i(v) = v * f_i(v)``.  Only
closed-form families are registered (constants, polynomials, and the
quadratic ``v^2/2`` family), so ``g_i`` and its derivative evaluate exactly
with no numerical differentiation.

An optional per-axis spatial modulation ``a_i`` (a short cosine/sine series
in the axis coordinate) turns ``g_i(v)`` into ``a_i(theta_i) * g_i(v)``.  It
exists for the stationary mean-constrained problem, where an unmodulated flux
is degenerate (constants solve it); geometric presets never set it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PeriodicGrid

__all__ = [
    "FluxComponent",
    "Modulation",
    "FluxSpec",
    "constant_flux",
    "zero_flux",
    "burgers_flux",
    "polynomial_flux",
    "with_modulation",
    "eval_f",
    "eval_g",
    "eval_g_prime",
    "flux_envelope_bound",
]

_KINDS = ("constant", "burgers", "poly")


@dataclass(frozen=True)
class Modulation:
    """Truncated Fourier series ``a(s) = const + sum_k c_k cos + s_k sin``.

    Wave arguments are ``2 pi k s / L`` with ``L`` the period of the axis the
    modulation is attached to.
    """

    const: float = 1.0
    cos_amps: tuple[float, ...] = ()
    sin_amps: tuple[float, ...] = ()

    def evaluate(self, s: np.ndarray, period: float) -> np.ndarray:
        out = np.full_like(np.asarray(s, dtype=np.float64), self.const)
        for k, c in enumerate(self.cos_amps, start=1):
            out += c * np.cos(2.0 * np.pi * k * s / period)
        for k, c in enumerate(self.sin_amps, start=1):
            out += c * np.sin(2.0 * np.pi * k * s / period)
        return out

    def sup_bound(self) -> float:
        """Cheap upper bound for ``sup |a|`` (triangle inequality)."""
        return abs(self.const) + sum(map(abs, self.cos_amps)) + sum(map(abs, self.sin_amps))


@dataclass(frozen=True)
class FluxComponent:
    kind: str
    coeffs: tuple[float, ...] = ()
    modulation: Modulation | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown flux kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "constant" and len(self.coeffs) != 1:
            raise ValueError("constant flux needs exactly one coefficient")
        if self.kind == "poly" and len(self.coeffs) == 0:
            raise ValueError("polynomial flux needs at least one coefficient")


@dataclass(frozen=True)
class FluxSpec:
    """One flux component per torus axis."""

    components: tuple[FluxComponent, ...]

    def __post_init__(self) -> None:
        if len(self.components) < 1:
            raise ValueError("flux needs at least one component")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def is_constant(self) -> bool:
        """True when every component is an unmodulated constant."""
        return all(
            c.kind == "constant" and c.modulation is None for c in self.components
        )

    @property
    def constant_speeds(self) -> tuple[float, ...]:
        if not self.is_constant:
            raise ValueError("flux is not purely constant")
        return tuple(c.coeffs[0] for c in self.components)

    @property
    def has_modulation(self) -> bool:
        return any(c.modulation is not None for c in self.components)

    def modulation_values(self, grid: PeriodicGrid, i: int) -> np.ndarray | None:
        """Modulation samples for axis ``i`` broadcast over the grid, or None."""
        mod = self.components[i].modulation
        if mod is None:
            return None
        shape = [1] * grid.m
        shape[i] = grid.resolution[i]
        line = mod.evaluate(grid.axis_coords(i), grid.lengths[i]).reshape(shape)
        return np.broadcast_to(line, grid.shape)


def constant_flux(speeds) -> FluxSpec:
    """Flux with ``f_i`` identically equal to the given speeds."""
    return FluxSpec(
        components=tuple(FluxComponent("constant", (float(c),)) for c in speeds)
    )


def zero_flux(m: int = 1) -> FluxSpec:
    return constant_flux([0.0] * m)


def burgers_flux(m: int = 1) -> FluxSpec:
    """``f_i(v) = v/2`` on every axis, so ``g_i(v) = v^2/2``."""
    return FluxSpec(components=tuple(FluxComponent("burgers") for _ in range(m)))


def polynomial_flux(coeffs, m: int = 1) -> FluxSpec:
    """``f_i(v) = sum_k coeffs[k] v^k`` shared across the ``m`` axes."""
    c = tuple(float(x) for x in coeffs)
    return FluxSpec(components=tuple(FluxComponent("poly", c) for _ in range(m)))


def with_modulation(spec: FluxSpec, axis: int, modulation: Modulation) -> FluxSpec:
    """Copy of ``spec`` with a spatial modulation attached to one axis."""
    comps = list(spec.components)
    old = comps[axis]
    comps[axis] = FluxComponent(old.kind, old.coeffs, modulation)
    return FluxSpec(components=tuple(comps))


def _check_index(spec: FluxSpec, i: int) -> FluxComponent:
    if not 0 <= i < spec.m:
        raise IndexError(f"flux component {i} out of range for m={spec.m}")
    return spec.components[i]


def eval_f(spec: FluxSpec, i: int, nu):
    """Evaluate ``f_i`` at ``nu`` (scalar or array)."""
    comp = _check_index(spec, i)
    nu = np.asarray(nu, dtype=np.float64)
    if comp.kind == "constant":
        out = np.full_like(nu, comp.coeffs[0])
    elif comp.kind == "burgers":
        out = nu / 2.0
    else:
        out = np.polynomial.polynomial.polyval(nu, np.asarray(comp.coeffs))
    return out if out.ndim else float(out)


def eval_g(spec: FluxSpec, i: int, nu):
    """Evaluate ``g_i(nu) = nu * f_i(nu)``."""
    comp = _check_index(spec, i)
    nu = np.asarray(nu, dtype=np.float64)
    if comp.kind == "constant":
        out = comp.coeffs[0] * nu
    elif comp.kind == "burgers":
        out = nu * nu / 2.0
    else:
        out = nu * np.polynomial.polynomial.polyval(nu, np.asarray(comp.coeffs))
    return out if out.ndim else float(out)


def eval_g_prime(spec: FluxSpec, i: int, nu):
    """Exact derivative of ``g_i``."""
    comp = _check_index(spec, i)
    nu = np.asarray(nu, dtype=np.float64)
    if comp.kind == "constant":
        out = np.full_like(nu, comp.coeffs[0])
    elif comp.kind == "burgers":
        out = nu.copy()
    else:
        # g = sum c_k nu^(k+1)  =>  g' = sum (k+1) c_k nu^k
        gp = np.asarray([(k + 1) * c for k, c in enumerate(comp.coeffs)])
        out = np.polynomial.polynomial.polyval(nu, gp)
    return out if out.ndim else float(out)


def flux_envelope_bound(spec: FluxSpec, field_bound: float) -> float:
    """Upper bound for ``max_i sup(|g_i|, |g_i'|)`` over ``|v| <= (m+1)*field_bound``.

    Exact monotone envelopes for the constant and quadratic families; dense
    sampling with a factor-2 headroom for polynomials.  A conservative value
    only shortens the fixed-point window downstream, never invalidates it.
    """
    if field_bound < 0.0:
        raise ValueError("field bound must be non-negative")
    reach = (spec.m + 1) * field_bound
    worst = 0.0
    for idx, comp in enumerate(spec.components):
        if comp.kind == "constant":
            c = abs(comp.coeffs[0])
            h = max(c * reach, c)
        elif comp.kind == "burgers":
            h = max(reach * reach / 2.0, reach)
        else:
            nu = np.linspace(-reach, reach, 4096)
            h = 2.0 * max(
                np.abs(eval_g(spec, idx, nu)).max(),
                np.abs(eval_g_prime(spec, idx, nu)).max(),
            )
        if comp.modulation is not None:
            h *= comp.modulation.sup_bound()
        worst = max(worst, float(h))
    return worst
