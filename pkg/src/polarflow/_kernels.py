"""Hot numeric kernels: periodic circulant convolution and scattered gathers.

The scattered gathers (cubic Lagrange in 1-2 axes, trigonometric in 1 axis)
carry numba ``@njit`` implementations with pure-numpy fallbacks; selection
happens once at import via :mod:`polarflow._accel` and the
``POLARFLOW_DISABLE_NUMBA`` flag, and both paths agree to roundoff.  The
circulant convolution and the 2-axis trigonometric gather stay on vectorized
numpy/BLAS on purpose: measured on desk-scale grids, BLAS beats a jitted
loop for both (see ``benchmarks/bench_kernels.py``).

Positions for the cubic gather are expressed in grid units: a point ``u``
lives in ``[0, N)`` with node ``j`` at ``u == j``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, njit, prange


# ---------------------------------------------------------------------------
# periodic circulant convolution along one axis (vectorized numpy by design)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _circulant_indices(n: int) -> np.ndarray:
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    idx.flags.writeable = False
    return idx


def _circulant_np(row: np.ndarray, arr: np.ndarray) -> np.ndarray:
    return row[_circulant_indices(row.shape[0])] @ arr


def circulant_apply(row: np.ndarray, arr: np.ndarray, axis: int = 0) -> np.ndarray:
    """Convolve ``arr`` with the periodic stencil ``row`` along ``axis``.

    ``out[j] = sum_l row[(j - l) % N] * arr[l]`` taken along the given axis.
    """
    row = np.ascontiguousarray(row, dtype=np.float64)
    moved = np.moveaxis(np.asarray(arr, dtype=np.float64), axis, 0)
    shape = moved.shape
    flat = np.ascontiguousarray(moved.reshape(shape[0], -1))
    out = _circulant_np(row, flat)
    return np.moveaxis(out.reshape(shape), 0, axis)


# ---------------------------------------------------------------------------
# periodic 4-point (cubic Lagrange) gather
# ---------------------------------------------------------------------------


def _lagrange4_weights(frac: np.ndarray):
    w0 = -frac * (frac - 1.0) * (frac - 2.0) / 6.0
    w1 = (frac + 1.0) * (frac - 1.0) * (frac - 2.0) / 2.0
    w2 = -(frac + 1.0) * frac * (frac - 2.0) / 2.0
    w3 = (frac + 1.0) * frac * (frac - 1.0) / 6.0
    return w0, w1, w2, w3


def _cubic_gather_1d_np(values: np.ndarray, u: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    j = np.floor(u).astype(np.int64)
    frac = u - j
    w0, w1, w2, w3 = _lagrange4_weights(frac)
    return (
        w0 * values[(j - 1) % n]
        + w1 * values[j % n]
        + w2 * values[(j + 1) % n]
        + w3 * values[(j + 2) % n]
    )


@njit(cache=True)
def _cubic_gather_1d_nb(values, u):  # pragma: no cover - via dispatcher
    n = values.shape[0]
    out = np.empty(u.shape[0])
    for p in range(u.shape[0]):
        j = int(np.floor(u[p]))
        f = u[p] - j
        w0 = -f * (f - 1.0) * (f - 2.0) / 6.0
        w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0
        w2 = -(f + 1.0) * f * (f - 2.0) / 2.0
        w3 = (f + 1.0) * f * (f - 1.0) / 6.0
        out[p] = (
            w0 * values[(j - 1) % n]
            + w1 * values[j % n]
            + w2 * values[(j + 1) % n]
            + w3 * values[(j + 2) % n]
        )
    return out


def _cubic_gather_2d_np(values: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    n1, n2 = values.shape
    j1 = np.floor(u1).astype(np.int64)
    j2 = np.floor(u2).astype(np.int64)
    wa = _lagrange4_weights(u1 - j1)
    wb = _lagrange4_weights(u2 - j2)
    out = np.zeros(u1.shape[0])
    for a in range(4):
        ia = (j1 + a - 1) % n1
        for b in range(4):
            ib = (j2 + b - 1) % n2
            out += wa[a] * wb[b] * values[ia, ib]
    return out


@njit(cache=True, parallel=True)
def _cubic_gather_2d_nb(values, u1, u2):  # pragma: no cover - via dispatcher
    n1, n2 = values.shape
    out = np.empty(u1.shape[0])
    for p in prange(u1.shape[0]):
        j1 = int(np.floor(u1[p]))
        j2 = int(np.floor(u2[p]))
        f1 = u1[p] - j1
        f2 = u2[p] - j2
        wa0 = -f1 * (f1 - 1.0) * (f1 - 2.0) / 6.0
        wa1 = (f1 + 1.0) * (f1 - 1.0) * (f1 - 2.0) / 2.0
        wa2 = -(f1 + 1.0) * f1 * (f1 - 2.0) / 2.0
        wa3 = (f1 + 1.0) * f1 * (f1 - 1.0) / 6.0
        wb0 = -f2 * (f2 - 1.0) * (f2 - 2.0) / 6.0
        wb1 = (f2 + 1.0) * (f2 - 1.0) * (f2 - 2.0) / 2.0
        wb2 = -(f2 + 1.0) * f2 * (f2 - 2.0) / 2.0
        wb3 = (f2 + 1.0) * f2 * (f2 - 1.0) / 6.0
        acc = 0.0
        for a in range(4):
            ia = (j1 + a - 1) % n1
            if a == 0:
                wa = wa0
            elif a == 1:
                wa = wa1
            elif a == 2:
                wa = wa2
            else:
                wa = wa3
            acc += wa * (
                wb0 * values[ia, (j2 - 1) % n2]
                + wb1 * values[ia, j2 % n2]
                + wb2 * values[ia, (j2 + 1) % n2]
                + wb3 * values[ia, (j2 + 2) % n2]
            )
        out[p] = acc
    return out


def cubic_gather(values: np.ndarray, units: list[np.ndarray]) -> np.ndarray:
    """Periodic cubic Lagrange interpolation of a gridded field at points.

    ``units[i]`` holds the i-th coordinate of every query point in grid units.
    Supports 1- and 2-axis grids via dedicated kernels and any dimension via a
    generic tensor-product fallback.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        u = np.ascontiguousarray(units[0], dtype=np.float64)
        if USE_NUMBA:
            return _cubic_gather_1d_nb(values, u)
        return _cubic_gather_1d_np(values, u)
    if values.ndim == 2:
        u1 = np.ascontiguousarray(units[0], dtype=np.float64)
        u2 = np.ascontiguousarray(units[1], dtype=np.float64)
        if USE_NUMBA:
            return _cubic_gather_2d_nb(values, u1, u2)
        return _cubic_gather_2d_np(values, u1, u2)
    return _cubic_gather_nd(values, units)


def _cubic_gather_nd(values: np.ndarray, units: list[np.ndarray]) -> np.ndarray:
    shape = values.shape
    base = [np.floor(u).astype(np.int64) for u in units]
    weights = [_lagrange4_weights(u - b) for u, b in zip(units, base)]
    npts = units[0].shape[0]
    out = np.zeros(npts)
    for offsets in np.ndindex(*(4,) * values.ndim):
        w = np.ones(npts)
        idx = []
        for ax, off in enumerate(offsets):
            w = w * weights[ax][off]
            idx.append((base[ax] + off - 1) % shape[ax])
        out += w * values[tuple(idx)]
    return out


# ---------------------------------------------------------------------------
# trigonometric (band-limited exact) gather
# ---------------------------------------------------------------------------


def _trig_gather_1d_np(amps: np.ndarray, kappa: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return (np.exp(1j * np.outer(pts, kappa)) @ amps).real


@njit(cache=True)
def _trig_gather_1d_nb(ar, ai, kappa1, pts):  # pragma: no cover - via dispatcher
    # conjugate-pair form for real-field spectra; powers of exp(i kappa1 x)
    # replace per-mode transcendentals
    n = ar.shape[0]
    half = n // 2
    out = np.empty(pts.shape[0])
    for p in range(pts.shape[0]):
        phase = kappa1 * pts[p]
        zc = np.cos(phase)
        zs = np.sin(phase)
        c = 1.0
        s = 0.0
        acc = ar[0]
        for k in range(1, half):
            cn = c * zc - s * zs
            s = c * zs + s * zc
            c = cn
            acc += 2.0 * (ar[k] * c - ai[k] * s)
        cn = c * zc - s * zs
        s = c * zs + s * zc
        c = cn
        # unpaired extreme mode: Re[a exp(-i half phase)]
        acc += ar[half] * c + ai[half] * s
        out[p] = acc
    return out


def _trig_gather_2d_np(amps, kappa1, kappa2, p1, p2):
    e1 = np.exp(1j * np.outer(p1, kappa1))
    e2 = np.exp(1j * np.outer(p2, kappa2))
    return ((e1 @ amps) * e2).sum(axis=1).real


def trig_gather(amps: np.ndarray, kappas: list[np.ndarray], pts: list[np.ndarray]) -> np.ndarray:
    """Evaluate a discrete Fourier representation at scattered points.

    ``amps`` is the complex coefficient array in FFT layout (normalized so the
    zero mode equals the field mean) of a *real* field, ``kappas[i]`` the
    per-axis wavenumbers, ``pts[i]`` the i-th physical coordinates of the
    query points.  Exact to roundoff for fields resolved on the grid; limited
    to 1 and 2 axes.
    """
    if len(kappas) == 1:
        p = np.ascontiguousarray(pts[0], dtype=np.float64)
        if USE_NUMBA:
            return _trig_gather_1d_nb(
                np.ascontiguousarray(amps.real),
                np.ascontiguousarray(amps.imag),
                float(kappas[0][1]),
                p,
            )
        return _trig_gather_1d_np(amps, kappas[0], p)
    if len(kappas) == 2:
        p1 = np.ascontiguousarray(pts[0], dtype=np.float64)
        p2 = np.ascontiguousarray(pts[1], dtype=np.float64)
        return _trig_gather_2d_np(amps, kappas[0], kappas[1], p1, p2)
    raise ValueError("trig_gather supports 1 or 2 axes; use cubic_gather beyond")
