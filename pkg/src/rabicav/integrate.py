"""Embedded Runge-Kutta 4(5) integration with adaptive step control.

Dormand-Prince coefficients; the 5th-order solution is propagated and the
embedded 4th-order one provides the local error estimate.  This is the
independent time-propagation oracle for the closed-form solutions, so it is
implemented here rather than delegated to an external solver: the caller can
inject a ``post_step`` hook (used to re-symmetrize density matrices after
every accepted step) and step-size underflow is reported as a hard failure.
"""

from __future__ import annotations

import numpy as np


class IntegrationError(RuntimeError):
    """Adaptive stepping failed (step-size underflow or step budget)."""


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray,
                rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def solve_rk45(rhs, y0: np.ndarray, t_grid, rtol: float = 1e-10,
               atol: float = 1e-10, post_step=None,
               max_steps: int = 10_000_000) -> np.ndarray:
    """Integrate y' = rhs(t, y) through all points of ``t_grid``.

    ``t_grid`` must be strictly increasing; the first entry is the initial
    time.  Steps are clipped so every grid point is hit exactly (no dense
    output interpolation).  ``post_step(y) -> y`` is applied after each
    accepted step.  Returns an array of shape (len(t_grid),) + y0.shape.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise ValueError("t_grid must be a nonempty 1-D array")
    if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")

    y = np.asarray(y0).astype(np.complex128).copy()
    out = np.empty((t_grid.size,) + y.shape, dtype=np.complex128)
    out[0] = y
    if t_grid.size == 1:
        return out

    t = float(t_grid[0])
    t_span = float(t_grid[-1]) - t
    h = t_span / 100.0
    h_floor = 16.0 * np.finfo(np.float64).eps * max(abs(t_grid[-1]), t_span)
    k = np.empty((7,) + y.shape, dtype=np.complex128)

    steps = 0
    for target_idx in range(1, t_grid.size):
        target = float(t_grid[target_idx])
        while t < target:
            if target - t <= h_floor:
                # Within roundoff of the grid point: accept it as reached.
                t = target
                break
            steps += 1
            if steps > max_steps:
                raise IntegrationError(f"exceeded {max_steps} steps")
            h = min(h, target - t)
            if h < h_floor:
                raise IntegrationError(
                    f"step size underflow at t={t!r} (h={h!r})")

            k[0] = rhs(t, y)
            for i in range(1, 7):
                yi = y.copy()
                for j, aij in enumerate(_A[i]):
                    if aij != 0.0:
                        yi += (h * aij) * k[j]
                k[i] = rhs(t + _C[i] * h, yi)

            y5 = y + h * np.tensordot(_B5, k, axes=1)
            err = h * np.tensordot(_B5 - _B4, k, axes=1)
            norm = _error_norm(err, y, y5, rtol, atol)

            if norm <= 1.0:
                t = t + h
                y = y5
                if post_step is not None:
                    y = post_step(y)
                factor = _MAX_FACTOR if norm == 0.0 else min(
                    _MAX_FACTOR, _SAFETY * norm ** -0.2)
                h = h * max(_MIN_FACTOR, factor)
            else:
                h = h * max(_MIN_FACTOR, _SAFETY * norm ** -0.2)
        out[target_idx] = y
    return out
