"""Binomially weighted aggregation of block responses.

The total ground-state probability is the binomial mixture of the per-block
closed forms,

    p_g(t) = sum_s C(N,s) Z^s (1-Z)^{N-s} p_g(s, t),

evaluated in the renormalized parameterization (rates scaled by s/(N Z), the
oscillation phase 2 q_ph sqrt(s/varsigma) t).  Weights are computed in log
space with support truncation controlled by ``tail_tol``, and the weighted
sums run through the deterministic pairwise kernels, so re-runs are
bit-stable.  The Gaussian-mode correction divides every decay exponent by
sqrt(pi) * (w/d) and leaves the oscillation untouched; time is then read as
effective time.  The same machinery aggregates the block energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from ._binomial import log_binomial_weight
from .kernels import reference as _ref
from .lindblad import DEGENERACY_RTOL, _pg_ode_fallback, pg_irreducible
from .params import ParameterError, PhysicalParams


@dataclass(frozen=True)
class BinomialWeights:
    """Truncated binomial(N, Z) weight table over a contiguous s-range."""

    n_oscillators: int
    z: float
    s_lo: int
    s_hi: int
    log_weights: np.ndarray
    weights: np.ndarray
    tail_mass: float

    @property
    def s_values(self) -> np.ndarray:
        return np.arange(self.s_lo, self.s_hi + 1)


# Narrow supports (s_lo below this) get an exact big-integer anchor for the
# leading binomial coefficient, which beats the plain log-gamma route by a
# few orders of magnitude in the summed-weight accuracy.
_EXACT_ANCHOR_LIMIT = 5000


def _support_log_weights(n: int, z: float, s_lo: int, s_hi: int) -> np.ndarray:
    if s_lo <= _EXACT_ANCHOR_LIMIT:
        log_c = np.empty(s_hi - s_lo + 1)
        log_c[0] = math.log(math.comb(n, s_lo))
        for i, s in enumerate(range(s_lo, s_hi)):
            log_c[i + 1] = log_c[i] + math.log((n - s) / (s + 1.0))
        s_arr = np.arange(s_lo, s_hi + 1, dtype=np.float64)
        return log_c + s_arr * math.log(z) + (n - s_arr) * math.log1p(-z)
    return np.asarray(log_binomial_weight(n, z, np.arange(s_lo, s_hi + 1)))


def binomial_log_weights(n_oscillators: int, z: float,
                         tail_tol: float = 1e-12) -> BinomialWeights:
    """Log-space binomial weights, truncated where each one-sided neglected
    mass is provably below tail_tol / 2 (geometric tail bound)."""
    n = n_oscillators
    if not isinstance(n, int) or not (1 <= n <= 10**9):
        raise ParameterError(f"N must be an integer in [1, 1e9], got {n!r}")
    if not (0.0 < z < 1.0):
        raise ParameterError(f"Z must be in (0, 1) for binomial weights, got {z!r}")
    if not (tail_tol > 0.0):
        raise ParameterError(f"tail_tol must be positive, got {tail_tol!r}")

    mode = min(n, int(math.floor((n + 1) * z)))
    odds = z / (1.0 - z)

    s_hi = mode
    while s_hi < n:
        nxt = s_hi + 1
        # ratio w(nxt+1)/w(nxt); ratios decrease with s, so the mass above
        # s_hi is at most w(nxt) / (1 - ratio) once ratio < 1.
        ratio = (n - nxt) / (nxt + 1.0) * odds
        if ratio < 1.0:
            bound = math.exp(log_binomial_weight(n, z, nxt)) / (1.0 - ratio)
            if bound <= 0.5 * tail_tol:
                break
        s_hi = nxt

    s_lo = mode
    while s_lo > 0:
        prv = s_lo - 1
        # ratio w(prv-1)/w(prv); decreasing as s decreases.
        ratio = prv / ((n - prv + 1.0) * odds)
        if ratio < 1.0:
            bound = math.exp(log_binomial_weight(n, z, prv)) / (1.0 - ratio)
            if bound <= 0.5 * tail_tol:
                break
        s_lo = prv

    log_w = _support_log_weights(n, z, s_lo, s_hi)
    weights = np.exp(log_w)
    tail_mass = max(0.0, 1.0 - kernels.pairwise_sum(weights))
    return BinomialWeights(n, z, s_lo, s_hi, log_w, weights, tail_mass)


@dataclass(frozen=True)
class ProbabilityTrace:
    """Sampled probability curve with provenance."""

    times: np.ndarray
    values: np.ndarray
    representation: str
    params_snapshot: Mapping

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be matching 1-D arrays")
        if times.size > 1 and np.any(np.diff(times) <= 0.0):
            raise ValueError("times must be strictly increasing")
        if values.size and (values.min() < -1e-9 or values.max() > 1.0 + 1e-9):
            raise ValueError("probability values leave [0, 1] beyond tolerance")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


def _snapshot(params: PhysicalParams, **extra) -> dict:
    snap = {
        "omega": params.omega,
        "q_ph": params.q_ph,
        "gamma1_ph": params.gamma1_ph,
        "gamma2_ph": params.gamma2_ph,
        "gamma3": params.gamma3,
        "N": params.n_oscillators,
        "varsigma": params.varsigma,
        "mode_ratio": params.mode_ratio,
        "hbar": params.hbar,
    }
    snap.update(extra)
    return snap


def gaussian_exp_scale(params: PhysicalParams) -> float:
    """sqrt(pi) * (w/d): the factor dividing decay exponents."""
    if params.mode_ratio is None:
        raise ParameterError(
            "mode_ratio is required for the Gaussian-corrected curve")
    return math.sqrt(math.pi) * params.mode_ratio


def _support(params: PhysicalParams, tail_tol: float):
    """(s-array, weights) of the truncated binomial support; handles Z = 1."""
    z = params.z
    if z >= 1.0:
        return (np.array([params.n_oscillators], dtype=np.float64),
                np.array([1.0]))
    bw = binomial_log_weights(params.n_oscillators, z, tail_tol)
    return bw.s_values.astype(np.float64), bw.weights


def _times_array(t):
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0.0):
        raise ValueError("times must be nonnegative")
    return np.atleast_1d(arr)


def _pg_sum(params: PhysicalParams, t, s0_mode: str, tail_tol: float,
            exp_scale: float) -> np.ndarray:
    if s0_mode not in ("formula", "physical"):
        raise ParameterError(f"invalid s0_mode {s0_mode!r}")
    times = _times_array(t)
    s_arr, weights = _support(params, tail_tol)
    x = s_arr / params.varsigma
    g1x = params.gamma1_ph * x
    g2x = params.gamma2_ph * x
    g3 = params.gamma3

    if s0_mode == "physical" and s_arr[0] == 0.0:
        weights = weights.copy()
        weights[0] = 0.0

    scale = np.maximum(np.maximum(g1x, g2x), g3)
    d = g1x - g2x + g3
    all_zero = scale == 0.0
    degenerate = (~all_zero) & (np.abs(d) < DEGENERACY_RTOL * scale)
    safe_d = np.where(d == 0.0, 1.0, d)
    ratio = np.where(all_zero, 1.0, g3 / safe_d)
    c1 = 1.0 - ratio
    c2 = 1.0 + ratio

    inv = 1.0 / exp_scale
    a1 = 0.5 * (g1x + g3) * inv
    a2 = 0.5 * g2x * inv
    a3 = 0.25 * (g1x + g2x + g3) * inv
    phi = 2.0 * params.q_ph * np.sqrt(x)

    if not degenerate.any():
        return kernels.pg_block_sum(weights, c1, c2, a1, a2, a3, phi, times)

    # Rare path: patch the degenerate blocks with the ODE oracle, then
    # reduce with the same fixed tree as the kernels.
    tt = times[None, :]
    contrib = weights[:, None] * (
        1.0
        - 0.25 * c2[:, None] * np.exp(-a2[:, None] * tt)
        - 0.25 * c1[:, None] * np.exp(-a1[:, None] * tt)
        - 0.5 * np.exp(-a3[:, None] * tt) * np.cos(phi[:, None] * tt)
    )
    for i in np.nonzero(degenerate)[0]:
        p = _pg_ode_fallback(g1x[i] * inv, g2x[i] * inv, g3 * inv,
                             0.5 * phi[i], times)
        contrib[i] = weights[i] * np.asarray(p)
    return _ref._reduce_axis0(contrib)


def pg_total(params: PhysicalParams, t, *, s0_mode: str = "formula",
             tail_tol: float = 1e-12):
    """Binomially weighted ground-state probability, uncorrected time axis."""
    out = _pg_sum(params, t, s0_mode, tail_tol, 1.0)
    return out if np.ndim(t) else float(out[0])


def pg_total_effective(params: PhysicalParams, t, *, s0_mode: str = "formula",
                       tail_tol: float = 1e-12):
    """Gaussian-mode-corrected probability; ``t`` is effective time."""
    out = _pg_sum(params, t, s0_mode, tail_tol, gaussian_exp_scale(params))
    return out if np.ndim(t) else float(out[0])


def pg_limit(params: PhysicalParams, t, *, effective: bool = False):
    """The N -> infinity curve at fixed Z: the irreducible form with the
    commutator constant equal to Z (bare parameterization)."""
    exp_scale = gaussian_exp_scale(params) if effective else 1.0
    return pg_irreducible(params.z, params.gamma1_bare, params.gamma2_bare,
                          params.gamma3, params.q_bare, t, exp_scale)


def difference_curve(params: PhysicalParams, t_grid, *,
                     s0_mode: str = "formula",
                     tail_tol: float = 1e-12) -> ProbabilityTrace:
    """|p_irr(t) - p_red(t)|; uses the Gaussian-corrected pair when
    mode_ratio is set."""
    times = _times_array(t_grid)
    effective = params.mode_ratio is not None
    if effective:
        reducible = pg_total_effective(params, times, s0_mode=s0_mode,
                                       tail_tol=tail_tol)
    else:
        reducible = pg_total(params, times, s0_mode=s0_mode, tail_tol=tail_tol)
    irreducible = pg_limit(params, times, effective=effective)
    values = np.abs(np.asarray(irreducible) - np.asarray(reducible))
    return ProbabilityTrace(times, values, "difference",
                            _snapshot(params, s0_mode=s0_mode,
                                      tail_tol=tail_tol, effective=effective))


def _energy_terms(g1x, g2x, g3, qx, omega):
    """Coefficients (k0, k1, k2, k3, a1, a2) of the block energy response
    k0 + k1 e^{-a1 t} + (k2 + k3 t) e^{-a2 t}; vectorized over blocks."""
    g1x = np.asarray(g1x, dtype=np.float64)
    g2x = np.asarray(g2x, dtype=np.float64)
    qx = np.asarray(qx, dtype=np.float64)
    scale = np.maximum(np.maximum(g1x, g2x), g3)
    d = g1x - g2x + g3
    degenerate = np.abs(d) < DEGENERACY_RTOL * np.where(scale == 0.0, 1.0, scale)
    safe_d = np.where(degenerate, 1.0, d)
    c1 = (d - g3) / safe_d
    c2 = (d + g3) / safe_d

    k0 = np.full_like(g1x, -0.5 * omega)
    k1 = np.where(degenerate,
                  0.5 * (omega + qx),
                  0.5 * (omega * c1 + qx * c2))
    k2 = np.where(degenerate,
                  0.5 * (omega - qx),
                  0.5 * c2 * (omega - qx))
    k3 = np.where(degenerate, 0.25 * g3 * (omega - qx), 0.0)
    a1 = 0.5 * (g1x + g3)
    a2 = 0.5 * g2x
    return k0, k1, k2, k3, a1, a2


def energy_irr(zcal: float, gamma1: float, gamma2: float, gamma3: float,
               q_bare: float, omega: float, t):
    """Mean atom-field energy over hbar for the irreducible representation
    with commutator constant zcal; starts at +omega/2, decays to -omega/2.

    The equal-rate limit gamma1 = gamma2 (where the generic three-term form
    becomes 0/0 only if gamma3 = 0 too) is handled by the exact degenerate
    branch with a t e^{-at} term."""
    if zcal <= 0.0:
        raise ValueError(f"zcal must be positive, got {zcal!r}")
    times = _times_array(t)
    k0, k1, k2, k3, a1, a2 = _energy_terms(
        gamma1 * zcal, gamma2 * zcal, gamma3, q_bare * math.sqrt(zcal), omega)
    ones = np.ones(1)
    out = kernels.energy_block_sum(
        ones, [k0], [k1], [k2], [k3], [a1], [a2], times)
    return out if np.ndim(t) else float(out[0])


def energy_total(params: PhysicalParams, t, *, tail_tol: float = 1e-12):
    """Binomially weighted mean energy over hbar (rad/s)."""
    times = _times_array(t)
    s_arr, weights = _support(params, tail_tol)
    x = s_arr / params.varsigma
    k0, k1, k2, k3, a1, a2 = _energy_terms(
        params.gamma1_ph * x, params.gamma2_ph * x, params.gamma3,
        params.q_ph * np.sqrt(x), params.omega)
    out = kernels.energy_block_sum(weights, k0, k1, k2, k3, a1, a2, times)
    return out if np.ndim(t) else float(out[0])
