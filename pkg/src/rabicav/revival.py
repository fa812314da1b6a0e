"""Collapse/revival forecasting and the varsigma threshold search.

At finite varsigma the block Rabi frequencies 2 q_ph sqrt(s/varsigma) are
spread around 2 q_ph, so the vacuum oscillation collapses and rephases.  The
first revival occurs when neighboring dominant blocks accumulate a 2 pi
phase difference:

    t_r = (varsigma + sqrt(varsigma (varsigma - 1))) * pi / q_ph,

i.e. roughly 2 varsigma Rabi periods.  Its visibility is bounded by the
envelope amplitude eps = exp(-(gamma1_ph + gamma2_ph + gamma3) t_r / 4) / 2.
``varsigma_threshold`` inverts the problem: given banded measurements it
finds the smallest varsigma whose full curve stays inside every band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .aggregate import pg_total, pg_total_effective
from .params import PhysicalParams


class InfeasibleFitError(RuntimeError):
    """No varsigma in the search range is consistent with the data bands."""


def revival_time(varsigma: float, q_ph: float) -> float:
    """First revival time (seconds)."""
    if varsigma < 1.0:
        raise ValueError(
            f"varsigma must be >= 1 for a revival (needs an s-1 neighbor), "
            f"got {varsigma!r}")
    if q_ph <= 0.0:
        raise ValueError(f"q_ph must be positive, got {q_ph!r}")
    ratio = varsigma + math.sqrt(varsigma * (varsigma - 1.0))
    return ratio * math.pi / q_ph


def revival_amplitude(gamma1_ph: float, gamma2_ph: float, gamma3: float,
                      t_r: float) -> float:
    """Oscillation-envelope amplitude at the revival time."""
    if t_r <= 0.0:
        raise ValueError(f"t_r must be positive, got {t_r!r}")
    return 0.5 * math.exp(-0.25 * (gamma1_ph + gamma2_ph + gamma3) * t_r)


def gamma_from_epsilon(epsilon: float, t_r: float) -> float:
    """Total decay rate gamma1_ph + gamma2_ph + gamma3 producing a given
    envelope amplitude: gamma = -(4 / t_r) ln(2 eps), for 0 < eps < 1/2."""
    if not (0.0 < epsilon < 0.5):
        raise ValueError(f"epsilon must be in (0, 1/2), got {epsilon!r}")
    if t_r <= 0.0:
        raise ValueError(f"t_r must be positive, got {t_r!r}")
    return -4.0 / t_r * math.log(2.0 * epsilon)


def most_probable_rabi_frequency(s: float, varsigma: float, q_ph: float) -> float:
    """Rabi frequency 2 q_ph sqrt(s / varsigma) of block s; 2 q_ph at the
    binomial peak s ~ varsigma."""
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s!r}")
    return 2.0 * q_ph * math.sqrt(s / varsigma)


@dataclass(frozen=True)
class RevivalForecast:
    """Revival prediction for one parameter set."""

    t_r: float
    t_rabi: float
    ratio: float
    epsilon: float
    gamma_total: float


def forecast(params: PhysicalParams) -> RevivalForecast:
    t_r = revival_time(params.varsigma, params.q_ph)
    t_rabi = params.rabi_period
    return RevivalForecast(
        t_r=t_r,
        t_rabi=t_rabi,
        ratio=t_r / t_rabi,
        epsilon=revival_amplitude(params.gamma1_ph, params.gamma2_ph,
                                  params.gamma3, t_r),
        gamma_total=params.gamma_total,
    )


def envelope_series(times, values, window: float):
    """Peak-to-trough half-amplitudes over consecutive windows.

    Returns (window centers, amplitudes).  One window per Rabi period is the
    reproducible proxy for the oscillation envelope.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if window <= 0.0:
        raise ValueError("window must be positive")
    edges = np.arange(times[0], times[-1] + window, window)
    idx = np.searchsorted(times, edges)
    centers, amps = [], []
    for k in range(len(edges) - 1):
        lo, hi = idx[k], idx[k + 1]
        if hi - lo < 2:
            continue
        chunk = values[lo:hi]
        centers.append(0.5 * (edges[k] + edges[k + 1]))
        amps.append(0.5 * (chunk.max() - chunk.min()))
    return np.asarray(centers), np.asarray(amps)


def find_revival_peak(times, values, t_rabi: float, search_lo: float,
                      search_hi: float) -> tuple[float, float]:
    """(time, amplitude) of the largest envelope window inside the search
    interval; the post-collapse maximum locator."""
    centers, amps = envelope_series(times, values, t_rabi)
    mask = (centers >= search_lo) & (centers <= search_hi)
    if not mask.any():
        raise ValueError("no envelope windows inside the search interval")
    sub_c, sub_a = centers[mask], amps[mask]
    k = int(np.argmax(sub_a))
    return float(sub_c[k]), float(sub_a[k])


@dataclass(frozen=True)
class ThresholdProbe:
    varsigma: float
    feasible: bool
    max_violation: float


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of the minimal-varsigma search."""

    varsigma_star: float
    residuals: np.ndarray          # |model - p| - sigma at varsigma_star
    probes: tuple[ThresholdProbe, ...]
    monotone: bool                 # all probes above the threshold feasible
    effective: bool
    evaluations: int = field(default=0)


def _validate_data(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] == 0:
        raise ValueError("data must be a nonempty array of (t, p, sigma) rows")
    if np.any(arr[:, 2] <= 0.0):
        raise ValueError("all sigma values must be positive")
    if np.any(arr[:, 0] < 0.0):
        raise ValueError("all times must be nonnegative")
    return arr


def varsigma_threshold(data, params_template: PhysicalParams,
                       search_range: tuple[float, float], *,
                       rel_tol: float = 1e-3, effective: bool = False,
                       s0_mode: str = "formula", tail_tol: float = 1e-12,
                       n_probes: int = 6) -> ThresholdResult:
    """Smallest varsigma whose curve passes through every (p_i +- sigma_i).

    Bisection (geometric, to relative ``rel_tol``) assuming the feasible set
    is an up-set in varsigma; feasibility is re-verified on a probe grid
    above the threshold and non-monotonicity is reported, not silently
    accepted.  Raises InfeasibleFitError when even the upper end fails.
    """
    arr = _validate_data(data)
    t_data = arr[:, 0]
    lo, hi = float(search_range[0]), float(search_range[1])
    if not (0.0 < lo <= hi <= params_template.n_oscillators):
        raise ValueError(
            f"search range must satisfy 0 < lo <= hi <= N, got {search_range!r}")
    curve_fn = pg_total_effective if effective else pg_total
    evaluations = 0

    def violation(varsigma: float) -> float:
        nonlocal evaluations
        evaluations += 1
        p = curve_fn(params_template.replace(varsigma=varsigma), t_data,
                     s0_mode=s0_mode, tail_tol=tail_tol)
        return float(np.max(np.abs(np.asarray(p) - arr[:, 1]) - arr[:, 2]))

    v_hi = violation(hi)
    if v_hi > 0.0:
        raise InfeasibleFitError(
            f"even varsigma = {hi} violates the bands by {v_hi:.3g}")

    v_lo = violation(lo)
    if v_lo <= 0.0:
        star = lo
    else:
        a, b = lo, hi
        while (b - a) > rel_tol * b:
            mid = math.sqrt(a * b)
            if violation(mid) <= 0.0:
                b = mid
            else:
                a = mid
        star = b

    params_star = params_template.replace(varsigma=star)
    p_star = np.asarray(curve_fn(params_star, t_data, s0_mode=s0_mode,
                                 tail_tol=tail_tol))
    residuals = np.abs(p_star - arr[:, 1]) - arr[:, 2]

    probes = []
    if star < hi:
        grid = np.geomspace(star, hi, n_probes)
    else:
        grid = np.array([hi])
    for v in grid:
        mv = violation(float(v))
        probes.append(ThresholdProbe(float(v), mv <= 0.0, mv))
    monotone = all(p.feasible for p in probes)

    return ThresholdResult(
        varsigma_star=star,
        residuals=residuals,
        probes=tuple(probes),
        monotone=monotone,
        effective=effective,
        evaluations=evaluations,
    )
