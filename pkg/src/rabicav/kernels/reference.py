"""Pure-NumPy kernels for the binomially weighted block sums.

Both production curves are sums over invariant blocks s of closed-form block
responses:

* ground-state probability
    p_s(t) = 1 - c2/4 * exp(-a2 t) - c1/4 * exp(-a1 t)
               - 1/2 * exp(-a3 t) * cos(phi t)

* mean energy (in units of hbar)
    e_s(t) = k0 + k1 * exp(-a1 t) + (k2 + k3 t) * exp(-a2 t)

The coefficient arrays are precomputed per block by the aggregate layer; the
kernels only evaluate the responses and reduce them with a fixed pairwise
(binary tree) summation over ascending s.  The compiled backend in ``_core``
implements the identical contract with the identical reduction tree, so both
backends are deterministic run-to-run and agree to a few ULP.
"""

from __future__ import annotations

import numpy as np

# Cap on the (n_blocks, n_times) scratch used per evaluation chunk.  Chunking
# happens along the time axis only, so the s-reduction tree is unaffected.
_CHUNK_ELEMS = 4_000_000


def pairwise_sum(values: np.ndarray) -> float:
    """Sum a 1-D array with the fixed pairwise tree used by all kernels."""
    acc = np.asarray(values, dtype=np.float64)
    if acc.ndim != 1:
        raise ValueError("pairwise_sum expects a 1-D array")
    return float(_reduce_axis0(acc[:, None])[0]) if acc.size else 0.0


def _reduce_axis0(contrib: np.ndarray) -> np.ndarray:
    """Pairwise-reduce axis 0: pairs (0,1), (2,3), ... with odd tail carried."""
    while contrib.shape[0] > 1:
        m = contrib.shape[0]
        k = m // 2
        folded = contrib[0 : 2 * k : 2] + contrib[1 : 2 * k : 2]
        if m % 2:
            folded = np.concatenate([folded, contrib[m - 1 : m]], axis=0)
        contrib = folded
    return contrib[0]


def pg_block_sum(weights, c1, c2, a1, a2, a3, phi, times):
    """Weighted sum of damped-cosine probability responses.

    All block arrays have shape (n_blocks,), ``times`` has shape (n_times,);
    returns shape (n_times,).
    """
    weights, c1, c2, a1, a2, a3, phi, times = (
        np.ascontiguousarray(x, dtype=np.float64)
        for x in (weights, c1, c2, a1, a2, a3, phi, times)
    )
    out = np.empty_like(times)
    if weights.size == 0:
        out[:] = 0.0
        return out
    step = max(1, _CHUNK_ELEMS // max(1, weights.size))
    col = lambda x: x[:, None]
    for j in range(0, times.size, step):
        t = times[j : j + step][None, :]
        contrib = weights[:, None] * (
            1.0
            - 0.25 * col(c2) * np.exp(-col(a2) * t)
            - 0.25 * col(c1) * np.exp(-col(a1) * t)
            - 0.5 * np.exp(-col(a3) * t) * np.cos(col(phi) * t)
        )
        out[j : j + step] = _reduce_axis0(contrib)
    return out


def energy_block_sum(weights, k0, k1, k2, k3, a1, a2, times):
    """Weighted sum of two-exponential energy responses (k3 handles the
    degenerate equal-exponent limit via a t*exp term)."""
    weights, k0, k1, k2, k3, a1, a2, times = (
        np.ascontiguousarray(x, dtype=np.float64)
        for x in (weights, k0, k1, k2, k3, a1, a2, times)
    )
    out = np.empty_like(times)
    if weights.size == 0:
        out[:] = 0.0
        return out
    step = max(1, _CHUNK_ELEMS // max(1, weights.size))
    col = lambda x: x[:, None]
    for j in range(0, times.size, step):
        t = times[j : j + step][None, :]
        contrib = weights[:, None] * (
            col(k0)
            + col(k1) * np.exp(-col(a1) * t)
            + (col(k2) + col(k3) * t) * np.exp(-col(a2) * t)
        )
        out[j : j + step] = _reduce_axis0(contrib)
    return out
