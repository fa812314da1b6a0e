"""Log-space binomial weights shared by the aggregation and weak-law code."""

from __future__ import annotations

import math

import numpy as np

_lgamma = np.vectorize(math.lgamma, otypes=[np.float64])


def log_binomial_weight(n: int, z: float, s):
    """log[ C(n, s) z^s (1-z)^(n-s) ] via log-gamma; scalar or array ``s``."""
    s_arr = np.asarray(s, dtype=np.float64)
    out = (
        math.lgamma(n + 1)
        - _lgamma(s_arr + 1.0)
        - _lgamma(n - s_arr + 1.0)
        + s_arr * math.log(z)
        + (n - s_arr) * math.log1p(-z)
    )
    return out if np.ndim(s) else float(out)
