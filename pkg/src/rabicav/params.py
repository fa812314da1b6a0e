"""Physical parameters: bare vs renormalized couplings, vacuum-energy bookkeeping.

The observable (laboratory) quantities are the renormalized ones,

    q_ph = q * sqrt(Z),   gamma1_ph = gamma1 * Z,   gamma2_ph = gamma2 * Z,

with gamma3 unchanged, where Z in (0, 1] is the dominant vacuum mode weight
and N the number of field oscillators.  The product varsigma = N * Z is the
effective number of oscillators coupled to the atom and the single parameter
that distinguishes the finite-N theory from its N -> infinity limit.

Conventions: all frequencies and rates are angular (rad/s and 1/s).  The
Rabi period of the ground-state probability is T_Rabi = pi / q_ph.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping


class ParameterError(ValueError):
    """Invalid physical parameter (non-finite, out of domain, wrong key)."""


def _check_finite_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ParameterError(f"{name} must be finite and nonnegative, got {value!r}")
    return value


def renormalize(q_bare: float, gamma1_bare: float, gamma2_bare: float,
                gamma3: float, z: float) -> tuple[float, float, float, float]:
    """Map bare couplings to the observable ones: (q sqrt(Z), g1 Z, g2 Z, g3)."""
    z = float(z)
    if not (0.0 < z <= 1.0) or not math.isfinite(z):
        raise ParameterError(f"mode weight Z must be in (0, 1], got {z!r}")
    q_bare = _check_finite_nonneg("q_bare", q_bare)
    gamma1_bare = _check_finite_nonneg("gamma1_bare", gamma1_bare)
    gamma2_bare = _check_finite_nonneg("gamma2_bare", gamma2_bare)
    gamma3 = _check_finite_nonneg("gamma3", gamma3)
    return (q_bare * math.sqrt(z), gamma1_bare * z, gamma2_bare * z, gamma3)


@dataclass(frozen=True)
class PhysicalParams:
    """Validated parameter set for one cavity/atom configuration.

    Fields are the renormalized (observable) quantities plus the
    representation data (N, varsigma).  Bare quantities are derived.
    """

    omega: float              # atomic = resonant mode frequency, rad/s
    q_ph: float               # physical coupling, rad/s
    gamma1_ph: float          # upper-to-ground decay rate, 1/s
    gamma2_ph: float          # lower-to-ground decay rate, 1/s
    gamma3: float             # intra-manifold decay rate, 1/s (not renormalized)
    n_oscillators: int        # N
    varsigma: float           # N * Z
    mode_ratio: float | None = None   # Gaussian width / cavity length (w/d)
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("omega", "q_ph", "gamma1_ph", "gamma2_ph", "gamma3"):
            _check_finite_nonneg(name, getattr(self, name))
        n = self.n_oscillators
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParameterError(f"N must be a positive integer, got {n!r}")
        vs = float(self.varsigma)
        if not math.isfinite(vs) or not (0.0 < vs <= n):
            raise ParameterError(
                f"varsigma must satisfy 0 < varsigma <= N, got {vs!r} with N={n}")
        if self.mode_ratio is not None:
            mr = float(self.mode_ratio)
            if not math.isfinite(mr) or mr <= 0.0:
                raise ParameterError(f"mode_ratio must be positive, got {mr!r}")
        if not math.isfinite(self.hbar) or self.hbar <= 0.0:
            raise ParameterError(f"hbar must be positive, got {self.hbar!r}")

    @property
    def z(self) -> float:
        """Dominant vacuum mode weight Z = varsigma / N."""
        return self.varsigma / self.n_oscillators

    @property
    def q_bare(self) -> float:
        """Bare coupling q = q_ph sqrt(N / varsigma) (N-dependent)."""
        return self.q_ph * math.sqrt(self.n_oscillators / self.varsigma)

    @property
    def gamma1_bare(self) -> float:
        return self.gamma1_ph / self.z

    @property
    def gamma2_bare(self) -> float:
        return self.gamma2_ph / self.z

    @property
    def gamma_total(self) -> float:
        """gamma1_ph + gamma2_ph + gamma3, the envelope decay rate."""
        return self.gamma1_ph + self.gamma2_ph + self.gamma3

    @property
    def rabi_period(self) -> float:
        """T_Rabi = pi / q_ph (period of the ground-state probability)."""
        if self.q_ph <= 0.0:
            raise ParameterError("rabi_period undefined for q_ph = 0")
        return math.pi / self.q_ph

    @classmethod
    def from_bare(cls, omega: float, q_bare: float, gamma1_bare: float,
                  gamma2_bare: float, gamma3: float, n_oscillators: int,
                  z: float, **extra) -> "PhysicalParams":
        q_ph, g1, g2, g3 = renormalize(q_bare, gamma1_bare, gamma2_bare, gamma3, z)
        return cls(omega=omega, q_ph=q_ph, gamma1_ph=g1, gamma2_ph=g2, gamma3=g3,
                   n_oscillators=n_oscillators, varsigma=z * n_oscillators, **extra)

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)


def bare_from_physical(p: PhysicalParams) -> tuple[float, float, float, float]:
    """Recover (q_bare, gamma1_bare, gamma2_bare, gamma3) from observables.

    q_ph / sqrt(varsigma) = q_bare / sqrt(N) holds exactly: the bare coupling
    grows with N while the physical one is N-independent.
    """
    return (p.q_bare, p.gamma1_bare, p.gamma2_bare, p.gamma3)


_CONFIG_KEYS = {
    "omega": "omega",
    "q_ph": "q_ph",
    "gamma1_ph": "gamma1_ph",
    "gamma2_ph": "gamma2_ph",
    "gamma3": "gamma3",
    "N": "n_oscillators",
    "varsigma": "varsigma",
    "mode_ratio": "mode_ratio",
    "hbar": "hbar",
}
_REQUIRED_KEYS = ("omega", "q_ph", "gamma1_ph", "gamma2_ph", "gamma3", "N", "varsigma")


def params_from_config(config: Mapping) -> PhysicalParams:
    """Build PhysicalParams from a JSON-style mapping.

    Expected keys: omega, q_ph, gamma1_ph, gamma2_ph, gamma3, N, varsigma and
    optionally mode_ratio, hbar.  Unknown keys are rejected.
    """
    unknown = set(config) - set(_CONFIG_KEYS)
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in config]
    if missing:
        raise ParameterError(f"missing config keys: {missing}")
    kwargs = {}
    for key, field in _CONFIG_KEYS.items():
        if key not in config:
            continue
        value = config[key]
        if field == "n_oscillators":
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ParameterError(f"N must be an integer, got {value!r}")
            value = int(value)
        kwargs[field] = value
    return PhysicalParams(**kwargs)


@dataclass(frozen=True)
class VacuumSpectrum:
    """Discrete vacuum mode-weight distribution {omega: Z_omega}.

    The weights are occupation probabilities of the single-oscillator vacuum
    wave packet and must sum to one; Z is the maximal weight and
    chi(omega) = Z_omega / Z the induced high-frequency cutoff profile.
    """

    weights: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.weights:
            raise ParameterError("vacuum spectrum must contain at least one mode")
        total = 0.0
        for freq, w in self.weights:
            _check_finite_nonneg("mode frequency", freq)
            _check_finite_nonneg("mode weight", w)
            total += w
        if abs(total - 1.0) > 1e-12:
            raise ParameterError(f"mode weights must sum to 1, got {total!r}")

    @classmethod
    def from_mapping(cls, weights: Mapping[float, float]) -> "VacuumSpectrum":
        return cls(tuple(sorted((float(w), float(z)) for w, z in weights.items())))

    @property
    def z_max(self) -> float:
        """Maximal mode weight Z."""
        return max(w for _, w in self.weights)

    def chi(self) -> tuple[tuple[float, float], ...]:
        """Cutoff profile chi_omega = Z_omega / Z; equals 1 at the peak mode."""
        z = self.z_max
        return tuple((freq, w / z) for freq, w in self.weights)


def vacuum_energy(spectrum: VacuumSpectrum, n_oscillators: int,
                  hbar: float = 1.0) -> float:
    """Average energy (N/2) sum_omega hbar omega Z_omega of the N-packet vacuum.

    Grows linearly in N at fixed spectrum; in the grouping
    (Z N / 2) sum hbar omega chi_omega the prefactor is varsigma-controlled.
    """
    if not isinstance(n_oscillators, int) or n_oscillators < 1:
        raise ParameterError(f"N must be a positive integer, got {n_oscillators!r}")
    if hbar <= 0.0 or not math.isfinite(hbar):
        raise ParameterError(f"hbar must be positive, got {hbar!r}")
    return 0.5 * n_oscillators * math.fsum(
        hbar * freq * w for freq, w in spectrum.weights)
