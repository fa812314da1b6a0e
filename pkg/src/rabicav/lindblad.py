"""Zero-temperature dissipative dynamics of one block.

Because the initial condition (excited atom, empty cavity) never populates
the dark states, the dynamics lives on the 3-dimensional span of
|plus>, |minus>, |zero>; that ordering indexes all 3x3 matrices here.
The generator has exactly three decay channels,

    plus  -> zero   at rate g1(s) = gamma1 * s/N,
    minus -> zero   at rate g2(s) = gamma2 * s/N,
    plus  -> minus  at rate g3            (s-independent),

and is diagonalized by a known damping basis, giving closed-form evolution
and the conditional ground-state probability

    p_g(s, t) = 1 - c2/4 e^{-g2 t/2} - c1/4 e^{-(g1+g3) t/2}
                  - 1/2 e^{-(g1+g2+g3) t/4} cos(2 q sqrt(s/N) t)

with c1 = (g1-g2)/(g1-g2+g3), c2 = (g1-g2+2 g3)/(g1-g2+g3).  An adaptive
RK45 integrator over the same generator serves as the independent oracle and
as the fallback when the coefficient denominator degenerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dressed import DressedBlock
from .integrate import solve_rk45

# Relative threshold below which g1 - g2 + g3 counts as degenerate.
DEGENERACY_RTOL = 1e-14

S0_MODES = ("formula", "physical")


class DegenerateRatesError(ArithmeticError):
    """Closed form invalid: the damping-basis denominator vanishes."""


@dataclass(frozen=True)
class DecayRates:
    """Block-effective decay rates (g1 and g2 already carry the s/N factor)."""

    g1: float
    g2: float
    g3: float

    def __post_init__(self):
        for name in ("g1", "g2", "g3"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")

    @classmethod
    def for_block(cls, gamma1: float, gamma2: float, gamma3: float,
                  s: int, n_oscillators: int) -> "DecayRates":
        """Scale the bare alpha-channel rates by s/N; gamma3 is unchanged."""
        frac = s / n_oscillators
        return cls(gamma1 * frac, gamma2 * frac, gamma3)

    @property
    def largest(self) -> float:
        return max(self.g1, self.g2, self.g3)

    @property
    def total(self) -> float:
        return self.g1 + self.g2 + self.g3


def _g3_ratio(g1: float, g2: float, g3: float) -> float:
    """g3 / (g1 - g2 + g3) with the all-zero-rates limit pinned to 1.

    The limit corresponds to approaching zero dissipation along g1 = g2,
    which is the direction used throughout (and the only one for which all
    closed forms stay continuous).  Raises for a genuinely degenerate
    denominator.
    """
    scale = max(g1, g2, g3)
    if scale == 0.0:
        return 1.0
    d = g1 - g2 + g3
    if abs(d) < DEGENERACY_RTOL * scale:
        raise DegenerateRatesError(
            f"g1 - g2 + g3 = {d!r} is degenerate at rate scale {scale!r}")
    return g3 / d


def probability_coefficients(rates: DecayRates) -> tuple[float, float]:
    """(c1, c2) weights of the two non-oscillatory decay terms."""
    r = _g3_ratio(rates.g1, rates.g2, rates.g3)
    return 1.0 - r, 1.0 + r


# 3x3 matrix units in the dressed ordering [plus, minus, zero].
def _unit(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=np.complex128)
    m[i, j] = 1.0
    return m


_P_PLUS = _unit(0, 0)
_P_MINUS = _unit(1, 1)
_P_ZERO = _unit(2, 2)


def jump_operators(block: DressedBlock, rates: DecayRates,
                   alpha_weight: float, beta_weight: float
                   ) -> list[tuple[float, np.ndarray]]:
    """Transition operators between dressed states, with their raw rates.

    Returns (rate, operator) pairs in the 3-dimensional dressed basis; the
    operators carry the alpha/beta interaction weights and the sqrt(s/N)
    collective factor, so rate * operator^2 reproduces the absorbed
    block-effective rates.  Jumps involving dark states all vanish, so for
    s >= 1 exactly three operators are returned and for s = 0 none.
    """
    if alpha_weight <= 0.0 or beta_weight <= 0.0:
        raise ValueError("interaction weights must be positive")
    s = block.index.s
    if s == 0:
        return []
    frac = block.index.fraction
    alpha_pref = (alpha_weight / math.sqrt(2.0)) * math.sqrt(frac)
    beta_pref = beta_weight / 2.0
    return [
        (rates.g1 / (frac * alpha_weight**2), alpha_pref * _unit(2, 0)),
        (2.0 * rates.g3 / beta_weight**2, beta_pref * _unit(1, 0)),
        (rates.g2 / (frac * alpha_weight**2), alpha_pref * _unit(2, 1)),
    ]


@dataclass(frozen=True)
class LindbladGenerator:
    """L(rho) = -i[H, rho] + sum_k r_k (L_k rho L_k^+ - 1/2 [L_k^+ L_k, rho]_+)."""

    hamiltonian: np.ndarray
    jumps: tuple[tuple[float, np.ndarray], ...]

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        h = self.hamiltonian
        out = -1j * (h @ rho - rho @ h)
        for rate, op in self.jumps:
            op_dag = op.conj().T
            opop = op_dag @ op
            out = out + rate * (op @ rho @ op_dag
                                - 0.5 * (opop @ rho + rho @ opop))
        return out

    def superoperator(self) -> np.ndarray:
        """Dense matrix acting on row-major vectorized density matrices."""
        n = self.dim
        eye = np.eye(n, dtype=np.complex128)
        h = self.hamiltonian.astype(np.complex128)
        m = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for rate, op in self.jumps:
            op = op.astype(np.complex128)
            op_dag = op.conj().T
            opop = op_dag @ op
            m = m + rate * (np.kron(op, op.conj())
                            - 0.5 * (np.kron(opop, eye) + np.kron(eye, opop.T)))
        return m


def build_generator(block: DressedBlock, rates: DecayRates,
                    omega: float | None = None,
                    q_bare: float | None = None) -> LindbladGenerator:
    """Generator on the 3-dimensional dressed subspace of ``block``.

    ``omega``/``q_bare`` default to the block's values; overriding them gives
    the general (off-resonance capable) commutator for the ODE path.
    """
    if omega is None:
        omega = block.omega
    if q_bare is None:
        q_bare = block.q_bare
    q_eff = q_bare * math.sqrt(block.index.fraction)
    h = np.diag(np.array(
        [0.5 * omega + q_eff, 0.5 * omega - q_eff, -0.5 * omega],
        dtype=np.complex128))
    jumps = (
        (0.5 * rates.g1, _unit(2, 0)),
        (0.5 * rates.g2, _unit(2, 1)),
        (0.5 * rates.g3, _unit(1, 0)),
    )
    return LindbladGenerator(h, jumps)


@dataclass(frozen=True)
class DampingBasisElement:
    """Eigen-operator of the generator with its eigenvalue and the weight it
    carries in the expansion of the initial state."""

    matrix: np.ndarray
    eigenvalue: complex
    coefficient: complex


def damping_basis(rates: DecayRates, q_eff: float, omega: float = 0.0
                  ) -> list[DampingBasisElement]:
    """The nine eigen-operators of the 3-level generator at exact resonance.

    ``omega`` enters only the imaginary parts of the coherence eigenvalues
    (the populations and the plus/minus coherence are omega-independent);
    omega = 0 corresponds to the frame rotating at the free evolution.

    Raises DegenerateRatesError when the expansion coefficients are singular:
    either g1 - g2 + g3 ~ 0, or a vanishing g2 (g1 + g3) (non-unique steady
    state) while some rate is nonzero.  At exactly zero rates the basis of
    the commutator is returned with the collapsed diagonal elements
    renormalized (their usual scale factors vanish identically there).
    """
    g1, g2, g3 = rates.g1, rates.g2, rates.g3
    scale = rates.largest
    w_plus = 0.5 * omega + q_eff
    w_minus = 0.5 * omega - q_eff
    w_zero = -0.5 * omega

    if scale == 0.0:
        diag = [
            (_P_PLUS - _P_MINUS, 0.0, 0.5),
            (_P_MINUS - _P_ZERO, 0.0, 1.0),
            (_P_ZERO.copy(), 0.0, 1.0),
        ]
    else:
        d = g1 - g2 + g3
        if abs(d) < DEGENERACY_RTOL * scale:
            raise DegenerateRatesError(
                f"g1 - g2 + g3 = {d!r} is degenerate at rate scale {scale!r}")
        if g2 < DEGENERACY_RTOL * scale or (g1 + g3) < DEGENERACY_RTOL * scale:
            raise DegenerateRatesError(
                "steady state not unique: g2 (g1 + g3) vanishes")
        diag = [
            (-d * _P_PLUS + g3 * _P_MINUS + (g1 - g2) * _P_ZERO,
             -0.5 * (g1 + g3), -0.5 / d),
            (_P_MINUS - _P_ZERO, -0.5 * g2, 0.5 * (d + g3) / d),
            (g2 * (g1 + g3) * _P_ZERO, 0.0, 1.0 / (g2 * (g1 + g3))),
        ]

    decay_pm = 0.25 * (g1 + g2 + g3)
    decay_pz = 0.25 * (g1 + g3)
    decay_mz = 0.25 * g2
    coherences = [
        (_unit(0, 1), -1j * (w_plus - w_minus) - decay_pm, -0.5),
        (_unit(0, 2), -1j * (w_plus - w_zero) - decay_pz, 0.0),
        (_unit(1, 2), -1j * (w_minus - w_zero) - decay_mz, 0.0),
        (_unit(1, 0), 1j * (w_plus - w_minus) - decay_pm, -0.5),
        (_unit(2, 0), 1j * (w_plus - w_zero) - decay_pz, 0.0),
        (_unit(2, 1), 1j * (w_minus - w_zero) - decay_mz, 0.0),
    ]
    return [
        DampingBasisElement(np.asarray(m, dtype=np.complex128),
                            complex(lam), complex(coeff))
        for m, lam, coeff in diag + coherences
    ]


def initial_state(block: DressedBlock | None = None) -> np.ndarray:
    """Excited atom and empty cavity, in the dressed 3-level basis.

    Equals (P+ + P- - |+><-| - |-><+|)/2, i.e. the bare |e,0><e,0| projector.
    """
    if block is not None and block.index.s < 1:
        raise ValueError("the 3-level initial state requires s >= 1")
    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[0, 0] = rho[1, 1] = 0.5
    rho[0, 1] = rho[1, 0] = -0.5
    return rho


def evolve_closed_form(block: DressedBlock, rates: DecayRates,
                       q_bare: float | None = None,
                       t: float = 0.0) -> np.ndarray:
    """Damping-basis solution at exact resonance (3x3, dressed basis)."""
    if block.index.s < 1:
        raise ValueError("closed-form evolution requires s >= 1")
    if q_bare is None:
        q_bare = block.q_bare
    q_eff = q_bare * math.sqrt(block.index.fraction)
    g1, g2, g3 = rates.g1, rates.g2, rates.g3
    r = _g3_ratio(g1, g2, g3)
    c1 = 1.0 - r
    c2 = 1.0 + r

    e_slow = math.exp(-0.5 * (g1 + g3) * t)
    e_fast = math.exp(-0.5 * g2 * t)
    phase = np.exp(-2j * q_eff * t) * math.exp(-0.25 * (g1 + g2 + g3) * t)

    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[0, 0] = 0.5 * e_slow
    rho[1, 1] = -0.5 * r * e_slow + 0.5 * c2 * e_fast
    rho[2, 2] = 1.0 - 0.5 * c1 * e_slow - 0.5 * c2 * e_fast
    rho[0, 1] = -0.5 * phase
    rho[1, 0] = np.conj(rho[0, 1])
    return rho


def hermitize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def evolve_ode(generator: LindbladGenerator, rho0: np.ndarray, t_grid,
               rtol: float = 1e-10, atol: float = 1e-10) -> np.ndarray:
    """Independent RK45 propagation of the generator; shape (nt, n, n).

    Hermiticity is enforced by symmetrization after every accepted step.
    """
    n = generator.dim
    m = generator.superoperator()

    def rhs(_t, y):
        return m @ y

    def post_step(y):
        return hermitize(y.reshape(n, n)).reshape(-1)

    flat = solve_rk45(rhs, np.asarray(rho0, dtype=np.complex128).reshape(-1),
                      t_grid, rtol=rtol, atol=atol, post_step=post_step)
    return flat.reshape(len(np.atleast_1d(t_grid)), n, n)


def validate_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12,
                            trace_tol: float = 1e-12,
                            eig_floor: float = -1e-9) -> None:
    """Raise if rho is not Hermitian / unit trace / positive within tolerance."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    if float(np.min(np.linalg.eigvalsh(hermitize(rho)))) < eig_floor:
        raise ValueError("density matrix has a significantly negative eigenvalue")


def embed_subspace_operator(block: DressedBlock, op3: np.ndarray) -> np.ndarray:
    """Lift a 3x3 dressed-subspace operator to the full (s+2)-dim bare basis."""
    if block.index.s < 1:
        raise ValueError("embedding requires s >= 1")
    basis = np.stack(
        [block.plus_vector, block.minus_vector, block.zero_vector], axis=1)
    return basis @ np.asarray(op3, dtype=np.complex128) @ basis.conj().T


def _pg_formula(g1x: float, g2x: float, g3: float, q_eff: float,
                t: np.ndarray, exp_scale: float = 1.0) -> np.ndarray:
    """Closed-form ground-state probability for one block.

    ``exp_scale`` divides every decay exponent (Gaussian-mode correction);
    the oscillation phase is never rescaled.
    """
    c1, c2 = probability_coefficients(DecayRates(g1x, g2x, g3))
    s = 1.0 / exp_scale
    return (
        1.0
        - 0.25 * c2 * np.exp(-0.5 * g2x * s * t)
        - 0.25 * c1 * np.exp(-0.5 * (g1x + g3) * s * t)
        - 0.5 * np.exp(-0.25 * (g1x + g2x + g3) * s * t) * np.cos(2.0 * q_eff * t)
    )


def _pg_ode_fallback(g1x: float, g2x: float, g3: float, q_eff: float,
                     t: np.ndarray) -> np.ndarray:
    """Ground-state probability via the ODE oracle (degenerate closed form).

    Works in the frame rotating at the free evolution (omega = 0); the
    probability is frame-independent.
    """
    h = np.diag(np.array([q_eff, -q_eff, 0.0], dtype=np.complex128))
    gen = LindbladGenerator(h, ((0.5 * g1x, _unit(2, 0)),
                                (0.5 * g2x, _unit(2, 1)),
                                (0.5 * g3, _unit(1, 0))))
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    grid = np.unique(np.concatenate([[0.0], t]))
    states = evolve_ode(gen, initial_state(), grid)
    # p_e = <e|rho|e> with |e> = (|plus> - |minus>)/sqrt(2).
    p_e = 0.5 * (states[:, 0, 0] + states[:, 1, 1]
                 - states[:, 0, 1] - states[:, 1, 0]).real
    lookup = dict(zip(grid.tolist(), (1.0 - p_e).tolist()))
    return np.array([lookup[v] for v in t.tolist()])


def _eval_block_pg(g1x, g2x, g3, q_eff, t, exp_scale=1.0):
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0.0):
        raise ValueError("times must be nonnegative")
    try:
        out = _pg_formula(g1x, g2x, g3, q_eff, t_arr, exp_scale)
    except DegenerateRatesError:
        out = _pg_ode_fallback(g1x / exp_scale, g2x / exp_scale,
                               g3 / exp_scale, q_eff, t_arr)
        out = out.reshape(t_arr.shape)
    return out if np.ndim(t) else float(out)


def pg_conditional(s: int, n_oscillators: int, gamma1: float, gamma2: float,
                   gamma3: float, q_bare: float, t,
                   s0_mode: str = "formula"):
    """Ground-state probability conditioned on a block with s resonant slots.

    ``gamma1``/``gamma2`` are the bare rates (scaled internally by s/N).
    The s = 0 block has no photon states and no allowed jumps; ``s0_mode``
    selects between evaluating the closed form verbatim there ("formula",
    giving (1 - e^{-g3 t/4})/2) and the physical value 0 ("physical").
    """
    if s0_mode not in S0_MODES:
        raise ValueError(f"s0_mode must be one of {S0_MODES}, got {s0_mode!r}")
    frac = s / n_oscillators
    if s == 0 and s0_mode == "physical":
        return np.zeros_like(np.asarray(t, dtype=np.float64)) if np.ndim(t) else 0.0
    return _eval_block_pg(gamma1 * frac, gamma2 * frac, gamma3,
                          q_bare * math.sqrt(frac), t)


def pg_irreducible(zcal: float, gamma1: float, gamma2: float, gamma3: float,
                   q_bare: float, t, exp_scale: float = 1.0):
    """Ground-state probability for an irreducible representation with
    commutator constant zcal > 0 (zcal = 1 is the textbook case)."""
    if zcal <= 0.0:
        raise ValueError(f"zcal must be positive, got {zcal!r}")
    return _eval_block_pg(gamma1 * zcal, gamma2 * zcal, gamma3,
                          q_bare * math.sqrt(zcal), t, exp_scale)
