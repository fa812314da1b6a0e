"""Desk-scale tensor-product checks of the collective-oscillator algebra.

Builds the N-oscillator wave-packet operators explicitly on a truncated
Hilbert space (each slot carries a Fock occupation and a frequency label):

    lowering(w)    = 1/sqrt(N) sum_j a_j (x) |w><w|_j
    number(w)      = sum_j (a^+ a)_j (x) |w><w|_j
    freq_weight(w) = 1/N sum_j |w><w|_j

and verifies, by direct matrix arithmetic, the defining facts the large-N
machinery relies on: the commutator [lowering, raising] is the
frequency-of-successes operator with eigenvalues s/N, products of N+1
distinct-frequency creators annihilate everything, each fixed-label subspace
is invariant, and the coupled-block spectra depend on s alone and match the
analytic dressed eigenvalues.  Appendix-style weak-law demos (binomial
averages of functions, vector-norm convergence) live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.sparse as sp

from . import dressed as dressed_mod
from ._binomial import log_binomial_weight
from .lindblad import (DecayRates, LindbladGenerator, damping_basis,
                       evolve_closed_form, evolve_ode, initial_state)

_MAX_DIM = 100_000


@dataclass(frozen=True)
class MicroRep:
    """Explicit sparse operators of the N-slot wave-packet representation."""

    n_oscillators: int
    freqs: tuple[float, ...]
    cutoff: int
    dim: int
    lowering: dict
    raising: dict
    number: dict
    freq_weight: dict
    occupations: np.ndarray    # (dim, N) Fock levels per slot
    labels: np.ndarray         # (dim, N) frequency indices per slot


def _site_operator(local: np.ndarray, slot: int, n_slots: int) -> sp.csr_matrix:
    local_dim = local.shape[0]
    op = sp.identity(local_dim**slot, format="csr")
    op = sp.kron(op, sp.csr_matrix(local), format="csr")
    tail = local_dim ** (n_slots - slot - 1)
    return sp.kron(op, sp.identity(tail, format="csr"), format="csr")


def build_micro_rep(n_oscillators: int, freqs, cutoff: int) -> MicroRep:
    """Assemble the collective operators by Kronecker products.

    The per-slot space is Fock(0..cutoff) x frequency-label; total dimension
    ((cutoff+1) |freqs|)^N must stay desk-scale (<= 1e5).
    """
    freqs = tuple(float(f) for f in freqs)
    if len(set(freqs)) != len(freqs):
        raise ValueError("frequencies must be distinct")
    n = n_oscillators
    n_freq = len(freqs)
    local_dim = (cutoff + 1) * n_freq
    dim = local_dim**n
    if dim > _MAX_DIM:
        raise ValueError(f"tensor dimension {dim} exceeds the desk-scale cap")

    a_fock = np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), k=1)
    eye_fock = np.eye(cutoff + 1)

    lowering, raising, number, freq_weight = {}, {}, {}, {}
    for f_idx, freq in enumerate(freqs):
        proj = np.zeros((n_freq, n_freq))
        proj[f_idx, f_idx] = 1.0
        a_loc = np.kron(a_fock, proj)
        n_loc = np.kron(a_fock.T @ a_fock, proj)
        w_loc = np.kron(eye_fock, proj)

        low = sp.csr_matrix((dim, dim))
        num = sp.csr_matrix((dim, dim))
        wgt = sp.csr_matrix((dim, dim))
        for slot in range(n):
            low = low + _site_operator(a_loc, slot, n)
            num = num + _site_operator(n_loc, slot, n)
            wgt = wgt + _site_operator(w_loc, slot, n)
        lowering[freq] = (low / math.sqrt(n)).tocsr()
        raising[freq] = lowering[freq].T.tocsr()
        number[freq] = num.tocsr()
        freq_weight[freq] = (wgt / n).tocsr()

    # Mixed-radix decode of the basis: slot-local index = occ * n_freq + label.
    local_indices = np.stack(
        np.unravel_index(np.arange(dim), (local_dim,) * n), axis=1)
    occupations = local_indices // n_freq
    labels = local_indices % n_freq

    return MicroRep(n, freqs, cutoff, dim, lowering, raising, number,
                    freq_weight, occupations, labels)


def state_index(rep: MicroRep, occs, label_ids) -> int:
    """Global basis index of the product state with given occupations and
    frequency-label indices."""
    n_freq = len(rep.freqs)
    local_dim = (rep.cutoff + 1) * n_freq
    idx = 0
    for occ, lab in zip(occs, label_ids):
        idx = idx * local_dim + occ * n_freq + lab
    return idx


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""


def commutator_check(rep: MicroRep, tol: float = 1e-12) -> CheckOutcome:
    """[lowering(w), raising(w')] = delta_{w w'} freq_weight(w) on the
    cutoff-safe subspace (all occupations strictly below the cutoff)."""
    safe = np.flatnonzero((rep.occupations < rep.cutoff).all(axis=1))
    worst = 0.0
    for w in rep.freqs:
        for w2 in rep.freqs:
            comm = (rep.lowering[w] @ rep.raising[w2]
                    - rep.raising[w2] @ rep.lowering[w])
            if w == w2:
                comm = comm - rep.freq_weight[w]
            block = np.abs(comm.toarray()[:, safe])
            worst = max(worst, float(block.max()) if block.size else 0.0)
    return CheckOutcome("micro-commutators", worst <= tol, worst, tol,
                        f"N={rep.n_oscillators}, {len(rep.freqs)} freqs, "
                        f"cutoff={rep.cutoff}")


def frequency_spectrum_check(rep: MicroRep) -> CheckOutcome:
    """freq_weight eigenvalues are exactly {s/N : 0 <= s <= N}."""
    n = rep.n_oscillators
    worst = 0.0
    for f_idx, w in enumerate(rep.freqs):
        diag = rep.freq_weight[w].diagonal()
        expected = (rep.labels == f_idx).sum(axis=1).astype(np.float64) / n
        worst = max(worst, float(np.max(np.abs(diag - expected))))
        observed = set(np.round(diag * n).astype(int).tolist())
        if observed != set(range(n + 1)):
            return CheckOutcome("micro-frequency-spectrum", False,
                                math.inf, 0.0,
                                f"missing eigenvalues for frequency {w}")
    return CheckOutcome("micro-frequency-spectrum", worst == 0.0, worst, 0.0,
                        "eigenvalues s/N reproduced exactly")


@dataclass(frozen=True)
class AnnihilationReport:
    full_product_norm: float      # product of N+1 distinct-frequency creators
    partial_product_norm: float   # product of N creators (sanity contrast)
    vacuum_single_norm: float     # one creator applied to the vacuum

    @property
    def passed(self) -> bool:
        return (self.full_product_norm == 0.0
                and self.partial_product_norm > 0.0
                and self.vacuum_single_norm > 0.0)


def annihilate_by_creators_check(rep: MicroRep) -> AnnihilationReport:
    """Products of N+1 distinct-frequency creators are identically zero
    (nontrivial states are annihilated by creation operators)."""
    n = rep.n_oscillators
    if len(rep.freqs) < n + 1:
        raise ValueError(
            f"need at least N+1 = {n + 1} distinct frequencies, "
            f"got {len(rep.freqs)}")
    chain = sp.identity(rep.dim, format="csr")
    partial_norm = 0.0
    for k, w in enumerate(rep.freqs[: n + 1]):
        chain = (rep.raising[w] @ chain).tocsr()
        if k == n - 1:
            partial_norm = float(abs(chain).max()) if chain.nnz else 0.0
    full_norm = float(abs(chain).max()) if chain.nnz else 0.0

    vacuum = np.zeros(rep.dim)
    vacuum[state_index(rep, [0] * n, [0] * n)] = 1.0
    single = rep.raising[rep.freqs[0]] @ vacuum
    return AnnihilationReport(full_norm, partial_norm,
                              float(np.linalg.norm(single)))


@dataclass(frozen=True)
class BlockSpectrumReport:
    label_ids: tuple[int, ...]
    s: int
    invariance_residual: float
    eigenvalue_deviation: float


def micro_dressed_spectrum(rep: MicroRep, omega_resonant: float,
                           q_bare: float) -> list[BlockSpectrumReport]:
    """Diagonalize the coupled atom-field Hamiltonian on every fixed-label
    block and compare with the analytic dressed eigenvalues.

    The subspace spanned by {excited & vacuum, ground & one resonant photon,
    ground & vacuum} must be invariant; its spectrum depends only on s, the
    number of resonant labels in the sequence.
    """
    if omega_resonant not in rep.freqs:
        raise ValueError("resonant frequency must be one of the rep labels")
    if 2 * rep.dim > 200_000:
        raise ValueError("atom x field dimension exceeds the desk-scale cap")
    res_idx = rep.freqs.index(omega_resonant)
    n = rep.n_oscillators

    sigma3 = sp.csr_matrix(np.diag([1.0, -1.0]))
    sigma_minus = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
    eye2 = sp.identity(2, format="csr")
    omega_full = (
        0.5 * omega_resonant * sp.kron(sigma3, sp.identity(rep.dim), "csr")
        + omega_resonant * sp.kron(eye2, rep.number[omega_resonant], "csr")
        + q_bare * sp.kron(sigma_minus, rep.raising[omega_resonant], "csr")
        + q_bare * sp.kron(sigma_minus.T, rep.lowering[omega_resonant], "csr")
    ).tocsr()

    reports = []
    for seq in product(range(len(rep.freqs)), repeat=n):
        s = sum(1 for lab in seq if lab == res_idx)
        sub_idx = [state_index(rep, [0] * n, seq)]          # e & vacuum
        for slot in range(n):
            if seq[slot] == res_idx:
                occs = [0] * n
                occs[slot] = 1
                sub_idx.append(rep.dim + state_index(rep, occs, seq))
        sub_idx.append(rep.dim + state_index(rep, [0] * n, seq))  # g & vacuum
        sub_idx = np.asarray(sub_idx)

        cols = omega_full[:, sub_idx].toarray()
        inside = np.zeros(2 * rep.dim, dtype=bool)
        inside[sub_idx] = True
        leakage = float(np.max(np.abs(cols[~inside, :]))) if cols.size else 0.0

        h_sub = cols[sub_idx, :]
        eigvals, _ = dressed_mod.numeric_eigensystem(h_sub)
        block = dressed_mod.analytic_eigensystem(
            dressed_mod.BlockIndex(s, n), omega_resonant, q_bare)
        expected = np.sort(block.eigenvalues)
        deviation = float(np.max(np.abs(np.sort(eigvals) - expected)))
        reports.append(BlockSpectrumReport(seq, s, leakage, deviation))
    return reports


def binomial_average(f, n_oscillators: int, z: float) -> float:
    """sum_s f(s/N) C(N,s) Z^s (1-Z)^{N-s}; tends to f(Z) for large N."""
    n = n_oscillators
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"N must be a positive integer, got {n!r}")
    if not (0.0 <= z <= 1.0):
        raise ValueError(f"Z must be a probability, got {z!r}")
    if z == 0.0:
        return float(f(0.0))
    if z == 1.0:
        return float(f(1.0))
    s = np.arange(n + 1)
    weights = np.exp(log_binomial_weight(n, z, s))
    values = np.asarray([f(v) for v in (s / n)], dtype=np.float64)
    return float(np.dot(weights, values))


def weak_law_norm(f, z: float, n_copies: int) -> float:
    """|| f(counts/N) |Psi> - f(Z) |Psi> || for the N-fold product of a qubit
    with success probability Z, built on the explicit 2^N basis."""
    if not (0.0 <= z <= 1.0):
        raise ValueError(f"Z must be a probability, got {z!r}")
    if not (1 <= n_copies <= 20):
        raise ValueError("n_copies must be in [1, 20] for the 2^N build")
    idx = np.arange(2**n_copies, dtype=np.uint64)
    counts = np.zeros(idx.shape, dtype=np.int64)
    for bit in range(n_copies):
        counts += ((idx >> np.uint64(bit)) & np.uint64(1)).astype(np.int64)
    prob = z**counts * (1.0 - z) ** (n_copies - counts)
    fvals = np.asarray([f(c / n_copies) for c in counts], dtype=np.float64)
    return float(np.sqrt(np.sum((fvals - f(z)) ** 2 * prob)))


# ---------------------------------------------------------------------------
# Verification battery (deterministic; drives the CLI `verify` command).

def _damping_basis_residual() -> CheckOutcome:
    tol = 1e-10
    worst = 0.0
    cases = [
        (0.7, 0.3, 0.5, 1.3, 0.0),
        (1.0, 2.0, 0.25, 0.8, 2.0),
        (0.05, 0.6, 1.4, 2.5, 5.0),
        (2.2, 0.9, 0.1, 0.33, 1.0),
        (0.4, 0.4, 0.8, 4.0, 0.5),
    ]
    for g1, g2, g3, q_eff, omega in cases:
        rates = DecayRates(g1, g2, g3)
        h = np.diag(np.array([0.5 * omega + q_eff, 0.5 * omega - q_eff,
                              -0.5 * omega], dtype=np.complex128))
        gen = LindbladGenerator(h, ((0.5 * g1, _unit3(2, 0)),
                                    (0.5 * g2, _unit3(2, 1)),
                                    (0.5 * g3, _unit3(1, 0))))
        norm = float(np.max(np.sum(np.abs(gen.superoperator()), axis=1)))
        for element in damping_basis(rates, q_eff, omega):
            resid = np.max(np.abs(gen.apply(element.matrix)
                                  - element.eigenvalue * element.matrix))
            worst = max(worst, float(resid) / norm)
    return CheckOutcome("damping-basis-residual", worst <= tol, worst, tol,
                        f"{len(cases)} fixed rate/coupling draws")


def _unit3(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=np.complex128)
    m[i, j] = 1.0
    return m


def _closed_form_vs_ode() -> CheckOutcome:
    tol = 1e-8
    from .lindblad import build_generator

    worst = 0.0
    for s, n, g1, g2, g3, q in [(2, 5, 0.8, 0.5, 0.3, 2.0),
                                (1, 3, 0.0, 0.0, 1.0, 1.0)]:
        block = dressed_mod.analytic_eigensystem(
            dressed_mod.BlockIndex(s, n), 4.0, q)
        rates = DecayRates.for_block(g1, g2, g3, s, n)
        gen = build_generator(block, rates, omega=0.0)
        grid = np.linspace(0.0, 6.0, 33)
        states = evolve_ode(gen, initial_state(), grid)
        for k, t in enumerate(grid):
            rho = evolve_closed_form(block, rates, q, float(t))
            worst = max(worst, float(np.max(np.abs(states[k] - rho))))
    return CheckOutcome("closed-form-vs-ode", worst <= tol, worst, tol,
                        "max entrywise gap over 33-point grids")


def _weak_law_decrease() -> CheckOutcome:
    sizes = (4, 8, 12)
    norms = [weak_law_norm(math.cos, 0.3, n) for n in sizes]
    increments = [norms[i + 1] - norms[i] for i in range(len(norms) - 1)]
    worst = max(increments)
    return CheckOutcome("weak-law-norm-decrease", worst < 0.0, worst, 0.0,
                        f"norms {['%.3e' % v for v in norms]} for N={sizes}")


def run_verification_suites() -> list[CheckOutcome]:
    """Deterministic pass/fail battery: micro-representation facts,
    damping-basis residuals, closed-form vs ODE, weak-law convergence."""
    outcomes = []

    rep23 = build_micro_rep(2, (1.0, 1.5, 2.25), cutoff=2)
    rep32 = build_micro_rep(3, (1.0, 1.5), cutoff=2)
    for rep in (rep23, rep32):
        outcomes.append(commutator_check(rep))
        outcomes.append(frequency_spectrum_check(rep))

    ann = annihilate_by_creators_check(rep23)
    outcomes.append(CheckOutcome(
        "micro-annihilation", ann.passed, ann.full_product_norm, 0.0,
        f"N+1-creator product norm {ann.full_product_norm:.1e}, "
        f"N-creator contrast {ann.partial_product_norm:.3e}"))

    worst_dev = 0.0
    worst_leak = 0.0
    for rep in (build_micro_rep(2, (1.0, 1.5), cutoff=1),
                build_micro_rep(3, (1.0, 1.5), cutoff=1)):
        for report in micro_dressed_spectrum(rep, 1.0, 0.35):
            worst_dev = max(worst_dev, report.eigenvalue_deviation)
            worst_leak = max(worst_leak, report.invariance_residual)
    passed = worst_dev <= 1e-9 and worst_leak <= 1e-12
    outcomes.append(CheckOutcome(
        "micro-dressed-spectrum", passed, worst_dev, 1e-9,
        f"invariance leakage {worst_leak:.1e}"))

    outcomes.append(_damping_basis_residual())
    outcomes.append(_closed_form_vs_ode())
    outcomes.append(_weak_law_decrease())
    return outcomes
