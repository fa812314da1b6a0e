"""Per-block coupled atom-field eigensystem.

For a block with s resonant-frequency slots the Hamiltonian (divided by hbar)
is the real symmetric (s+2) x (s+2) matrix with the bare basis ordered

    [ excited & no photon | one photon in slot 1..s | ground & no photon ].

Its spectrum is fully analytic: a pair omega/2 +- q sqrt(s/N), an
(s-1)-fold degenerate level at omega/2 (dark states, decoupled from the
dissipative dynamics) and the ground level -omega/2.  ``numeric_eigensystem``
is an independently implemented cyclic-Jacobi diagonalizer used as the oracle
for the analytic forms; degenerate eigenspaces are compared via projectors,
never vector-by-vector, because the dark-state basis is a convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NotSymmetricError(ValueError):
    """Input matrix is not symmetric within tolerance."""


class ConvergenceError(RuntimeError):
    """Jacobi sweeps failed to reach the off-diagonal threshold."""


@dataclass(frozen=True)
class BlockIndex:
    """Identifies a block: s resonant slots out of N oscillators."""

    s: int
    n_oscillators: int

    def __post_init__(self):
        if not isinstance(self.s, int) or not isinstance(self.n_oscillators, int):
            raise ValueError("block index components must be integers")
        if self.n_oscillators < 1:
            raise ValueError(f"N must be >= 1, got {self.n_oscillators}")
        if not (0 <= self.s <= self.n_oscillators):
            raise ValueError(
                f"s must be in [0, N], got s={self.s}, N={self.n_oscillators}")

    @property
    def dim(self) -> int:
        return self.s + 2

    @property
    def fraction(self) -> float:
        """s/N, the commutator eigenvalue of the block."""
        return self.s / self.n_oscillators


@dataclass(frozen=True)
class DressedBlock:
    """Analytic eigensystem of one block.

    ``vectors`` columns are orthonormal eigenvectors in the bare basis,
    ordered [plus, minus, zero, dark_1 .. dark_{s-1}] and aligned with
    ``eigenvalues``.  For s = 0 there are only the bare excited and ground
    states (columns of the identity).
    """

    index: BlockIndex
    omega: float
    q_bare: float
    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.index.dim

    @property
    def q_eff(self) -> float:
        """Half Rabi frequency of the block: q sqrt(s/N)."""
        return self.q_bare * math.sqrt(self.index.fraction)

    @property
    def omega_plus(self) -> float:
        return 0.5 * self.omega + self.q_eff

    @property
    def omega_minus(self) -> float:
        return 0.5 * self.omega - self.q_eff

    @property
    def omega_zero(self) -> float:
        return -0.5 * self.omega

    @property
    def omega_dark(self) -> float:
        """Eigenvalue of the (s-1)-fold degenerate dark level."""
        return 0.5 * self.omega

    @property
    def plus_vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def minus_vector(self) -> np.ndarray:
        return self.vectors[:, 1]

    @property
    def zero_vector(self) -> np.ndarray:
        return self.vectors[:, 2 if self.index.s >= 1 else 1]

    @property
    def dark_vectors(self) -> np.ndarray:
        """(s+2) x (s-1) matrix of dark-state columns (empty for s <= 1)."""
        if self.index.s <= 1:
            return self.vectors[:, 0:0]
        return self.vectors[:, 3:]


def omega_matrix(idx: BlockIndex, omega: float, q_bare: float) -> np.ndarray:
    """Block Hamiltonian over hbar in the bare basis (real symmetric).

    Row/column 0 is the excited state, coupled with strength q/sqrt(N) to
    each of the s one-photon states; the last row/column is the decoupled
    ground state at -omega/2.
    """
    s = idx.s
    h = np.zeros((s + 2, s + 2))
    np.fill_diagonal(h, 0.5 * omega)
    h[-1, -1] = -0.5 * omega
    if s >= 1:
        coupling = q_bare / math.sqrt(idx.n_oscillators)
        h[0, 1 : s + 1] = coupling
        h[1 : s + 1, 0] = coupling
    return h


def analytic_eigensystem(idx: BlockIndex, omega: float, q_bare: float) -> DressedBlock:
    """Closed-form eigensystem of ``omega_matrix(idx, omega, q_bare)``."""
    s = idx.s
    if s == 0:
        eigenvalues = np.array([0.5 * omega, -0.5 * omega])
        vectors = np.eye(2)
        return DressedBlock(idx, float(omega), float(q_bare), eigenvalues, vectors)

    dim = s + 2
    q_eff = q_bare * math.sqrt(idx.fraction)
    vectors = np.zeros((dim, dim))
    eigenvalues = np.empty(dim)

    # |plus>, |minus>: amplitude +-1/sqrt(2) on the excited state and
    # 1/sqrt(2s) on each one-photon state.
    amp = 1.0 / math.sqrt(2.0 * s)
    vectors[0, 0] = 1.0 / math.sqrt(2.0)
    vectors[1 : s + 1, 0] = amp
    vectors[0, 1] = -1.0 / math.sqrt(2.0)
    vectors[1 : s + 1, 1] = amp
    eigenvalues[0] = 0.5 * omega + q_eff
    eigenvalues[1] = 0.5 * omega - q_eff

    # |zero>: the bare ground state.
    vectors[dim - 1, 2] = 1.0
    eigenvalues[2] = -0.5 * omega

    # Dark states: Gram-Schmidt chain over the one-photon slots.
    for k in range(1, s):
        col = 2 + k
        vectors[1 : k + 1, col] = 1.0 / math.sqrt(k * (k + 1.0))
        vectors[k + 1, col] = -math.sqrt(k / (k + 1.0))
        eigenvalues[col] = 0.5 * omega

    return DressedBlock(idx, float(omega), float(q_bare), eigenvalues, vectors)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] by a two-sided Givens rotation; accumulate into v."""
    apq = a[p, q]
    app = a[p, p]
    aqq = a[q, q]
    theta = 0.5 * (aqq - app) / apq
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    # The rotation annihilates the target entry exactly; pin it to keep the
    # matrix symmetric against roundoff.
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = app - t * apq
    a[q, q] = aqq + t * apq

    col_p = v[:, p].copy()
    col_q = v[:, q].copy()
    v[:, p] = c * col_p - s * col_q
    v[:, q] = s * col_p + c * col_q


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 100
                ) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns (eigenvalues ascending, eigenvector columns).  Independent of the
    analytic formulas by construction; converges to machine precision for the
    small matrices used here.
    """
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if n else 0.0
    if scale and float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
        raise NotSymmetricError("matrix is not symmetric within 1e-12")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n <= 1:
        return np.diag(a).copy(), v

    threshold = n * n * np.finfo(np.float64).eps * max(scale, 1e-300)
    converged = False
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > threshold / (n * n):
                    _jacobi_rotate(a, v, p, q)
    if not converged:
        off = math.sqrt(float(np.sum(np.tril(a, -1) ** 2)))
        if off > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def numeric_eigensystem(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Oracle eigensolver (cyclic Jacobi) for real symmetric input.

    Returns (eigenvalues ascending, orthonormal eigenvector columns).
    """
    return jacobi_eigh(matrix)


def eigenspace_projector(eigenvalues: np.ndarray, vectors: np.ndarray,
                         target: float, atol: float) -> np.ndarray:
    """Spectral projector onto the eigenspace with eigenvalue near ``target``.

    Basis-independent, hence safe for comparing degenerate eigenspaces
    between the analytic and numeric routes.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    mask = np.abs(eigenvalues - target) <= atol
    sub = np.asarray(vectors)[:, mask]
    return sub @ sub.T
