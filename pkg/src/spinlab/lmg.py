"""LMG Hamiltonian  H = -(gx Jx^2 + gy Jy^2)/N - h Jz  on the symmetric subspace.

H only couples m to m +/- 2, so it splits into two parity sectors of
exp(-i pi Jz), each a symmetric tridiagonal matrix. Blocks are kept as
(diag, offdiag) arrays and never densified.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .eigensolve import EigenDecomposition, eig_tridiagonal
from .errors import DomainError
from .symspace import PARITIES, SymmetricState, check_even, sector_indices


@dataclass(frozen=True)
class LmgParams:
    gamma_x: float
    gamma_y: float
    h: float

    def __post_init__(self):
        for name in ("gamma_x", "gamma_y", "h"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def isotropic(self) -> bool:
        return self.gamma_x == self.gamma_y

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.gamma_x, self.gamma_y, self.h)


def hamiltonian_elements(params: LmgParams, n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrix elements of H in the excitation basis.

    Returns
    -------
    diag : ndarray, shape (N+1,)
        ``diag[k] = -(gx+gy)(j(j+1)-m^2)/(2N) - h m`` with ``m = j - k``.
    coupling : ndarray, shape (N-1,)
        ``coupling[k]`` is the element between ``k`` and ``k+2``, i.e. between
        ``m' = m-2`` and ``m' + 2 = m``.
    """
    check_even(n_qubits)
    n = n_qubits
    j = n / 2
    jj = j * (j + 1)
    m = j - np.arange(n + 1)
    diag = -(params.gamma_x + params.gamma_y) * (jj - m**2) / (2 * n) - params.h * m
    lower = m[2:]  # m' for the pair (m', m'+2)
    roots = np.sqrt(np.maximum((jj - lower * (lower + 1)) * (jj - (lower + 1) * (lower + 2)), 0.0))
    coupling = -(params.gamma_x - params.gamma_y) * roots / (4 * n)
    return diag, coupling


@dataclass(frozen=True, eq=False)
class ParityBlock:
    """Tridiagonal block of H over one parity sector.

    ``index_map[i]`` is the excitation number of the i-th block basis state.
    """

    params: LmgParams
    n_qubits: int
    sector: str
    diag: np.ndarray
    offdiag: np.ndarray
    index_map: np.ndarray

    @property
    def dim(self) -> int:
        return self.diag.size

    def solve(self, want_vectors: bool = True) -> EigenDecomposition:
        return eig_tridiagonal(self.diag, self.offdiag, want_vectors)

    def embed(self, vector: np.ndarray) -> SymmetricState:
        """Lift a block eigenvector to a full symmetric-subspace state."""
        amps = np.zeros(self.n_qubits + 1)
        amps[self.index_map] = vector
        return SymmetricState(self.n_qubits, amps, self.sector)

    def embed_all(self, vectors: np.ndarray) -> np.ndarray:
        """Columns of ``vectors`` as rows of full amplitude arrays, shape (dim, N+1)."""
        amps = np.zeros((vectors.shape[1], self.n_qubits + 1))
        amps[:, self.index_map] = vectors.T
        return amps


def build_parity_block(params: LmgParams, n_qubits: int, sector: str) -> ParityBlock:
    if sector not in PARITIES:
        raise DomainError(f"sector must be one of {PARITIES}, got {sector!r}")
    diag, coupling = hamiltonian_elements(params, n_qubits)
    idx = sector_indices(n_qubits, sector)
    arrays = (diag[idx], coupling[idx[:-1]], idx)
    for arr in arrays:
        arr.flags.writeable = False
    return ParityBlock(params, n_qubits, sector, *arrays)


@lru_cache(maxsize=16)
def solve_sector(params: LmgParams, n_qubits: int, sector: str) -> tuple[ParityBlock, EigenDecomposition]:
    """Build and fully diagonalize a parity block (memoized)."""
    block = build_parity_block(params, n_qubits, sector)
    return block, block.solve(want_vectors=True)


def isotropic_spectrum(gamma: float, h: float, n_qubits: int) -> np.ndarray:
    """Closed-form energies for gx = gy = gamma, indexed by excitation number.

    ``E[k] = -gamma (j(j+1) - m^2)/N - h m`` with eigenvector the Dicke state
    with ``k`` excitations.
    """
    check_even(n_qubits)
    j = n_qubits / 2
    m = j - np.arange(n_qubits + 1)
    return -gamma * (j * (j + 1) - m**2) / n_qubits - h * m
