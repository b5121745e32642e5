"""Reduced density matrices and von Neumann entropies of symmetric states.

A symmetric state ``sum_K c_K |N,K>`` splits across A:B as
``sum_{q,r} c_{q+r} A(q, r) |N_A,q>|N_B,r>`` with
``A(q, r) = sqrt(C(N_A,q) C(N_B,r) / C(N,q+r))``, so its coefficient matrix
is a Hankel matrix of amplitudes weighted entrywise by ``A``. The reduced
state of A is that matrix times its transpose.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .eigensolve import eig_dense_symmetric
from .errors import (
    DimensionMismatchError,
    DomainError,
    InvalidDensityError,
    NormalizationError,
)
from .symspace import (
    Bipartition,
    DickeIndex,
    SchmidtSpectrum,
    SymmetricState,
    collective_expectations,
    dicke_schmidt_coefficients,
    hypergeometric_log_weights,
    log_factorials,
    schmidt_support,
)

LOG2E = np.log2(np.e)
CLAMP_TOL = 1e-9
# rows of the coefficient matrix with squared norm below this are dropped;
# the eigenvalue shift is bounded by the dropped weight
ROW_DROP = 1e-30


@dataclass(frozen=True, eq=False)
class ReducedDensityMatrix:
    """Density matrix of the smaller subsystem, in its Dicke basis."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
            raise InvalidDensityError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-10:
            raise InvalidDensityError(f"trace {tr!r} differs from 1")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _binary_entropy_terms(lam: np.ndarray) -> float:
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def _eigvalsh(a: np.ndarray) -> np.ndarray:
    return eig_dense_symmetric(a).values


def _density_eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of a density matrix, exploiting parity and tiny rows.

    Complex Hermitian input is embedded as the real matrix [[A, -B], [B, A]],
    whose spectrum repeats each eigenvalue twice.
    """
    if np.iscomplexobj(rho):
        if np.max(np.abs(rho.imag)) == 0:
            rho = rho.real
        else:
            a, b = rho.real, rho.imag
            big = np.block([[a, -b], [b, a]])
            return np.sort(_density_eigenvalues(big))[::2]
    # a PSD row with a tiny diagonal has tiny off-diagonals too; negative
    # diagonals are kept so that invalid input still fails the eigenvalue check
    keep = np.flatnonzero(np.abs(np.diag(rho)) > ROW_DROP)
    rho = rho[np.ix_(keep, keep)]
    if rho.shape[0] > 2 and not np.any(rho[0::2, 1::2]):
        return np.concatenate([_eigvalsh(rho[0::2, 0::2]), _eigvalsh(rho[1::2, 1::2])])
    return _eigvalsh(rho) if rho.size else np.zeros(0)


def _entropy_from_eigenvalues(lam: np.ndarray) -> float:
    if lam.size and lam.min() < -CLAMP_TOL:
        raise InvalidDensityError(f"negative eigenvalue {lam.min()!r}")
    return _binary_entropy_terms(np.where(lam < 0, 0.0, lam))


def von_neumann_entropy(
        state: Union[SchmidtSpectrum, ReducedDensityMatrix, np.ndarray]) -> float:
    """Entropy ``-sum lam log2 lam`` in bits, with ``0 log 0 = 0``.

    Accepts Schmidt weights, a :class:`ReducedDensityMatrix`, or a 1-D array
    of probabilities. Matrix eigenvalues in [-1e-9, 0) are set to zero;
    anything more negative raises :class:`InvalidDensityError`.
    """
    if isinstance(state, SchmidtSpectrum):
        return _binary_entropy_terms(state.coefficients)
    if isinstance(state, ReducedDensityMatrix):
        rho = state.entries
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-8:
            raise InvalidDensityError(f"trace {tr!r} differs from 1")
        return _entropy_from_eigenvalues(_density_eigenvalues(rho))
    lam = np.asarray(state, dtype=float)
    if lam.ndim != 1:
        raise DimensionMismatchError("wrap matrices in ReducedDensityMatrix")
    return von_neumann_entropy(SchmidtSpectrum(lam))


@lru_cache(maxsize=8)
def schmidt_amplitude_table(n_a: int, n_b: int) -> np.ndarray:
    """``A[q, r] = sqrt(C(N_A,q) C(N_B,r) / C(N,q+r))``, evaluated in log-space."""
    lf = log_factorials(n_a + n_b)
    q = np.arange(n_a + 1)
    r = np.arange(n_b + 1)
    ln_ca = lf[n_a] - lf[q] - lf[n_a - q]
    ln_cb = lf[n_b] - lf[r] - lf[n_b - r]
    kk = q[:, None] + r[None, :]
    ln_cn = lf[n_a + n_b] - lf[kk] - lf[n_a + n_b - kk]
    table = np.exp(0.5 * (ln_ca[:, None] + ln_cb[None, :] - ln_cn))
    table.flags.writeable = False
    return table


def coefficient_matrix(amplitudes: np.ndarray, cut: Bipartition) -> np.ndarray:
    """Bipartite coefficient matrix ``psi[q, r]`` of a symmetric state."""
    table = schmidt_amplitude_table(cut.n_a, cut.n_b)
    q = np.arange(cut.n_a + 1)[:, None]
    r = np.arange(cut.n_b + 1)[None, :]
    return table * amplitudes[q + r]


def _check_state(state: SymmetricState, cut: Bipartition) -> None:
    cut.check(state.n_qubits)
    norm = float(np.sum(np.abs(state.amplitudes) ** 2))
    if abs(norm - 1.0) > 1e-9:
        raise NormalizationError(f"state norm^2 = {norm!r}")


def rdm_symmetric_bipartition(state: SymmetricState, cut: Bipartition) -> ReducedDensityMatrix:
    """Reduced density matrix of subsystem A, dimension ``N_A + 1``.

    ``rho[q, q'] = sum_r c_{q+r} c_{q'+r} A(q, q+r) A(q', q'+r)``.
    """
    _check_state(state, cut)
    psi = coefficient_matrix(state.amplitudes, cut)
    return ReducedDensityMatrix(psi @ psi.conj().T)


def _parity_blocks(psi: np.ndarray, parity_offset: Optional[int]):
    """Split a coefficient matrix by the parity of q.

    For a state supported on ``K = q + r`` of one parity, rows with even q
    only meet columns of one r-parity, and odd rows the other.
    """
    if parity_offset is None:
        return [psi]
    r_even = parity_offset % 2
    return [psi[0::2, r_even::2], psi[1::2, 1 - r_even::2]]


def _block_entropy(blocks) -> float:
    lams = []
    for m in blocks:
        norms = np.einsum("ij,ij->i", m, m)
        m = m[norms > ROW_DROP]
        if m.size == 0:
            continue
        gram = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
        lams.append(_eigvalsh(gram))
    return _entropy_from_eigenvalues(np.concatenate(lams))


def state_entropies(amplitudes: np.ndarray, cut: Bipartition, parity: Optional[str] = None,
                    threads: int = 1) -> np.ndarray:
    """Entanglement entropies of many real symmetric states.

    Parameters
    ----------
    amplitudes : ndarray, shape (S, N+1)
        One normalized state per row, indexed by excitation number.
    cut : Bipartition
    parity : {"positive", "negative", None}
        When all states share a parity sector the reduced state splits into
        two blocks by the parity of q, which are diagonalized separately.
    threads : int
        Worker threads; the eigen kernels release the GIL.
    """
    amps = np.atleast_2d(np.asarray(amplitudes, dtype=float))
    n = amps.shape[1] - 1
    cut.check(n)
    norms = np.sum(amps**2, axis=1)
    if np.max(np.abs(norms - 1.0), initial=0.0) > 1e-9:
        raise NormalizationError("every state must be normalized")
    offset = None
    if parity is not None:
        j = n // 2
        # positive sector holds K with K = j (mod 2); q even => r = j (mod 2)
        offset = j % 2 if parity == "positive" else (j + 1) % 2

    def one(row):
        return _block_entropy(_parity_blocks(coefficient_matrix(row, cut), offset))

    if threads <= 1:
        return np.array([one(row) for row in amps])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(one, amps)))


def dicke_ee_exact(state: DickeIndex, cut: Bipartition) -> float:
    """Entropy of a Dicke state by direct summation over its Schmidt weights."""
    return von_neumann_entropy(dicke_schmidt_coefficients(state, cut))


def _dicke_entropy(n_a: int, n_b: int, k: int) -> float:
    lo, hi = schmidt_support(n_a, n_b, k)
    # Hoeffding: hypergeometric tail beyond 20 sqrt(draws) has mass < e^-800,
    # which underflows to zero in double precision
    draws = min(k, n_a + n_b - k, n_a)
    mean = k * n_a / (n_a + n_b)
    width = int(np.ceil(20.0 * np.sqrt(draws))) + 2
    lo, hi = max(lo, int(mean) - width), min(hi, int(mean) + width)
    logw = hypergeometric_log_weights(n_a, n_b, k, lo, hi)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    return _binary_entropy_terms(w)


def dicke_entropies(n_qubits: int, cut: Bipartition, ks=None) -> np.ndarray:
    """Exact entropies of Dicke states ``|N,k>`` for each requested ``k``.

    Uses the symmetry ``S(k) = S(N-k)`` to halve the work.
    """
    cut.check(n_qubits)
    ks = np.arange(n_qubits + 1) if ks is None else np.asarray(ks, dtype=int)
    cache: dict[int, float] = {}
    out = np.empty(ks.size)
    for i, k in enumerate(ks):
        key = min(int(k), n_qubits - int(k))
        if key not in cache:
            cache[key] = _dicke_entropy(cut.n_a, cut.n_b, key)
        out[i] = cache[key]
    return out


def dicke_ee_approx(state: DickeIndex, cut: Bipartition) -> float:
    """Large-N expansion of a Dicke state's entropy including the 1/N term."""
    cut.check(state.n_qubits)
    n = state.n_qubits
    if state.excitations in (0, n):
        raise DomainError("approximation undefined for k = 0 or k = N")
    p1 = state.excitations / n
    p2 = cut.n_a / n
    s1 = p1 * (1 - p1)
    s2 = p2 * (1 - p2)
    lead = 0.5 * np.log2(2 * np.pi * np.e * n * s1 * s2)
    return float(lead + LOG2E / (12 * n) * (-10 + 4 / s1 + 4 / s2 - 1 / (s1 * s2)))


def superposition_ee_halfcut(state: DickeIndex, sign: int = 1,
                             cut: Optional[Bipartition] = None) -> float:
    """Half-cut entropy of ``(|j,m> +/- |j,-m>)/sqrt(2)`` for ``|m| > j/2``.

    In that range the two components have disjoint Schmidt supports, so the
    entropy is that of ``|j,m>`` plus one bit.
    """
    n = state.n_qubits
    if n % 2:
        raise DomainError("half cut requires even N")
    half = Bipartition.half(n)
    if cut is not None and cut != half:
        raise DomainError("closed form holds only for the half bipartition")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if abs(state.m) <= state.j / 2:
        raise DomainError(f"closed form needs |m| > j/2, got m={state.m}, j={state.j}")
    return dicke_ee_exact(state, half) + 1.0


def one_qubit_entropy_closed_form(state: DickeIndex) -> float:
    """Entropy of one qubit of ``|N,k>``: the binary entropy of ``k/N``."""
    x = state.excitations / state.n_qubits
    return _binary_entropy_terms(np.array([x, 1 - x]))


def one_qubit_rdm(state: SymmetricState) -> tuple[ReducedDensityMatrix, tuple[float, float]]:
    """Single-qubit reduced state from collective expectation values.

    Returns the 2x2 matrix in the (|0>, |1>) basis (``|0>`` is spin up) and
    the closed-form eigenvalues ``1/2 +/- sqrt(<Jz>^2 + |<J+>|^2)/N``.
    """
    n = state.n_qubits
    if n < 2:
        raise DomainError("need at least two qubits")
    ex = collective_expectations(state)
    denom = 4 * n * (n - 1)
    v_plus = (n * n - 2 * n + 4 * ex.jz2 + 4 * ex.jz * (n - 1)) / denom
    v_minus = (n * n - 2 * n + 4 * ex.jz2 - 4 * ex.jz * (n - 1)) / denom
    w = (n * n - 4 * ex.jz2) / denom
    x_plus = ((n - 1) * ex.jplus + ex.anticomm) / (2 * n * (n - 1))
    x_minus = ((n - 1) * ex.jplus - ex.anticomm) / (2 * n * (n - 1))
    off = x_plus + x_minus
    rho = np.array([[v_plus + w, np.conj(off)], [off, v_minus + w]])
    if not np.iscomplexobj(state.amplitudes) or abs(off.imag) == 0:
        rho = rho.real
    radius = np.sqrt(ex.jz**2 + abs(ex.jplus) ** 2) / n
    return ReducedDensityMatrix(rho), (0.5 + radius, 0.5 - radius)

