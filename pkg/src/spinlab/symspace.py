"""Combinatorics and collective-spin algebra on the symmetric subspace of N qubits.

Basis states are indexed by the excitation number ``k = j - m`` with
``j = N/2``; index ``k = 0`` is the fully polarized state ``|j, j>``.
All logarithms are base 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import (
    DimensionMismatchError,
    DomainError,
    InvalidSizeError,
    NormalizationError,
)

LN2 = np.log(2.0)
NORM_TOL = 1e-12
PARITIES = ("positive", "negative")


def m_of_k(n_qubits: int, k):
    """Magnetic quantum number ``m = N/2 - k``."""
    return n_qubits / 2 - (np.asarray(k) if np.ndim(k) else k)


def k_of_m(n_qubits: int, m):
    return int(round(n_qubits / 2 - m))


def check_even(n_qubits: int) -> None:
    if n_qubits < 2 or n_qubits % 2:
        raise InvalidSizeError(f"N must be even and >= 2, got {n_qubits}")


def sector_indices(n_qubits: int, sector: str) -> np.ndarray:
    """Excitation indices ``k`` whose ``m`` has the parity of ``sector``.

    The positive sector of ``exp(-i pi J_z)`` holds even ``m``.
    """
    check_even(n_qubits)
    j = n_qubits // 2
    k = np.arange(n_qubits + 1)
    if sector == "positive":
        return k[(j - k) % 2 == 0]
    if sector == "negative":
        return k[(j - k) % 2 == 1]
    if sector == "both":
        return k
    raise DomainError(f"unknown sector {sector!r}")


@dataclass(frozen=True)
class DickeIndex:
    """Dicke state ``|N, k>`` with ``k`` excitations (``m = N/2 - k``)."""

    n_qubits: int
    excitations: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError(f"n_qubits must be positive, got {self.n_qubits}")
        if not 0 <= self.excitations <= self.n_qubits:
            raise DomainError(
                f"excitations must lie in [0, {self.n_qubits}], got {self.excitations}")

    @classmethod
    def from_m(cls, n_qubits: int, m: float) -> "DickeIndex":
        return cls(n_qubits, k_of_m(n_qubits, m))

    @property
    def j(self) -> float:
        return self.n_qubits / 2

    @property
    def m(self) -> float:
        return self.n_qubits / 2 - self.excitations


@dataclass(frozen=True)
class Bipartition:
    """Split of N qubits into a smaller part A (``n_a``) and B (``n_b``)."""

    n_a: int
    n_b: int

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 1:
            raise DomainError("both parts of a bipartition need at least one qubit")
        if self.n_a > self.n_b:
            raise DomainError(f"require n_a <= n_b, got {self.n_a}:{self.n_b}")

    @classmethod
    def from_fraction(cls, n_qubits: int, p: float) -> "Bipartition":
        if not 0 < p <= 0.5:
            raise DomainError(f"fraction must lie in (0, 1/2], got {p}")
        n_a = p * n_qubits
        if abs(n_a - round(n_a)) > 1e-9:
            raise DomainError(f"p*N = {n_a} is not an integer subsystem size")
        n_a = int(round(n_a))
        return cls(n_a, n_qubits - n_a)

    @classmethod
    def half(cls, n_qubits: int) -> "Bipartition":
        return cls.from_fraction(n_qubits, 0.5)

    @property
    def n_qubits(self) -> int:
        return self.n_a + self.n_b

    @property
    def p(self) -> float:
        return self.n_a / (self.n_a + self.n_b)

    def check(self, n_qubits: int) -> None:
        if self.n_a + self.n_b != n_qubits:
            raise DimensionMismatchError(
                f"partition {self.n_a}:{self.n_b} does not cover {n_qubits} qubits")


@dataclass(frozen=True, eq=False)
class SymmetricState:
    """Pure state of the symmetric subspace in the excitation basis.

    ``amplitudes[k]`` multiplies the Dicke state with ``k`` excitations.
    ``parity`` optionally records that only even-``m`` (``"positive"``) or
    odd-``m`` (``"negative"``) components are populated.
    """

    n_qubits: int
    amplitudes: np.ndarray
    parity: Optional[str] = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if not np.iscomplexobj(amps):
            amps = amps.astype(float)
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (self.n_qubits + 1,):
            raise DimensionMismatchError(
                f"expected {self.n_qubits + 1} amplitudes, got shape {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm^2 = {norm!r}")
        if self.parity is not None:
            if self.parity not in PARITIES:
                raise DomainError(f"unknown parity {self.parity!r}")
            other = "negative" if self.parity == "positive" else "positive"
            if np.max(np.abs(amps[sector_indices(self.n_qubits, other)]), initial=0.0) > NORM_TOL:
                raise DomainError(f"amplitudes leak outside the {self.parity} sector")

    @classmethod
    def dicke(cls, n_qubits: int, k: int) -> "SymmetricState":
        DickeIndex(n_qubits, k)
        amps = np.zeros(n_qubits + 1)
        amps[k] = 1.0
        parity = None
        if n_qubits % 2 == 0:
            parity = "positive" if (n_qubits // 2 - k) % 2 == 0 else "negative"
        return cls(n_qubits, amps, parity)

    @classmethod
    def conjugate_pair(cls, n_qubits: int, m: int, sign: int = 1) -> "SymmetricState":
        """``(|j,m> + sign |j,-m>)/sqrt(2)``; reduces to ``|j,0>`` when ``m = 0``."""
        check_even(n_qubits)
        if m == 0:
            return cls.dicke(n_qubits, n_qubits // 2)
        k1, k2 = k_of_m(n_qubits, m), k_of_m(n_qubits, -m)
        DickeIndex(n_qubits, k1)
        amps = np.zeros(n_qubits + 1)
        amps[k1] = 1 / np.sqrt(2)
        amps[k2] = sign / np.sqrt(2)
        parity = "positive" if m % 2 == 0 else "negative"
        return cls(n_qubits, amps, parity)

    @property
    def j(self) -> float:
        return self.n_qubits / 2


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Nonnegative Schmidt weights of a pure bipartite state."""

    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.asarray(self.coefficients, dtype=float)
        if lam.size == 0:
            raise DomainError("empty Schmidt spectrum")
        if lam.min() < -1e-12:
            raise DomainError(f"negative Schmidt weight {lam.min()!r}")
        if abs(lam.sum() - 1.0) > 1e-10:
            raise NormalizationError(f"Schmidt weights sum to {lam.sum()!r}")
        lam = np.clip(lam, 0.0, None)
        lam.flags.writeable = False
        object.__setattr__(self, "coefficients", lam)


@dataclass(frozen=True)
class CollectiveExpectations:
    jz: float
    jz2: float
    jplus: complex
    anticomm: complex


def log_binomial(n, k):
    """Base-2 logarithm of the binomial coefficient C(n, k) via log-gamma.

    Out-of-range ``k`` (``k < 0`` or ``k > n``) gives ``-inf``. Accepts scalars
    or arrays.
    """
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    kk = np.where(valid, k, 0.0)
    with np.errstate(invalid="ignore"):
        val = (gammaln(n + 1) - gammaln(kk + 1) - gammaln(n - kk + 1)) / LN2
    out = np.where(valid, val, -np.inf)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=8)
def log_factorials(n: int) -> np.ndarray:
    """Natural-log factorials ``ln k!`` for ``k = 0..n`` (read-only)."""
    table = gammaln(np.arange(n + 1, dtype=float) + 1.0)
    table.flags.writeable = False
    return table


def hypergeometric_log_weights(n_a: int, n_b: int, k: int, lo: int, hi: int) -> np.ndarray:
    """Unnormalized natural-log weights ``ln C(n_a,q) C(n_b,k-q)`` for q in [lo, hi].

    Built from a cumulative sum of successive log-ratios, which keeps the
    rounding error far below that of differencing large log-factorials.
    Only the differences between entries are meaningful.
    """
    q = np.arange(lo, hi, dtype=float)
    # ratio w(q+1)/w(q) = (n_a-q)(k-q) / ((q+1)(n_b-k+q+1))
    steps = (np.log(n_a - q) + np.log(k - q)
             - np.log(q + 1.0) - np.log(n_b - k + q + 1.0))
    out = np.empty(hi - lo + 1)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def schmidt_support(n_a: int, n_b: int, k: int) -> tuple[int, int]:
    return max(0, k - n_b), min(k, n_a)


def dicke_schmidt_coefficients(state: DickeIndex, cut: Bipartition) -> SchmidtSpectrum:
    """Schmidt weights ``C(N_A,q) C(N_B,k-q) / C(N,k)`` of a Dicke state.

    Only the support where both binomials are nonzero is returned, ordered by
    increasing ``q``.
    """
    cut.check(state.n_qubits)
    lo, hi = schmidt_support(cut.n_a, cut.n_b, state.excitations)
    logw = hypergeometric_log_weights(cut.n_a, cut.n_b, state.excitations, lo, hi)
    w = np.exp(logw - logw.max())
    return SchmidtSpectrum(w / w.sum())


def _ladder_roots(n_qubits: int) -> np.ndarray:
    """``sqrt(j(j+1) - m(m+1))`` for the step ``k -> k-1`` at each k >= 1."""
    j = n_qubits / 2
    m = j - np.arange(1, n_qubits + 1)
    return np.sqrt(np.maximum(j * (j + 1) - m * (m + 1), 0.0))


def collective_expectations(state: SymmetricState) -> CollectiveExpectations:
    """Expectation values of J_z, J_z^2, J_+ and the anticommutator {J_+, J_z}."""
    c = state.amplitudes
    prob = np.abs(c) ** 2
    norm = prob.sum()
    if abs(norm - 1.0) > 1e-9:
        raise NormalizationError(f"state norm^2 = {norm!r}")
    m = state.j - np.arange(state.n_qubits + 1)
    roots = _ladder_roots(state.n_qubits)
    # J_+ maps index k to k-1 with amplitude roots[k-1]
    cross = np.conj(c[:-1]) * c[1:] * roots
    return CollectiveExpectations(
        jz=float(prob @ m),
        jz2=float(prob @ m**2),
        jplus=complex(cross.sum()),
        anticomm=complex((cross * (2 * m[1:] + 1)).sum()),
    )
