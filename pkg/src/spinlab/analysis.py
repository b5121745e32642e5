"""Spectrum-level aggregation of eigenstate entanglement.

Averages over a basis, analytic bounds for the Dicke basis, fixed-intercept
finite-size-scaling fits, volume-law coefficients, and entanglement/density
of states profiles along the spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .entangle import dicke_entropies, state_entropies, superposition_ee_halfcut
from .errors import DomainError
from .lmg import LmgParams, solve_sector
from .symspace import Bipartition, DickeIndex, SymmetricState, check_even, sector_indices

SECTORS = ("positive", "negative", "both")


@dataclass(frozen=True)
class ScalingSample:
    n_qubits: int
    fraction: float
    s_max: float
    avg_ee: float
    normalized: float
    basis_label: str


@dataclass(frozen=True)
class FitResult:
    intercept_a: float
    slope_b: float
    r_squared: float
    one_minus_r2: float
    fixed_intercept: bool


@dataclass(frozen=True, eq=False)
class SpectrumEntanglementProfile:
    energies: np.ndarray
    scaled_energies: np.ndarray
    entropies: np.ndarray
    sector: str


@dataclass(frozen=True, eq=False)
class DosHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    def mode_interval(self) -> tuple[float, float]:
        i = int(np.argmax(self.counts))
        return float(self.bin_edges[i]), float(self.bin_edges[i + 1])


@dataclass(frozen=True)
class C0Row:
    fraction: float
    avg_ee: float
    s_max: float
    c0: float


def s_max(n_qubits: int, fraction: float) -> float:
    """Largest entropy a symmetric subsystem of ``p N`` qubits can carry."""
    return float(np.log2(fraction * n_qubits + 1))


def average_ee(entropies: Sequence[float]) -> float:
    values = np.asarray(entropies, dtype=float)
    if values.size == 0:
        raise DomainError("cannot average an empty set of entropies")
    # np.sum reduces pairwise, which keeps the result order-stable
    return float(np.sum(values) / values.size)


def normalized_average(entropies: Sequence[float], n_qubits: int, fraction: float,
                       basis_label: str) -> ScalingSample:
    avg = average_ee(entropies)
    smax = s_max(n_qubits, fraction)
    return ScalingSample(n_qubits, fraction, smax, avg, avg / smax, basis_label)


def _check_fraction(p: float) -> None:
    if not 0 < p <= 0.5:
        raise DomainError(f"fraction must lie in (0, 1/2], got {p}")


def dicke_average_upper_bound(n_qubits: int, p: float) -> float:
    """Leading term ``(1/2) log2(pi e j p(1-p))`` of the upper bound."""
    _check_fraction(p)
    check_even(n_qubits)
    j = n_qubits / 2
    return float(0.5 * np.log2(np.pi * np.e * j * p * (1 - p)))


def dicke_average_lower_bound(n_qubits: int, p: float) -> float:
    """Leading term ``j/(2j+1) log2(pi/(2e) j p(1-p))`` of the lower bound."""
    _check_fraction(p)
    check_even(n_qubits)
    j = n_qubits / 2
    return float(j / (2 * j + 1) * np.log2(np.pi / (2 * np.e) * j * p * (1 - p)))


def dicke_basis_entropies(n_qubits: int, p: float, sector: str = "both") -> np.ndarray:
    cut = Bipartition.from_fraction(n_qubits, p)
    return dicke_entropies(n_qubits, cut, sector_indices(n_qubits, sector))


def dicke_average(n_qubits: int, p: float, sector: str = "both") -> ScalingSample:
    """Exact average entropy over the Dicke basis (or one parity sector of it)."""
    return normalized_average(dicke_basis_entropies(n_qubits, p, sector), n_qubits, p, "dicke")


def superposition_basis_entropies(n_qubits: int, p: float, threads: int = 1) -> np.ndarray:
    """Entropies of ``{(|j,m> +/- |j,-m>)/sqrt 2 : m = 1..j} + {|j,0>}``.

    States with ``|m| > j/2`` at the half cut use the closed form; the rest
    go through the reduced density matrix.
    """
    check_even(n_qubits)
    cut = Bipartition.from_fraction(n_qubits, p)
    j = n_qubits // 2
    out = []
    numeric = {"positive": [], "negative": []}
    for m in range(1, j + 1):
        for sign in (1, -1):
            if p == 0.5 and m > j / 2:
                out.append(superposition_ee_halfcut(DickeIndex.from_m(n_qubits, m), sign))
            else:
                state = SymmetricState.conjugate_pair(n_qubits, m, sign)
                numeric[state.parity].append(state.amplitudes)
    out.extend(dicke_entropies(n_qubits, cut, [j]))
    for parity, rows in numeric.items():
        if rows:
            out.extend(state_entropies(np.array(rows), cut, parity, threads))
    return np.array(out)


def superposition_average(n_qubits: int, p: float, threads: int = 1) -> ScalingSample:
    return normalized_average(superposition_basis_entropies(n_qubits, p, threads),
                              n_qubits, p, "superposition")


_SECTOR_CACHE: dict = {}


def lmg_sector_entropies(params: LmgParams, n_qubits: int, p: float, sector: str = "positive",
                         threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Energies and entanglement entropies of every eigenstate in a sector.

    With ``sector="both"`` the two parity sectors are merged and sorted by
    energy. Results are memoized per (params, N, N_A, sector).
    """
    if sector not in SECTORS:
        raise DomainError(f"sector must be one of {SECTORS}, got {sector!r}")
    cut = Bipartition.from_fraction(n_qubits, p)
    if sector == "both":
        parts = [lmg_sector_entropies(params, n_qubits, p, s, threads)
                 for s in ("positive", "negative")]
        energies = np.concatenate([e for e, _ in parts])
        entropies = np.concatenate([s for _, s in parts])
        order = np.argsort(energies, kind="stable")
        return energies[order], entropies[order]
    key = (params, n_qubits, cut.n_a, sector)
    if key not in _SECTOR_CACHE:
        block, eig = solve_sector(params, n_qubits, sector)
        amps = block.embed_all(eig.vectors)
        entropies = state_entropies(amps, cut, sector, threads)
        _SECTOR_CACHE[key] = (eig.values.copy(), entropies)
    energies, entropies = _SECTOR_CACHE[key]
    return energies.copy(), entropies.copy()


def lmg_average(params: LmgParams, n_qubits: int, p: float, sector: str = "positive",
                threads: int = 1) -> ScalingSample:
    _, entropies = lmg_sector_entropies(params, n_qubits, p, sector, threads)
    label = "lmg({:g},{:g},{:g};{})".format(*params.as_tuple(), sector)
    return normalized_average(entropies, n_qubits, p, label)


def fixed_intercept_fit(x: Sequence[float], y: Sequence[float], a: float) -> FitResult:
    """Least-squares slope of ``y = a + b x`` with the intercept held at ``a``.

    ``R^2`` uses the total sum of squares about the mean of ``y``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-D arrays of equal length")
    if x.size < 2 or np.unique(x).size != x.size:
        raise DomainError("need at least two points with distinct x")
    b = float(np.dot(x, y - a) / np.dot(x, x))
    ss_res = float(np.sum((y - a - b * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    one_minus = ss_res / ss_tot if ss_tot > 0 else (0.0 if ss_res == 0 else np.inf)
    return FitResult(float(a), b, 1.0 - one_minus, one_minus, True)


def intercept_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not lo < hi or step <= 0:
        raise DomainError("intercept scan needs lo < hi and a positive step")
    count = int(round((hi - lo) / step))
    return lo + step * np.arange(count + 1)


def intercept_scan(x: Sequence[float], y: Sequence[float],
                   intercepts: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """``1 - R^2`` of the fixed-intercept fit for each candidate intercept."""
    intercepts = np.asarray(intercepts, dtype=float)
    scores = np.array([fixed_intercept_fit(x, y, a).one_minus_r2 for a in intercepts])
    return intercepts, scores


def best_intercept(x, y, intercepts) -> float:
    a, scores = intercept_scan(x, y, intercepts)
    return float(a[np.argmin(scores)])


def scaling_points(samples: Sequence[ScalingSample]) -> tuple[np.ndarray, np.ndarray]:
    """Fit coordinates ``(1/S_max, S/S_max)`` of a set of samples."""
    x = np.array([1.0 / s.s_max for s in samples])
    y = np.array([s.normalized for s in samples])
    return x, y


def c0_profile(params: Optional[LmgParams], n_qubits: int, fractions: Sequence[float],
               sector: str = "positive", threads: int = 1) -> list[C0Row]:
    """Volume-law coefficient ``c0(p) = avg S_A(p) / S_max(p)`` per fraction.

    ``params=None`` selects the Dicke basis (restricted to ``sector``).
    """
    rows = []
    for p in fractions:
        Bipartition.from_fraction(n_qubits, p)
        if params is None:
            sample = dicke_average(n_qubits, p, sector)
        else:
            sample = lmg_average(params, n_qubits, p, sector, threads)
        rows.append(C0Row(float(p), sample.avg_ee, sample.s_max, sample.normalized))
    return rows


def ee_distribution(params: LmgParams, n_qubits: int, p: float = 0.5,
                    sector: str = "positive", threads: int = 1) -> SpectrumEntanglementProfile:
    """Entropy of each eigenstate against its scaled energy ``E/j``."""
    energies, entropies = lmg_sector_entropies(params, n_qubits, p, sector, threads)
    return SpectrumEntanglementProfile(energies, energies / (n_qubits / 2), entropies, sector)


def dos_histogram(values: Sequence[float], bins: int,
                  value_range: Optional[tuple[float, float]] = None) -> DosHistogram:
    values = np.asarray(values, dtype=float)
    if bins < 1:
        raise DomainError("bins must be positive")
    counts, edges = np.histogram(values, bins=bins, range=value_range)
    return DosHistogram(edges, counts)


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; output is shorter by ``window - 1``."""
    if window < 1 or window > len(values):
        raise DomainError("window must lie in [1, len(values)]")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(values, kernel, mode="valid")


def entanglement_dips(profile: SpectrumEntanglementProfile, window: int = 21,
                      edge_fraction: float = 0.05) -> np.ndarray:
    """Scaled energies of strict local minima of the smoothed entropy profile.

    The outer ``edge_fraction`` of the spectrum on each side is ignored.
    """
    smooth = moving_average(profile.entropies, window)
    half = window // 2
    centers = profile.scaled_energies[half:half + smooth.size]
    n = profile.entropies.size
    lo = int(np.ceil(edge_fraction * n))
    hi = n - lo
    idx = np.arange(1, smooth.size - 1)
    is_min = (smooth[idx] < smooth[idx - 1]) & (smooth[idx] < smooth[idx + 1])
    pos = idx + half  # index in the full spectrum
    keep = is_min & (pos >= lo) & (pos < hi)
    return centers[idx[keep]]
