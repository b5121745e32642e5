"""Brute-force reference implementations used only by the tests.

Everything here works in the full 2^N computational basis or uses a
textbook algorithm unrelated to the library's own solvers, so agreement
is meaningful evidence rather than a re-run of the same code.
Convention: qubit state |0> is spin up, an excitation is a |1>.
"""
from __future__ import annotations

from functools import reduce
from math import comb

import numpy as np

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1j], [1j, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
SPLUS = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0>, raises m


def _site_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    mats = [np.eye(2)] * n
    mats = mats[:site] + [op] + mats[site + 1:]
    return reduce(np.kron, mats)


def collective(op: np.ndarray, n: int) -> np.ndarray:
    """Sum of a single-qubit operator over all n sites."""
    return sum(_site_op(op, i, n) for i in range(n))


def spin_operators(n: int):
    jx = collective(SX, n) / 2
    jy = collective(SY, n) / 2
    jz = collective(SZ, n) / 2
    jp = collective(SPLUS, n)
    return jx, jy, jz, jp


def popcounts(n: int) -> np.ndarray:
    idx = np.arange(2**n)
    return np.array([bin(i).count("1") for i in idx])


def dicke_isometry(n: int) -> np.ndarray:
    """Columns are the Dicke states |N,k> written in the computational basis."""
    pc = popcounts(n)
    v = np.zeros((2**n, n + 1))
    for k in range(n + 1):
        mask = pc == k
        v[mask, k] = 1 / np.sqrt(comb(n, k))
    return v


def full_state(amplitudes: np.ndarray) -> np.ndarray:
    n = len(amplitudes) - 1
    return dicke_isometry(n) @ amplitudes


def partial_trace_rho(psi: np.ndarray, n_a: int, n: int) -> np.ndarray:
    """Reduced state of the first n_a qubits."""
    m = psi.reshape(2**n_a, 2 ** (n - n_a))
    return m @ m.conj().T


def entropy_bits(rho: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def lmg_full(gx: float, gy: float, h: float, n: int) -> np.ndarray:
    jx, jy, jz, _ = spin_operators(n)
    return -(gx * jx @ jx + gy * jy @ jy) / n - h * jz


def lmg_projected(gx: float, gy: float, h: float, n: int) -> np.ndarray:
    """LMG Hamiltonian of the 2^N space compressed onto the symmetric subspace."""
    v = dicke_isometry(n)
    return (v.T @ lmg_full(gx, gy, h, n) @ v).real


def sturm_count(d: np.ndarray, e: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the tridiagonal (d, e) strictly below x."""
    count = 0
    q = 1.0
    for i in range(len(d)):
        q = d[i] - x - (e[i - 1] ** 2 / q if i > 0 else 0.0)
        if q == 0.0:
            q = -1e-300
        if q < 0:
            count += 1
    return count


def bisection_eigenvalues(d: np.ndarray, e: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection."""
    n = len(d)
    radius = np.abs(e).max(initial=0.0) * 2
    lo0 = float(np.min(d) - radius - 1)
    hi0 = float(np.max(d) + radius + 1)
    out = np.empty(n)
    for i in range(n):
        lo, hi = lo0, hi0
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if sturm_count(d, e, mid) > i:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out


def jacobi_eigenvalues(a: np.ndarray, sweeps: int = 50, tol: float = 1e-14) -> np.ndarray:
    """Cyclic Jacobi rotations until the off-diagonal mass is negligible."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    for _ in range(sweeps):
        off = np.sqrt(2 * np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1 / np.hypot(t, 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
    return np.sort(np.diag(a))


def random_symmetric_amplitudes(rng: np.random.Generator, n: int, parity_step: int = 1,
                                offset: int = 0) -> np.ndarray:
    amps = np.zeros(n + 1)
    amps[offset::parity_step] = rng.standard_normal(len(amps[offset::parity_step]))
    return amps / np.linalg.norm(amps)
