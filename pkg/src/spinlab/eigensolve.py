"""Symmetric eigensolvers: implicit-shift QL on tridiagonal matrices and
Householder reduction for dense symmetric matrices.

The kernels are compiled with numba and release the GIL, so independent
decompositions can run on a thread pool.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .errors import AsymmetryError, ConvergenceError, DimensionMismatchError, DomainError

MAX_SWEEPS = 50
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues, optionally with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: Optional[np.ndarray]
    source_dim: int

    def orthonormality_error(self) -> float:
        v = self.vectors
        return float(np.max(np.abs(v.T @ v - np.eye(v.shape[1]))))


@numba.njit(cache=True, nogil=True)
def _ql_implicit(d, e, zt, want_vectors, max_sweeps):
    """Implicit QL with Wilkinson shift on the tridiagonal (d, e).

    ``e[i]`` couples ``d[i]`` and ``d[i+1]``; ``e[n-1]`` is workspace.
    Rotations are applied to the rows of ``zt`` (eigenvectors stored as rows).
    Returns -1 on success or the index of the eigenvalue that failed.
    """
    n = d.shape[0]
    ncols = zt.shape[1]
    # deflation is judged against the matrix norm (absolute accuracy eps*|T|)
    anorm = 0.0
    for i in range(n):
        anorm = max(anorm, abs(d[i]) + abs(e[i]))
    tol = _EPS * anorm
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= tol:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            early = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    zi = zt[i]
                    zi1 = zt[i + 1]
                    for k in range(ncols):
                        f = zi1[k]
                        zi1[k] = s * zi[k] + c * f
                        zi[k] = c * zi[k] - s * f
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


@numba.njit(cache=True, nogil=True, fastmath=True)
def _householder_tridiagonal(a, want_q):
    """Reduce symmetric ``a`` (lower triangle read, overwritten) to tridiagonal form.

    Returns (d, e, q) with ``a = q T q^T``; ``q`` is empty unless requested.
    """
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    betas = np.zeros(n)
    p = np.zeros(n)
    for k in range(n - 2):
        m = n - k - 1
        v = np.empty(m)
        alpha2 = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k]
            alpha2 += v[i] * v[i]
        if alpha2 == 0.0:
            continue
        alpha = np.sqrt(alpha2)
        if v[0] > 0.0:
            alpha = -alpha
        v[0] -= alpha
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i] * v[i]
        beta = 2.0 / vnorm2
        # p = beta * A22 v using the lower triangle only
        for i in range(m):
            p[i] = 0.0
        for i in range(m):
            row = a[k + 1 + i]
            vi = v[i]
            s = row[k + 1 + i] * vi
            for jj in range(i):
                aij = row[k + 1 + jj]
                s += aij * v[jj]
                p[jj] += aij * vi
            p[i] += s
        vp = 0.0
        for i in range(m):
            p[i] *= beta
            vp += v[i] * p[i]
        half = 0.5 * beta * vp
        for i in range(m):
            p[i] -= half * v[i]
        for i in range(m):
            row = a[k + 1 + i]
            vi = v[i]
            pi = p[i]
            for jj in range(i + 1):
                row[k + 1 + jj] -= vi * p[jj] + pi * v[jj]
        for i in range(m):
            a[k + 1 + i, k] = v[i]
        e[k] = alpha
        betas[k] = beta
    for i in range(n):
        d[i] = a[i, i]
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]

    if not want_q:
        return d, e, np.empty((0, 0))
    q = np.eye(n)
    w = np.zeros(n)
    for k in range(n - 3, -1, -1):
        beta = betas[k]
        if beta == 0.0:
            continue
        m = n - k - 1
        for jj in range(m):
            w[jj] = 0.0
        for i in range(m):
            vi = a[k + 1 + i, k]
            row = q[k + 1 + i]
            for jj in range(m):
                w[jj] += vi * row[k + 1 + jj]
        for i in range(m):
            c = beta * a[k + 1 + i, k]
            row = q[k + 1 + i]
            for jj in range(m):
                row[k + 1 + jj] -= c * w[jj]
    return d, e, q


def _fix_signs(vectors: np.ndarray) -> None:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors *= signs


def _finish(d, e, zt, want_vectors, dim):
    status = _ql_implicit(d, e, zt, want_vectors, MAX_SWEEPS)
    if status >= 0:
        raise ConvergenceError(
            f"eigenvalue {status} did not converge in {MAX_SWEEPS} implicit-shift sweeps")
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = None
    if want_vectors:
        vectors = np.ascontiguousarray(zt[order].T)
        _fix_signs(vectors)
    return EigenDecomposition(values, vectors, dim)


def eig_tridiagonal(diag, offdiag, want_vectors: bool = False) -> EigenDecomposition:
    """Eigen-decomposition of the symmetric tridiagonal matrix (diag, offdiag).

    Eigenvectors, when requested, are columns of ``vectors`` with the sign
    chosen so that the largest-magnitude component is positive.

    Raises
    ------
    ConvergenceError
        If an eigenvalue needs more than 50 implicit-shift sweeps.
    """
    d = np.array(diag, dtype=float)
    off = np.asarray(offdiag, dtype=float)
    n = d.size
    if n == 0:
        raise DomainError("empty matrix")
    if off.size != n - 1:
        raise DimensionMismatchError(f"offdiag has length {off.size}, expected {n - 1}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(off))):
        raise DomainError("tridiagonal entries must be finite")
    e = np.zeros(n)
    e[:-1] = off
    zt = np.eye(n) if want_vectors else np.empty((0, 0))
    return _finish(d, e, zt, want_vectors, n)


def eig_dense_symmetric(matrix, want_vectors: bool = False) -> EigenDecomposition:
    """Eigen-decomposition of a dense real symmetric matrix.

    Householder tridiagonalization followed by :func:`eig_tridiagonal`'s QL
    iteration; eigenvectors are back-transformed through the reflectors.
    """
    a = np.array(matrix, dtype=float, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.T)) > 1e-10 * scale:
        raise AsymmetryError("matrix is not symmetric")
    d, e, q = _householder_tridiagonal(a, want_vectors)
    zt = np.ascontiguousarray(q.T) if want_vectors else np.empty((0, 0))
    return _finish(d, e, zt, want_vectors, n)


def tridiagonal_matvec(diag, offdiag, x: np.ndarray) -> np.ndarray:
    """Product of the tridiagonal matrix with a vector or column block."""
    diag = np.asarray(diag)
    offdiag = np.asarray(offdiag)
    x = np.asarray(x)
    shape = (-1,) + (1,) * (x.ndim - 1)
    y = diag.reshape(shape) * x
    y[:-1] += offdiag.reshape(shape) * x[1:]
    y[1:] += offdiag.reshape(shape) * x[:-1]
    return y
