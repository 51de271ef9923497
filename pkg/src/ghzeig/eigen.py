"""Dense complex-Hermitian eigensolver.

Householder reflections bring the matrix to tridiagonal form, a diagonal
unitary makes the off-diagonal real, and the real symmetric tridiagonal
problem is solved by QL iteration with implicit Wilkinson-type shifts.
Eigenvectors are accumulated throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PreconditionError, SizeError

MAX_DIM = 4096
_MAX_SWEEPS = 60


@dataclass(frozen=True, eq=False)
class EigenSystem:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def householder_tridiagonalize(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (d, e, Q) with Q^H A Q tridiagonal, diagonal d and subdiagonal e.

    ``e`` is complex in general; ``Q`` is unitary.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = A[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha  # reflect onto -phase * alpha * e1, avoids cancellation
        v /= np.linalg.norm(v)
        sub = A[k + 1 :, k + 1 :]
        p = sub @ v
        q = p - np.vdot(v, p) * v
        sub -= 2 * (np.outer(v, q.conj()) + np.outer(q, v.conj()))
        A[k + 1 :, k] = 0
        A[k, k + 1 :] = 0
        A[k + 1, k] = -phase * alpha
        A[k, k + 1] = np.conj(A[k + 1, k])
        Qs = Q[:, k + 1 :]
        Qs -= 2 * np.outer(Qs @ v, v.conj())
    d = np.real(np.diag(A)).copy()
    e = np.diag(A, -1).copy()
    return d, e, Q


def tridiagonal_ql(d: np.ndarray, e: np.ndarray, Z: np.ndarray | None = None):
    """Eigen-decompose the real symmetric tridiagonal matrix (d, e) in place.

    ``e[i]`` couples rows i and i+1.  Rotations are applied to the columns of
    ``Z`` (identity if omitted).  Returns (eigenvalues, Z), unsorted.
    """
    n = len(d)
    d = np.array(d, dtype=float)
    e = np.append(np.array(e, dtype=float), 0.0)
    if Z is None:
        Z = np.eye(n)
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise RuntimeError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi = Z[:, i].copy()
                Z[:, i] = c * zi - s * Z[:, i + 1]
                Z[:, i + 1] = s * zi + c * Z[:, i + 1]
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Z


def hermitian_eigensystem(M: np.ndarray, check: bool = True) -> EigenSystem:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > MAX_DIM:
        raise SizeError(f"dimension {n} exceeds {MAX_DIM}")
    if n == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0), dtype=complex))
    if check:
        scale = max(1.0, float(np.abs(M).max()))
        if np.abs(M - M.conj().T).max() > 1e-12 * scale:
            raise PreconditionError("matrix is not Hermitian")
    d, e, Q = householder_tridiagonalize(M)
    # diagonal unitary D making D^H T D real with nonnegative subdiagonal
    phases = np.ones(n, dtype=complex)
    for k in range(n - 1):
        ek = e[k]
        phases[k + 1] = phases[k] * (ek / abs(ek) if ek != 0 else 1.0)
    w, Z = tridiagonal_ql(d, np.abs(e))
    order = np.argsort(w, kind="stable")
    V = (Q * phases) @ Z[:, order]
    return EigenSystem(w[order], V)
