"""Small dense linear algebra: Hermitian eigensystems and determinant/adjugate forms.

Everything here works on plain numpy arrays. Matrices are expected to be
small (dimension up to a few dozen); nothing is optimised for large sizes.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NonHermitianInput

HERMITIAN_RTOL = 1e-12


def check_hermitian(H, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``H`` as a square array, raising if it is not Hermitian."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise NonHermitianInput("matrix has non-finite entries")
    scale = np.max(np.abs(H)) if H.size else 0.0
    if np.max(np.abs(H - H.conj().T), initial=0.0) > rtol * max(scale, 1e-300):
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    return H


class EigenSystem(NamedTuple):
    values: np.ndarray
    """Ascending real eigenvalues."""
    vectors: np.ndarray
    """Orthonormal eigenvectors as columns, ``vectors[:, i]`` belongs to ``values[i]``."""


def fix_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real and positive."""
    V = np.array(V, dtype=complex)
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    return V * (np.abs(pivots) / np.where(pivots == 0, 1, pivots))


def eigh(H) -> EigenSystem:
    """Diagonalise a Hermitian matrix with a deterministic eigenvector gauge."""
    H = check_hermitian(H)
    w, V = np.linalg.eigh(H)
    return EigenSystem(w, fix_phases(V))


# -- symmetric determinant / adjugate ---------------------------------------

def det2(m) -> float:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def adj2(m) -> np.ndarray:
    return np.array([[m[1][1], -m[0][1]],
                     [-m[1][0], m[0][0]]])


def det3(m) -> float:
    """Determinant of a symmetric 3x3 matrix in the expanded metric form."""
    xx, yy, zz = m[0][0], m[1][1], m[2][2]
    xy, yz, zx = m[0][1], m[1][2], m[2][0]
    return xx * yy * zz + 2 * xy * yz * zx - xx * yz**2 - yy * zx**2 - zz * xy**2


def adj3(m) -> np.ndarray:
    """Adjugate of a symmetric 3x3 matrix (cofactor transpose)."""
    xx, yy, zz = m[0][0], m[1][1], m[2][2]
    xy, yz, xz = m[0][1], m[1][2], m[0][2]
    a_xy = xz * yz - xy * zz
    a_xz = xy * yz - xz * yy
    a_yz = xy * xz - xx * yz
    return np.array([[yy * zz - yz**2, a_xy, a_xz],
                     [a_xy, xx * zz - xz**2, a_yz],
                     [a_xz, a_yz, xx * yy - xy**2]])


def _adj_general(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=M.dtype)
    cof = np.empty_like(M)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            cof[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return cof.T


def det_threshold(M) -> float:
    """Scale-aware degeneracy threshold ``1e-12 * (tr M / n)**n``."""
    M = np.asarray(M)
    n = M.shape[0]
    s = abs(np.trace(M).real) / n
    if s == 0.0:
        s = float(np.max(np.abs(M), initial=0.0))
    return 1e-12 * s**n


class DetAdjInv(NamedTuple):
    det: float
    adj: np.ndarray
    inv: np.ndarray | None
    """``None`` when the matrix is degenerate."""
    degenerate: bool


def sym_det_adj_inv(M) -> DetAdjInv:
    """Determinant, adjugate and (if well defined) inverse of a real symmetric matrix.

    Dimensions 2 and 3 use the explicit cofactor expressions; other sizes fall
    back to cofactor expansion via LAPACK determinants of the minors. The
    inverse is only formed when ``|det| > det_threshold(M)``.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if n == 2:
        det, adj = det2(M), adj2(M)
    elif n == 3:
        det, adj = det3(M), adj3(M)
    else:
        det, adj = float(np.linalg.det(M)), _adj_general(M)
    det = float(det)
    degenerate = not abs(det) > det_threshold(M)
    inv = None if degenerate else adj / det
    return DetAdjInv(det, adj, inv, degenerate)


def psd_residual(M) -> float:
    """Smallest eigenvalue of a symmetric/Hermitian matrix.

    A matrix is PSD up to tolerance when this is ``>= -tol * scale``; the
    comparison is left to the caller.
    """
    M = check_hermitian(M)
    return float(np.linalg.eigvalsh(M)[0])


def commutator(A, B):
    return A @ B - B @ A


def anticommutator(A, B):
    return A @ B + B @ A
