"""Symmetric logarithmic derivatives, the quantum Fisher information matrix
and the operator Cramer-Rao bound for mixed states."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import Degenerate, DimMismatch, InvalidDensity
from .numlin import check_hermitian, psd_residual, sym_det_adj_inv
from .states import as_operator_set

SLD_RCUT = 1e-10
FD_STEP = 1e-5


def check_density(rho) -> np.ndarray:
    try:
        rho = check_hermitian(rho)
    except ValueError as exc:
        raise InvalidDensity(str(exc)) from exc
    if abs(np.trace(rho).real - 1.0) > 1e-12:
        raise InvalidDensity(f"trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -1e-12:
        raise InvalidDensity("density matrix is not positive semidefinite")
    return rho


@dataclass(frozen=True)
class DensityFamily:
    """A parametrised density matrix ``rho(k)``.

    ``derivative(k)`` should return the ``(nparams, n, n)`` array of d rho/dk;
    when it is omitted, central differences with step ``FD_STEP`` are used.
    """
    rho: Callable[[np.ndarray], np.ndarray]
    nparams: int
    derivative: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, k) -> np.ndarray:
        return self.rho(np.asarray(k, dtype=float))

    def drho(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if self.derivative is not None:
            return np.asarray(self.derivative(k))
        out = []
        for mu in range(self.nparams):
            step = np.zeros_like(k)
            step[mu] = FD_STEP
            out.append((self.rho(k + step) - self.rho(k - step)) / (2 * FD_STEP))
        return np.array(out)


def pure_family(psi_of_k: Callable, nparams: int) -> DensityFamily:
    def rho(k):
        psi = np.asarray(psi_of_k(k), dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return np.outer(psi, psi.conj())
    return DensityFamily(rho, nparams)


@dataclass(frozen=True)
class SLDSet:
    L: np.ndarray
    """``(D, n, n)`` stack of Hermitian SLD operators."""
    cutoff: float


def sld(rho, drho) -> SLDSet:
    """Solve ``d_mu rho = (rho L_mu + L_mu rho) / 2`` in the eigenbasis of ``rho``.

    Matrix elements between eigenvectors with ``lam_i + lam_j <= 1e-10 max(lam)``
    are set to zero.
    """
    rho = check_density(rho)
    drho = np.asarray(drho)
    if drho.ndim != 3 or drho.shape[1:] != rho.shape:
        raise DimMismatch(f"drho shape {drho.shape} does not match rho {rho.shape}")
    lam, U = np.linalg.eigh(rho)
    cutoff = SLD_RCUT * lam.max()
    denom = lam[:, None] + lam[None, :]
    mask = denom > cutoff
    inv = np.where(mask, 2.0 / np.where(mask, denom, 1.0), 0.0)
    d_eig = np.einsum("ai,uab,bj->uij", U.conj(), drho, U)
    L = np.einsum("ai,uij,bj->uab", U, d_eig * inv, U.conj())
    L = 0.5 * (L + L.conj().transpose(0, 2, 1))
    return SLDSet(L, float(cutoff))


def qfim(rho, L: SLDSet) -> np.ndarray:
    """``F_{mu nu} = Tr rho {L_mu, L_nu} / 2``."""
    rho = np.asarray(rho)
    Ls = np.asarray(L.L if isinstance(L, SLDSet) else L)
    if Ls.shape[1:] != rho.shape:
        raise DimMismatch("SLD and density matrix dimensions differ")
    rL = np.einsum("ab,ubc->uac", rho, Ls)
    F = np.einsum("uac,vca->uv", rL, Ls).real
    return 0.5 * (F + F.T)


def density_cov(rho, S) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrised covariance matrix ``Tr rho {dA, dB}/2`` and means."""
    S = as_operator_set(S)
    rho = np.asarray(rho)
    if S.dim != rho.shape[0]:
        raise DimMismatch("operators and density matrix dimensions differ")
    ops = np.array(S.ops)
    means = np.einsum("ab,uba->u", rho, ops).real
    second = np.einsum("ab,ubc,vca->uv", rho, ops, ops).real
    C = 0.5 * (second + second.T) - np.outer(means, means)
    return C, means


def drho_matrix(drho, S) -> np.ndarray:
    """``Tr(d_mu rho O_a)`` as a real ``(D, n_ops)`` array."""
    S = as_operator_set(S)
    return np.einsum("uab,oba->uo", np.asarray(drho), np.array(S.ops)).real


@dataclass(frozen=True)
class MixedQCRB:
    matrix: np.ndarray
    min_eig: float
    F: np.ndarray
    C: np.ndarray
    scale: float


def mixed_qcrb_residual(rho, drho, S) -> MixedQCRB:
    """``C - Tr(grad rho O)^T F^{-1} Tr(grad rho O)`` for any operator set."""
    S = as_operator_set(S)
    F = qfim(rho, sld(rho, drho))
    dai = sym_det_adj_inv(F)
    if dai.degenerate:
        raise Degenerate(f"QFIM determinant {dai.det:.3e} below threshold")
    C, _ = density_cov(rho, S)
    T = drho_matrix(drho, S)
    bound = T.T @ np.linalg.solve(F, T)
    bound = 0.5 * (bound + bound.T)
    R = C - bound
    scale = max(float(np.trace(C)), float(np.trace(bound)), 1e-14)
    return MixedQCRB(R, psd_residual(R), F, C, scale)
