"""Cramer-Rao-type bounds on the quantum metric.

All residuals are reported as ``lhs - rhs`` and are satisfied when
``residual >= -tol`` with ``tol = rtol * max(|lhs|, |rhs|, scale, 1e-14)``.
``scale`` is the natural magnitude of the bound (a power of the largest
matrix entry matching the polynomial degree of both sides), so that
residuals that are zero up to roundoff at vanishing ``det g`` are not
mistaken for violations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, DimMismatch, WrongDimension
from .geometry import GeometricTensor
from .numlin import psd_residual, sym_det_adj_inv
from .states import as_operator_set, check_state, cov_comm

BOUND_RTOL = 1e-9
ABS_FLOOR = 1e-14

XYZ = "xyz"


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    residual: float
    degenerate: bool
    satisfied: bool
    tol: float

    @classmethod
    def make(cls, name, lhs, rhs, scale=0.0, degenerate=False, rtol=BOUND_RTOL):
        lhs, rhs = float(lhs), float(rhs)
        tol = tol_bound(lhs, rhs, scale, rtol)
        res = lhs - rhs
        return cls(name, lhs, rhs, res, bool(degenerate), res >= -tol, tol)


def tol_bound(lhs, rhs, scale=0.0, rtol=BOUND_RTOL) -> float:
    return rtol * max(abs(lhs), abs(rhs), abs(scale), ABS_FLOOR)


def magnitude(g, omega) -> float:
    """Largest of ``|g_ij|`` and ``|omega_ij| / 2``; both sides scale linearly in it."""
    return max(float(np.max(np.abs(g), initial=0.0)),
               0.5 * float(np.max(np.abs(omega), initial=0.0)))


def pure_drho(psi, dpsi, ops) -> np.ndarray:
    """``Tr(d_mu rho O_a) = 2 Re <d_mu psi|O_a|psi>`` as a ``(D, n_ops)`` array."""
    psi = check_state(psi)
    dpsi = np.asarray(dpsi, dtype=complex)
    S = as_operator_set(ops)
    Opsi = np.array([O @ psi for O in S.ops])
    return 2.0 * (dpsi.conj() @ Opsi.T).real


@dataclass(frozen=True)
class QCRBResidual:
    matrix: np.ndarray
    min_eig: float
    scale: float

    @property
    def satisfied(self) -> bool:
        return self.min_eig >= -1e-10 * self.scale


def operator_qcrb_residual(psi, S, gt: GeometricTensor, drho) -> QCRBResidual:
    """``C - (1/4) drho^T g^{-1} drho`` and its smallest eigenvalue.

    Raises :class:`Degenerate` when ``det g`` is below the degeneracy threshold.
    """
    S = as_operator_set(S)
    drho = np.asarray(drho, dtype=float)
    if drho.shape != (gt.dim, len(S)):
        raise DimMismatch(f"drho shape {drho.shape}, expected {(gt.dim, len(S))}")
    dai = sym_det_adj_inv(gt.g)
    if dai.degenerate:
        raise Degenerate(f"det g = {dai.det:.3e} is below the degeneracy threshold")
    C = cov_comm(psi, S).C
    bound = 0.25 * drho.T @ dai.inv @ drho
    bound = 0.5 * (bound + bound.T)
    R = C - bound
    scale = max(np.trace(C), np.trace(bound), ABS_FLOOR)
    return QCRBResidual(R, psd_residual(R), float(scale))


def selfbound_matrix(gt: GeometricTensor) -> np.ndarray:
    """Polynomial self-bound matrix ``4 det(g) g + omega adj(g) omega`` (PSD when the bound holds)."""
    dai = sym_det_adj_inv(gt.g)
    M = 4.0 * dai.det * gt.g + gt.omega @ dai.adj @ gt.omega
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class SelfBoundResult:
    diagonal: tuple
    matrix: BoundReport
    det_g: float
    degenerate: bool

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r.residual for r in self.diagonal])

    @property
    def satisfied(self) -> bool:
        return all(r.satisfied for r in self.diagonal) and self.matrix.satisfied


def metric_self_bound(gt: GeometricTensor, rtol=BOUND_RTOL) -> SelfBoundResult:
    """Diagonal residuals ``V_aa = 4 det(g) g_aa + (omega adj(g) omega)_aa`` plus a matrix PSD report."""
    D = gt.dim
    dai = sym_det_adj_inv(gt.g)
    OAO = gt.omega @ dai.adj @ gt.omega
    scale = 4.0 * magnitude(gt.g, gt.omega) ** (D + 1)
    labels = XYZ if D <= 3 else [str(i) for i in range(D)]
    reports = tuple(
        BoundReport.make(f"Vg_{labels[a]}{labels[a]}", 4.0 * dai.det * gt.g[a, a], -OAO[a, a],
                         scale, dai.degenerate, rtol)
        for a in range(D))
    M = 4.0 * dai.det * gt.g + OAO
    mat = BoundReport.make("Vg_matrix_min_eig", psd_residual(0.5 * (M + M.T)), 0.0,
                           scale, dai.degenerate, rtol)
    return SelfBoundResult(reports, mat, dai.det, dai.degenerate)


def metric_self_bound_inverse(gt: GeometricTensor, rtol=BOUND_RTOL) -> tuple:
    """Diagonal bounds in the inverse form ``g_aa >= -(1/4) (omega g^-1 omega)_aa``."""
    dai = sym_det_adj_inv(gt.g)
    if dai.degenerate:
        raise Degenerate("inverse form needs a nondegenerate metric")
    rhs = -0.25 * np.diag(gt.omega @ dai.inv @ gt.omega)
    scale = magnitude(gt.g, gt.omega)
    return tuple(BoundReport.make(f"g_{XYZ[a]}{XYZ[a]}", gt.g[a, a], rhs[a], scale, False, rtol)
                 for a in range(gt.dim))


def bound_2d(gt: GeometricTensor, rtol=BOUND_RTOL) -> BoundReport:
    """``g_xx g_yy >= g_xy^2 + omega_xy^2 / 4`` for a two-parameter space."""
    if gt.dim != 2:
        raise WrongDimension(f"2D bound needs D = 2, got {gt.dim}")
    g, om = gt.g, gt.omega
    return BoundReport.make("g2d", g[0, 0] * g[1, 1], g[0, 1] ** 2 + 0.25 * om[0, 1] ** 2,
                            magnitude(g, om) ** 2, False, rtol)


def bound_3d_explicit(gt: GeometricTensor, rtol=BOUND_RTOL) -> tuple:
    """The three index-explicit 3D inequalities written with lower indices only.

    When ``det g`` is degenerate the ratio cannot be formed and the
    reports hold the polynomial form (both sides multiplied by ``4 det g``).
    """
    if gt.dim != 3:
        raise WrongDimension(f"3D bound needs D = 3, got {gt.dim}")
    g, om = gt.g, gt.omega
    xx, yy, zz = g[0, 0], g[1, 1], g[2, 2]
    xy, yz, zx = g[0, 1], g[1, 2], g[2, 0]
    Oxy, Oyz, Ozx = om[0, 1], om[1, 2], om[2, 0]
    denom = 4 * xx * yy * zz + 8 * xy * yz * zx - 4 * xx * yz**2 - 4 * yy * zx**2 - 4 * zz * xy**2
    numer = (
        Oxy**2 * (zz * xx - zx**2) + Ozx**2 * (xx * yy - xy**2)
        - 2 * Oxy * Ozx * (xy * zx - xx * yz),
        Oyz**2 * (xx * yy - xy**2) + Oxy**2 * (yy * zz - yz**2)
        - 2 * Oyz * Oxy * (yz * xy - yy * zx),
        Ozx**2 * (yy * zz - yz**2) + Oyz**2 * (zz * xx - zx**2)
        - 2 * Ozx * Oyz * (zx * yz - zz * xy),
    )
    dai = sym_det_adj_inv(g)
    m = magnitude(g, om)
    out = []
    for a, num in enumerate(numer):
        name = f"g_{XYZ[a]}{XYZ[a]}_3d"
        if dai.degenerate:
            out.append(BoundReport.make(name, denom * g[a, a], num, 4 * m**4, True, rtol))
        else:
            out.append(BoundReport.make(name, g[a, a], num / denom, m, False, rtol))
    return tuple(out)


def robertson_det(gt: GeometricTensor, rtol=BOUND_RTOL) -> BoundReport:
    """``det g >= det(omega / 2)``; the right side is exactly zero in odd dimension."""
    D = gt.dim
    lhs = sym_det_adj_inv(gt.g).det
    rhs = 0.0 if D % 2 else float(np.linalg.det(0.5 * gt.omega))
    return BoundReport.make("robertson_det", lhs, rhs, magnitude(gt.g, gt.omega) ** D, False, rtol)
