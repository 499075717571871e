"""Multi-observable uncertainty relations for pure states.

For an operator set with covariance matrix ``C`` and commutators
``<[A_a, A_b]>``, each operator obeys

    4 det(C) <dA_a^2>  >=  <[A_a, A_m]> adj(C)^{mn} <[A_n, A_a]>,

which for two operators reduces to the Robertson-Schrodinger relation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, WrongArity
from .numlin import sym_det_adj_inv
from .qcrb import BOUND_RTOL, BoundReport, magnitude, tol_bound
from .states import CovCommPair, as_operator_set, check_state, cov_comm


@dataclass(frozen=True)
class UncertaintyReport:
    labels: tuple
    lhs: np.ndarray
    rhs: np.ndarray
    residuals: np.ndarray
    tol: np.ndarray
    det_c: float
    degenerate: bool
    variances: np.ndarray
    bounds: np.ndarray | None
    """Per-operator variance bound ``rhs / (4 det C)``; ``None`` if degenerate."""

    @property
    def satisfied(self) -> bool:
        return bool(np.all(self.residuals >= -self.tol))

    @property
    def variance_sum(self) -> float:
        return float(np.sum(self.variances))

    @property
    def variance_product(self) -> float:
        return float(np.prod(self.variances))

    @property
    def bound_sum(self) -> float | None:
        return None if self.bounds is None else float(np.sum(self.bounds))

    @property
    def bound_product(self) -> float | None:
        return None if self.bounds is None else float(np.prod(self.bounds))


def _report(labels, C, lhs, rhs, det, degenerate, scale, rtol) -> UncertaintyReport:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    tol = np.array([tol_bound(a, b, scale, rtol) for a, b in zip(lhs, rhs)])
    bounds = None if degenerate else rhs / (4.0 * det)
    return UncertaintyReport(tuple(labels), lhs, rhs, lhs - rhs, tol, float(det),
                             bool(degenerate), np.diag(C).copy(), bounds)


def multi_op_bound_from(cc: CovCommPair, labels=None, rtol=BOUND_RTOL) -> UncertaintyReport:
    """Adjugate-form residuals from a precomputed covariance/commutator pair."""
    n = cc.C.shape[0]
    if n < 2:
        raise WrongArity("need at least two operators")
    labels = labels or tuple(f"O{i + 1}" for i in range(n))
    dai = sym_det_adj_inv(cc.C)
    # <[A_a,A_m]> <[A_n,A_a]> = (i K_am)(i K_na) = K_am K_an
    rhs = np.einsum("am,mn,an->a", cc.K, dai.adj, cc.K)
    lhs = 4.0 * dai.det * np.diag(cc.C)
    scale = 4.0 * magnitude(cc.C, cc.K) ** (n + 1)
    return _report(labels, cc.C, lhs, rhs, dai.det, dai.degenerate, scale, rtol)


def multi_op_bound(psi, S, rtol=BOUND_RTOL) -> UncertaintyReport:
    S = as_operator_set(S)
    psi = check_state(psi)
    if len(S) < 2:
        raise WrongArity("need at least two operators")
    return multi_op_bound_from(cov_comm(psi, S), S.labels, rtol)


def robertson_schrodinger(psi, A, B, rtol=BOUND_RTOL) -> BoundReport:
    """``<dA^2><dB^2> >= |<{dA,dB}>|^2/4 + |<[A,B]>|^2/4``."""
    psi = check_state(psi)
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape or A.shape[0] != psi.shape[0]:
        raise DimMismatch("state and operators must share one dimension")
    mA = np.vdot(psi, A @ psi).real
    mB = np.vdot(psi, B @ psi).real
    dA = A - mA * np.eye(len(psi))
    dB = B - mB * np.eye(len(psi))
    varA = np.vdot(psi, dA @ dA @ psi).real
    varB = np.vdot(psi, dB @ dB @ psi).real
    anti = np.vdot(psi, (dA @ dB + dB @ dA) @ psi)
    comm = np.vdot(psi, (A @ B - B @ A) @ psi)
    lhs = varA * varB
    rhs = 0.25 * abs(anti) ** 2 + 0.25 * abs(comm) ** 2
    scale = max(abs(varA), abs(varB), 0.5 * abs(comm)) ** 2
    return BoundReport.make("robertson_schrodinger", lhs, rhs, scale, False, rtol)


def three_op_explicit(psi, S, rtol=BOUND_RTOL) -> UncertaintyReport:
    """The three-operator relations evaluated term by term.

    Written with variances ``<dA^2>``, anticommutators ``<{dA, dB}>`` and
    commutators ``<[A, B]>`` as they appear in the expanded form, with both
    sides multiplied by ``4 det C``.
    """
    S = as_operator_set(S)
    psi = check_state(psi)
    if len(S) != 3:
        raise WrongArity(f"exactly three operators required, got {len(S)}")
    cc = cov_comm(psi, S)
    C = cc.C
    vx, vy, vz = C[0, 0], C[1, 1], C[2, 2]
    # <{dA, dB}> = 2 C_ab
    axy, ayz, azx = 2 * C[0, 1], 2 * C[1, 2], 2 * C[2, 0]
    # <[A, B]> = i K_ab
    cxy, cyz, czx = 1j * cc.K[0, 1], 1j * cc.K[1, 2], 1j * cc.K[2, 0]

    det = (vx * vy * vz + 0.25 * axy * ayz * azx
           - 0.25 * ayz**2 * vx - 0.25 * azx**2 * vy - 0.25 * axy**2 * vz)

    rx = (-cxy**2 * vz * vx + 0.25 * cxy**2 * azx**2
          + 0.5 * cxy * czx * axy * azx - cxy * czx * ayz * vx
          - czx**2 * vx * vy + 0.25 * czx**2 * axy**2)
    ry = (-cyz**2 * vx * vy + 0.25 * cyz**2 * axy**2
          + 0.5 * cyz * cxy * ayz * axy - cyz * cxy * azx * vy
          - cxy**2 * vy * vz + 0.25 * cxy**2 * ayz**2)
    rz = (-czx**2 * vy * vz + 0.25 * czx**2 * ayz**2
          + 0.5 * czx * cyz * azx * ayz - czx * cyz * axy * vz
          - cyz**2 * vz * vx + 0.25 * cyz**2 * azx**2)
    rhs = np.array([rx, ry, rz])
    if np.max(np.abs(rhs.imag)) > 1e-10 * max(np.max(np.abs(rhs.real)), 1e-300):
        raise ArithmeticError("commutator products are not real")
    lhs = 4.0 * det * np.array([vx, vy, vz])
    dai = sym_det_adj_inv(C)
    scale = 4.0 * magnitude(C, cc.K) ** 4
    return _report(S.labels, C, lhs, rhs.real, det, dai.degenerate, scale, rtol)
