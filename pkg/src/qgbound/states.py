"""Pure states, occupied subspaces and operator covariances."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimMismatch, GapClosing, InvalidSpin
from .numlin import EigenSystem, anticommutator, check_hermitian, commutator
from .models import PAULI

NORM_TOL = 1e-12


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi / np.linalg.norm(psi)


def check_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimMismatch(f"state must be a vector, got shape {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("state is not normalised")
    return psi


@dataclass(frozen=True)
class OperatorSet:
    ops: tuple
    labels: tuple

    def __post_init__(self):
        if not self.ops:
            raise ValueError("operator set must be nonempty")
        if len(self.labels) != len(self.ops):
            raise ValueError("one label per operator required")
        dims = {np.shape(o) for o in self.ops}
        if len(dims) != 1:
            raise DimMismatch(f"operators have different shapes: {sorted(dims)}")
        for o in self.ops:
            check_hermitian(o)

    @classmethod
    def of(cls, ops: Sequence, labels: Sequence[str] | None = None) -> "OperatorSet":
        ops = tuple(np.asarray(o) for o in ops)
        if labels is None:
            labels = tuple(f"O{i + 1}" for i in range(len(ops)))
        return cls(ops, tuple(labels))

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


def as_operator_set(S) -> OperatorSet:
    return S if isinstance(S, OperatorSet) else OperatorSet.of(S)


def _check_dims(psi, dim):
    if psi.shape[0] != dim:
        raise DimMismatch(f"state has dimension {psi.shape[0]}, operator {dim}")


def expectation(psi, O) -> float:
    """<psi|O|psi> for Hermitian ``O``; the imaginary roundoff is dropped."""
    psi = np.asarray(psi, dtype=complex)
    O = np.asarray(O)
    _check_dims(psi, O.shape[0])
    val = np.vdot(psi, O @ psi)
    scale = max(np.max(np.abs(O), initial=0.0), 1.0)
    if abs(val.imag) > 1e-12 * scale:
        raise ValueError("expectation value is not real; is the operator Hermitian?")
    return float(val.real)


@dataclass(frozen=True)
class CovCommPair:
    """Covariance matrix, commutator matrix and means of an operator set.

    ``C[a, b] = <{dA, dB}>/2`` and ``K[a, b] = -i <[A, B]>`` (real and
    antisymmetric). With this convention the Berry-curvature-like quantity
    ``i <[A, B]>`` equals ``-K``.
    """
    C: np.ndarray
    K: np.ndarray
    means: np.ndarray

    @property
    def omega(self) -> np.ndarray:
        return -self.K


def cov_comm(psi, S) -> CovCommPair:
    S = as_operator_set(S)
    psi = np.asarray(psi, dtype=complex)
    _check_dims(psi, S.dim)
    vecs = np.array([O @ psi for O in S.ops])  # O_a |psi>
    means = np.array([np.vdot(psi, v).real for v in vecs])
    gram = vecs.conj() @ vecs.T  # <psi|O_a O_b|psi>
    C = gram.real - np.outer(means, means)
    K = 2 * gram.imag  # -i(<AB> - <BA>) = 2 Im <AB>
    C = 0.5 * (C + C.T)
    K = 0.5 * (K - K.T)
    return CovCommPair(C, K, means)


def cov_comm_direct(psi, S) -> CovCommPair:
    """Same as :func:`cov_comm` but built literally from anticommutators and commutators."""
    S = as_operator_set(S)
    psi = np.asarray(psi, dtype=complex)
    _check_dims(psi, S.dim)
    n = len(S)
    eye = np.eye(S.dim)
    means = np.array([expectation(psi, O) for O in S.ops])
    dO = [O - m * eye for O, m in zip(S.ops, means)]
    C = np.empty((n, n))
    K = np.empty((n, n))
    for a in range(n):
        for b in range(n):
            C[a, b] = 0.5 * np.vdot(psi, anticommutator(dO[a], dO[b]) @ psi).real
            K[a, b] = (-1j * np.vdot(psi, commutator(S.ops[a], S.ops[b]) @ psi)).real
    return CovCommPair(C, K, means)


# -- operator builders ------------------------------------------------------

def pauli_ops() -> OperatorSet:
    return OperatorSet(PAULI, ("sx", "sy", "sz"))


def _two_l(l) -> int:
    two_l = Fraction(l) * 2
    if two_l.denominator != 1 or two_l < 0:
        raise InvalidSpin(f"angular momentum must be a nonnegative (half-)integer, got {l!r}")
    return int(two_l)


def angular_momentum_ops(l) -> OperatorSet:
    """L_x, L_y, L_z (hbar = 1) in the basis m = l, l-1, ..., -l."""
    two_l = _two_l(l)
    lv = two_l / 2
    m = lv - np.arange(two_l + 1)
    # <m+1|L+|m> = sqrt(l(l+1) - m(m+1))
    lp = np.diag(np.sqrt(lv * (lv + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    lm = lp.conj().T
    Lx = (lp + lm) / 2
    Ly = (lp - lm) / 2j
    Lz = np.diag(m).astype(complex)
    return OperatorSet((Lx, Ly, Lz), ("Lx", "Ly", "Lz"))


def lm_state(l, m) -> np.ndarray:
    """Basis vector |l, m> matching :func:`angular_momentum_ops`."""
    two_l = _two_l(l)
    idx = Fraction(l) - Fraction(m)
    if idx.denominator != 1 or not 0 <= idx <= two_l:
        raise InvalidSpin(f"m={m!r} is not allowed for l={l!r}")
    psi = np.zeros(two_l + 1, dtype=complex)
    psi[int(idx)] = 1.0
    return psi


# -- occupied subspaces -----------------------------------------------------

@dataclass(frozen=True)
class OccupiedSubspace:
    basis: np.ndarray
    energies: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def gap_eps(values) -> float:
    return 1e-8 * max(float(values[-1] - values[0]), 1e-300)


def slater_geometry_inputs(es: EigenSystem, n_occ: int) -> OccupiedSubspace:
    """The ``n_occ`` lowest eigenvectors, with a check that they are gapped."""
    values, vectors = es
    if not 0 < n_occ < len(values):
        raise ValueError(f"n_occ must be in [1, {len(values) - 1}], got {n_occ}")
    gap = values[n_occ] - values[n_occ - 1]
    if gap <= gap_eps(values):
        raise GapClosing(f"gap {gap:.3e} above occupied band {n_occ} is closed")
    return OccupiedSubspace(vectors[:, :n_occ], values[:n_occ])


occupied_subspace = slater_geometry_inputs
