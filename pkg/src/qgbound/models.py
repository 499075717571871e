"""Bloch Hamiltonian families with analytic momentum gradients.

Two families are provided:

* the four-band class-AII topological-insulator lattice model
  ``H(k) = d(k) . Gamma + B . sigma`` in the basis (s up, p up, s down, p down),
* a generic two-band model ``H(k) = d(k) . sigma``.

Units have lattice constant and hbar equal to one, so momenta are
dimensionless and live in (-pi, pi].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import GapClosing

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def gamma_matrices() -> tuple[np.ndarray, ...]:
    """The five 4x4 Dirac matrices.

    Ordered as (sx tx, sy tx, sz tx, 1 ty, 1 tz), where the first Kronecker
    factor acts on spin and the second on the s/p orbital index.
    """
    return (np.kron(SIGMA_X, SIGMA_X),
            np.kron(SIGMA_Y, SIGMA_X),
            np.kron(SIGMA_Z, SIGMA_X),
            np.kron(SIGMA_0, SIGMA_Y),
            np.kron(SIGMA_0, SIGMA_Z))


def spin_matrices() -> tuple[np.ndarray, ...]:
    """Spin operators sigma_a (x) 1_orbital in the four-band basis."""
    return tuple(np.kron(s, SIGMA_0) for s in PAULI)


_GAMMA = gamma_matrices()
_SPIN = spin_matrices()


@dataclass(frozen=True)
class TIParams:
    """Band parameters in eV; defaults are the Bi2Se3-like set."""
    M: float = -0.3
    A: float = 2.87
    B: float = 0.3

    def __post_init__(self):
        if not all(np.isfinite([self.M, self.A, self.B])):
            raise ValueError("TI parameters must be finite")


@dataclass(frozen=True)
class BlochModel:
    """A parametrised Hermitian matrix family with analytic gradient.

    ``hamiltonian(k)`` returns a ``(dim, dim)`` array and ``gradient(k)`` a
    ``(nparams, dim, dim)`` array of dH/dk_mu. ``n_occ`` is the default number
    of occupied bands and ``spin_ops`` the observables used for the spin
    uncertainty relation on the lowest band.
    """
    dim: int
    nparams: int
    hamiltonian: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    n_occ: int = 1
    spin_ops: tuple = field(default=(), repr=False)
    name: str = "model"

    def evaluate(self, k) -> tuple[np.ndarray, np.ndarray]:
        k = np.asarray(k, dtype=float)
        return self.hamiltonian(k), self.gradient(k)


def d_vector(k, p: TIParams = TIParams()) -> tuple[np.ndarray, np.ndarray]:
    """Five-component d-vector and its ``(3, 5)`` momentum gradient."""
    kx, ky, kz = np.asarray(k, dtype=float)
    d = np.array([
        p.A * np.sin(ky),
        -p.A * np.sin(kx),
        0.0,
        p.A * np.sin(kz),
        p.M + 6 * p.B - 2 * p.B * (np.cos(kx) + np.cos(ky) + np.cos(kz)),
    ])
    grad = np.zeros((3, 5))
    grad[1, 0] = p.A * np.cos(ky)
    grad[0, 1] = -p.A * np.cos(kx)
    grad[2, 3] = p.A * np.cos(kz)
    grad[:, 4] = 2 * p.B * np.sin([kx, ky, kz])
    return d, grad


def ti_hamiltonian(k, p: TIParams = TIParams(), field=(0.0, 0.0, 0.0)):
    """Four-band Hamiltonian ``d(k).Gamma + B.sigma`` and its gradient."""
    d, grad = d_vector(k, p)
    H = np.einsum("i,iab->ab", d, _GAMMA)
    H = H + np.einsum("i,iab->ab", np.asarray(field, dtype=float), _SPIN)
    dH = np.einsum("mi,iab->mab", grad, _GAMMA)
    return H, dH


def ti_model(p: TIParams = TIParams(), field=(0.0, 0.0, 0.0)) -> BlochModel:
    field = tuple(float(b) for b in field)
    if len(field) != 3 or not all(np.isfinite(field)):
        raise ValueError("field must be three finite numbers")
    return BlochModel(
        dim=4,
        nparams=3,
        hamiltonian=lambda k: ti_hamiltonian(k, p, field)[0],
        gradient=lambda k: ti_hamiltonian(k, p, field)[1],
        n_occ=2,
        spin_ops=_SPIN,
        name="ti3d",
    )


GAP_EPS = 1e-10


def two_band_model(d: Callable, grad_d: Callable, nparams: int) -> BlochModel:
    """Two-band model ``H = d(k).sigma`` built from a d-vector and its gradient.

    ``d(k)`` returns three numbers and ``grad_d(k)`` a ``(nparams, 3)`` array.
    Evaluating at a point where ``|d| < 1e-10`` raises :class:`GapClosing`.
    """
    pauli = np.array(PAULI)

    def ham(k):
        dk = np.asarray(d(k), dtype=float)
        if np.linalg.norm(dk) < GAP_EPS:
            raise GapClosing(f"|d| vanishes at k={np.asarray(k).tolist()}")
        return np.einsum("i,iab->ab", dk, pauli)

    def grad(k):
        return np.einsum("mi,iab->mab", np.asarray(grad_d(k), dtype=float), pauli)

    return BlochModel(dim=2, nparams=nparams, hamiltonian=ham, gradient=grad,
                      n_occ=1, spin_ops=PAULI, name="two-band")


def wilson_dirac_model(m: float = 3.5) -> BlochModel:
    """3D two-band lattice model with ``d = (sin kx, sin ky, m - cos kx - cos ky - cos kz)``.

    The gap closes somewhere in the zone for ``|m| <= 3``; the default
    ``m = 3.5`` keeps ``|d| >= 0.5`` everywhere.
    """

    def d(k):
        kx, ky, kz = k
        return (np.sin(kx), np.sin(ky), m - np.cos(kx) - np.cos(ky) - np.cos(kz))

    def grad_d(k):
        kx, ky, kz = k
        return np.array([[np.cos(kx), 0.0, np.sin(kx)],
                         [0.0, np.cos(ky), np.sin(ky)],
                         [0.0, 0.0, np.sin(kz)]])

    return two_band_model(d, grad_d, nparams=3)


def finite_difference_gradient(model: BlochModel, k, h: float = 1e-5) -> np.ndarray:
    """Central-difference dH/dk_mu, used to validate analytic gradients."""
    k = np.asarray(k, dtype=float)
    out = np.empty((model.nparams, model.dim, model.dim), dtype=complex)
    for mu in range(model.nparams):
        step = np.zeros_like(k)
        step[mu] = h
        out[mu] = (model.hamiltonian(k + step) - model.hamiltonian(k - step)) / (2 * h)
    return out


def as_kpoint(k: Sequence[float]) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise ValueError("k-point components must be finite")
    return k
