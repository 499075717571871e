"""Seeded random instances: states, operators, pure and mixed state families."""
from __future__ import annotations

import numpy as np

from .estimation import DensityFamily
from .models import BlochModel, two_band_model


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (X + X.conj().T)


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def random_pure_family(rng: np.random.Generator, dim: int, nparams: int):
    """State ``psi(k) = normalize(v0 + sum_mu k_mu v_mu)`` and its derivatives at ``k = 0``.

    Returns ``(psi, dpsi)``; the derivatives keep their component along
    ``psi`` (a generic gauge), as a real family would.
    """
    v0 = random_state(rng, dim)
    vs = rng.normal(size=(nparams, dim)) + 1j * rng.normal(size=(nparams, dim))
    # d/dk (v/|v|) at |v| = 1: v' - Re<v|v'> v
    dpsi = vs - np.real(vs.conj() @ v0)[:, None] * v0[None, :]
    return v0, dpsi


def random_mixed_family(rng: np.random.Generator, dim: int, nparams: int) -> DensityFamily:
    """Full-rank family ``rho(k) = A(k) A(k)^+ / Tr`` with ``A(k) = A0 + sum k_mu A_mu``."""
    A0 = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    As = rng.normal(size=(nparams, dim, dim)) + 1j * rng.normal(size=(nparams, dim, dim))

    def A(k):
        return A0 + np.einsum("u,uab->ab", k, As)

    def rho(k):
        M = A(k) @ A(k).conj().T
        return M / np.trace(M).real

    def drho(k):
        a = A(k)
        M = a @ a.conj().T
        t = np.trace(M).real
        dM = np.einsum("uab,cb->uac", As, a.conj()) + np.einsum("ab,ucb->uac", a, As.conj())
        dt = np.einsum("uaa->u", dM).real
        return dM / t - M[None] * (dt / t**2)[:, None, None]

    return DensityFamily(rho, nparams, drho)


def random_d_model(rng: np.random.Generator, nparams: int = 2) -> BlochModel:
    """Two-band model with ``d(k) = d0 + W sin(k) + U cos(k)`` for random ``d0, W, U``."""
    d0 = rng.normal(size=3)
    W = rng.normal(size=(nparams, 3))
    U = rng.normal(size=(nparams, 3))

    def d(k):
        return d0 + np.sin(k) @ W + np.cos(k) @ U

    def grad(k):
        return np.cos(k)[:, None] * W - np.sin(k)[:, None] * U

    return two_band_model(d, grad, nparams)
