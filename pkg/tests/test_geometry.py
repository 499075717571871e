import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bloch_vector_oracle, plaquette_curvature
from qgbound.errors import DimMismatch, GapClosing
from qgbound.geometry import (
    GeometricTensor, band_derivative, build_generators, projector_derivatives,
    qgt_fd, qgt_from_state, qgt_perturbative,
)
from qgbound.models import BlochModel, ti_model, two_band_model, wilson_dirac_model
from qgbound.samplers import random_pure_family
from qgbound.states import cov_comm

seeds = st.integers(0, 2**32 - 1)
kcomp = st.floats(-np.pi, np.pi, allow_nan=False)

M2 = 1.5


def d2(k):
    return np.array([np.sin(k[0]), np.sin(k[1]), M2 - np.cos(k[0]) - np.cos(k[1])])


def grad_d2(k):
    return np.array([[np.cos(k[0]), 0.0, np.sin(k[0])], [0.0, np.cos(k[1]), np.sin(k[1])]])


PLANE = two_band_model(d2, grad_d2, 2)


@settings(max_examples=40)
@given(kcomp, kcomp)
def test_two_band_closed_form(kx, ky):
    k = np.array([kx, ky])
    g_ref, om_ref = bloch_vector_oracle(d2, grad_d2, k)
    gt = qgt_perturbative(PLANE, k)
    np.testing.assert_allclose(gt.g, g_ref, atol=1e-10)
    np.testing.assert_allclose(gt.omega, om_ref, atol=1e-10)


def test_two_band_example_point():
    k = np.array([np.pi / 2, np.pi / 2])
    g_ref, om_ref = bloch_vector_oracle(d2, grad_d2, k)
    gt = qgt_perturbative(PLANE, k)
    np.testing.assert_allclose(gt.g, g_ref, atol=1e-12)
    np.testing.assert_allclose(gt.omega, om_ref, atol=1e-12)
    # d = (1, 1, 1.5): the mirror kx <-> ky makes g_xx = g_yy
    assert gt.g[0, 0] == pytest.approx(gt.g[1, 1], rel=1e-12)


def test_wilson_dirac_gapped_for_default_mass(rng):
    model = wilson_dirac_model()
    for k in rng.uniform(-np.pi, np.pi, size=(200, 3)):
        assert np.linalg.norm(np.linalg.eigvalsh(model.hamiltonian(k))) >= 0.5 * np.sqrt(2) - 1e-12


def test_curvature_sign_against_plaquette_phase():
    def lower(k):
        return np.linalg.eigh(PLANE.hamiltonian(k))[1][:, 0]

    for k in ([0.3, -0.7], [1.1, 0.4], [-2.0, 2.5]):
        om = qgt_perturbative(PLANE, np.array(k)).omega[0, 1]
        assert plaquette_curvature(lower, k) == pytest.approx(om, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("model", [ti_model(field=(0.1, 0.2, 0.3)), ti_model(field=(0.5, 1, 2)),
                                   wilson_dirac_model()], ids=["ti-weak", "ti-strong", "two-band"])
def test_band_sum_vs_projector_oracle(model, rng):
    for k in rng.uniform(-np.pi, np.pi, size=(10, 3)):
        a, b = qgt_perturbative(model, k), qgt_fd(model, k)
        np.testing.assert_allclose(a.g, b.g, atol=1e-6)
        np.testing.assert_allclose(a.omega, b.omega, atol=1e-6)


def test_projector_derivative_matches_finite_difference(rng):
    model = ti_model(field=(0.1, 0.2, 0.3))
    k = rng.uniform(-np.pi, np.pi, 3)
    P, dP = projector_derivatives(model, k)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    h = 1e-5
    for mu in range(3):
        e = np.zeros(3)
        e[mu] = h
        fd = (projector_derivatives(model, k + e)[0] - projector_derivatives(model, k - e)[0]) / (2 * h)
        np.testing.assert_allclose(dP[mu], fd, atol=1e-7)


def test_pristine_curvature_vanishes(rng):
    model = ti_model()
    for k in rng.uniform(-np.pi, np.pi, size=(20, 3)):
        assert np.max(np.abs(qgt_perturbative(model, k).omega)) <= 1e-10


@settings(max_examples=40)
@given(st.integers(2, 5), st.integers(1, 3), seeds)
def test_metric_psd_and_symmetries(dim, D, seed):
    rng = np.random.default_rng(seed)
    gt = qgt_from_state(*random_pure_family(rng, dim, D))
    np.testing.assert_array_equal(gt.g, gt.g.T)
    np.testing.assert_array_equal(gt.omega, -gt.omega.T)
    assert np.linalg.eigvalsh(gt.g)[0] >= -1e-12 * max(1.0, np.trace(gt.g))
    # g + i omega / 2 is the (PSD) quantum geometric tensor
    assert np.linalg.eigvalsh(gt.g - 0.5j * gt.omega)[0] >= -1e-10 * max(1.0, np.trace(gt.g))


@settings(max_examples=40)
@given(st.integers(2, 5), st.integers(1, 3), seeds)
def test_gauge_invariance(dim, D, seed):
    rng = np.random.default_rng(seed)
    psi, dpsi = random_pure_family(rng, dim, D)
    ref = qgt_from_state(psi, dpsi)
    # psi -> exp(i phi(k)) psi at a point where phi = phi0
    phi0, dphi = rng.uniform(0, 2 * np.pi), rng.normal(size=D)
    u = np.exp(1j * phi0)
    gt = qgt_from_state(u * psi, u * (dpsi + 1j * dphi[:, None] * psi[None, :]))
    np.testing.assert_allclose(gt.g, ref.g, atol=1e-12)
    np.testing.assert_allclose(gt.omega, ref.omega, atol=1e-12)


def test_basis_change_invariance(rng):
    model = ti_model(field=(0.1, 0.2, 0.3))
    k = rng.uniform(-np.pi, np.pi, 3)
    U = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    rotated = BlochModel(4, 3, lambda q: U @ model.hamiltonian(q) @ U.conj().T,
                         lambda q: np.einsum("ab,ubc,dc->uad", U, model.gradient(q), U.conj()), n_occ=2)
    a, b = qgt_perturbative(model, k), qgt_perturbative(rotated, k)
    np.testing.assert_allclose(a.g, b.g, atol=1e-12)
    np.testing.assert_allclose(a.omega, b.omega, atol=1e-12)


def test_single_band_matches_band_sum(rng):
    model = ti_model(field=(0.5, 1, 2))
    k = rng.uniform(-np.pi, np.pi, 3)
    psi, dpsi = band_derivative(model, k, 0)
    a, b = qgt_from_state(psi, dpsi), qgt_perturbative(model, k, n_occ=1)
    np.testing.assert_allclose(a.g, b.g, atol=1e-12)
    np.testing.assert_allclose(a.omega, b.omega, atol=1e-12)
    np.testing.assert_allclose(dpsi.conj() @ psi, 0, atol=1e-14)


def test_band_derivative_rejects_kramers_pair():
    with pytest.raises(GapClosing):
        band_derivative(ti_model(), np.array([0.1, 0.2, 0.3]), 0)


@settings(max_examples=40)
@given(st.integers(2, 5), st.integers(1, 3), seeds)
def test_generators_reproduce_geometry(dim, D, seed):
    rng = np.random.default_rng(seed)
    psi, dpsi = random_pure_family(rng, dim, D)
    gt = qgt_from_state(psi, dpsi)
    gens = build_generators(psi, dpsi)
    cc = cov_comm(psi, gens.lambdas)
    scale = max(1.0, np.max(np.abs(gt.g)))
    np.testing.assert_allclose(cc.C, gt.g, atol=1e-12 * scale)
    np.testing.assert_allclose(cc.omega, gt.omega, atol=1e-12 * scale)
    np.testing.assert_allclose(cc.means, 0, atol=1e-12 * scale)
    # Tr(d_mu rho Lambda_nu) = omega_mu_nu
    rho_dot = np.einsum("ua,b->uab", dpsi, psi.conj())
    rho_dot = rho_dot + rho_dot.conj().transpose(0, 2, 1)
    T = np.einsum("uab,vba->uv", rho_dot, np.array(gens.lambdas)).real
    np.testing.assert_allclose(T, gt.omega, atol=1e-12 * scale)
    for L, d in zip(gens.lambdas, dpsi):
        D_ = d - np.vdot(psi, d) * psi
        np.testing.assert_allclose(-1j * L @ psi, D_, atol=1e-12 * scale)


def test_constant_model_has_flat_geometry():
    H = np.diag([-1.0, 1.0]).astype(complex)
    m = BlochModel(2, 2, lambda k: H, lambda k: np.zeros((2, 2, 2)))
    gt = qgt_perturbative(m, np.zeros(2))
    np.testing.assert_array_equal(gt.g, 0)
    np.testing.assert_array_equal(gt.omega, 0)


def test_restrict_and_errors():
    gt = GeometricTensor(np.arange(9.0).reshape(3, 3), np.zeros((3, 3)))
    r = gt.restrict([0, 2])
    np.testing.assert_array_equal(r.g, [[0, 2], [6, 8]])
    assert r.dim == 2
    with pytest.raises(ValueError):
        qgt_fd(wilson_dirac_model(), np.ones(3), h=1e-2)
    with pytest.raises(DimMismatch):
        build_generators(np.array([1, 0]), np.zeros((2, 3)))
    with pytest.raises(GapClosing):
        qgt_perturbative(wilson_dirac_model(1.0), np.array([0, 0, np.pi]))
