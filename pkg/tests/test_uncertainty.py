import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_herm, random_ket
from qgbound.errors import DimMismatch, WrongArity
from qgbound.models import ti_model
from qgbound.numlin import eigh
from qgbound.states import angular_momentum_ops, cov_comm, lm_state, pauli_ops
from qgbound.uncertainty import (
    multi_op_bound, multi_op_bound_from, robertson_schrodinger, three_op_explicit,
)

seeds = st.integers(0, 2**32 - 1)


def rs_oracle(psi, A, B):
    """Robertson-Schrodinger sides from plain expectation values."""
    e = lambda X: np.vdot(psi, X @ psi)
    vA = (e(A @ A) - e(A) ** 2).real
    vB = (e(B @ B) - e(B) ** 2).real
    cov = (0.5 * e(A @ B + B @ A) - e(A) * e(B)).real
    comm = e(A @ B - B @ A)
    return vA * vB, cov**2 + 0.25 * abs(comm) ** 2


@settings(max_examples=100)
@given(seeds, st.integers(2, 6))
def test_robertson_schrodinger_oracle(seed, n):
    rng = np.random.default_rng(seed)
    psi, A, B = random_ket(rng, n), random_herm(rng, n), random_herm(rng, n)
    r = robertson_schrodinger(psi, A, B)
    lhs, rhs = rs_oracle(psi, A, B)
    assert r.satisfied
    assert r.lhs == pytest.approx(lhs, rel=1e-10, abs=1e-12)
    assert r.rhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@settings(max_examples=100)
@given(seeds, st.integers(2, 6))
def test_two_operator_case_is_scaled_robertson_schrodinger(seed, n):
    rng = np.random.default_rng(seed)
    psi, A, B = random_ket(rng, n), random_herm(rng, n), random_herm(rng, n)
    m = multi_op_bound(psi, [A, B])
    rs = robertson_schrodinger(psi, A, B)
    C = cov_comm(psi, [A, B]).C
    for a in range(2):
        assert m.residuals[a] == pytest.approx(4 * C[a, a] * rs.residual, abs=1e-12 * max(1.0, rs.lhs) * C[a, a] * 4)


@settings(max_examples=100)
@given(seeds, st.integers(2, 6), st.integers(2, 5))
def test_multi_operator_relation_holds(seed, n, nops):
    rng = np.random.default_rng(seed)
    rep = multi_op_bound(random_ket(rng, n), [random_herm(rng, n) for _ in range(nops)])
    assert rep.satisfied
    assert len(rep.labels) == nops


@settings(max_examples=100)
@given(seeds, st.integers(2, 6))
def test_three_operator_explicit_matches_adjugate(seed, n):
    rng = np.random.default_rng(seed)
    psi = random_ket(rng, n)
    S = [random_herm(rng, n) for _ in range(3)]
    m, e = multi_op_bound(psi, S), three_op_explicit(psi, S)
    scale = max(np.max(np.abs(m.lhs)), np.max(np.abs(m.rhs)), np.max(m.tol) / 1e-9)
    np.testing.assert_allclose(e.rhs, m.rhs, atol=1e-10 * scale)
    np.testing.assert_allclose(e.lhs, m.lhs, atol=1e-10 * scale)
    assert e.det_c == pytest.approx(m.det_c, abs=1e-10 * scale)


def test_variance_bounds_when_nondegenerate(rng):
    psi = random_ket(rng, 5)
    rep = multi_op_bound(psi, [random_herm(rng, 5) for _ in range(3)])
    assert not rep.degenerate
    np.testing.assert_allclose(rep.bounds, rep.rhs / (4 * rep.det_c))
    assert np.all(rep.variances >= rep.bounds - 1e-9 * np.abs(rep.variances))
    assert rep.variance_sum >= rep.bound_sum - 1e-9 * rep.variance_sum
    assert rep.variance_product >= rep.bound_product - 1e-9 * rep.variance_product


@pytest.mark.parametrize("l", [0.5, 1, 1.5, 2, 4])
def test_angular_momentum_determinant_vanishes(l):
    S = angular_momentum_ops(l)
    for m in np.arange(l, -l - 1, -1):
        psi = lm_state(l, m)
        rep = multi_op_bound(psi, S)
        assert rep.degenerate
        assert abs(np.linalg.det(cov_comm(psi, S).C)) <= 1e-12 * max(l, 1) ** 6
        assert np.all(np.abs(rep.residuals) <= rep.tol)


def test_pauli_lower_band_determinant_vanishes(rng):
    S = pauli_ops()
    for _ in range(20):
        d = rng.normal(size=3)
        psi = np.linalg.eigh(sum(di * s for di, s in zip(d, S.ops)))[1][:, 0]
        cc = cov_comm(psi, S)
        # C = 1 - s s^T with |s| = 1 has a null vector along s
        np.testing.assert_allclose(cc.means, -d / np.linalg.norm(d), atol=1e-12)
        np.testing.assert_allclose(cc.C, np.eye(3) - np.outer(cc.means, cc.means), atol=1e-12)
        assert abs(np.linalg.det(cc.C)) <= 1e-12


def test_spin_relation_on_lowest_ti_band(rng):
    model = ti_model(field=(0.5, 1, 2))
    for k in rng.uniform(-np.pi, np.pi, size=(10, 3)):
        _, V = eigh(model.hamiltonian(k))
        cc = cov_comm(V[:, 0], model.spin_ops)
        rep = multi_op_bound_from(cc, ("sx", "sy", "sz"))
        assert rep.satisfied
        # sigma_a^2 = 1 gives C = 1 - s s^T and K = 2 eps s, so every component is 4 (1 - |s|^2)^2
        s2 = np.sum(cc.means**2)
        np.testing.assert_allclose(rep.residuals, 4 * (1 - s2) ** 2, atol=1e-12)


def test_arity_and_dimension_errors(rng):
    psi = random_ket(rng, 3)
    with pytest.raises(WrongArity):
        multi_op_bound(psi, [random_herm(rng, 3)])
    with pytest.raises(WrongArity):
        three_op_explicit(psi, [random_herm(rng, 3) for _ in range(2)])
    with pytest.raises(DimMismatch):
        robertson_schrodinger(psi, np.eye(2), np.eye(2))
