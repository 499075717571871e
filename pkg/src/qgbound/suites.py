"""Verification scenarios run by the command line ``check`` family of commands.

Each scenario returns a list of :class:`Outcome` records; a scenario passes
when every record does.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, GapClosing
from .estimation import mixed_qcrb_residual, qfim, sld
from .geometry import GeometricTensor, qgt_fd, qgt_from_state, qgt_perturbative
from .models import BlochModel
from .qcrb import BOUND_RTOL, bound_3d_explicit, robertson_det
from .samplers import random_d_model, random_hermitian, random_mixed_family, random_pure_family, random_state
from .states import angular_momentum_ops, cov_comm, expectation, lm_state, pauli_ops
from .sweep import run_sweep
from .uncertainty import multi_op_bound, robertson_schrodinger, three_op_explicit


@dataclass(frozen=True)
class Outcome:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def path_bounds(model: BlochModel, path, rtol=BOUND_RTOL, threads=None) -> list:
    """Self-bound and spin uncertainty residuals at every gapped path point."""
    rows = run_sweep(model, path, threads=threads, rtol=rtol)
    live = [r for r in rows if "gap" not in r.flags]
    gaps = len(rows) - len(live)
    vg_bad = sum("Vg_violation" in r.flags for r in live)
    vl_bad = sum("VL_violation" in r.flags for r in live)
    out = [
        Outcome("metric self-bound V^g", vg_bad == 0,
                f"{len(live)} points, {vg_bad} violations, {gaps} gap-closing points skipped"),
    ]
    if model.spin_ops:
        out.append(Outcome("spin uncertainty V^L", vl_bad == 0,
                           f"{len(live)} points, {vl_bad} violations"))
    rob_bad = exp_bad = 0
    for r in live:
        g = np.array([[r.g_xx, r.g_xy, r.g_xz], [r.g_xy, r.g_yy, r.g_yz], [r.g_xz, r.g_yz, r.g_zz]])
        om = np.array([[0, r.om_xy, -r.om_zx], [-r.om_xy, 0, r.om_yz], [r.om_zx, -r.om_yz, 0]])
        gt = GeometricTensor(g, om)
        rob_bad += not robertson_det(gt, rtol).satisfied
        exp_bad += not all(b.satisfied for b in bound_3d_explicit(gt, rtol))
    out.append(Outcome("Robertson determinant", rob_bad == 0, f"{rob_bad} violations"))
    out.append(Outcome("3D index-explicit bounds", exp_bad == 0, f"{exp_bad} violations"))
    return out


def geometry_oracles(model: BlochModel, seed=42, npoints=10, tol=1e-6) -> list:
    """Band-sum geometry against the projector finite-difference oracle at random k."""
    rng = np.random.default_rng(seed)
    worst, used = 0.0, 0
    for k in rng.uniform(-np.pi, np.pi, size=(npoints, model.nparams)):
        try:
            a = qgt_perturbative(model, k)
            b = qgt_fd(model, k, h=1e-5)
        except GapClosing:
            continue
        used += 1
        worst = max(worst, np.max(np.abs(a.g - b.g)), np.max(np.abs(a.omega - b.omega)))
    return [Outcome("band-sum vs finite-difference geometry", worst <= tol,
                    f"max deviation {worst:.2e} over {used} points (tol {tol:g})")]


def pristine_curvature(model: BlochModel, path, tol=1e-10) -> list:
    worst = 0.0
    for k in path.kpoints:
        try:
            worst = max(worst, np.max(np.abs(qgt_perturbative(model, k).omega)))
        except GapClosing:
            continue
    return [Outcome("vanishing Berry curvature without field", worst <= tol, f"max |omega| = {worst:.2e}")]


def random_uncertainty(seed=42, trials=1000, rtol=BOUND_RTOL) -> list:
    """Robertson-Schrodinger and three-operator relations on random states and operators."""
    rng = np.random.default_rng(seed)
    rs_bad = mo_bad = 0
    worst_3 = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        psi = random_state(rng, n)
        A, B, Cop = (random_hermitian(rng, n) for _ in range(3))
        rs_bad += not robertson_schrodinger(psi, A, B, rtol).satisfied
        m = multi_op_bound(psi, (A, B, Cop), rtol)
        mo_bad += not m.satisfied
        e = three_op_explicit(psi, (A, B, Cop), rtol)
        scale = max(np.max(np.abs(m.lhs)), np.max(np.abs(m.rhs)), np.max(m.tol) / rtol)
        worst_3 = max(worst_3, np.max(np.abs(m.residuals - e.residuals)) / scale)
    return [
        Outcome("Robertson-Schrodinger on random instances", rs_bad == 0, f"{trials} trials, {rs_bad} violations"),
        Outcome("three-operator relation on random instances", mo_bad == 0, f"{trials} trials, {mo_bad} violations"),
        Outcome("explicit vs adjugate three-operator forms", worst_3 <= 1e-10, f"max relative deviation {worst_3:.2e}"),
    ]


def estimation_demo(seed=42, trials=100) -> list:
    """Mixed-state operator bound, SLD equality and the pure-state F = 4g reduction."""
    rng = np.random.default_rng(seed)
    worst_psd = 0.0
    worst_eq = 0.0
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        D = int(rng.integers(1, 4))
        fam = random_mixed_family(rng, dim, D)
        k = rng.normal(size=D) * 0.3
        rho, drho = fam(k), fam.drho(k)
        ops = [random_hermitian(rng, dim) for _ in range(int(rng.integers(1, 4)))]
        try:
            r = mixed_qcrb_residual(rho, drho, ops)
        except Degenerate:
            continue
        worst_psd = min(worst_psd, r.min_eig / r.scale)
        L = sld(rho, drho)
        eq = mixed_qcrb_residual(rho, drho, list(L.L))
        worst_eq = max(worst_eq, np.linalg.norm(eq.matrix) / np.linalg.norm(eq.F))
    worst_f4g = 0.0
    for _ in range(20):
        psi, dpsi = random_pure_family(rng, 2, 2)
        rho = np.outer(psi, psi.conj())
        drho = np.einsum("ua,b->uab", dpsi, psi.conj())
        drho = drho + drho.conj().transpose(0, 2, 1)
        F = qfim(rho, sld(rho, drho))
        g = qgt_from_state(psi, dpsi).g
        worst_f4g = max(worst_f4g, np.max(np.abs(F - 4 * g)))
    return [
        Outcome("mixed-state operator bound PSD", worst_psd >= -1e-9, f"min scaled eigenvalue {worst_psd:.2e}"),
        Outcome("equality when operators are the SLDs", worst_eq <= 1e-9, f"max relative residual {worst_eq:.2e}"),
        Outcome("pure-state QFIM equals 4g", worst_f4g <= 1e-10, f"max deviation {worst_f4g:.2e}"),
    ]


def angular_momentum_counterexample(lmax=4) -> tuple[list, list]:
    """Covariance determinants of (Lx, Ly, Lz) on every |l, m>, l = 1/2 ... lmax."""
    table = []
    for two_l in range(1, 2 * lmax + 1):
        l = two_l / 2
        S = angular_momentum_ops(l)
        for two_m in range(two_l, -two_l - 1, -2):
            m = two_m / 2
            psi = lm_state(l, m)
            det = float(np.linalg.det(cov_comm(psi, S).C))
            table.append((l, m, det, expectation(psi, S.ops[2]), expectation(psi, S.ops[0] @ S.ops[0])))
    bad = [t for t in table
           if abs(t[2]) > 1e-12 * max(t[0], 1) ** 6
           or abs(t[3] - t[1]) > 1e-12 * max(t[0], 1)
           or abs(t[4] - (t[0] ** 2 + t[0] - t[1] ** 2) / 2) > 1e-12 * max(t[0], 1) ** 2]
    return table, [Outcome("angular momentum covariance determinant", not bad,
                           f"{len(table)} states, max |det C| = {max(abs(t[2]) for t in table):.2e}")]


def pauli_counterexample(seed=42, samples=20) -> tuple[list, list]:
    """Covariance determinant of the Pauli matrices on the lower band of random d.sigma."""
    rng = np.random.default_rng(seed)
    S = pauli_ops()
    table = []
    for _ in range(samples):
        d = rng.normal(size=3)
        H = sum(di * s for di, s in zip(d, S.ops))
        psi = np.linalg.eigh(H)[1][:, 0]
        cc = cov_comm(psi, S)
        table.append((d, float(np.linalg.det(cc.C)), three_op_explicit(psi, S)))
    worst = max(abs(t[1]) for t in table)
    trivial = all(np.all(np.abs(t[2].residuals) <= t[2].tol) for t in table)
    return table, [
        Outcome("Pauli covariance determinant", worst <= 1e-12, f"{samples} samples, max |det C| = {worst:.2e}"),
        Outcome("Pauli three-operator relation reduces to 0 >= 0", trivial, "both sides vanish"),
    ]


def two_band_geometry(seed=42, samples=5) -> list:
    """Geometry oracles on random two-band models, used by ``check`` for any model."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(samples):
        out += geometry_oracles(random_d_model(rng), seed=int(rng.integers(1 << 31)), npoints=4)
    return [Outcome("random two-band geometry oracles", all(o.passed for o in out), f"{samples} models")]
