"""k-paths, grids and per-point evaluation of the bound suite."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ConfigError, GapClosing, InvalidCount
from .geometry import qgt_perturbative
from .models import BlochModel
from .numlin import eigh
from .qcrb import metric_self_bound
from .states import cov_comm, gap_eps
from .uncertainty import multi_op_bound_from

HIGH_SYMMETRY = {
    "G": np.array([0.0, 0.0, 0.0]),
    "X": np.array([np.pi, 0.0, 0.0]),
    "M": np.array([np.pi, np.pi, 0.0]),
    "R": np.array([np.pi, np.pi, np.pi]),
}


@dataclass(frozen=True)
class KPath:
    vertices: tuple
    """``(name, k)`` pairs in visiting order."""
    points_per_segment: int
    kpoints: np.ndarray
    arclength: np.ndarray
    segments: tuple
    """Segment label of every sample, e.g. ``"X-M"``; the closing vertex gets its own name."""

    def __len__(self):
        return len(self.kpoints)


def make_path(spec: str = "GXMRG", n: int = 100) -> KPath:
    """Piecewise-linear path through high-symmetry points.

    Every segment holds ``n`` samples including its start and excluding its
    end; the final vertex is appended once, so there are
    ``n * (len(spec) - 1) + 1`` samples.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidCount(f"points per segment must be an integer >= 2, got {n!r}")
    spec = spec.upper()
    if len(spec) < 2 or any(c not in HIGH_SYMMETRY for c in spec):
        raise ConfigError("path", f"unknown path {spec!r}; use letters from {''.join(HIGH_SYMMETRY)}")
    verts = tuple((c, HIGH_SYMMETRY[c]) for c in spec)
    pts, arc, segs = [], [], []
    s0 = 0.0
    for (na, a), (nb, b) in zip(verts[:-1], verts[1:]):
        length = float(np.linalg.norm(b - a))
        for i in range(n):
            t = i / n
            pts.append(a + t * (b - a))
            arc.append(s0 + t * length)
            segs.append(f"{na}-{nb}")
        s0 += length
    pts.append(verts[-1][1].copy())
    arc.append(s0)
    segs.append(verts[-1][0])
    return KPath(verts, int(n), np.array(pts), np.array(arc), tuple(segs))


def standard_path(n: int = 100) -> KPath:
    return make_path("GXMRG", n)


def grid_points(n: int, dims: int = 3) -> np.ndarray:
    """Uniform ``n**dims`` grid over (-pi, pi]; for ``dims = 2`` the grid lies in ``kz = 0``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidCount(f"grid size must be a positive integer, got {n!r}")
    axis = -np.pi + 2 * np.pi * (np.arange(n) + 1) / n
    mesh = np.meshgrid(*([axis] * dims), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    if dims == 2:
        pts = np.hstack([pts, np.zeros((len(pts), 1))])
    return pts


@dataclass
class ResultRow:
    index: int
    segment: str
    arclength: float | None
    kx: float
    ky: float
    kz: float
    g_xx: float | None = None
    g_xy: float | None = None
    g_xz: float | None = None
    g_yy: float | None = None
    g_yz: float | None = None
    g_zz: float | None = None
    om_xy: float | None = None
    om_yz: float | None = None
    om_zx: float | None = None
    det_g: float | None = None
    Vg_xx: float | None = None
    Vg_yy: float | None = None
    Vg_zz: float | None = None
    VL_xx: float | None = None
    VL_yy: float | None = None
    VL_zz: float | None = None
    sx: float | None = None
    sy: float | None = None
    sz: float | None = None
    det_C: float | None = None
    flags: tuple = field(default=())


COLUMNS = tuple(f.name for f in fields(ResultRow))

SCENARIOS = ("geometry", "qcrb", "uncertainty")


def evaluate_point(model: BlochModel, k, index=0, segment="", arclength=None,
                   scenarios=SCENARIOS, rtol=1e-9) -> ResultRow:
    """Compute one output row; a closed gap yields a row flagged ``gap``."""
    k = np.asarray(k, dtype=float)
    row = ResultRow(index, segment, arclength, float(k[0]), float(k[1]), float(k[2]))
    flags = []
    try:
        gt = qgt_perturbative(model, k)
    except GapClosing:
        row.flags = ("gap",)
        return row
    g, om = gt.g, gt.omega
    row.g_xx, row.g_xy, row.g_xz = g[0, 0], g[0, 1], g[0, 2]
    row.g_yy, row.g_yz, row.g_zz = g[1, 1], g[1, 2], g[2, 2]
    row.om_xy, row.om_yz, row.om_zx = om[0, 1], om[1, 2], om[2, 0]

    if "qcrb" in scenarios:
        sb = metric_self_bound(gt, rtol)
        row.det_g = sb.det_g
        row.Vg_xx, row.Vg_yy, row.Vg_zz = (float(r.residual) for r in sb.diagonal)
        if sb.degenerate:
            flags.append("det_g_zero")
        if not all(r.satisfied for r in sb.diagonal):
            flags.append("Vg_violation")

    if "uncertainty" in scenarios and model.spin_ops:
        E, V = eigh(model.hamiltonian(k))
        if E[1] - E[0] <= gap_eps(E):
            flags.append("lowest_degenerate")
        cc = cov_comm(V[:, 0], model.spin_ops)
        rep = multi_op_bound_from(cc, ("sx", "sy", "sz"), rtol)
        row.VL_xx, row.VL_yy, row.VL_zz = (float(v) for v in rep.residuals)
        row.sx, row.sy, row.sz = (float(m) for m in cc.means)
        row.det_C = rep.det_c
        if rep.degenerate:
            flags.append("det_C_zero")
        if np.all(np.abs(rep.residuals) <= rep.tol):
            flags.append("VL_zero")
        if not rep.satisfied:
            flags.append("VL_violation")

    for name in COLUMNS[6:-1]:
        v = getattr(row, name)
        if v is not None:
            setattr(row, name, float(v))
    row.flags = tuple(flags)
    return row


def thread_count(threads=None) -> int:
    if threads is None:
        env = os.environ.get("QGBOUND_THREADS")
        if env is None:
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise ConfigError("QGBOUND_THREADS", f"not an integer: {env!r}") from None
    if threads < 1:
        raise ConfigError("threads", "must be >= 1")
    return threads


def run_sweep(model: BlochModel, points, scenarios=SCENARIOS, threads=None, rtol=1e-9) -> list:
    """Evaluate every point of a :class:`KPath` or an ``(N, 3)`` array of k-points.

    Rows come back in index order whatever the number of worker threads.
    """
    if model.nparams != 3:
        raise ConfigError("model", "sweeps need a three-parameter model")
    if isinstance(points, KPath):
        ks, segs, arcs = points.kpoints, points.segments, points.arclength
    else:
        ks = np.asarray(points, dtype=float)
        if ks.ndim != 2 or ks.shape[1] != 3:
            raise ConfigError("points", f"expected an (N, 3) array, got shape {ks.shape}")
        segs = ("grid",) * len(ks)
        arcs = (None,) * len(ks)

    def work(i):
        arc = None if arcs[i] is None else float(arcs[i])
        return evaluate_point(model, ks[i], i, segs[i], arc, scenarios, rtol)

    n = thread_count(threads)
    if n == 1:
        return [work(i) for i in range(len(ks))]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(work, range(len(ks))))
