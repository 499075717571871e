"""Command line front end.

    qgbound sweep   [options]   write the per-k table (CSV or JSON)
    qgbound check   [options]   run every bound suite, exit 1 on any violation
    qgbound counterexamples     vanishing covariance determinants
    qgbound estimation-demo     mixed-state suite on seeded random families
    qgbound version

Options may also come from a JSON document given with ``--config``; flags
given on the command line take precedence.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields, replace

from . import __version__, suites
from .errors import ConfigError
from .models import TIParams, ti_model, wilson_dirac_model
from .qcrb import BOUND_RTOL
from .sweep import SCENARIOS, grid_points, make_path, run_sweep
from .table import emit

ALL_SCENARIOS = ("geometry", "qcrb", "uncertainty", "estimation-demo", "counterexamples")
MODEL_PARAMS = {"ti3d": ("M", "A", "B"), "two-band": ("m",)}


@dataclass(frozen=True)
class ScenarioConfig:
    model: str = "ti3d"
    params: dict = field(default_factory=dict)
    field: tuple = (0.1, 0.2, 0.3)
    path: str = "GXMRG"
    points: int = 100
    scenarios: tuple = ALL_SCENARIOS
    tol_scale: float = 1.0
    format: str = "csv"
    out: str = "-"
    seed: int = 42
    threads: int | None = None

    def validated(self) -> "ScenarioConfig":
        if self.model not in MODEL_PARAMS:
            raise ConfigError("model", f"unknown model {self.model!r}; choose from {sorted(MODEL_PARAMS)}")
        if not isinstance(self.params, dict):
            raise ConfigError("params", "must be a mapping of name to number")
        params = {}
        for key, val in self.params.items():
            if key not in MODEL_PARAMS[self.model]:
                raise ConfigError(f"params.{key}", f"not a parameter of model {self.model!r}")
            params[key] = _number(f"params.{key}", val)
        fld = self.field
        if isinstance(fld, str):
            fld = fld.split(",")
        if not isinstance(fld, (list, tuple)) or len(fld) != 3:
            raise ConfigError("field", "expected three numbers")
        fld = tuple(_number("field", v) for v in fld)
        if not isinstance(self.path, str):
            raise ConfigError("path", "expected a string")
        points = self.points
        if isinstance(points, bool) or not isinstance(points, int) or points < 2:
            raise ConfigError("points", f"expected an integer >= 2, got {points!r}")
        scen = self.scenarios
        if isinstance(scen, str):
            scen = tuple(s for s in scen.split(",") if s)
        if not isinstance(scen, (list, tuple)):
            raise ConfigError("scenarios", "expected a list")
        for s in scen:
            if s not in ALL_SCENARIOS:
                raise ConfigError("scenarios", f"unknown scenario {s!r}")
        tol = _number("tol_scale", self.tol_scale)
        if tol <= 0:
            raise ConfigError("tol_scale", "must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", f"unknown format {self.format!r}")
        if not isinstance(self.out, str):
            raise ConfigError("out", "expected a path or '-'")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError("seed", "expected an integer")
        if self.threads is not None and (not isinstance(self.threads, int) or self.threads < 1):
            raise ConfigError("threads", "expected a positive integer")
        return replace(self, params=params, field=fld, scenarios=tuple(scen), tol_scale=tol)


def _number(key, val) -> float:
    if isinstance(val, bool):
        raise ConfigError(key, f"expected a number, got {val!r}")
    try:
        out = float(val)
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected a number, got {val!r}") from None
    if out != out or out in (float("inf"), float("-inf")):
        raise ConfigError(key, "must be finite")
    return out


CONFIG_KEYS = {f.name for f in fields(ScenarioConfig)}


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config", "top level must be an object")
    doc = {k.replace("-", "_"): v for k, v in doc.items()}
    for key in doc:
        if key not in CONFIG_KEYS:
            raise ConfigError(key, "unknown configuration key")
    return doc


def build_model(cfg: ScenarioConfig):
    if cfg.model == "ti3d":
        return ti_model(TIParams(**cfg.params), cfg.field)
    return wilson_dirac_model(**cfg.params)


def build_points(cfg: ScenarioConfig):
    spec = cfg.path.strip()
    if spec.startswith("grid"):
        kind, _, n = spec.partition(":")
        try:
            n = int(n)
        except ValueError:
            raise ConfigError("path", f"grid spec needs a size, e.g. grid:10, got {spec!r}") from None
        if kind not in ("grid", "grid2d") or n < 1:
            raise ConfigError("path", f"bad grid spec {spec!r}")
        return grid_points(n, 2 if kind == "grid2d" else 3)
    return make_path(spec, cfg.points)


def _params_arg(items):
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError("params", f"expected key=value, got {item!r}")
        out[key.strip()] = val
    return out


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration document")
    common.add_argument("--model", choices=sorted(MODEL_PARAMS))
    common.add_argument("--params", nargs="*", metavar="KEY=VAL", help="model parameters, e.g. M=-0.3 A=2.87")
    common.add_argument("--field", help="Zeeman field Bx,By,Bz in eV")
    common.add_argument("--path", help="high-symmetry path such as GXMRG, or grid:N / grid2d:N")
    common.add_argument("--points", type=int, help="samples per path segment")
    common.add_argument("--scenarios", help="comma-separated list from " + ",".join(ALL_SCENARIOS))
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file, '-' for stdout")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol-scale", type=float, dest="tol_scale")
    common.add_argument("--threads", type=int)

    parser = argparse.ArgumentParser(prog="qgbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="per-k table of geometry and residuals")
    sub.add_parser("check", parents=[common], help="run all bound suites")
    sub.add_parser("counterexamples", parents=[common], help="zero-determinant covariance cases")
    sub.add_parser("estimation-demo", parents=[common], help="mixed-state QCRB suite")
    sub.add_parser("version", help="print the version")
    return parser


def resolve_config(args) -> ScenarioConfig:
    doc = load_config(args.config) if args.config else {}
    for key in ("model", "field", "path", "points", "scenarios", "format", "out", "seed", "tol_scale", "threads"):
        val = getattr(args, key)
        if val is not None:
            doc[key] = val
    if args.params is not None:
        doc["params"] = {**doc.get("params", {}), **_params_arg(args.params)}
    if doc.get("model") == "two-band" and "field" not in doc:
        doc["field"] = (0.0, 0.0, 0.0)
    return ScenarioConfig(**doc).validated()


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_sweep(cfg: ScenarioConfig) -> int:
    model = build_model(cfg)
    scen = tuple(s for s in cfg.scenarios if s in SCENARIOS) or SCENARIOS
    rows = run_sweep(model, build_points(cfg), scen, cfg.threads, BOUND_RTOL * cfg.tol_scale)
    _write(emit(rows, cfg.format), cfg.out)
    return 0


def run_check(cfg: ScenarioConfig) -> list:
    model = build_model(cfg)
    points = build_points(cfg)
    rtol = BOUND_RTOL * cfg.tol_scale
    out = []
    if "geometry" in cfg.scenarios:
        out += suites.geometry_oracles(model, seed=cfg.seed)
        if cfg.model == "ti3d" and cfg.field == (0.0, 0.0, 0.0) and hasattr(points, "kpoints"):
            out += suites.pristine_curvature(model, points)
    if "qcrb" in cfg.scenarios or "uncertainty" in cfg.scenarios:
        out += suites.path_bounds(model, points, rtol, cfg.threads)
    if "uncertainty" in cfg.scenarios:
        out += suites.random_uncertainty(seed=cfg.seed, rtol=rtol)
    if "estimation-demo" in cfg.scenarios:
        out += suites.estimation_demo(seed=cfg.seed)
    if "counterexamples" in cfg.scenarios:
        out += suites.angular_momentum_counterexample()[1]
        out += suites.pauli_counterexample(seed=cfg.seed)[1]
    return out


def _report(outcomes) -> int:
    for o in outcomes:
        print(o.line())
    ok = all(o.passed for o in outcomes)
    print("all bounds satisfied" if ok else "bound violations found")
    return 0 if ok else 1


def cmd_counterexamples(cfg: ScenarioConfig) -> int:
    table, out = suites.angular_momentum_counterexample()
    print(f"{'l':>4} {'m':>5} {'det C':>12} {'<Lz>':>6} {'<Lx^2>':>8}")
    for l, m, det, lz, lx2 in table:
        print(f"{l:4.1f} {m:5.1f} {det:12.3e} {lz:6.2f} {lx2:8.3f}")
    ptable, pout = suites.pauli_counterexample(seed=cfg.seed)
    print(f"{'d1':>8} {'d2':>8} {'d3':>8} {'det C':>12}")
    for d, det, _ in ptable:
        print(f"{d[0]:8.3f} {d[1]:8.3f} {d[2]:8.3f} {det:12.3e}")
    return _report(out + pout)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "version":
        print(f"qgbound {__version__}")
        return 0
    try:
        cfg = resolve_config(args)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "check":
            return _report(run_check(cfg))
        if args.command == "counterexamples":
            return cmd_counterexamples(cfg)
        return _report(suites.estimation_demo(seed=cfg.seed))
    except ConfigError as exc:
        print(f"qgbound: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qgbound: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
