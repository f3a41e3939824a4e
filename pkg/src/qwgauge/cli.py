"""Command-line scenario runner.

Subcommands::

    qwgauge evolve --config run.toml --out run.csv
    qwgauge check <suite> [--json report.json] [--seed N]
    qwgauge dispersion --config run.toml --kmin -10 --kmax 10 --kn 201 [--out disp.csv]
    qwgauge sweep --config-dir configs/ [--jobs N]

Exit codes: 0 success, 1 invalid configuration, 2 runtime error (field
saturation or unsatisfiable Gauss constraint), 3 failed check suite.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .checks import SUITES, run_suite
from .config import ScenarioConfig, load_config
from .dirac_walk import build_dirac_walk, dispersion, evolve, two_step_evolve, two_step_residual, walk_step
from .errors import ConfigError, ConstraintError, SaturationError
from .gauge import GaugeField, gauged_evolve, gauged_two_step_residual
from .lattice import LatticeSpec, delta_field, gaussian_packet, norm, plane_wave
from .maxwell import coupled_evolve
from .noether import closed_form_u1_current

__all__ = ["main", "run_scenario", "run_check_suite", "dispersion_scan", "simulate",
           "EXIT_OK", "EXIT_CONFIG", "EXIT_RUNTIME", "EXIT_CHECK"]

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_CHECK = 0, 1, 2, 3

# tolerances behind the pass/fail flags of the JSON summary
NORM_TOL, TWO_STEP_TOL, GAUSS_TOL = 1e-12, 1e-12, 1e-10

CSV_HEADER = ("step", "norm", "total_charge", "gauss_residual", "two_step_residual")


def lattice_spec(cfg: ScenarioConfig) -> LatticeSpec:
    return LatticeSpec(sites=cfg.sites, steps=cfg.steps + 1, epsilon=cfg.epsilon,
                       boundary=cfg.boundary, mass=cfg.mass, charge=cfg.charge)


def initial_field(cfg: ScenarioConfig, spec: LatticeSpec) -> np.ndarray:
    init = cfg.initial
    kind = init["kind"]
    if kind == "plane_wave":
        psi = plane_wave(spec, init["k"], init["spinor"])
    elif kind == "gaussian":
        return gaussian_packet(spec, init["center"], init["width"], init["k0"], init["spinor"])
    elif kind == "delta":
        psi = delta_field(spec, init["site"], init["spinor"])
    else:
        rng = np.random.default_rng(cfg.seed)
        psi = rng.normal(size=(spec.sites, 2)) + 1j * rng.normal(size=(spec.sites, 2))
    return psi / norm(psi, spec)


def _static_gauge(cfg: ScenarioConfig, spec: LatticeSpec) -> GaugeField:
    J = cfg.steps + 1
    a1 = np.zeros((J, spec.sites))
    if cfg.gauge_profile == "uniform_E":
        a1 += (np.arange(J) * spec.epsilon * cfg.gauge_value)[:, None]
    if cfg.a0_profile == "zero":
        a0 = np.zeros((J, spec.sites))
    elif cfg.a0_profile == "uniform":
        a0 = np.tile(np.asarray(cfg.a0_values)[:, None], (1, spec.sites))
    else:
        a0 = np.asarray(cfg.a0_values, dtype=float)
    return GaugeField(a0, a1, spec)


def simulate(cfg: ScenarioConfig) -> dict:
    """Run a scenario and return per-step observables (NaN where undefined)."""
    spec = lattice_spec(cfg)
    psi0 = initial_field(cfg, spec)
    steps = cfg.steps
    rows = {name: np.full(steps + 1, np.nan) for name in CSV_HEADER[1:]}
    extra = {}
    if cfg.scheme == "coupled":
        e0 = None
        if cfg.gauge_profile == "uniform_E":
            e0 = cfg.gauge_value
        elif cfg.gauge_profile == "zero":
            e0 = 0.0
        traj = coupled_evolve(spec, psi0, steps, e0=e0, current=cfg.current)
        history, gauge = traj.history, traj.gauge
        rows["total_charge"][:steps] = traj.charges
        rows["gauss_residual"][:steps] = traj.gauss_residuals
        extra["background_charge"] = traj.background
        extra["max_abs_E"] = float(np.max(np.abs(traj.efield)))
    elif cfg.scheme == "one_step":
        walk = build_dirac_walk(spec)
        gauge = _static_gauge(cfg, spec) if cfg.gauge_enabled else None
        history = gauged_evolve(walk, gauge, psi0, steps) if gauge else evolve(walk, psi0, steps, spec)
    else:
        scheme = "unitary" if cfg.scheme == "two_step_unitary" else "naive"
        psi1 = walk_step(build_dirac_walk(spec), psi0)
        history = two_step_evolve(psi0, psi1, steps, spec, scheme)
        gauge = None
    if cfg.scheme != "coupled":
        rows["total_charge"][:steps] = closed_form_u1_current(history, gauge).j0.sum(axis=1)
    rows["norm"][:] = [norm(s, spec) for s in history.values]
    for j in range(1, steps):
        if gauge is not None:
            r = gauged_two_step_residual(history, gauge, j)
        else:
            r = two_step_residual(history, j, "naive" if cfg.scheme == "two_step_naive" else "unitary")
        rows["two_step_residual"][j] = np.max(np.abs(r))
    return {"rows": rows, "extra": extra}


def _fmt(x) -> str:
    return "" if not np.isfinite(x) else format(float(x), ".17g")


def format_csv(cfg: ScenarioConfig, rows: dict) -> str:
    cols = ["step"] + [c for c in CSV_HEADER[1:] if c in cfg.observables]
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    n = len(rows["norm"])
    for j in range(n):
        buf.write(",".join([str(j)] + [_fmt(rows[c][j]) for c in cols[1:]]) + "\n")
    return buf.getvalue()


def run_scenario(cfg: ScenarioConfig, out=None) -> int:
    """Run ``cfg``, write the CSV (and JSON summary for ``format = "json"``); return the exit code."""
    out = Path(out or cfg.output_path or "run.csv")
    try:
        result = simulate(cfg)
    except (SaturationError, ConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = result["rows"]
    with out.open("w", newline="") as fh:
        fh.write(format_csv(cfg, rows))
    if cfg.output_format == "json":
        final = {k: (None if not np.isfinite(v[-1]) else float(v[-1])) for k, v in rows.items()}
        norms = rows["norm"]
        drift = float(np.max(np.abs(norms - norms[0])))
        checks = {"norm_constant": drift <= NORM_TOL}
        for key, tol in (("two_step_residual", TWO_STEP_TOL), ("gauss_residual", GAUSS_TOL)):
            if key in cfg.observables and np.any(np.isfinite(rows[key])):
                checks[key] = bool(np.nanmax(rows[key]) <= tol)
        summary = {
            "config": cfg.source,
            "seed": cfg.seed,
            "csv": str(out),
            "final": final,
            "norm_drift": drift,
            "checks": checks,
            "max_two_step_residual": float(np.nanmax(rows["two_step_residual"]))
            if np.any(np.isfinite(rows["two_step_residual"])) else None,
            "max_gauss_residual": float(np.nanmax(rows["gauss_residual"]))
            if np.any(np.isfinite(rows["gauss_residual"])) else None,
            **result["extra"],
        }
        out.with_suffix(".json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def run_check_suite(name: str, json_path=None, seed: int = 0, stream=None) -> int:
    """Run a named suite, print one line per check, optionally write the JSON report."""
    stream = stream or sys.stdout
    report = run_suite(name, seed)
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        stream.write(f"{status} {name}: {c['name']} (defect {c['defect']:.3e} {c['relation']} {c['tolerance']:.0e})\n")
    if json_path:
        Path(json_path).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_CHECK


def dispersion_scan(cfg: ScenarioConfig, k) -> str:
    """CSV ``k,omega_lattice,omega_continuum`` over the grid ``k``."""
    spec = lattice_spec(cfg)
    k = np.asarray(k, dtype=float)
    lat = np.atleast_1d(dispersion(k, spec))
    cont = np.sqrt(k ** 2 + cfg.mass ** 2)
    lines = ["k,omega_lattice,omega_continuum"]
    lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(c)}" for a, b, c in zip(k, lat, cont)]
    return "\n".join(lines) + "\n"


def _sweep_one(path: str) -> tuple:
    path = Path(path)
    try:
        cfg = load_config(path)
    except ConfigError as exc:
        return str(path), EXIT_CONFIG, str(exc)
    out = path.parent / (cfg.output_path or f"{path.stem}.csv")
    return str(path), run_scenario(cfg, out), str(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwgauge", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="run one scenario and write per-step observables")
    p.add_argument("--config", required=True, help="TOML scenario file")
    p.add_argument("--out", help="CSV output path (overrides output.path)")

    p = sub.add_parser("check", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--json", dest="json_path", help="write the machine-readable report here")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("dispersion", help="tabulate lattice and continuum dispersion")
    p.add_argument("--config", required=True)
    p.add_argument("--kmin", type=float, required=True)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--kn", type=int, required=True)
    p.add_argument("--out", help="CSV output path (default: stdout)")

    p = sub.add_parser("sweep", help="run every *.toml scenario in a directory")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "evolve":
            return run_scenario(load_config(args.config), args.out)
        if args.command == "check":
            return run_check_suite(args.suite, args.json_path, args.seed)
        if args.command == "dispersion":
            if args.kn < 1:
                raise ConfigError("must be at least 1", key="--kn")
            text = dispersion_scan(load_config(args.config), np.linspace(args.kmin, args.kmax, args.kn))
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "sweep":
            paths = sorted(str(p) for p in Path(args.config_dir).glob("*.toml"))
            if not paths:
                raise ConfigError(f"no *.toml files in {args.config_dir!r}", key="--config-dir")
            if args.jobs > 1:
                with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                    results = list(pool.map(_sweep_one, paths))
            else:
                results = [_sweep_one(p) for p in paths]
            for path, code, info in results:
                print(f"{code} {path} {info}")
            return max(code for _, code, _ in results)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
