"""Command-line front end.

Exit codes: 0 success or pass, 2 verification distance above tolerance,
3 configuration error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy

from . import __version__
from . import limit_laws as ll
from .config import (LimitCfConfig, RegimeTableConfig, SimulatePanelConfig, SimulateZConfig,
                     VerifyRegimeConfig, config_hash, load_config)
from .exceptions import ConfigError, NumericalFailure, RcarError, TruncationError, UnsupportedRegime
from .panel_sim import PanelSpec, simulate_aggregates
from .poisson_sim import PoissonSimSpec, simulate_Z_replicates
from .regime import classify, regime_table
from .stable_core import StableLaw, cf_levy
from .stats import cf_distance, empirical_cf

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3, 4
COMMANDS = ("simulate-panel", "simulate-z", "limit-cf", "regime-table", "verify-regime")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class _Writer:
    """Writes CSV files and the manifest into one output directory."""

    def __init__(self, out: Path, digest: str, seed: int):
        self.out = out
        self.digest = digest
        self.seed = seed
        self.files = []
        out.mkdir(parents=True, exist_ok=True)

    def csv(self, name: str, header: Sequence[str], rows):
        path = self.out / name
        with open(path, "w", newline="") as fh:
            fh.write(f"# config_sha256={self.digest} seed={self.seed}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        self.files.append(name)

    def json(self, name: str, payload: dict):
        payload = {"config_sha256": self.digest, "seed": self.seed, **payload}
        with open(self.out / name, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.files.append(name)

    def manifest(self, command: str, cfg, extra: dict, wall_time: Optional[float]):
        payload = {
            "command": command,
            "config": cfg.model_dump(mode="json", exclude={"workers"}),
            "files": sorted(self.files),
            "versions": {
                "rcarlab": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            **extra,
        }
        if wall_time is not None:
            payload["wall_time_s"] = wall_time
        self.json("manifest.json", payload)


def _limit_cf_values(cfg: LimitCfConfig, thetas: np.ndarray) -> np.ndarray:
    a = cfg.alpha
    law = cfg.innovation.to_law() if cfg.innovation else StableLaw.symmetric(a)
    b = cfg.beta
    psi1 = cfg.psi1 if cfg.psi1 is not None else b
    tau = cfg.tau
    if cfg.law == "cf_levy":
        return cf_levy(thetas, tau, law)
    if cfg.law == "cf_V1":
        return ll.cf_V1(thetas * tau, a, psi1 if psi1 is not None else 1.0, law)
    if cfg.law == "cf_V":
        return ll.cf_V(thetas * tau, a, b, psi1, law)
    if cfg.law == "cf_W":
        return ll.cf_W(thetas[:, None], [tau], a, b, psi1, law)
    if cfg.law == "cf_Lambda":
        return ll.cf_Lambda(thetas, [tau], a, b, psi1, law)
    return ll.cf_Z(thetas, [tau], a, b, psi1, law)


def _run_simulate_panel(cfg: SimulatePanelConfig, w: _Writer) -> tuple[int, dict]:
    law = cfg.innovation.to_law()
    report = classify(law.alpha, cfg.mixing.beta, cfg.N, cfg.n, cfg.mu_threshold, law=law)
    spec = PanelSpec(law, cfg.mixing.to_law(), cfg.N, cfg.n, tuple(cfg.taus), cfg.seed, cfg.burn_in_tol)
    S = simulate_aggregates(spec, cfg.replicates, cfg.workers)
    A = report.normalization
    rows = ((r, tau, S[r, j], S[r, j] / A) for r in range(S.shape[0]) for j, tau in enumerate(cfg.taus))
    w.csv("samples.csv", ["replicate", "tau", "S", "normalized"], rows)
    return EXIT_OK, {"regime": report.to_dict()}


def _run_simulate_z(cfg: SimulateZConfig, w: _Writer) -> tuple[int, dict]:
    law = cfg.innovation.to_law() if cfg.innovation else None
    spec = PoissonSimSpec(cfg.alpha, cfg.beta, cfg.psi1, tuple(cfg.tau_grid), cfg.x_min, cfg.x_max,
                          cfg.dt, cfg.seed, law, cfg.trunc_tol)
    Z = simulate_Z_replicates(spec, cfg.replicates)
    rows = ((r, tau, Z[r, j]) for r in range(Z.shape[0]) for j, tau in enumerate(cfg.tau_grid))
    w.csv("trajectories.csv", ["replicate", "tau", "Z"], rows)
    return EXIT_OK, {"x_min": spec.x_min, "x_max": spec.x_max, "expected_points": spec.expected_points}


def _run_limit_cf(cfg: LimitCfConfig, w: _Writer) -> tuple[int, dict]:
    th = cfg.thetas.values()
    vals = np.asarray(_limit_cf_values(cfg, th), dtype=complex)
    w.csv("cf.csv", ["theta", "re", "im"], zip(th, vals.real, vals.imag))
    return EXIT_OK, {}


def _run_regime_table(cfg: RegimeTableConfig, w: _Writer) -> tuple[int, dict]:
    rows = []
    for (a, b), rep in regime_table(cfg.alphas, cfg.betas, cfg.N, cfg.n, cfg.mu_threshold):
        lim = rep.limit_law.name if rep.limit_law else ""
        rows.append((a, b, rep.case.value, rep.family, rep.mu_proxy, rep.gamma, rep.normalization, lim))
    w.csv("regime_table.csv",
          ["alpha", "beta", "case", "family", "mu_proxy", "gamma", "normalization", "limit"], rows)
    return EXIT_OK, {"rows": len(rows)}


def _run_verify_regime(cfg: VerifyRegimeConfig, w: _Writer) -> tuple[int, dict]:
    law = cfg.innovation.to_law()
    beta = cfg.mixing.beta
    report = classify(law.alpha, beta, cfg.N, cfg.n, cfg.mu_threshold, law=law)
    spec = PanelSpec(law, cfg.mixing.to_law(), cfg.N, cfg.n, (cfg.tau,), cfg.seed, cfg.burn_in_tol)
    S = simulate_aggregates(spec, cfg.replicates, cfg.workers)[:, 0]
    X = S / report.normalization
    th = cfg.thetas.values()
    emp = empirical_cf(X, th)
    lim = ll.CFGrid(th, report.limit_law.cf(th, cfg.tau))
    dist = cf_distance(emp, lim)
    passed = bool(dist < cfg.tolerance)
    w.csv("samples.csv", ["replicate", "S", "normalized"], zip(range(S.size), S, X))
    w.csv("cf.csv", ["theta", "empirical_re", "empirical_im", "limit_re", "limit_im", "abs_diff"],
          zip(th, emp.values.real, emp.values.imag, lim.values.real, lim.values.imag,
              np.abs(emp.values - lim.values)))
    result = {"distance": dist, "tolerance": cfg.tolerance, "pass": passed, "regime": report.to_dict()}
    w.json("result.json", result)
    return (EXIT_OK if passed else EXIT_FAIL), result


_RUNNERS = {
    "simulate-panel": _run_simulate_panel,
    "simulate-z": _run_simulate_z,
    "limit-cf": _run_limit_cf,
    "regime-table": _run_regime_table,
    "verify-regime": _run_verify_regime,
}


def run(command: str, cfg, out: Path, record_timing: bool = False) -> int:
    """Execute one validated configuration and write its artifacts to ``out``."""
    t0 = time.perf_counter()
    w = _Writer(Path(out), config_hash(cfg), cfg.seed)
    code, extra = _RUNNERS[command](cfg, w)
    w.manifest(command, cfg, {"exit_code": code, **_jsonable(extra)},
               time.perf_counter() - t0 if record_timing else None)
    return code


def _jsonable(d: dict) -> dict:
    return json.loads(json.dumps(d, default=float))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcarlab", description="RCAR(1) panel aggregation lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML run configuration")
        p.add_argument("--workers", type=int, default=None, help="worker processes (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--record-timing", action="store_true",
                       help="store wall time in the manifest (outputs are then not byte-reproducible)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, experiment=args.command, seed=args.seed, workers=args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code = run(args.command, cfg, Path(args.out), args.record_timing)
    except (NumericalFailure, TruncationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, UnsupportedRegime, RcarError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "verify-regime":
        res = json.loads((Path(args.out) / "result.json").read_text())
        print(f"distance={res['distance']:.6f} tolerance={res['tolerance']} "
              f"{'PASS' if res['pass'] else 'FAIL'}")
    return code


if __name__ == "__main__":
    sys.exit(main())
