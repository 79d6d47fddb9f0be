"""Command-line front end: JSON config in, CSV/JSON artifacts out.

Subcommands
-----------
scatter    : scattering table over a lambda grid -> scatter.csv
resonance  : zero-energy classification -> resonance.json
             (depth-scan mode when the config has a "depth_scan" object
             -> depth_scan.csv with the bisection result in resonance.json)
evolve     : one evolution time -> evolve.csv + evolve.json sidecar
verify     : decay-hypothesis run -> decay.csv + verdict.json
decay-fit  : re-fit a previously written decay CSV (positional path)

Config schema (JSON object; unknown keys are rejected)::

    {
      "potential":   {"kind": "...", "params": {...}},        # required
      "grid":        {"x_min": -40.0, "x_max": 40.0, "n_points": 4001},
      "state":       {"center": 0.0, "width": 1.0, "momentum": 0.0},
      "lambda_grid": {"min": 0.05, "max": 10.0, "count": 60,
                      "spacing": "linear"},                    # or "log"
      "t_samples":   [10.0, ...],
      "lam_max":     8.0,
      "depth_scan":  {"halfwidth": 1.0, "depths": [...],
                      "bracket": [2.0, 3.0]},
      "tolerances":  {"tol_scatter": 1e-6, "tol_res": 1e-6,
                      "slope_tol": 0.15, "tol_ode": 1e-10}
    }

("tol_ode" is accepted for config compatibility; the sweep solver is direct
and has no adaptive tolerance.)

Exit codes: 0 success/verified; 1 usage or malformed input; 2 numerical
failure, including a verification that completes but misses its slope
target; 3 hypothesis violation (resonance mismatch, ambiguous
classification, divergent expansion).

All data files are deterministic: fixed column orders, %.17g floats, UNIX
newlines, no timestamps.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .analysis import (SLOPE_TOL_DEFAULT, T_SAMPLES_DEFAULT, fit_decay,
                       verify_resonance, verify_transport)
from .errors import HypothesisError, NumericalError
from .oracle import discretize, evolve_exact
from .potentials import (DEFAULT_GRID, PotentialSpec, SampledPotential,
                         SpatialGrid, build_potential, gaussian_packet)
from .propagator import evolve_ac
from .scattering import (TOL_RES_DEFAULT, TOL_SCATTER_DEFAULT,
                         detect_resonance, locate_resonant_depth,
                         scan_well_depths, scattering_table)

__all__ = ["main"]

_CONFIG_KEYS = {"potential", "grid", "state", "lambda_grid", "t_samples",
                "lam_max", "depth_scan", "tolerances"}
_TOL_KEYS = {"tol_scatter", "tol_res", "slope_tol", "tol_ode"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):          # usage problems must exit 1, not 2
        raise _UsageError(message)


def _load_config(path: str) -> dict:
    with open(path, "r") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    tols = cfg.get("tolerances", {})
    if not isinstance(tols, dict) or set(tols) - _TOL_KEYS:
        raise ValueError("tolerances must be an object with keys from "
                         f"{sorted(_TOL_KEYS)}")
    return cfg


def _grid_from(cfg: dict) -> SpatialGrid:
    g = cfg.get("grid")
    if g is None:
        return DEFAULT_GRID
    return SpatialGrid(x_min=float(g["x_min"]), x_max=float(g["x_max"]),
                       n_points=int(g["n_points"]))


def _potential_from(cfg: dict) -> SampledPotential:
    if "potential" not in cfg:
        raise ValueError("config needs a 'potential' object")
    spec = PotentialSpec.from_json(cfg["potential"])
    return build_potential(spec, _grid_from(cfg))


def _state_from(cfg: dict, grid: SpatialGrid) -> np.ndarray:
    s = cfg.get("state", {})
    return gaussian_packet(grid, center=float(s.get("center", 0.0)),
                           width=float(s.get("width", 1.0)),
                           momentum=float(s.get("momentum", 0.0)))


def _lambda_grid_from(cfg: dict) -> np.ndarray:
    lg = cfg.get("lambda_grid", {})
    lo = float(lg.get("min", 0.05))
    hi = float(lg.get("max", 10.0))
    count = int(lg.get("count", 60))
    spacing = lg.get("spacing", "linear")
    if not (0 < lo < hi) or count < 1:
        raise ValueError("lambda_grid needs 0 < min < max and count >= 1")
    if spacing == "linear":
        return np.linspace(lo, hi, count)
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    raise ValueError("lambda_grid spacing must be 'linear' or 'log'")


def _outdir(args) -> str:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_scatter(args) -> int:
    cfg = _load_config(args.config)
    V = _potential_from(cfg)
    tol = float(cfg.get("tolerances", {}).get("tol_scatter",
                                              TOL_SCATTER_DEFAULT))
    table = scattering_table(V, _lambda_grid_from(cfg), tol_scatter=tol)
    out = _outdir(args)
    table.to_csv(os.path.join(out, "scatter.csv"))
    print(table.summary())
    if table.failed.any():
        return 2
    return 0


def _cmd_resonance(args) -> int:
    cfg = _load_config(args.config)
    out = _outdir(args)
    tol_res = float(cfg.get("tolerances", {}).get("tol_res", TOL_RES_DEFAULT))
    scan = cfg.get("depth_scan")
    if scan is not None:
        grid = _grid_from(cfg)
        halfwidth = float(scan.get("halfwidth", 1.0))
        depths = [float(d) for d in scan.get("depths", [])]
        payload = {"mode": "depth_scan", "halfwidth": halfwidth}
        if depths:
            rows = scan_well_depths(depths, halfwidth, grid, tol_res=tol_res)
            path = os.path.join(out, "depth_scan.csv")
            with open(path, "w", newline="\n") as fh:
                fh.write("depth,abs_W0,label\n")
                for depth, w0, label in rows:
                    fh.write(f"{depth:.17g},{abs(w0):.17g},{label}\n")
        bracket = scan.get("bracket")
        if bracket is not None:
            lo, hi = float(bracket[0]), float(bracket[1])
            depth_star = locate_resonant_depth(halfwidth, lo, hi, grid)
            payload["resonant_depth"] = depth_star
            print(f"resonant depth in [{lo:g}, {hi:g}]: {depth_star:.12g}")
        with open(os.path.join(out, "resonance.json"), "w",
                  newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return 0
    V = _potential_from(cfg)
    report = detect_resonance(V, tol_res=tol_res)
    payload = {"classification": report.classification,
               "abs_W0": abs(report.W0),
               "tol_effective": report.tol_effective}
    if report.classification == "resonant":
        payload["alpha0"] = report.alpha0
        payload["beta0"] = report.beta0
        payload["norm_check"] = report.norm_check
    with open(os.path.join(out, "resonance.json"), "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"classification: {report.classification} "
          f"(|W(0)| = {abs(report.W0):.6g}, tol = {report.tol_effective:.3g})")
    return 0


def _cmd_evolve(args) -> int:
    cfg = _load_config(args.config)
    if args.t is None:
        raise _UsageError("evolve requires --t")
    V = _potential_from(cfg)
    psi = _state_from(cfg, V.grid)
    lam_max = args.lambda_max
    if lam_max is None and "lam_max" in cfg:
        lam_max = float(cfg["lam_max"])
    result = evolve_ac(V, psi, float(args.t), lam_max=lam_max)
    out = _outdir(args)
    result.to_csv(os.path.join(out, "evolve.csv"))
    result.write_diagnostics(os.path.join(out, "evolve.json"))
    print(f"t = {result.t:g}  panels = {result.diagnostics['panels']}  "
          f"est_error = {result.diagnostics['est_error']:.3e}")
    if args.oracle:
        H = discretize(V)
        ref = evolve_exact(H, psi, float(args.t), project_ac=True)
        sup = float(np.max(np.abs(result.u - ref.u)))
        print(f"oracle sup-difference = {sup:.6e}")
    return 0


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    if args.theorem is None:
        raise _UsageError("verify requires --theorem {1,2}")
    V = _potential_from(cfg)
    psi = _state_from(cfg, V.grid)
    tols = cfg.get("tolerances", {})
    slope_tol = float(tols.get("slope_tol", SLOPE_TOL_DEFAULT))
    tol_res = float(tols.get("tol_res", TOL_RES_DEFAULT))
    t_samples = cfg.get("t_samples") or list(T_SAMPLES_DEFAULT)
    lam_max = args.lambda_max
    if lam_max is None and "lam_max" in cfg:
        lam_max = float(cfg["lam_max"])
    runner = verify_transport if args.theorem == 1 else verify_resonance
    res = runner(V, psi, t_samples=t_samples, slope_tol=slope_tol,
                 lam_max=lam_max, tol_res=tol_res)
    out = _outdir(args)
    res.to_csv(os.path.join(out, "decay.csv"))
    res.write_verdict(os.path.join(out, "verdict.json"))
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    v = res.verdict
    print(f"theorem {v['theorem']}: slope = {v['slope']:.4f} "
          f"(stderr {v['stderr']:.4f}), target {v['target']} +/- {v['tol']}, "
          f"control slope = {res.control_fit.slope:.4f} -> "
          f"{'PASS' if v['pass'] else 'FAIL'}")
    return 0 if v["pass"] else 2


def _cmd_decay_fit(args) -> int:
    rows = []
    with open(args.csv, "r") as fh:
        header = fh.readline().strip().split(",")
        if header != ["t", "norm", "weight_sigma", "subtracted"]:
            raise ValueError(f"unexpected decay CSV header: {header}")
        for line in fh:
            if line.strip():
                t, nrm, sig, sub = line.strip().split(",")
                rows.append((float(t), float(nrm), float(sig), int(sub)))
    if not rows:
        raise ValueError("decay CSV has no data rows")
    key = (rows[0][2], rows[0][3])
    sel = [(t, nrm) for t, nrm, sig, sub in rows if (sig, sub) == key]
    fit = fit_decay([r[0] for r in sel], [r[1] for r in sel])
    print(f"series (weight_sigma = {key[0]:g}, subtracted = {key[1]}): "
          f"{len(sel)} samples, slope = {fit.slope:.6f} "
          f"+/- {fit.slope_stderr:.6f}")
    if args.out:
        out = _outdir(args)
        payload = {"weight_sigma": key[0], "subtracted": key[1],
                   "slope": fit.slope, "stderr": fit.slope_stderr,
                   "intercept": fit.intercept, "samples": len(sel)}
        with open(os.path.join(out, "decay_fit.json"), "w",
                  newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _build_parser() -> _Parser:
    p = _Parser(prog="jostlab",
                description="Scattering, resonance, and dispersive-decay "
                            "experiments for -d^2/dx^2 + V on the line")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, config_required=True):
        sp.add_argument("--config", required=config_required,
                        help="path to a JSON run config")
        sp.add_argument("--out", default=None,
                        help="output directory (default: current)")

    sp = sub.add_parser("scatter", help="tabulate scattering data over a "
                                        "lambda grid")
    add_common(sp)
    sp = sub.add_parser("resonance", help="classify the zero-energy behaviour"
                                          " (or run a depth scan)")
    add_common(sp)
    sp = sub.add_parser("evolve", help="evolve the configured state on the "
                                       "a.c. subspace")
    add_common(sp)
    sp.add_argument("--t", type=float, default=None, help="evolution time")
    sp.add_argument("--oracle", action="store_true",
                    help="also run the dense reference propagator and print "
                         "the sup-difference")
    sp.add_argument("--lambda-max", type=float, default=None,
                    dest="lambda_max",
                    help="override the spectral truncation edge")
    sp = sub.add_parser("verify", help="run a decay-hypothesis verification")
    add_common(sp)
    sp.add_argument("--theorem", type=int, choices=(1, 2), default=None,
                    help="1 = weighted transport decay, 2 = resonant "
                         "expansion decay")
    sp.add_argument("--lambda-max", type=float, default=None,
                    dest="lambda_max",
                    help="override the spectral truncation edge")
    sp = sub.add_parser("decay-fit", help="re-fit the first series of an "
                                          "existing decay CSV")
    sp.add_argument("csv", help="path to a decay.csv written by verify")
    sp.add_argument("--out", default=None,
                    help="also write decay_fit.json here")
    return p


_DISPATCH = {"scatter": _cmd_scatter, "resonance": _cmd_resonance,
             "evolve": _cmd_evolve, "verify": _cmd_verify,
             "decay-fit": _cmd_decay_fit}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except HypothesisError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
