"""``coolbound`` command line: bound | simulate | rate | oracle | sweep.

Exit codes: 0 success, 1 bound violation (strict mode), 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bounds, oracle
from .config import RunConfig, load_config
from .errors import BudgetError, ConfigError, CoolboundError
from .majorization import majorization_margin, schur_functionals
from .protocols import BOUND_TOL, iterate
from .spectra import PopulationVector, Spectrum, thermal_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return "" if x is None else str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _keyed(cfg: RunConfig, key: str, build):
    """Run ``build`` and re-raise its errors against the config line of ``key``."""
    try:
        return build()
    except CoolboundError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{key}: {exc}", cfg.line_of(key)) from None


def _spectra(cfg: RunConfig):
    cfg.require("target_spectrum", "machine_spectrum", "beta_r")
    target = _keyed(cfg, "target_spectrum", lambda: Spectrum(cfg.target_spectrum))
    machine = _keyed(cfg, "machine_spectrum", lambda: Spectrum(cfg.machine_spectrum))
    return target, machine


def _initial_state(cfg: RunConfig, target: Spectrum, machine: Spectrum) -> PopulationVector:
    init = cfg.initial
    if init == "thermal":
        return thermal_state(target, cfg.beta_r)
    if init == "uniform":
        return PopulationVector.uniform(target.dim)
    if init == "rho_star":
        return bounds.rho_star(target.dim, cfg.beta_r, machine.e_max)
    if len(init) != target.dim:
        raise ConfigError(
            f"initial state has {len(init)} entries, target has {target.dim} levels",
            cfg.line_of("initial"),
        )
    return _keyed(cfg, "initial", lambda: PopulationVector(init))


def bound_rows(cfg: RunConfig):
    target, machine = _spectra(cfg)
    bs = _keyed(cfg, "beta_h", lambda: bounds.bound_set(
        target.levels, machine.e_max, cfg.beta_r, cfg.beta_h))
    rows = [("g", bs.g)]
    rows += [(f"rho_star_{i}", v) for i, v in enumerate(bs.rho_star.probs)]
    rows.append(("p0_star", bs.p0_star))
    if bs.beta_star is not None:
        rows.append(("beta_star", bs.beta_star))
    if bs.beta_star_inc is not None:
        rows.append(("beta_star_inc", bs.beta_star_inc))
    return ["quantity", "value"], rows


def simulate(cfg: RunConfig):
    """Return ``(csv_text, report, strict_violation)`` for one run.

    When a row fails the bound check the CSV stops after that row.
    """
    target, machine = _spectra(cfg)
    initial = _initial_state(cfg, target, machine)
    beta_h = 0.0 if cfg.beta_h is None else cfg.beta_h
    report, traces = _keyed(cfg, "protocol", lambda: iterate(
        cfg.protocol, initial, target=target, machine=machine, beta_r=cfg.beta_r,
        beta_h=beta_h, tolerance=cfg.tolerance, max_cycles=cfg.max_cycles))
    star = bounds.rho_star(target.dim, cfg.beta_r, machine.e_max)
    d = target.dim
    header = (["row_type", "cycle"] + [f"p_{i}" for i in range(d)]
              + ["ground_pop", "entropy", "purity", "mean_energy", "residual",
                 "chosen_index", "delta", "bound_ok", "converged", "distance_to_bound"])
    rows = []
    violation = False
    for tr in traces:
        f = tr.functionals
        rows.append(["cycle", tr.cycle_index, *tr.state_after.probs, f.ground_pop, f.entropy,
                     f.purity, f.mean_energy, f.ground_pop - star[0], tr.chosen_index,
                     tr.delta, tr.bound_ok, None, None])
        if not tr.bound_ok:
            violation = True
            break
    if not violation:
        final = report.final_state
        f = schur_functionals(final, target)
        final_ok = (majorization_margin(star, final) >= -BOUND_TOL) if report.premise_holds else True
        rows.append(["summary", report.cycles, *final.probs, f.ground_pop, f.entropy, f.purity,
                     f.mean_energy, f.ground_pop - star[0], None, report.max_residual_delta,
                     final_ok, report.converged, report.distance_to_bound])
        violation = not final_ok
    return _csv_text(header, rows), report, violation


def rate_rows(cfg: RunConfig):
    cfg.require("n_max", "beta_r")
    if cfg.e_max is None:
        if cfg.machine_spectrum is None:
            raise ConfigError("rate needs 'e_max' or 'machine_spectrum'")
        e_max = _keyed(cfg, "machine_spectrum", lambda: Spectrum(cfg.machine_spectrum)).e_max
    else:
        e_max = cfg.e_max
    limit = bounds.norm_scaling_limit(cfg.beta_r, e_max)
    rows = []
    for n in range(1, cfg.n_max + 1):
        rate = bounds.convergence_rate(n, cfg.beta_r, e_max)
        rows.append([n, rate.norm, rate.per_cycle_factor, rate.norm * 2.0**n, limit])
    return ["n", "N_n", "one_minus_N_n", "N_n_times_2_pow_n", "cosh_limit"], rows


def _sweep_one(args):
    cfg, path = args
    text, report, violation = simulate(cfg)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return report.converged, report.cycles, report.final_state[0], report.distance_to_bound, violation


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bound(cfg, args):
    _emit(_csv_text(*bound_rows(cfg)), args.out)
    return EXIT_OK


def cmd_simulate(cfg, args):
    text, report, violation = simulate(cfg)
    _emit(text, args.out)
    for flag in report.flags:
        print(f"note: {flag}", file=sys.stderr)
    if violation and args.strict:
        print("error: state left the cooling bound (use --no-strict to continue)", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_rate(cfg, args):
    _emit(_csv_text(*rate_rows(cfg)), args.out)
    return EXIT_OK


def cmd_oracle(cfg, args):
    try:
        rep = oracle.verify_bound_random(
            cfg.trials, (cfg.max_target_dim, cfg.max_machine_dim), cfg.seed,
            tolerance=cfg.tolerance, max_cycles=cfg.max_cycles, workers=cfg.workers)
    except BudgetError as exc:
        line = next((cfg.line_of(k) for k in ("max_target_dim", "max_machine_dim", "trials")
                     if cfg.line_of(k) is not None), None)
        raise ConfigError(str(exc), line) from None
    verdict = "PASS" if rep.passed else "FAIL"
    _emit(f"{verdict} seed={cfg.seed} {rep.summary()}\n", args.out)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_sweep(cfg, args):
    if cfg.sweep_key is None or not cfg.sweep_values:
        raise ConfigError("sweep needs 'sweep_key' and 'sweep_values'")
    if not args.out:
        raise ConfigError("sweep needs --out <directory>")
    os.makedirs(args.out, exist_ok=True)
    runs = [cfg.with_value(cfg.sweep_key, v) for v in cfg.sweep_values]
    for run in runs:  # fail fast on bad inputs before fanning out
        _spectra(run)
    paths = [os.path.join(args.out, f"run_{i:03d}.csv") for i in range(len(runs))]
    jobs = list(zip(runs, paths))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    header = ["index", "key", "value", "converged", "cycles", "ground_pop", "distance_to_bound", "file"]
    rows = [[i, cfg.sweep_key, v, *res[:4], os.path.basename(p)]
            for i, (v, res, p) in enumerate(zip(cfg.sweep_values, results, paths))]
    sys.stdout.write(_csv_text(header, rows))
    if args.strict and any(res[4] for res in results):
        print("error: a sweep run left the cooling bound", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


COMMANDS = {
    "bound": cmd_bound,
    "simulate": cmd_simulate,
    "rate": cmd_rate,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coolbound", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="key = value run configuration")
    parser.add_argument("--out", help="output file (directory for sweep); default stdout")
    parser.add_argument("--no-strict", dest="strict", action="store_false",
                        help="do not abort when a state violates the bound")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except CoolboundError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
