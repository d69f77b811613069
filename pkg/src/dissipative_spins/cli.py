"""Batch driver: ``dissipative-spins {sweep,spectrum,crossings,params,check} FILE``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
The worker count comes from $DISSIPATIVE_SPINS_WORKERS (default: all
available CPUs).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
import time
from pathlib import Path

from .config import ConfigError, SweepConfig, load_param_file, load_sweep_config
from .coldatom import effective_params
from .degeneracy import crossings_to_json, discontinuity_norm, find_crossings, sweep_spectrum
from .steadystate import NumericalError
from .sweeps import default_workers, infidelity_sweep, observable_sweep
from .system import ChainSystem

log = logging.getLogger("dissipative_spins")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def _fmt(v) -> str:
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return f"{float(v):.17g}"


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    log.info("wrote %s", path)


def system_of(cfg: SweepConfig) -> ChainSystem:
    return ChainSystem(cfg.model, cfg.dissipator, cfg.sector)


def run_spectrum(cfg: SweepConfig, system=None):
    system = system or system_of(cfg)
    branches = sweep_spectrum(system, cfg.grid)
    if branches.ambiguous:
        log.warning("branch tracking was ambiguous somewhere on the grid; "
                    "consider more points")
    rows = [(x, b, branches.values[k, b])
            for k, x in enumerate(branches.grid) for b in range(branches.n_branches)]
    _write_csv(cfg.directory / "spectrum.csv", ["b_x", "branch", "eigenvalue"], rows)
    return branches


def run_crossings(cfg: SweepConfig, branches=None, with_cnorm: bool = True):
    system = system_of(cfg)
    branches = branches if branches is not None else sweep_spectrum(system, cfg.grid)
    reports = find_crossings(branches)
    if with_cnorm:
        reports = [discontinuity_norm(system, r) for r in reports]
    path = cfg.directory / "crossings.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(crossings_to_json(reports) + "\n")
    log.info("wrote %s (%d crossings)", path, len(reports))
    return reports


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> None:
    system = system_of(cfg)
    grid = cfg.grid
    outputs = set(cfg.outputs)
    if outputs & {"jx", "jz"}:
        t = time.perf_counter()
        points = observable_sweep(system, grid, cfg.gammas, workers)
        rows = [(p.b_x, p.gamma, p.jx, p.jz, p.kernel_dim, p.residual) for p in points]
        _write_csv(cfg.directory / "sweep.csv",
                   ["b_x", "gamma", "jx", "jz", "kernel_dim", "residual"], rows)
        log.info("observable sweep: %.1f s", time.perf_counter() - t)
    if "infidelity" in outputs:
        rows = []
        for g in cfg.gammas:
            vals = infidelity_sweep(system, grid, g, cfg.delta_b, workers)
            rows.extend(zip(grid, [g] * len(grid), vals))
        _write_csv(cfg.directory / "infidelity.csv", ["b_x", "gamma", "I_deltaB"], rows)
    branches = None
    if "spectrum" in outputs:
        branches = run_spectrum(cfg, system)
    if outputs & {"crossings", "cnorms"}:
        run_crossings(cfg, branches, with_cnorm="cnorms" in outputs)


def run_params(path, out=None) -> dict:
    pf = load_param_file(path)
    eff = effective_params(pf.lam, pf.raman, pf.hubbard, pf.margin)
    text = eff.to_json()
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    return eff.to_dict()


def run_check(path) -> bool:
    pf = load_param_file(path)
    eff = effective_params(pf.lam, pf.raman, pf.hubbard, pf.margin)
    ok = True
    for rec in eff.validity:
        status = "ok  " if rec.satisfied else "FAIL"
        print(f"{status} {rec.condition:<11} lhs={rec.lhs:.6g} rhs={rec.rhs:.6g} "
              f"margin={rec.margin:+.3f}")
        ok &= rec.satisfied
    print("all conditions satisfied" if ok else "some conditions violated")
    return ok


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dissipative-spins", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("sweep", "steady-state sweeps (outputs per config)"),
                        ("spectrum", "tracked spectrum -> spectrum.csv"),
                        ("crossings", "refined crossings with C norms -> crossings.json")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", type=Path)
        sp.add_argument("-o", "--outdir", type=Path, help="override [output] directory")
    sp = sub.add_parser("params", help="effective cold-atom parameters as JSON")
    sp.add_argument("paramfile", type=Path)
    sp.add_argument("-o", "--out", type=Path)
    sp = sub.add_parser("check", help="validity conditions of a parameter set")
    sp.add_argument("paramfile", type=Path)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command in ("params", "check"):
            if args.command == "params":
                run_params(args.paramfile, args.out)
            else:
                run_check(args.paramfile)
            return EXIT_OK
        cfg = load_sweep_config(args.config)
        if args.outdir is not None:
            cfg = dataclasses.replace(cfg, directory=args.outdir)
        if args.command == "sweep":
            try:
                workers = default_workers()
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            log.info("using %d worker(s)", workers)
            run_sweep(cfg, workers)
        elif args.command == "spectrum":
            run_spectrum(cfg)
        else:
            run_crossings(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
