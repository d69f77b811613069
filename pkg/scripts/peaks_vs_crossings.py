"""Run a sweep config and compare <J^x> peaks with the level crossings.

    python scripts/peaks_vs_crossings.py scripts/configs/ising4.ini

Prints, per gamma, every detected peak with the nearest crossing and its
discontinuity norm C.  Nothing is written to disk.
"""

import argparse

import numpy as np

from dissipative_spins.cli import system_of
from dissipative_spins.config import load_sweep_config
from dissipative_spins.degeneracy import discontinuity_norm, find_crossings, sweep_spectrum
from dissipative_spins.peaks import detect_peaks
from dissipative_spins.sweeps import observable_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--fraction", type=float, default=0.05, help="minimum relative prominence")
    args = ap.parse_args()

    cfg = load_sweep_config(args.config)
    system = system_of(cfg)
    grid = cfg.grid
    reports = [discontinuity_norm(system, r) for r in find_crossings(sweep_spectrum(system, grid))]
    print(f"{len(reports)} crossings")
    for r in reports:
        print(f"  x0={r.x0:.6f} pair={r.pair} {r.kind:<9} C={r.c_norm:.3e}")

    xs = np.array([r.x0 for r in reports])
    points = observable_sweep(system, grid, cfg.gammas)
    for g in cfg.gammas:
        y = np.array([p.jx for p in points if p.gamma == g])
        peaks = detect_peaks(grid, y, args.fraction, floor=1e-9 * cfg.model.n_sites)
        print(f"gamma={g:g}: {len(peaks)} peaks")
        for p in peaks:
            k = int(np.argmin(np.abs(xs - p.center))) if xs.size else None
            near = f"nearest crossing {xs[k]:.5f} (C={reports[k].c_norm:.2e})" if k is not None else ""
            print(f"  x={p.center:.5f} height={p.height:.4g} fwhm={p.fwhm:.3g} {near}")


if __name__ == "__main__":
    main()
