"""Distance between the full steady state and its weak-dissipation limit.

    python scripts/weak_limit_convergence.py --model xxz --n 4 --bx 0.9

For a non-degenerate H the two agree as gamma -> 0; the printed slope is the
fitted exponent of the population error in gamma.
"""

import argparse

import numpy as np

from dissipative_spins.models import DissipatorSpec, ModelSpec
from dissipative_spins.steadystate import steady_state, trace_distance, weak_limit_steady_state
from dissipative_spins.system import ChainSystem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default="xxz", choices=["xxz", "ising", "heisenberg"])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--bx", type=float, default=0.9)
    ap.add_argument("--bz", type=float, default=0.0)
    ap.add_argument("--gammas", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4, 1e-5])
    args = ap.parse_args()

    spec = ModelSpec(args.n, args.model, alpha1=0.25, alpha2=1.0, alpha3=1.0, alpha=1.0,
                     b_x=args.bx, b_z=args.bz)
    system = ChainSystem(spec, DissipatorSpec.uniform(1.0, args.n))
    h = system.hamiltonian()
    _, vecs = np.linalg.eigh(h.entries)
    weak = weak_limit_steady_state(h, system.jumps()).rho
    errs = []
    for g in args.gammas:
        rho = steady_state(system.liouvillian(scale=g)).rho
        pops = np.diag(vecs.conj().T @ (rho.entries - weak.entries) @ vecs)
        errs.append(np.max(np.abs(pops)))
        print(f"gamma={g:8.1e}  trace distance={trace_distance(rho, weak):.3e}  "
              f"population error={errs[-1]:.3e}")
    if len(errs) > 1:
        slope = np.polyfit(np.log(args.gammas), np.log(errs), 1)[0]
        print(f"population error slope: {slope:.2f}")


if __name__ == "__main__":
    main()
