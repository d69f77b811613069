"""Field sweeps of steady-state observables and infidelities.

Grid points are independent, so they are farmed out to a process pool.
Results are collected in grid order and each point is computed the same way
whatever the worker count, so output does not depend on parallelism.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .steadystate import expectation, steady_state, uhlmann_fidelity

WORKERS_ENV = "DISSIPATIVE_SPINS_WORKERS"


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on linux
        return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepPoint:
    b_x: float
    gamma: float
    jx: float
    jz: float
    kernel_dim: int
    residual: float


def _observable_point(args) -> SweepPoint:
    system, x, gamma = args
    res = steady_state(system.liouvillian(x, scale=gamma))
    jx = expectation(res.rho, system.observable("x")).real
    jz = expectation(res.rho, system.observable("z")).real
    return SweepPoint(float(x), float(gamma), float(jx), float(jz), res.kernel_dim, res.residual)


def _infidelity_point(args) -> float:
    system, x, gamma, delta_b = args
    a = steady_state(system.liouvillian(x, scale=gamma)).rho
    b = steady_state(system.liouvillian(x + delta_b, scale=gamma)).rho
    return 1.0 - uhlmann_fidelity(a, b)


def _pmap(fn, tasks, workers):
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def observable_sweep(system, grid, gammas, workers: int | None = None) -> list[SweepPoint]:
    """Steady-state <J^x>, <J^z> for every (gamma, b_x), gamma-major order.

    ``gammas`` scale the system's dissipator.
    """
    tasks = [(system, float(x), float(g)) for g in gammas for x in grid]
    return _pmap(_observable_point, tasks, workers)


def infidelity_sweep(system, grid, gamma: float, delta_b: float,
                     workers: int | None = None) -> np.ndarray:
    """I(b_x) = 1 - F(rho_ss(b_x), rho_ss(b_x + delta_b)) on ``grid``."""
    if delta_b <= 0:
        raise ValueError("delta_b must be positive")
    tasks = [(system, float(x), float(gamma), float(delta_b)) for x in grid]
    return np.array(_pmap(_infidelity_point, tasks, workers))
