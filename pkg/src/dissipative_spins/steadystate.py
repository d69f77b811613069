"""Steady states by null space, time evolution and the weak-dissipation limit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg as la

from .liouvillian import Superoperator, devectorize, vectorize
from .spin_ops import DenseOperator

KERNEL_RTOL = 1e-10
DEGENERACY_RTOL = 1e-8
NEGATIVITY_TOL = 1e-8


class NumericalError(RuntimeError):
    """A solver could not produce a trustworthy answer."""


class DegenerateHamiltonianError(NumericalError):
    """The weak-dissipation limit is undefined at an exact degeneracy."""


@dataclass(frozen=True, eq=False)
class SteadyStateResult:
    rho: DenseOperator
    kernel_dim: int
    residual: float
    method: Literal["nullspace", "evolution", "weak_limit"]

    @property
    def unique(self) -> bool:
        return self.kernel_dim == 1


def _kernel_projection(a: np.ndarray, u, s, vh, k: int, x: np.ndarray) -> np.ndarray:
    """Spectral projection of ``x`` onto the k-dimensional kernel of ``a``."""
    right = vh[-k:].conj().T
    left = u[:, -k:]
    return right @ np.linalg.solve(left.conj().T @ right, left.conj().T @ x)


def repair_density_matrix(m: np.ndarray, basis_tag: str = "full") -> DenseOperator:
    """Hermitize, normalize the trace and clip negative dust below 1e-8."""
    tr = np.trace(m)
    if abs(tr) < 1e-300:
        raise NumericalError("kernel vector has zero trace")
    m = m / tr
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    if w[0] < -NEGATIVITY_TOL:
        raise NumericalError(f"steady state has negative eigenvalue {w[0]:.3e}")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        m = (v * (w / w.sum())) @ v.conj().T
    return DenseOperator(m, basis_tag)


def steady_state(L: Superoperator, kernel_rtol: float = KERNEL_RTOL) -> SteadyStateResult:
    """Null-space steady state of ``L``.

    The kernel is read off from the singular values of ``L`` below
    ``kernel_rtol * ||L||_2``.  For a degenerate kernel the returned state is
    the long-time limit of the maximally mixed state, i.e. its spectral
    projection onto the kernel.
    """
    a = L.entries
    u, s, vh = la.svd(a)
    tol = kernel_rtol * s[0] if s[0] > 0 else kernel_rtol
    k = int(np.sum(s < tol))
    if k == 0:
        raise NumericalError(f"no kernel: smallest singular value {s[-1]:.3e} >= {tol:.3e}")
    if k == 1:
        vec = vh[-1].conj()
    else:
        vec = _kernel_projection(a, u, s, vh, k, vectorize(np.eye(L.dim) / L.dim))
    rho = repair_density_matrix(devectorize(vec).entries, L.basis_tag)
    residual = float(np.linalg.norm(a @ vectorize(rho)))
    return SteadyStateResult(rho, k, residual, "nullspace")


def evolve(L: Superoperator, rho0: DenseOperator, t: float) -> DenseOperator:
    """exp(t L) applied to ``rho0`` via a dense matrix exponential."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return rho0
    v = la.expm(t * L.entries) @ vectorize(rho0)
    return devectorize(v, rho0.basis_tag)


def spectral_gap(L: Superoperator, kernel_rtol: float = KERNEL_RTOL) -> float:
    """Slowest nonzero relaxation rate: min |Re lambda| over the non-kernel spectrum."""
    lam = np.linalg.eigvals(L.entries)
    scale = max(np.max(np.abs(lam)), 1e-300)
    rates = np.sort(np.abs(lam.real))
    # drop the kernel (one eigenvalue per stationary state) and purely
    # oscillating modes with a vanishing decay rate
    nonzero = rates[rates > kernel_rtol * scale]
    if len(nonzero) == 0:
        raise NumericalError("Liouvillian has no decaying modes")
    return float(nonzero[0])


def evolution_steady_state(L: Superoperator, rho0: DenseOperator,
                           t: float | None = None, decay_lengths: float = 60.0) -> SteadyStateResult:
    """Long-time state exp(t L) rho0.

    Without ``t`` the horizon is ``decay_lengths`` times the slowest relaxation
    time, which brings transients below e^-60 of their initial weight.
    """
    if t is None:
        t = decay_lengths / spectral_gap(L)
    out = evolve(L, rho0, t)
    rho = repair_density_matrix(out.entries, out.basis_tag)
    residual = float(np.linalg.norm(L.entries @ vectorize(rho)))
    return SteadyStateResult(rho, 1, residual, "evolution")


def population_generator(eigvecs: np.ndarray, jumps) -> np.ndarray:
    """Classical rate matrix M[j, i] on eigenstate populations (columns sum to 0)."""
    d = eigvecs.shape[0]
    w = np.zeros((d, d))
    for g, c in jumps:
        if g == 0:
            continue
        elems = eigvecs.conj().T @ c.entries @ eigvecs
        w += 2 * g * np.abs(elems) ** 2
    np.fill_diagonal(w, 0.0)
    return w - np.diag(w.sum(axis=0))


def weak_limit_steady_state(H: DenseOperator, jumps,
                            degeneracy_rtol: float = DEGENERACY_RTOL,
                            kernel_rtol: float = KERNEL_RTOL) -> SteadyStateResult:
    """gamma -> 0 steady state: populations in the H eigenbasis from the projected dissipator."""
    evals, evecs = np.linalg.eigh(H.entries)
    scale = max(np.max(np.abs(evals)), 1e-300)
    gap = np.min(np.diff(evals)) if len(evals) > 1 else np.inf
    if gap <= degeneracy_rtol * scale:
        raise DegenerateHamiltonianError(f"H is degenerate (min gap {gap:.3e})")
    m = population_generator(evecs, jumps)
    u, s, vh = la.svd(m)
    tol = kernel_rtol * s[0] if s[0] > 0 else kernel_rtol
    k = int(np.sum(s < tol))
    if k == 0:
        raise NumericalError("population generator has no kernel")
    if k == 1:
        p = vh[-1].real
    else:
        d = len(evals)
        p = _kernel_projection(m, u, s, vh, k, np.full(d, 1.0 / d)).real
    p = p / p.sum()
    if p.min() < -NEGATIVITY_TOL:
        raise NumericalError(f"negative weak-limit population {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    rho = DenseOperator((evecs * p) @ evecs.conj().T, H.basis_tag)
    return SteadyStateResult(rho, k, float(np.linalg.norm(m @ p)), "weak_limit")


def expectation(rho: DenseOperator, obs: DenseOperator) -> complex:
    if rho.dim != obs.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {obs.dim}")
    value = complex(np.trace(obs.entries @ rho.entries))
    if obs.is_hermitian() and abs(value.imag) >= 1e-10:
        raise NumericalError(f"Hermitian observable has imaginary expectation {value.imag:.3e}")
    return value


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    # eigenvalues at rounding level are zeros; their square roots (~1e-8)
    # would otherwise dominate the fidelity error for rank-deficient states
    w[w < len(w) * np.finfo(float).eps * max(w[-1], 0.0)] = 0.0
    return (v * np.sqrt(w)) @ v.conj().T


def _check_state(rho: DenseOperator) -> None:
    tr = np.trace(rho.entries)
    if abs(tr - 1) > 1e-6:
        raise ValueError(f"density matrix trace {tr.real:.6g} != 1")
    w = np.linalg.eigvalsh(0.5 * (rho.entries + rho.entries.conj().T))
    if w[0] < -NEGATIVITY_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")


def uhlmann_fidelity(rho: DenseOperator, sigma: DenseOperator) -> float:
    """F = (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.

    Evaluated as the squared nuclear norm of sqrt(rho) sqrt(sigma), which is
    the same quantity but symmetric in its arguments by construction.
    """
    if rho.dim != sigma.dim:
        raise ValueError("dimension mismatch")
    _check_state(rho)
    _check_state(sigma)
    prod = _psd_sqrt(rho.entries) @ _psd_sqrt(sigma.entries)
    f = float(np.sum(la.svdvals(prod)) ** 2)
    return min(max(f, 0.0), 1.0)


def trace_distance(rho: DenseOperator, sigma: DenseOperator) -> float:
    """Trace norm of the difference, ||rho - sigma||_1."""
    diff = rho.entries - sigma.entries
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


def infidelity_pair(system, b_x: float, delta_b: float) -> float:
    """1 - F(rho_ss(b_x), rho_ss(b_x + delta_b)) from null-space solves.

    ``system`` is a :class:`~dissipative_spins.system.ChainSystem`.
    """
    if delta_b <= 0:
        raise ValueError("delta_b must be positive")
    a = steady_state(system.liouvillian(b_x)).rho
    b = steady_state(system.liouvillian(b_x + delta_b)).rho
    return 1.0 - uhlmann_fidelity(a, b)
