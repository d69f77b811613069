"""Column-stacked Lindblad superoperators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_ops import DenseOperator


def vectorize(rho: DenseOperator | np.ndarray) -> np.ndarray:
    """Column stacking: vec(rho)[i + d*j] = rho[i, j]."""
    m = rho.entries if isinstance(rho, DenseOperator) else np.asarray(rho)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("vectorize expects a square matrix")
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def devectorize(v: np.ndarray, basis_tag: str = "full") -> DenseOperator:
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"length {v.size} is not a perfect square")
    return DenseOperator(v.reshape(d, d, order="F"), basis_tag)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Liouvillian on vectorized density matrices.

    ``hamiltonian_part`` and ``dissipative_part`` sum to ``entries`` and are
    kept for the weak-dissipation analysis.
    """

    dim: int
    entries: np.ndarray
    hamiltonian_part: np.ndarray
    dissipative_part: np.ndarray
    basis_tag: str = "full"

    @property
    def gamma_split(self) -> tuple[np.ndarray, np.ndarray]:
        return self.hamiltonian_part, self.dissipative_part

    def apply(self, rho: DenseOperator) -> DenseOperator:
        if rho.dim != self.dim:
            raise ValueError("dimension mismatch")
        return devectorize(self.entries @ vectorize(rho), self.basis_tag)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2))


def hamiltonian_superop(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superop(jumps) -> np.ndarray:
    """Sum of g (2 c rho c^+ - {c^+ c, rho}) over (g, c) in ``jumps``."""
    d = jumps[0][1].dim
    eye = np.eye(d)
    out = np.zeros((d * d, d * d), dtype=complex)
    for g, c in jumps:
        if g == 0:
            continue
        m = c.entries
        cdc = m.conj().T @ m
        out += g * (2 * np.kron(m.conj(), m) - np.kron(eye, cdc) - np.kron(cdc.T, eye))
    return out


def build_liouvillian(H: DenseOperator, jumps) -> Superoperator:
    for _, c in jumps:
        if c.dim != H.dim or c.basis_tag != H.basis_tag:
            raise ValueError("jump operator does not share dimension/basis with H")
    if any(g < 0 for g, _ in jumps):
        raise ValueError("negative rate")
    l0 = hamiltonian_superop(H.entries)
    l1 = dissipator_superop(jumps) if jumps else np.zeros_like(l0)
    return Superoperator(H.dim, l0 + l1, l0, l1, H.basis_tag)


def apply_lindblad(H: DenseOperator, jumps, rho: DenseOperator) -> DenseOperator:
    """Direct (unvectorized) evaluation of the master-equation right-hand side."""
    h, r = H.entries, rho.entries
    out = -1j * (h @ r - r @ h)
    for g, c in jumps:
        m = c.entries
        cdc = m.conj().T @ m
        out = out + g * (2 * m @ r @ m.conj().T - cdc @ r - r @ cdc)
    return DenseOperator(out, rho.basis_tag)
