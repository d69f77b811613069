"""Spin-1/2 operator algebra on an N-site chain.

Conventions used throughout the package:

* site 1 is the most significant bit of a computational-basis index;
* ``|0>`` (motional ground state) has sigma^z eigenvalue +1;
* sigma^+ = |1><0|, sigma^- = |0><1|, sigma^x = sigma^+ + sigma^-,
  sigma^y = -i|0><1| + i|1><0| so that sigma^x sigma^y = i sigma^z.
  Paulis carry eigenvalues +-1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FULL_BASIS = "full"

_SINGLE = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 0], [1, 0]], dtype=complex),
    "minus": np.array([[0, 1], [0, 0]], dtype=complex),
}
AXES = tuple(_SINGLE)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Immutable dense complex matrix tagged with the basis it lives in."""

    entries: np.ndarray
    basis_tag: str = FULL_BASIS
    dim: int = field(init=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"operator must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "dim", arr.shape[0])

    def _check(self, other: DenseOperator) -> None:
        if self.basis_tag != other.basis_tag:
            raise ValueError(f"basis mismatch: {self.basis_tag!r} vs {other.basis_tag!r}")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check(other)
        return DenseOperator(self.entries + other.entries, self.basis_tag)

    def __sub__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check(other)
        return DenseOperator(self.entries - other.entries, self.basis_tag)

    def __matmul__(self, other):
        if not isinstance(other, DenseOperator):
            return NotImplemented
        self._check(other)
        return DenseOperator(self.entries @ other.entries, self.basis_tag)

    def __mul__(self, scalar):
        if isinstance(scalar, DenseOperator):
            return NotImplemented
        return DenseOperator(scalar * self.entries, self.basis_tag)

    __rmul__ = __mul__

    def __neg__(self):
        return DenseOperator(-self.entries, self.basis_tag)

    def dag(self) -> DenseOperator:
        return DenseOperator(self.entries.conj().T, self.basis_tag)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0) <= atol)

    def norm(self) -> float:
        """Spectral (operator 2-) norm."""
        return float(np.linalg.norm(self.entries, 2))

    def allclose(self, other: DenseOperator, atol: float = 1e-12) -> bool:
        return (self.basis_tag == other.basis_tag and self.dim == other.dim
                and np.allclose(self.entries, other.entries, rtol=0, atol=atol))


def identity(dim: int, basis_tag: str = FULL_BASIS) -> DenseOperator:
    return DenseOperator(np.eye(dim, dtype=complex), basis_tag)


def basis_index(bits) -> int:
    """Index of the product state with site values ``bits`` (site 1 first)."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def basis_bits(index: int, n_sites: int) -> tuple[int, ...]:
    return tuple((index >> (n_sites - 1 - k)) & 1 for k in range(n_sites))


def pauli_site(axis: str, site: int, n_sites: int) -> DenseOperator:
    """Single-site operator ``axis`` on ``site`` (1-based), identity elsewhere."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range [1, {n_sites}]")
    try:
        single = _SINGLE[axis]
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}; expected one of {AXES}") from None
    left = np.eye(2 ** (site - 1))
    right = np.eye(2 ** (n_sites - site))
    return DenseOperator(np.kron(np.kron(left, single), right))


def collective(axis: str, n_sites: int) -> DenseOperator:
    """Collective operator J^axis = sum_k sigma_k^axis."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    total = np.zeros((2 ** n_sites,) * 2, dtype=complex)
    for k in range(1, n_sites + 1):
        total += pauli_site(axis, k, n_sites).entries
    return DenseOperator(total)


def dump_operator(op: DenseOperator) -> str:
    """Row-major dump: one CSV line per matrix row, alternating re, im."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in op.entries:
        writer.writerow([repr(float(v)) for z in row for v in (z.real, z.imag)])
    return buf.getvalue()


def load_operator(text: str, basis_tag: str = FULL_BASIS) -> DenseOperator:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    values = np.array([[float(v) for v in r] for r in rows])
    if values.shape[1] % 2:
        raise ValueError("odd number of columns in operator dump")
    return DenseOperator(values[:, 0::2] + 1j * values[:, 1::2], basis_tag)


def write_operator(op: DenseOperator, path: str | Path) -> None:
    Path(path).write_text(dump_operator(op))
