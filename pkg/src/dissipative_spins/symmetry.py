"""Translation, reflection and spin-flip symmetries and their sectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin_ops import DenseOperator, basis_bits, basis_index

_MAX_ORDER = 64


def _permutation_matrix(n_sites: int, mapping) -> DenseOperator:
    dim = 2 ** n_sites
    mat = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        mat[basis_index(mapping(basis_bits(b, n_sites))), b] = 1.0
    return DenseOperator(mat)


def symmetry_op(kind: str, n_sites: int) -> DenseOperator:
    """Permutation operator for ``translation``, ``reflection`` or ``flip``.

    Translation sends site values (s1, ..., sN) to (sN, s1, ..., s_{N-1}),
    reflection to (sN, ..., s1); flip inverts every site (F = sigma_x^N).
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if kind == "translation":
        return _permutation_matrix(n_sites, lambda s: s[-1:] + s[:-1])
    if kind == "reflection":
        return _permutation_matrix(n_sites, lambda s: s[::-1])
    if kind == "flip":
        return _permutation_matrix(n_sites, lambda s: tuple(1 - v for v in s))
    raise ValueError(f"unknown symmetry {kind!r}")


@dataclass(frozen=True, eq=False)
class SectorIsometry:
    """Orthonormal basis (as columns) of a joint symmetry eigenspace."""

    full_dim: int
    sector_dim: int
    columns: np.ndarray
    label: str
    generators: tuple = ()

    def embed(self, rho: DenseOperator) -> DenseOperator:
        """Lift a sector operator back to the full space."""
        v = self.columns
        return DenseOperator(v @ rho.entries @ v.conj().T)


def _order(mat: np.ndarray) -> int:
    power = mat.copy()
    eye = np.eye(mat.shape[0])
    for n in range(1, _MAX_ORDER + 1):
        if np.allclose(power, eye, atol=1e-12):
            return n
        power = power @ mat
    raise ValueError(f"generator has order > {_MAX_ORDER}; not supported")


def _eigenprojector(mat: np.ndarray, eigenvalue: complex) -> np.ndarray:
    order = _order(mat)
    proj = np.zeros_like(mat)
    power = np.eye(mat.shape[0], dtype=complex)
    for n in range(order):
        proj += eigenvalue ** (-n) * power
        power = power @ mat
    return proj / order


def sector_label(generators) -> str:
    return ",".join(f"{name}={value:g}" for name, value in generators)


def sector_isometry(generators, n_sites: int, label: str | None = None) -> SectorIsometry:
    """Joint eigenspace of unitary ``generators`` = [(op, eigenvalue), ...].

    Generators need only commute on the sector: every generator must commute
    with the projector onto the eigenspaces of the generators listed before
    it.  This admits translation followed by reflection at T = +-1, where the
    two do not commute on the full space.

    Columns are obtained by projecting computational basis states in
    ascending index order and keeping the ones that add a new direction, so
    for permutation symmetries each column is a symmetrized orbit
    representative.
    """
    dim = 2 ** n_sites
    mats = []
    for op, _ in generators:
        m = op.entries
        if m.shape != (dim, dim):
            raise ValueError("generator dimension does not match n_sites")
        if not np.allclose(m.conj().T @ m, np.eye(dim), atol=1e-12):
            raise ValueError("generators must be unitary")
        mats.append(m)
    proj = np.eye(dim, dtype=complex)
    for m, (_, value) in zip(mats, generators):
        # each generator must commute with the projector built so far, i.e.
        # leave the earlier eigenspaces invariant (T and R only commute there)
        if np.max(np.abs(m @ proj - proj @ m)) > 1e-12:
            raise ValueError("generators do not commute on the requested sector")
        proj = proj @ _eigenprojector(m, complex(value))

    cols: list[np.ndarray] = []
    for b in range(dim):
        v = proj[:, b].copy()
        for c in cols:
            v -= c * np.vdot(c, v)
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            v = v / norm
            # real positive leading entry for reproducible dumps
            lead = v[np.argmax(np.abs(v) > 1e-12)]
            cols.append(v * (abs(lead) / lead))
    if not cols:
        raise ValueError("empty symmetry sector")
    columns = np.array(cols).T
    columns.setflags(write=False)
    if label is None:
        label = ",".join(f"g{k}={complex(v).real:g}" for k, (_, v) in enumerate(generators))
    return SectorIsometry(dim, len(cols), columns, label, tuple(mats))


def translation_reflection_sector(n_sites: int, t: float = 1, r: float = 1) -> SectorIsometry:
    return sector_isometry(
        [(symmetry_op("translation", n_sites), t), (symmetry_op("reflection", n_sites), r)],
        n_sites,
        label=f"T={t:g},R={r:g}",
    )


def leakage(op: DenseOperator, iso: SectorIsometry) -> float:
    """Norm of the part of ``op`` that maps the sector outside itself."""
    v = iso.columns
    image = op.entries @ v
    return float(np.linalg.norm(image - v @ (v.conj().T @ image), 2))


def compress(op: DenseOperator, iso: SectorIsometry, check: bool = True) -> DenseOperator:
    """Restrict ``op`` to the sector: V^+ op V.

    With ``check`` the operator must commute with every sector generator
    (to 1e-10) and must not leak out of the sector.
    """
    if op.dim != iso.full_dim:
        raise ValueError(f"operator dim {op.dim} != sector full_dim {iso.full_dim}")
    if check:
        m = op.entries
        scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
        for g in iso.generators:
            if np.max(np.abs(g @ m - m @ g)) > 1e-10 * scale:
                raise ValueError(f"operator does not commute with the symmetries of {iso.label}")
        if leakage(op, iso) > 1e-10 * scale:
            raise ValueError(f"operator leaks out of sector {iso.label}")
    v = iso.columns
    return DenseOperator(v.conj().T @ op.entries @ v, iso.label)
