"""A model + dissipator pair, optionally restricted to a symmetry sector."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property

from .liouvillian import Superoperator, build_liouvillian
from .models import DissipatorSpec, ModelSpec, build_hamiltonian, build_jump_operators
from .spin_ops import DenseOperator, collective
from .symmetry import SectorIsometry, compress, translation_reflection_sector


@dataclass(frozen=True)
class ChainSystem:
    model: ModelSpec
    dissipator: DissipatorSpec
    sector: tuple[float, float] | None = None  # (T, R) eigenvalues

    def __post_init__(self):
        if self.sector is not None:
            if not self.dissipator.is_collective:
                raise ValueError("symmetry sectors need collective dissipation")
            if self.model.boundary != "periodic":
                raise ValueError("translation sectors need a periodic chain")

    @cached_property
    def isometry(self) -> SectorIsometry | None:
        if self.sector is None:
            return None
        return translation_reflection_sector(self.model.n_sites, *self.sector)

    @property
    def basis_tag(self) -> str:
        return "full" if self.isometry is None else self.isometry.label

    @property
    def dim(self) -> int:
        return 2 ** self.model.n_sites if self.isometry is None else self.isometry.sector_dim

    def _restrict(self, op: DenseOperator) -> DenseOperator:
        return op if self.isometry is None else compress(op, self.isometry)

    def hamiltonian(self, b_x: float | None = None) -> DenseOperator:
        model = self.model if b_x is None else self.model.with_field(b_x)
        return self._restrict(build_hamiltonian(model))

    def jumps(self, scale: float = 1.0) -> list[tuple[float, DenseOperator]]:
        ops = build_jump_operators(self.dissipator.scaled(scale), self.model.n_sites)
        return [(g, self._restrict(c)) for g, c in ops]

    def liouvillian(self, b_x: float | None = None, scale: float = 1.0) -> Superoperator:
        return build_liouvillian(self.hamiltonian(b_x), self.jumps(scale))

    def observable(self, axis: str) -> DenseOperator:
        return self._restrict(collective(axis, self.model.n_sites))

    def with_scale(self, scale: float) -> ChainSystem:
        return dataclasses.replace(self, dissipator=self.dissipator.scaled(scale))
