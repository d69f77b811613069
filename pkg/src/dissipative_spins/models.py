"""Declarative chain models and their Hamiltonians / jump operators."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .spin_ops import DenseOperator, collective, pauli_site

ModelKind = Literal["xxz", "ising", "heisenberg"]
Boundary = Literal["open", "periodic"]
DissipatorKind = Literal["local", "collective", "local_with_heating"]


@dataclass(frozen=True)
class ModelSpec:
    """Nearest-neighbour spin chain in a transverse field.

    ``alpha1``/``alpha2`` are the XX+YY and ZZ couplings of the XXZ model,
    ``alpha3`` the Ising ZZ coupling and ``alpha`` the isotropic Heisenberg
    coupling; only the ones relevant to ``model`` are read.
    """

    n_sites: int
    model: ModelKind = "ising"
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 1.0
    alpha: float = 1.0
    boundary: Boundary = "open"
    b_x: float = 0.0
    b_z: float = 0.0
    nu_tilde: float = 0.0

    def __post_init__(self):
        if self.model not in ("xxz", "ising", "heisenberg"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.n_sites < 2:
            raise ValueError("two-site couplings need n_sites >= 2")
        if self.boundary == "periodic" and self.n_sites < 3:
            raise ValueError("periodic boundary needs n_sites >= 3")

    @property
    def couplings(self) -> tuple[float, float]:
        """(XX+YY coupling, ZZ coupling) for the chosen model."""
        if self.model == "xxz":
            return self.alpha1, self.alpha2
        if self.model == "ising":
            return 0.0, self.alpha3
        return self.alpha, self.alpha

    @property
    def energy_scale(self) -> float:
        """Dominant coupling; sweeps are quoted in units of it."""
        xy, zz = self.couplings
        return max(abs(xy), abs(zz)) or 1.0

    def bonds(self) -> list[tuple[int, int]]:
        pairs = [(k, k + 1) for k in range(1, self.n_sites)]
        if self.boundary == "periodic":
            pairs.append((self.n_sites, 1))
        return pairs

    def with_field(self, b_x: float) -> ModelSpec:
        return dataclasses.replace(self, b_x=float(b_x))


@dataclass(frozen=True)
class DissipatorSpec:
    """Jump-operator recipe.

    ``rates`` are the per-site decay rates for ``local``; ``rate`` the single
    rate for ``collective``; ``a_minus``/``a_plus`` the decay and heating
    strengths for ``local_with_heating``.
    """

    kind: DissipatorKind
    rates: tuple[float, ...] = ()
    rate: float = 0.0
    a_minus: float = 0.0
    a_plus: float = 0.0

    def __post_init__(self):
        if self.kind not in ("local", "collective", "local_with_heating"):
            raise ValueError(f"unknown dissipator kind {self.kind!r}")
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if self.kind == "local" and any(r < 0 for r in self.rates):
            raise ValueError("local rates must be nonnegative")
        if self.kind == "collective" and self.rate < 0:
            raise ValueError("collective rate must be nonnegative")
        if self.kind == "local_with_heating":
            if self.a_minus < 0 or self.a_plus < 0:
                raise ValueError("a_minus and a_plus must be nonnegative")
            if self.a_plus > self.a_minus:
                warnings.warn("a_plus > a_minus: outside the decay-dominated regime",
                              stacklevel=2)

    @classmethod
    def local(cls, rates) -> DissipatorSpec:
        return cls("local", rates=tuple(rates))

    @classmethod
    def uniform(cls, gamma: float, n_sites: int) -> DissipatorSpec:
        return cls("local", rates=(gamma,) * n_sites)

    @classmethod
    def collective(cls, gamma: float) -> DissipatorSpec:
        return cls("collective", rate=gamma)

    @classmethod
    def with_heating(cls, a_minus: float, a_plus: float) -> DissipatorSpec:
        return cls("local_with_heating", a_minus=a_minus, a_plus=a_plus)

    def scaled(self, factor: float) -> DissipatorSpec:
        """Same dissipator with every rate multiplied by ``factor``."""
        return dataclasses.replace(
            self,
            rates=tuple(factor * r for r in self.rates),
            rate=factor * self.rate,
            a_minus=factor * self.a_minus,
            a_plus=factor * self.a_plus,
        )

    @property
    def min_rate(self) -> float:
        if self.kind == "local":
            positive = [r for r in self.rates if r > 0]
            return min(positive) if positive else 0.0
        if self.kind == "collective":
            return self.rate
        positive = [r for r in (self.a_minus, self.a_plus) if r > 0]
        return min(positive) if positive else 0.0

    @property
    def is_collective(self) -> bool:
        return self.kind == "collective"


def build_hamiltonian(spec: ModelSpec) -> DenseOperator:
    n = spec.n_sites
    xy, zz = spec.couplings
    s = {(a, k): pauli_site(a, k, n).entries for a in "xyz" for k in range(1, n + 1)}
    h = np.zeros((2 ** n,) * 2, dtype=complex)
    for i, j in spec.bonds():
        if xy:
            h += xy * (s["x", i] @ s["x", j] + s["y", i] @ s["y", j])
        if zz:
            h += zz * (s["z", i] @ s["z", j])
    h += spec.b_x * collective("x", n).entries
    h += spec.b_z * collective("z", n).entries
    if spec.nu_tilde:
        # sum_k |1><1|_k = (N - J^z) / 2
        h += spec.nu_tilde * 0.5 * (n * np.eye(2 ** n) - collective("z", n).entries)
    return DenseOperator(0.5 * (h + h.conj().T))


def build_jump_operators(spec: DissipatorSpec, n_sites: int) -> list[tuple[float, DenseOperator]]:
    """Weighted jump operators; each (g, c) enters as g (2 c rho c^+ - {c^+ c, rho})."""
    if spec.kind == "local":
        if len(spec.rates) != n_sites:
            raise ValueError(f"expected {n_sites} local rates, got {len(spec.rates)}")
        return [(g, pauli_site("minus", k, n_sites)) for k, g in enumerate(spec.rates, start=1)]
    if spec.kind == "collective":
        return [(spec.rate, collective("minus", n_sites))]
    jumps = []
    for k in range(1, n_sites + 1):
        jumps.append((spec.a_minus, pauli_site("minus", k, n_sites)))
        jumps.append((spec.a_plus, pauli_site("plus", k, n_sites)))
    return jumps
