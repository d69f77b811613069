"""Dissipative spin chains: Lindblad steady states, degeneracy analysis and
cold-atom effective parameters."""

from .liouvillian import Superoperator, build_liouvillian, devectorize, vectorize
from .models import DissipatorSpec, ModelSpec, build_hamiltonian, build_jump_operators
from .spin_ops import DenseOperator, collective, pauli_site
from .steadystate import (
    DegenerateHamiltonianError,
    NumericalError,
    SteadyStateResult,
    evolution_steady_state,
    expectation,
    steady_state,
    uhlmann_fidelity,
    weak_limit_steady_state,
)
from .system import ChainSystem

__version__ = "0.1.0"

__all__ = [
    "ChainSystem",
    "DegenerateHamiltonianError",
    "DenseOperator",
    "DissipatorSpec",
    "ModelSpec",
    "NumericalError",
    "SteadyStateResult",
    "Superoperator",
    "build_hamiltonian",
    "build_jump_operators",
    "build_liouvillian",
    "collective",
    "devectorize",
    "evolution_steady_state",
    "expectation",
    "pauli_site",
    "steady_state",
    "uhlmann_fidelity",
    "vectorize",
    "weak_limit_steady_state",
]
