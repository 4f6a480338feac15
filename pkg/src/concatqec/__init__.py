"""Simulation of a concatenated code correcting located erasures and Pauli errors.

An external graph code (one data qubit into five) is composed with an
internal, measurement-free loss-correcting code (five qubits into three
5-qubit blocks). The package provides the state-vector engine, both codes,
noise-scenario machinery, the concatenated pipeline with its exhaustive
verification harness, and a CLI front end.
"""

from .backends import active_backend

__version__ = "0.1.0"

__all__ = ["active_backend", "__version__"]
