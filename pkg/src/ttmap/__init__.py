"""Ternary-tree fermion-to-qubit mappings tailored to reduce entanglement."""

__version__ = "0.1.0"
