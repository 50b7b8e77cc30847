"""Compact hyperbolic polyhedra: realizations, deformations, volumes,
and quantum graph invariants at roots of unity."""

__version__ = "0.1.0"
