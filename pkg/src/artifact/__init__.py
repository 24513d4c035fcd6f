"""Explicit computations around limit multiplicity for arithmetic lattices
in PGL(2,R) and PGL(2,C)."""

__version__ = "0.1.0"
