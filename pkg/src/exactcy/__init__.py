"""Exact computations for Hochschild/cyclic complexes, S^1-complexes,
Ginzburg dg algebras, bar/cobar duality and cellular Legendrian dg algebras."""

__version__ = "0.1.0"
