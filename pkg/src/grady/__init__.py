"""Exact computations with real graded-division algebras, graded matrix
algebras with involution and fine gradings on real classical Lie algebras."""

__version__ = "0.1.0"
