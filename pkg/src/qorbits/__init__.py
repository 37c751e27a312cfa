"""Exact algebra of quantum matrix algebras: R-matrices, reflection equation
solutions, degree-bounded ideal calculus and orbit quantization checks."""

__version__ = "0.1.0"
