"""Orthogonal polynomials, Riesz transforms and their transference limits."""

__version__ = "0.1.0"
