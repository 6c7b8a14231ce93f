"""Polylogarithms, regulator forms, Grassmannian integrals and polylogarithmic complexes."""

__version__ = "0.1.0"
