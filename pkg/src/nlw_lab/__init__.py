"""Numerical laboratory for radial semilinear wave equations with derivative nonlinearities."""

__version__ = "0.1.0"
