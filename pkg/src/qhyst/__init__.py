"""Tunnelling hysteresis in a nonlinear two-site dimer and a nonlinear box."""

__version__ = "0.1.0"
