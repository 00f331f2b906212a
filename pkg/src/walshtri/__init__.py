"""Exact Walsh-Fourier analysis toolkit for triangular Fejer means on the unit square."""

__version__ = "0.1.0"
