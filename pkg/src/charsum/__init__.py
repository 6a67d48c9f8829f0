"""Exact computation and empirical checking of sums of high-order Dirichlet characters."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
