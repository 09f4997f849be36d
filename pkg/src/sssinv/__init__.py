"""Desk-scale simulator and neural-network inversion toolkit for multi-angle
L-band sea surface salinity retrieval."""

from .kernels import get_backend

__version__ = "0.1.0"

__all__ = ["get_backend", "__version__"]
