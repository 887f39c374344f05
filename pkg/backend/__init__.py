"""depthlab backend: half-space depth kernels, models and IO helpers."""

__version__ = "1.0.0"
