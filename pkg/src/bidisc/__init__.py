"""Level-set geometry and Carleson-box volume scaling for self-maps of the bidisc."""

from .kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
