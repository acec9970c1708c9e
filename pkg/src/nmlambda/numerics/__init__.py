"""Self-contained numerical kernels.

``BACKEND`` names the active kernel implementation: ``"cython"`` when the
compiled extension is importable, otherwise ``"python"``.
"""

from ._backend import BACKEND
from .linalg import HermitianSpectrum, hermitian_eigen, pure_state_negativity, svd3
from .quadrature import QuadratureRule, adaptive_integrate, gauss_legendre, integrate_real_line
from .roots import newton_polish

__all__ = [
    "BACKEND",
    "HermitianSpectrum",
    "QuadratureRule",
    "adaptive_integrate",
    "gauss_legendre",
    "hermitian_eigen",
    "integrate_real_line",
    "newton_polish",
    "pure_state_negativity",
    "svd3",
]
