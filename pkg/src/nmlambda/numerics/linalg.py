"""Small dense Hermitian eigenproblems and 3x3 singular values."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import NoConvergence, NotHermitian
from ._backend import kernels

MAX_DIM = 9


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None


def hermitian_eigen(a, want_vectors=False, hermitian_tol=1e-10):
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order; eigenvectors (columns) only
    when ``want_vectors`` is set.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"matrices larger than {MAX_DIM}x{MAX_DIM} are not supported")
    defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if defect > hermitian_tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {hermitian_tol:.1e}")
    w, v, sweeps = kernels.jacobi_eigh(a, want_vectors)
    if sweeps < 0:
        raise NoConvergence("Jacobi eigensolver hit the sweep limit")
    return HermitianSpectrum(np.asarray(w), None if v is None else np.asarray(v))


def svd3(m):
    """Singular values of a 3x3 complex matrix, descending."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    return np.asarray(kernels.svd3_values(m))


def pure_state_negativity(coeffs):
    """Negativity of normalized pure two-qutrit states from coefficient matrices.

    Accepts one 3x3 matrix or a stack of shape (N, 3, 3); the matrices need
    not be normalized. With Schmidt coefficients s_i the negativity is
    ``sum_{i<j} s_i s_j / sum_i s_i^2``. Zero matrices give NaN.
    """
    c = np.asarray(coeffs, dtype=complex)
    single = c.ndim == 2
    batch = c.reshape(-1, 3, 3)
    out = np.asarray(kernels.batch_pure_negativity(np.ascontiguousarray(batch)))
    return float(out[0]) if single else out.reshape(c.shape[:-2])
