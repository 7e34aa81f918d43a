"""Dense complex linear-algebra primitives used throughout the package.

Everything here is a thin, contract-enforcing layer over LAPACK (via
numpy): Hermitian eigendecomposition, PSD square roots and unitaries
generated by Hermitian matrices.  All functions are pure; inputs are
never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances


def hermiticity_defect(M: np.ndarray) -> float:
    """Largest elementwise asymmetry |M - M^dag|, relative to max|M|."""
    M = np.asarray(M)
    scale = max(np.abs(M).max(), 1.0) if M.size else 1.0
    return float(np.abs(M - M.conj().T).max() / scale)


def require_hermitian(M: np.ndarray, tols: Tolerances = DEFAULT_TOLS, name: str = "matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    defect = hermiticity_defect(M)
    if defect > tols.hermiticity * 10:
        # factor 10: the elementwise-relative contract in the docs is
        # checked against max|M|, which is slightly stricter than needed
        raise ValueError(f"{name} is not Hermitian: max asymmetry {defect:.3e} exceeds tolerance")
    return M


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    ``eigenvectors[:, k]`` is the normalized eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply_function(self, f) -> np.ndarray:
        """f(M) computed through the spectrum; f acts elementwise on eigenvalues."""
        V = self.eigenvectors
        return (V * f(self.eigenvalues)) @ V.conj().T


def eigh_hermitian(M: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Rejects non-Hermitian input with a diagnostic naming the maximum
    asymmetry.  Deterministic for a fixed input (LAPACK ``heevd``).
    """
    M = require_hermitian(M, tols)
    vals, vecs = np.linalg.eigh(M)
    return SpectralDecomposition(vals, vecs)


def psd_sqrt(M: np.ndarray, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues in [psd_floor, 0) are clamped to zero; anything below the
    floor is rejected as non-PSD.
    """
    dec = eigh_hermitian(M, tols)
    lo = dec.eigenvalues.min() if dec.dim else 0.0
    scale = max(abs(dec.eigenvalues).max(), 1.0)
    if lo < tols.psd_floor * scale:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {lo:.3e}")
    return dec.apply_function(lambda w: np.sqrt(np.clip(w, 0.0, None)))


def unitary_exp(A: np.ndarray, theta: float, sign: int = -1, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """exp(sign * i * theta * A) for Hermitian A, via the spectral decomposition.

    ``sign=-1`` (default) gives the interferometer propagator exp(-i A theta).
    """
    if sign not in (-1, +1):
        raise ValueError("sign must be +1 or -1")
    dec = eigh_hermitian(A, tols)
    return dec.apply_function(lambda w: np.exp(1j * sign * theta * w))
