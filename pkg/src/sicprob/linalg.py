"""Matrix kernels with explicit domain checks.

Everything downstream funnels its matrix exponentials, logarithms and
Hermitian diagonalizations through these four functions so that tolerance
handling and branch-cut failures live in exactly one place.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import LogBranchError, NonRealLogError

__all__ = ["mat_exp", "mat_log_real", "eig_hermitian", "frobenius_dist"]


def _as_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square matrix (real in, real out)."""
    a = _as_square(a, "a")
    return scipy.linalg.expm(a)


def mat_log_real(s: np.ndarray, tol_imag: float = 1e-8) -> np.ndarray:
    """Principal real logarithm of a real square matrix.

    Parameters
    ----------
    s : np.ndarray
        Real square matrix. Its spectrum must avoid the closed negative
        real axis (zero included), otherwise the principal branch is
        undefined or non-real.
    tol_imag : float
        Largest acceptable magnitude for imaginary parts of the computed
        logarithm before they are discarded.

    Returns
    -------
    np.ndarray
        Real matrix ``L`` with ``mat_exp(L)`` equal to ``s``.

    Raises
    ------
    LogBranchError
        If any eigenvalue of ``s`` lies on the closed negative real axis.
        The offending eigenvalues are attached to the exception.
    NonRealLogError
        If the computed logarithm retains imaginary parts above
        ``tol_imag``.
    """
    s = _as_square(s, "s")
    if np.iscomplexobj(s):
        if np.abs(s.imag).max() > 0:
            raise ValueError("mat_log_real expects a real matrix")
        s = s.real
    eigvals = np.linalg.eigvals(s)
    scale = max(1.0, float(np.abs(eigvals).max()))
    on_axis = (eigvals.real <= 1e-12 * scale) & (np.abs(eigvals.imag) <= 1e-12 * scale)
    if np.any(on_axis):
        bad = eigvals[on_axis]
        raise LogBranchError(
            "matrix has eigenvalues on the closed negative real axis, "
            f"principal real log undefined: {bad}",
            bad,
        )
    log = scipy.linalg.logm(s)
    imag_resid = float(np.abs(log.imag).max()) if np.iscomplexobj(log) else 0.0
    if imag_resid > tol_imag:
        raise NonRealLogError(
            f"logarithm has imaginary residual {imag_resid:.3e} above tol_imag={tol_imag:.1e}"
        )
    return log.real if np.iscomplexobj(log) else log


def eig_hermitian(a: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Checks Hermiticity to ``tol`` (relative to the matrix scale) first and
    returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors in columns.
    """
    a = _as_square(a, "a")
    scale = max(1.0, float(np.abs(a).max()))
    dev = float(np.abs(a - a.conj().T).max())
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian: max |a - a^H| = {dev:.3e}")
    vals, vecs = np.linalg.eigh(a)
    return vals, vecs


def frobenius_dist(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Frobenius distance ``Tr[(a-b)^H (a-b)]`` between two matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sum(np.abs(diff) ** 2))
