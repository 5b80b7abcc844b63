"""Dense complex linear algebra helpers used throughout the package.

All operations work on plain ``numpy.complex128`` arrays. Validation raises
the exception types from :mod:`lqubound.errors` with the measured deviation
in the message, so failures are diagnosable from the text alone.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D complex128 array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-abs deviation of ``m`` from its conjugate transpose."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Return ``(m + m^dagger)/2``, removing roundoff-level asymmetry."""
    return (m + m.conj().T) / 2.0


def require_hermitian(m, tol: float = HERMITICITY_TOL, what: str = "matrix") -> np.ndarray:
    """Validate Hermiticity of ``m`` within ``tol`` and return it symmetrized.

    Raises
    ------
    DimensionMismatch
        If ``m`` is not square.
    NotHermitian
        If the Hermiticity defect exceeds ``tol``.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{what} must be square, got shape {a.shape}")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(
            f"{what} deviates from Hermiticity by {defect:.3e} (tolerance {tol:.1e})"
        )
    return hermitize(a)


def kron(a, b) -> np.ndarray:
    """Kronecker product of two dense matrices.

    Row/column index of the result is ``i_a * rows(b) + i_b``, i.e. the first
    factor is the slow index. This matches the bipartite basis convention used
    by :class:`lqubound.lqu_core.DensityMatrix`.
    """
    return np.kron(as_matrix(a), as_matrix(b))


class HermitianEig(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors[:, k]`` is the
    unit eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eigendecompose(m, tol: float = HERMITICITY_TOL) -> HermitianEig:
    """Full eigendecomposition of a Hermitian matrix.

    The input is checked against ``tol`` and symmetrized before the solve,
    so roundoff-level asymmetry never reaches the solver.

    Raises
    ------
    NotHermitian
        If the Hermiticity defect exceeds ``tol``.
    NoConvergence
        If the underlying solver fails to converge.
    """
    a = require_hermitian(m, tol=tol)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolver did not converge: {exc}") from exc
    return HermitianEig(w, v)


def sqrt_psd(m, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero (roundoff from upstream
    arithmetic); anything below ``-tol`` raises.

    Raises
    ------
    NotPSD
        If the smallest eigenvalue is below ``-tol``.
    """
    w, v = hermitian_eigendecompose(m)
    lowest = float(w[0]) if w.size else 0.0
    if lowest < -tol:
        raise NotPSD(
            f"matrix is not positive semidefinite: lowest eigenvalue {lowest:.3e} "
            f"is below -{tol:.1e}"
        )
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return hermitize(root)


def trace_product(*matrices) -> complex:
    """Trace of the product of the given matrices, without forming the product.

    ``trace_product(a)`` is ``trace(a)``; ``trace_product(a, b, c)`` is
    ``trace(a @ b @ c)``. Shapes must chain, and the last column count must
    match the first row count so the trace exists.

    Raises
    ------
    DimensionMismatch
        If no matrix is given or the shapes do not chain cyclically.
    """
    if not matrices:
        raise DimensionMismatch("trace_product needs at least one matrix")
    mats = [as_matrix(m) for m in matrices]
    for left, right in zip(mats, mats[1:]):
        if left.shape[1] != right.shape[0]:
            raise DimensionMismatch(
                f"cannot multiply shapes {left.shape} and {right.shape}"
            )
    if mats[-1].shape[1] != mats[0].shape[0]:
        raise DimensionMismatch(
            f"product of shapes {[m.shape for m in mats]} is not square; trace undefined"
        )
    if len(mats) == 1:
        return complex(np.trace(mats[0]))
    head = mats[0]
    for m in mats[1:-1]:
        head = head @ m
    # tr(head @ last) without materializing the final product
    return complex(np.sum(head * mats[-1].T))
