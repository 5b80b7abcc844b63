"""Skew information and the closed-form lower bound on the local quantum
uncertainty (LQU) of a bipartite state.

The LQU with respect to a fixed observable spectrum Lambda is the minimum of
the Wigner-Yanase skew information ``I(rho, K (x) identity)`` over all local
observables ``K = V Lambda V^dagger`` on the A factor. Writing
``Lambda = beta*identity + alpha * s_hat . lambda_vec`` over the generator
basis, the quadratic-form identity

    I(rho, (alpha * u . lambda_vec) (x) identity) = alpha^2 (2/d1 - u^T W u)

holds for every unit vector ``u``, where ``W`` is the correlation matrix
computed by :func:`w_matrix`. Relaxing the minimization from the orbit of
``Lambda`` to all unit vectors gives the closed form

    bound = alpha^2 (2/d1 - lambda_max(W))  <=  LQU,

with equality for d1 = 2 (every unit Bloch vector is reachable), where the
exact value is ``1 - lambda_max(W)`` for the spectrum diag(1, -1).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    SoundnessError,
    TraceNotOne,
    WrongDimension,
)
from .linalg import (
    as_matrix,
    hermitian_eigendecompose,
    hermiticity_defect,
    hermitize,
    require_hermitian,
    sqrt_psd,
    trace_product,
)
from .su_generators import GeneratorSet, StructureConstants, generator_basis, spectrum_decompose

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
HERMITICITY_TOL = 1e-10
SKEW_CLAMP_TOL = 1e-10
W_ASYMMETRY_TOL = 1e-10


@dataclass(eq=False)
class DensityMatrix:
    """Validated bipartite density matrix with factor dimensions attached.

    Basis convention: row index ``a * dim_b + b`` corresponds to the product
    state ``|a>|b>``, so local observables act on the first (slow) factor as
    ``K (x) identity``. Construction validates shape, Hermiticity (1e-10),
    unit trace (1e-10) and positivity (eigenvalues >= -1e-10); the stored
    array is symmetrized and read-only.

    The matrix square root is computed on first use and cached; concurrent
    readers get the same array.
    """

    dim_a: int
    dim_b: int
    rho: np.ndarray
    _sqrt: np.ndarray | None = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.dim_a < 2:
            raise WrongDimension(f"dim_a must be >= 2, got {self.dim_a}")
        if self.dim_b < 1:
            raise WrongDimension(f"dim_b must be >= 1, got {self.dim_b}")
        rho = as_matrix(self.rho)
        d = self.dim_a * self.dim_b
        if rho.shape != (d, d):
            raise DimensionMismatch(
                f"density matrix shape {rho.shape} does not match "
                f"dim_a*dim_b = {self.dim_a}*{self.dim_b} = {d}"
            )
        defect = hermiticity_defect(rho)
        if defect > HERMITICITY_TOL:
            raise NotHermitian(
                f"density matrix deviates from Hermiticity by {defect:.3e}"
            )
        rho = hermitize(rho)
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise TraceNotOne(f"trace is {tr!r}, deviates from 1 by {abs(tr - 1.0):.3e}")
        lowest = float(np.linalg.eigvalsh(rho)[0])
        if lowest < -PSD_TOL:
            raise NotPSD(f"lowest eigenvalue {lowest:.3e} is below -{PSD_TOL:.1e}")
        rho.setflags(write=False)
        self.rho = rho

    @property
    def dim(self) -> int:
        """Total Hilbert-space dimension ``dim_a * dim_b``."""
        return self.dim_a * self.dim_b

    @property
    def sqrt_rho(self) -> np.ndarray:
        """Principal square root of the state, computed once and cached."""
        if self._sqrt is None:
            with self._lock:
                if self._sqrt is None:
                    root = sqrt_psd(self.rho)
                    root.setflags(write=False)
                    self._sqrt = root
        return self._sqrt

    def reduced_a(self) -> np.ndarray:
        """Partial trace over the B factor."""
        r = self.rho.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)
        return np.einsum("abcb->ac", r)


@dataclass(frozen=True)
class LowerBoundReport:
    """Everything the closed-form bound evaluation produced.

    ``bound`` is the raw value ``alpha^2 (2/d1 - lambda_max)`` and may dip a
    hair below zero from floating-point noise on zero-discord states;
    ``bound_clamped`` is ``max(bound, 0)`` for callers that want the
    nonnegative quantity the bound estimates.
    """

    w: np.ndarray
    l: np.ndarray
    lambda_max: float
    alpha: float
    beta: float
    bound: float
    bound_clamped: float


def skew_information(rho: DensityMatrix, k) -> float:
    """Wigner-Yanase skew information ``Tr(rho k^2) - Tr(sqrt_rho k sqrt_rho k)``.

    ``k`` is a Hermitian observable on the full bipartite space. The result
    is real and nonnegative up to roundoff; values in ``[-1e-10, 0)`` are
    clamped to zero.
    """
    obs = require_hermitian(k, what="observable")
    if obs.shape[0] != rho.dim:
        raise DimensionMismatch(
            f"observable dimension {obs.shape[0]} does not match state dimension {rho.dim}"
        )
    root = rho.sqrt_rho
    value = (trace_product(rho.rho, obs, obs) - trace_product(root, obs, root, obs)).real
    if -SKEW_CLAMP_TOL <= value < 0.0:
        value = 0.0
    return float(value)


def l_vector(rho: DensityMatrix, generators: GeneratorSet) -> np.ndarray:
    """Generator expectations ``L_k = Tr(rho (lambda_k (x) identity))``.

    Computed from the reduced state of the A factor; the entries are real.
    """
    if generators.dim != rho.dim_a:
        raise DimensionMismatch(
            f"generator dimension {generators.dim} does not match dim_a {rho.dim_a}"
        )
    reduced = rho.reduced_a()
    out = np.einsum("kab,ba->k", generators.matrices, reduced).real
    out.setflags(write=False)
    return out


def w_matrix(rho: DensityMatrix, generators: GeneratorSet,
             constants: StructureConstants) -> tuple[np.ndarray, np.ndarray]:
    """Correlation matrix ``W`` of the bound, and the ``L`` vector with it.

    Entrywise,

        W_ij = Tr(sqrt_rho (lambda_i (x) id) sqrt_rho (lambda_j (x) id))
               - sum_k g_ijk L_k.

    The first term is contracted directly from the square root reshaped to
    ``(d1, d2, d1, d2)`` so the identity factor is never materialized. ``W``
    is mathematically real symmetric; asymmetry beyond ``W_ASYMMETRY_TOL``
    raises :class:`SoundnessError` rather than being averaged away silently.
    Roundoff-level asymmetry below the tolerance is symmetrized out.
    """
    if generators.dim != rho.dim_a:
        raise DimensionMismatch(
            f"generator dimension {generators.dim} does not match dim_a {rho.dim_a}"
        )
    if constants.dim != generators.dim:
        raise DimensionMismatch(
            f"structure constants are for dimension {constants.dim}, basis is {generators.dim}"
        )
    lvec = l_vector(rho, generators)
    da, db = rho.dim_a, rho.dim_b
    r = rho.sqrt_rho.reshape(da, db, da, db)
    lam = generators.matrices
    m = np.einsum("abcd,ice,edfb,jfa->ij", r, lam, r, lam, optimize=True).real
    w = m - np.einsum("ijk,k->ij", constants.g, lvec)
    asym = float(np.max(np.abs(w - w.T)))
    if asym > W_ASYMMETRY_TOL:
        raise SoundnessError(
            f"correlation matrix asymmetry {asym:.3e} exceeds {W_ASYMMETRY_TOL:.1e}"
        )
    w = (w + w.T) / 2.0
    w.setflags(write=False)
    return w, lvec


def lower_bound(rho: DensityMatrix, spectrum) -> LowerBoundReport:
    """Closed-form lower bound of the LQU for observable spectrum ``spectrum``.

    ``spectrum`` is a Hermitian ``d1 x d1`` matrix (typically diagonal). Its
    trace part drops out of the skew information; only the direction norm
    ``alpha`` and the largest eigenvalue of ``W`` enter:

        bound = alpha^2 (2/d1 - lambda_max(W)).

    Raises
    ------
    DegenerateDirection
        If ``spectrum`` is proportional to the identity.
    DimensionMismatch
        If ``spectrum`` is not ``d1 x d1``.
    """
    gens, consts = generator_basis(rho.dim_a)
    decomp = spectrum_decompose(spectrum, gens)
    w, lvec = w_matrix(rho, gens, consts)
    lam_max = float(hermitian_eigendecompose(w).eigenvalues[-1])
    bound = decomp.alpha**2 * (2.0 / rho.dim_a - lam_max)
    return LowerBoundReport(
        w=w,
        l=lvec,
        lambda_max=lam_max,
        alpha=decomp.alpha,
        beta=decomp.beta,
        bound=bound,
        bound_clamped=max(bound, 0.0),
    )


def closed_form_2xd(rho: DensityMatrix) -> float:
    """Exact LQU of a qubit-times-anything state, ``1 - lambda_max(W)``.

    For ``dim_a = 2`` every unit direction is reachable by conjugating the
    spectrum diag(1, -1), so the relaxation in :func:`lower_bound` is tight
    and the symmetric correction tensor vanishes identically.
    """
    if rho.dim_a != 2:
        raise WrongDimension(f"closed form requires dim_a = 2, got {rho.dim_a}")
    gens, consts = generator_basis(2)
    w, _ = w_matrix(rho, gens, consts)
    lam_max = float(hermitian_eigendecompose(w).eigenvalues[-1])
    return 1.0 - lam_max
