"""Generalized Gell-Mann basis of su(d) and its structure constants.

The basis consists of the d^2 - 1 traceless Hermitian generators ordered as:

1. the d - 1 diagonal generators, where the j-th one is
   ``sqrt(2/(j(j+1))) * (sum_{k<=j} |k><k| - j |j+1><j+1|)`` for j = 1..d-1,
2. the symmetric off-diagonal pairs ``|k><m| + |m><k|``,
3. the antisymmetric pairs ``i(|k><m| - |m><k|)``,

both off-diagonal groups in lexicographic order over (k, m), k < m. All
generators satisfy ``Tr(lambda_i lambda_j) = 2 delta_ij``. For d = 2 the set
reduces to the Pauli matrices up to the sign of the antisymmetric one.

Products expand back over the basis as

    lambda_i lambda_j = i sum_k f_ijk lambda_k + sum_k g_ijk lambda_k
                        + (2/d) delta_ij * identity

with ``f`` totally antisymmetric and ``g`` totally symmetric. That expansion
is the contract the structure-constant tensors are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateDirection, DimensionMismatch, WrongDimension
from .linalg import require_hermitian

STRUCTURE_ZERO_TOL = 1e-12
DIRECTION_TOL = 1e-12
INVARIANCE_TOL = 1e-10
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generator basis for one dimension.

    ``matrices`` is a read-only array of shape ``(dim^2 - 1, dim, dim)``.
    """

    dim: int
    matrices: np.ndarray

    def __len__(self) -> int:
        return self.matrices.shape[0]

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.matrices[k]


@dataclass(frozen=True)
class StructureConstants:
    """Antisymmetric (``f``) and symmetric (``g``) tensors of one basis.

    Both have shape ``(n, n, n)`` with ``n = dim^2 - 1``; entries whose
    magnitude falls below ``STRUCTURE_ZERO_TOL`` are stored as exact zeros.
    """

    dim: int
    f: np.ndarray
    g: np.ndarray


@dataclass(frozen=True)
class SpectrumDecomposition:
    """Coordinates of a Hermitian matrix over identity + generator basis.

    ``spectrum = beta * identity + sum_k s[k] * lambda_k`` with
    ``beta = Tr(spectrum)/d`` and ``s[k] = Tr(spectrum lambda_k)/2``;
    ``alpha`` is the Euclidean norm of ``s``.
    """

    s: np.ndarray
    beta: float
    alpha: float

    def reconstruct(self, generators: GeneratorSet) -> np.ndarray:
        """Rebuild the dense matrix from the stored coordinates."""
        d = generators.dim
        out = np.einsum("k,kab->ab", self.s, generators.matrices)
        return out + self.beta * np.eye(d)


def build_generators(d: int) -> GeneratorSet:
    """Construct the generator basis for dimension ``d`` (d >= 2)."""
    if d < 2:
        raise WrongDimension(f"generator basis needs dimension >= 2, got {d}")
    n = d * d - 1
    mats = np.zeros((n, d, d), dtype=np.complex128)
    idx = 0
    for j in range(1, d):
        scale = np.sqrt(2.0 / (j * (j + 1)))
        for k in range(j):
            mats[idx, k, k] = scale
        mats[idx, j, j] = -j * scale
        idx += 1
    for k in range(d):
        for m in range(k + 1, d):
            mats[idx, k, m] = 1.0
            mats[idx, m, k] = 1.0
            idx += 1
    for k in range(d):
        for m in range(k + 1, d):
            mats[idx, k, m] = 1.0j
            mats[idx, m, k] = -1.0j
            idx += 1
    mats.setflags(write=False)
    return GeneratorSet(dim=d, matrices=mats)


def structure_constants(generators: GeneratorSet) -> StructureConstants:
    """Compute ``f`` and ``g`` for a generator basis from triple traces.

    Uses ``T[i,j,k] = Tr(lambda_i lambda_j lambda_k)``:
    ``f = Im(T - T^T)/4`` and ``g = Re(T + T^T)/4`` with the transpose in the
    first two axes. Near-zero entries are snapped to exact zeros so symmetry
    properties hold exactly.
    """
    m = generators.matrices
    t = np.einsum("iab,jbc,kca->ijk", m, m, m, optimize=True)
    t_swapped = t.swapaxes(0, 1)
    f = (t - t_swapped).imag / 4.0
    g = (t + t_swapped).real / 4.0
    f[np.abs(f) < STRUCTURE_ZERO_TOL] = 0.0
    g[np.abs(g) < STRUCTURE_ZERO_TOL] = 0.0
    f.setflags(write=False)
    g.setflags(write=False)
    return StructureConstants(dim=generators.dim, f=f, g=g)


@lru_cache(maxsize=None)
def generator_basis(d: int) -> tuple[GeneratorSet, StructureConstants]:
    """Cached basis + structure constants for dimension ``d``.

    The returned arrays are read-only and shared between callers.
    """
    gens = build_generators(d)
    return gens, structure_constants(gens)


def spectrum_decompose(spectrum, generators: GeneratorSet) -> SpectrumDecomposition:
    """Decompose a Hermitian matrix over identity + generators.

    Raises
    ------
    DimensionMismatch
        If the matrix dimension does not match the basis.
    DegenerateDirection
        If the traceless part vanishes (norm below ``DIRECTION_TOL``), i.e.
        the matrix is proportional to the identity and defines no direction.
    """
    spec = require_hermitian(spectrum, what="spectrum")
    d = generators.dim
    if spec.shape != (d, d):
        raise DimensionMismatch(
            f"spectrum shape {spec.shape} does not match basis dimension {d}"
        )
    beta = float(np.trace(spec).real) / d
    s = np.einsum("kab,ba->k", generators.matrices, spec).real / 2.0
    alpha = float(np.linalg.norm(s))
    if alpha < DIRECTION_TOL:
        raise DegenerateDirection(
            f"spectrum is proportional to the identity (direction norm {alpha:.3e} "
            f"< {DIRECTION_TOL:.1e})"
        )
    s = s.copy()
    s.setflags(write=False)
    return SpectrumDecomposition(s=s, beta=beta, alpha=alpha)


def check_spectrum_invariance(spectrum, v, generators: GeneratorSet,
                              tol: float = INVARIANCE_TOL) -> bool:
    """Check that (beta, alpha) are unchanged under conjugation by ``v``.

    ``v`` must be unitary within ``UNITARITY_TOL``. Returns True when both
    the trace part and the direction norm agree within ``tol``; the direction
    vector itself rotates and is not compared.
    """
    from .linalg import as_matrix, hermitize

    u = as_matrix(v)
    d = generators.dim
    if u.shape != (d, d):
        raise DimensionMismatch(f"unitary shape {u.shape} does not match dimension {d}")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
    if defect > UNITARITY_TOL:
        raise ValueError(f"matrix is not unitary: defect {defect:.3e}")
    base = spectrum_decompose(spectrum, generators)
    rotated = spectrum_decompose(hermitize(u @ as_matrix(spectrum) @ u.conj().T), generators)
    return (abs(base.beta - rotated.beta) <= tol
            and abs(base.alpha - rotated.alpha) <= tol)
