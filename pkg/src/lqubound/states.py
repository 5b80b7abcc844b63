"""Reference state families, local channels, and raw state file I/O.

All factories return :class:`~lqubound.lqu_core.DensityMatrix` instances and
therefore pass the full validation gate (Hermiticity, unit trace,
positivity). Parameters are range-checked before any matrix is built.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, LquError, ParamOutOfRange
from .linalg import as_matrix, kron
from .lqu_core import DensityMatrix

COMPLETENESS_TOL = 1e-10

STATE_FAMILIES = ("werner", "horodecki33", "horodecki42", "bell33", "dephased_bell33", "raw")


def validate_density(m, dim_a: int, dim_b: int) -> DensityMatrix:
    """Validate a raw matrix as a ``dim_a x dim_b`` bipartite density matrix.

    Thin constructor wrapper; all checks (shape, Hermiticity, trace,
    positivity) live in :class:`DensityMatrix` and raise the corresponding
    error types with measured deviations.
    """
    return DensityMatrix(dim_a=dim_a, dim_b=dim_b, rho=m)


def _check_unit_interval(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise ParamOutOfRange(f"{name} must be in [0, 1], got {v!r}")
    return v


def _check_nonnegative(name: str, value: float) -> float:
    v = float(value)
    if not v >= 0.0:
        raise ParamOutOfRange(f"{name} must be >= 0, got {v!r}")
    return v


def bell33() -> DensityMatrix:
    """Maximally entangled two-qutrit state ``(1/3) sum_ij |ii><jj|``."""
    psi = np.zeros(9)
    psi[[0, 4, 8]] = 1.0 / np.sqrt(3.0)
    return validate_density(np.outer(psi, psi), 3, 3)


def werner(p: float) -> DensityMatrix:
    """Two-qutrit Werner-type mixture of :func:`bell33` with white noise.

    ``rho = p |psi><psi| + (1-p)/9 * identity`` for p in [0, 1].
    """
    p = _check_unit_interval("p", p)
    psi = np.zeros(9)
    psi[[0, 4, 8]] = 1.0 / np.sqrt(3.0)
    rho = p * np.outer(psi, psi) + (1.0 - p) / 9.0 * np.eye(9)
    return validate_density(rho, 3, 3)


def horodecki33(h: float) -> DensityMatrix:
    """3x3 bound-entangled family, parameter h in [0, 1], normalized by 1/(8h+1)."""
    h = _check_unit_interval("h", h)
    s = np.sqrt(1.0 - h * h) / 2.0
    m = np.zeros((9, 9))
    for i in (0, 1, 2, 3, 4, 5, 7):
        m[i, i] = h
    m[6, 6] = m[8, 8] = (1.0 + h) / 2.0
    for i, j in ((0, 4), (0, 8), (4, 8)):
        m[i, j] = m[j, i] = h
    m[6, 8] = m[8, 6] = s
    return validate_density(m / (8.0 * h + 1.0), 3, 3)


def horodecki42(h: float) -> DensityMatrix:
    """4x2 bound-entangled family, parameter h in [0, 1], normalized by 1/(7h+1).

    Row index is ``a * 2 + b`` with the 4-dimensional factor first.
    """
    h = _check_unit_interval("h", h)
    s = np.sqrt(1.0 - h * h) / 2.0
    m = np.zeros((8, 8))
    for i in (0, 1, 2, 3, 5, 6):
        m[i, i] = h
    m[4, 4] = m[7, 7] = (1.0 + h) / 2.0
    for i, j in ((0, 5), (1, 6), (2, 7)):
        m[i, j] = m[j, i] = h
    m[4, 7] = m[7, 4] = s
    return validate_density(m / (7.0 * h + 1.0), 4, 2)


@dataclass(frozen=True)
class Channel:
    """Kraus representation of a channel on one ``dim``-dimensional factor.

    Completeness ``sum_i E_i^dagger E_i = identity`` is checked at
    construction within 1e-10.
    """

    dim: int
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ops = tuple(as_matrix(e) for e in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (self.dim, self.dim):
                raise DimensionMismatch(
                    f"Kraus operator shape {e.shape} does not match dim {self.dim}"
                )
        total = sum(e.conj().T @ e for e in ops)
        defect = float(np.max(np.abs(total - np.eye(self.dim))))
        if defect > COMPLETENESS_TOL:
            raise ValueError(
                f"Kraus operators violate completeness by {defect:.3e} "
                f"(tolerance {COMPLETENESS_TOL:.1e})"
            )
        object.__setattr__(self, "kraus", ops)


def identity_channel(dim: int) -> Channel:
    """Channel that leaves every state untouched."""
    return Channel(dim=dim, kraus=(np.eye(dim),))


def dephasing_channel(gamma: float) -> Channel:
    """Three-level dephasing with strength ``gamma`` in [0, 1].

    Kraus operators: diag(1, sqrt(1-gamma), sqrt(1-gamma)),
    diag(0, sqrt(gamma), 0), diag(0, 0, sqrt(gamma)). At gamma = 1 all
    coherences involving distinct levels are destroyed; at gamma = 0 the
    channel is the identity.
    """
    gamma = _check_unit_interval("gamma", gamma)
    keep = np.sqrt(1.0 - gamma)
    leak = np.sqrt(gamma)
    return Channel(dim=3, kraus=(
        np.diag([1.0, keep, keep]),
        np.diag([0.0, leak, 0.0]),
        np.diag([0.0, 0.0, leak]),
    ))


def apply_channels(rho: DensityMatrix, channel_a: Channel, channel_b: Channel) -> DensityMatrix:
    """Apply local channels to both factors: ``sum_ij (E_i (x) F_j) rho (...)^dagger``."""
    if channel_a.dim != rho.dim_a:
        raise DimensionMismatch(
            f"A-channel dimension {channel_a.dim} does not match dim_a {rho.dim_a}"
        )
    if channel_b.dim != rho.dim_b:
        raise DimensionMismatch(
            f"B-channel dimension {channel_b.dim} does not match dim_b {rho.dim_b}"
        )
    out = np.zeros_like(rho.rho)
    for e in channel_a.kraus:
        for f in channel_b.kraus:
            op = kron(e, f)
            out = out + op @ rho.rho @ op.conj().T
    return validate_density(out, rho.dim_a, rho.dim_b)


def dephased_bell33(rate_a: float, rate_b: float, t: float) -> DensityMatrix:
    """:func:`bell33` sent through local dephasing with exponential schedules.

    The dephasing strengths are ``gamma = 1 - exp(-rate * t)``, so ``t = 0``
    returns the clean state and large ``t`` saturates both channels.
    """
    rate_a = _check_nonnegative("rate_a", rate_a)
    rate_b = _check_nonnegative("rate_b", rate_b)
    t = _check_nonnegative("t", t)
    gamma_a = 1.0 - np.exp(-rate_a * t)
    gamma_b = 1.0 - np.exp(-rate_b * t)
    return apply_channels(bell33(), dephasing_channel(gamma_a), dephasing_channel(gamma_b))


def save_state_file(path, rho: DensityMatrix) -> None:
    """Write a state in the raw text format accepted by :func:`load_state_file`.

    First line: ``dim_a dim_b``. Then one ``re im`` pair per entry in
    row-major order, printed with 17 significant digits so a round trip
    reproduces the matrix to within float parsing error.
    """
    d = rho.dim
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{rho.dim_a} {rho.dim_b}\n")
        for i in range(d):
            for j in range(d):
                z = rho.rho[i, j]
                fh.write(f"{z.real:.17g} {z.imag:.17g}\n")


def load_state_file(path) -> DensityMatrix:
    """Read a state from the raw text format and validate it.

    Format: first line ``dim_a dim_b``; then ``(dim_a*dim_b)^2`` lines of
    ``re im`` in row-major order. Blank lines are ignored.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise LquError(f"state file {path!s} is empty")
    head = lines[0].split()
    if len(head) != 2:
        raise LquError(f"state file {path!s}: first line must be 'dim_a dim_b'")
    try:
        dim_a, dim_b = int(head[0]), int(head[1])
    except ValueError as exc:
        raise LquError(f"state file {path!s}: bad dimensions {lines[0]!r}") from exc
    d = dim_a * dim_b
    expected = d * d
    body = lines[1:]
    if len(body) != expected:
        raise LquError(
            f"state file {path!s}: expected {expected} entry lines, got {len(body)}"
        )
    entries = np.empty(expected, dtype=np.complex128)
    for idx, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise LquError(f"state file {path!s}: line {idx + 2} is not 're im'")
        try:
            entries[idx] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise LquError(f"state file {path!s}: line {idx + 2} is not numeric") from exc
    return validate_density(entries.reshape(d, d), dim_a, dim_b)


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a state, used by sweeps and the CLI.

    ``family`` picks the factory; only the parameters that family consumes
    are read. ``raw`` states come from a file in the format of
    :func:`load_state_file`; if ``dim_a``/``dim_b`` are given they are
    cross-checked against the file header.
    """

    family: str
    p: float = 0.0
    h: float = 0.0
    t: float = 0.0
    rate_a: float = 0.5
    rate_b: float = 0.5
    path: str | None = None
    dim_a: int | None = None
    dim_b: int | None = None

    def __post_init__(self) -> None:
        if self.family not in STATE_FAMILIES:
            raise ParamOutOfRange(
                f"unknown state family {self.family!r}; choose from {STATE_FAMILIES}"
            )
        if self.family == "raw" and not self.path:
            raise ParamOutOfRange("raw state family needs a file path")

    def with_param(self, name: str, value: float) -> "StateSpec":
        """Copy of this spec with one numeric parameter replaced."""
        if name not in ("p", "h", "t"):
            raise ParamOutOfRange(f"sweep parameter must be one of p, h, t; got {name!r}")
        return dataclasses.replace(self, **{name: float(value)})

    def build(self) -> DensityMatrix:
        """Materialize the described state."""
        if self.family == "werner":
            return werner(self.p)
        if self.family == "horodecki33":
            return horodecki33(self.h)
        if self.family == "horodecki42":
            return horodecki42(self.h)
        if self.family == "bell33":
            return bell33()
        if self.family == "dephased_bell33":
            return dephased_bell33(self.rate_a, self.rate_b, self.t)
        state = load_state_file(self.path)
        if self.dim_a is not None and state.dim_a != self.dim_a:
            raise DimensionMismatch(
                f"state file dim_a {state.dim_a} does not match declared {self.dim_a}"
            )
        if self.dim_b is not None and state.dim_b != self.dim_b:
            raise DimensionMismatch(
                f"state file dim_b {state.dim_b} does not match declared {self.dim_b}"
            )
        return state
