"""Shared fixtures: seeded RNG and random state/operator factories.

Random-state generation lives here (test support only); everything routes
through the package's validation gate so invalid fixtures fail loudly.
"""

from __future__ import annotations

import numpy as np
import pytest

from lqubound import DensityMatrix, validate_density


def make_random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def make_random_density(rng: np.random.Generator, dim_a: int, dim_b: int,
                        rank: int | None = None) -> DensityMatrix:
    """Random mixed state of the requested rank (full rank by default)."""
    d = dim_a * dim_b
    r = rank if rank is not None else d
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return validate_density(m, dim_a, dim_b)


def make_random_cq_state(rng: np.random.Generator, dim_a: int, dim_b: int,
                         basis: np.ndarray | None = None) -> DensityMatrix:
    """Classical-quantum state: mixture of A-basis projectors with B states.

    ``basis`` columns give the classical A basis; a random unitary basis is
    drawn when omitted.
    """
    u = basis if basis is not None else make_random_unitary(rng, dim_a)
    probs = rng.dirichlet(np.ones(dim_a))
    rho = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=np.complex128)
    for k in range(dim_a):
        proj = np.outer(u[:, k], u[:, k].conj())
        g = rng.normal(size=(dim_b, dim_b)) + 1j * rng.normal(size=(dim_b, dim_b))
        side = g @ g.conj().T
        side /= np.trace(side).real
        rho += probs[k] * np.kron(proj, side)
    return validate_density(rho, dim_a, dim_b)


def make_random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2.0


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def random_unitary():
    return make_random_unitary


@pytest.fixture
def random_density():
    return make_random_density


@pytest.fixture
def random_cq_state():
    return make_random_cq_state


@pytest.fixture
def random_hermitian():
    return make_random_hermitian
