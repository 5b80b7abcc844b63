"""Genetic-algorithm reference optimizer for the LQU.

The closed-form bound relaxes the minimization domain; this module attacks
the original problem directly. Local observables with the prescribed
spectrum are parametrized as ``K(theta) = V(theta) Lambda V(theta)^dagger``
with ``V(theta) = exp(i sum_k theta_k lambda_k)``, and the skew information
``I(rho, K (x) identity)`` is minimized over ``theta`` by a real-coded GA
with elitism, followed by a coordinate-wise golden-section polish.

Every value the GA ever produces is an achievable skew information, so the
result is always an upper bound on the true LQU and can never undercut the
closed-form lower bound by more than numerical noise. The run is fully
deterministic for a fixed seed: all random draws for a generation are taken
from one ``numpy`` Generator before the generation is processed, and fitness
evaluation is vectorized rather than dispatched concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, ParamOutOfRange
from .linalg import hermitian_eigendecompose, hermitize, kron, require_hermitian
from .lqu_core import DensityMatrix, skew_information, w_matrix
from .su_generators import GeneratorSet, generator_basis

SPECTRUM_GAP_TOL = 1e-9
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_POLISH_MIN_WIDTH = 1e-4
_GOLDEN_EVALS = 28
_SEED_GAP_FRACTION = 0.2
_SEED_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class GAConfig:
    """Knobs of the genetic search.

    Crossover is a per-coordinate uniform convex blend of the two parents;
    mutation adds Gaussian noise whose sigma is halved every 100 generations.
    The search stops early once the best value improves by less than
    ``stall_tolerance`` over ``stall_generations`` consecutive generations.
    ``polish_steps`` coordinate line searches (golden section) refine the
    best individual after the GA loop.
    """

    population_size: int = 64
    generations: int = 400
    tournament_size: int = 3
    crossover_rate: float = 0.7
    mutation_sigma: float = 0.3
    stall_tolerance: float = 1e-8
    stall_generations: int = 60
    seed: int = 0
    polish_steps: int = 200

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ParamOutOfRange(f"population_size must be >= 2, got {self.population_size}")
        if self.generations < 1:
            raise ParamOutOfRange(f"generations must be >= 1, got {self.generations}")
        if not 2 <= self.tournament_size <= self.population_size:
            raise ParamOutOfRange(
                f"tournament_size must be in [2, population_size], got {self.tournament_size}"
            )
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ParamOutOfRange(f"crossover_rate must be in [0, 1], got {self.crossover_rate}")
        if self.mutation_sigma < 0.0:
            raise ParamOutOfRange(f"mutation_sigma must be >= 0, got {self.mutation_sigma}")
        if self.stall_tolerance < 0.0:
            raise ParamOutOfRange(f"stall_tolerance must be >= 0, got {self.stall_tolerance}")
        if self.stall_generations < 1:
            raise ParamOutOfRange(f"stall_generations must be >= 1, got {self.stall_generations}")
        if self.polish_steps < 0:
            raise ParamOutOfRange(f"polish_steps must be >= 0, got {self.polish_steps}")


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of one optimizer run.

    ``value`` is recomputed from the returned observable through the
    reference skew-information path, so it is exactly what
    ``skew_information(rho, kron(observable, identity))`` reports.
    ``history`` holds the best fitness after each GA generation and is
    non-increasing; the polish phase can push ``value`` below its last entry.
    """

    value: float
    best_params: np.ndarray
    observable: np.ndarray
    history: np.ndarray
    evaluations: int


def unitary_from_params(theta, generators: GeneratorSet) -> np.ndarray:
    """Special unitary ``exp(i sum_k theta_k lambda_k)``.

    The exponent is Hermitian and traceless, so the result has unit
    determinant by construction. ``theta`` must have length ``dim^2 - 1``.
    """
    t = np.asarray(theta, dtype=np.float64)
    n = len(generators)
    if t.shape != (n,):
        raise DimensionMismatch(f"parameter vector shape {t.shape}, expected ({n},)")
    if not np.all(np.isfinite(t)):
        raise ValueError("parameter vector contains non-finite entries")
    h = np.einsum("k,kab->ab", t, generators.matrices)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def observable_from_params(theta, spectrum, generators: GeneratorSet) -> np.ndarray:
    """Observable ``V(theta) Lambda V(theta)^dagger``, symmetrized."""
    spec = require_hermitian(spectrum, what="spectrum")
    d = generators.dim
    if spec.shape != (d, d):
        raise DimensionMismatch(f"spectrum shape {spec.shape} does not match dimension {d}")
    v = unitary_from_params(theta, generators)
    return hermitize(v @ spec @ v.conj().T)


def _check_spectrum_gaps(spectrum: np.ndarray) -> None:
    """Reject spectra with (near-)coinciding eigenvalues.

    Repeated eigenvalues collapse the orbit ``V Lambda V^dagger`` and make
    the parametrization redundant; the fixed-spectrum minimization is only
    posed for distinct eigenvalues.
    """
    eigs = np.sort(np.linalg.eigvalsh(spectrum))
    gaps = np.diff(eigs)
    if gaps.size and float(gaps.min()) < SPECTRUM_GAP_TOL:
        raise DegenerateSpectrum(
            f"spectrum eigenvalue gap {float(gaps.min()):.3e} is below {SPECTRUM_GAP_TOL:.1e}"
        )


class _Objective:
    """Vectorized evaluator of ``theta -> I(rho, K(theta) (x) identity)``.

    The skew information is bilinear in the two K factors, so it collapses
    to one precomputed quadratic form over ``vec(K)``:

        I = vec(K) . Q vec(K),
        Q[(c,e),(f,a)] = rho_A[a,c] delta_{e,f}
                         - sum_{b,d} R[a,b,c,d] R[e,d,f,b],

    where R is the state square root reshaped to ``(d1, d2, d1, d2)``. The
    first piece is ``Tr(rho_A K^2)`` (the identity factor traced out), the
    second ``Tr(sqrt_rho (K (x) id) sqrt_rho (K (x) id))``. One fitness call
    is then a single small matmul per batch, with no contraction-path search
    in the hot loop. Correctness against the reference path is asserted in
    the test suite and once more on the final result of :func:`optimize_lqu`.
    """

    def __init__(self, rho: DensityMatrix, spectrum: np.ndarray,
                 generators: GeneratorSet) -> None:
        self._mats = generators.matrices
        self._spectrum = spectrum
        da, db = rho.dim_a, rho.dim_b
        r = rho.sqrt_rho.reshape(da, db, da, db)
        cross = np.einsum("abcd,edfb->cefa", r, r, optimize=True)
        local = np.einsum("ac,ef->cefa", rho.reduced_a(), np.eye(da))
        self._form_t = (local - cross).reshape(da * da, da * da).T.copy()
        self.evaluations = 0

    def observables(self, thetas: np.ndarray) -> np.ndarray:
        """Batched ``V Lambda V^dagger`` for parameter rows ``thetas``."""
        h = np.tensordot(thetas, self._mats, axes=1)
        w, v = np.linalg.eigh(h)
        units = (v * np.exp(1j * w)[:, None, :]) @ v.conj().swapaxes(1, 2)
        return units @ self._spectrum @ units.conj().swapaxes(1, 2)

    def values(self, ks: np.ndarray) -> np.ndarray:
        """Skew informations of a batch of local observables."""
        self.evaluations += ks.shape[0]
        flat = ks.reshape(ks.shape[0], -1)
        return np.sum(flat * (flat @ self._form_t), axis=1).real

    def __call__(self, thetas: np.ndarray) -> np.ndarray:
        return self.values(self.observables(thetas))


def _tournament(fitness: np.ndarray, picks: np.ndarray) -> np.ndarray:
    """Indices of the fittest entrant in each row of candidate indices."""
    return picks[np.arange(picks.shape[0]), np.argmin(fitness[picks], axis=1)]


def _unitary_log(v: np.ndarray) -> np.ndarray:
    """Hermitian ``H`` with ``exp(iH) = v`` up to a global phase.

    Works through the commuting Hermitian pair ``(v + v^dagger)/2`` and
    ``(v - v^dagger)/(2i)``, which share the eigenbasis of the (normal)
    unitary: the first is diagonalized outright, clusters of its repeated
    eigenvalues are split by the second, and the phase of each eigenvector
    is recovered with atan2. Avoids the non-orthogonal eigenvectors a
    general complex eigensolver can return.
    """
    cos_part = hermitize((v + v.conj().T) / 2.0)
    sin_part = hermitize((v - v.conj().T) / 2.0j)
    w, q = np.linalg.eigh(cos_part)
    d = v.shape[0]
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and w[stop] - w[start] < _SEED_CLUSTER_TOL:
            stop += 1
        if stop - start > 1:
            block = q[:, start:stop]
            _, rot = np.linalg.eigh(block.conj().T @ sin_part @ block)
            q[:, start:stop] = block @ rot
        start = stop
    cos_diag = np.einsum("ij,jk,ki->i", q.conj().T, cos_part, q).real
    sin_diag = np.einsum("ij,jk,ki->i", q.conj().T, sin_part, q).real
    phases = np.arctan2(sin_diag, cos_diag)
    return hermitize((q * phases) @ q.conj().T)


def _theta_from_unitary(v: np.ndarray, generators: GeneratorSet) -> np.ndarray:
    """Chromosome reproducing ``v`` up to global phase, clipped to the box."""
    h = _unitary_log(v)
    theta = np.einsum("kab,ba->k", generators.matrices, h).real / 2.0
    return np.clip(theta, -np.pi, np.pi)


def _warm_start_thetas(rho: DensityMatrix, spectrum: np.ndarray,
                       generators: GeneratorSet, objective: "_Objective",
                       limit: int) -> np.ndarray:
    """Chromosomes for observables suggested by the closed-form relaxation.

    The top eigenvector of the correlation matrix W names the best direction
    of the relaxed problem; its eigenbasis, plus 45-degree rotations inside
    any nearly degenerate eigenvalue pair (where the direction alone cannot
    pick a basis), gives candidate measurement bases. Every assignment of
    the spectrum eigenvalues to each basis is scored, and the ``limit`` best
    become deterministic members of the initial population.
    """
    if limit <= 0:
        return np.empty((0, len(generators)))
    d = generators.dim
    _, consts = generator_basis(d)
    w, _ = w_matrix(rho, generators, consts)
    s_star = hermitian_eigendecompose(w).eigenvectors[:, -1]
    direction = np.einsum("k,kab->ab", s_star, generators.matrices)
    dir_eigs, basis = np.linalg.eigh(direction)

    bases = [basis]
    span = float(dir_eigs[-1] - dir_eigs[0]) + 1e-300
    half = np.sqrt(0.5)
    for i in range(d - 1):
        if (dir_eigs[i + 1] - dir_eigs[i]) / span < _SEED_GAP_FRACTION:
            # inside a nearly degenerate pair the direction prefers no basis,
            # so offer the four balanced mixtures (1, +-1) and (1, +-i)
            for phase in (1.0, -1.0, 1.0j, -1.0j):
                rot = np.eye(d, dtype=np.complex128)
                rot[i, i] = half
                rot[i + 1, i] = half * phase
                rot[i, i + 1] = -half
                rot[i + 1, i + 1] = half * phase
                bases.append(basis @ rot)

    spec_eigs, spec_vecs = np.linalg.eigh(spectrum)
    units = []
    for u in bases:
        for perm in permutations(range(d)):
            # V maps the k-th spectrum eigenvector onto the perm[k]-th
            # basis column, so V spectrum V^dagger has eigenvalue
            # spec_eigs[k] along that column
            v = u[:, list(perm)] @ spec_vecs.conj().T
            units.append(v)
    stacked = np.stack(units)
    ks = stacked @ spectrum @ stacked.conj().swapaxes(1, 2)
    scores = objective.values(ks)
    order = np.argsort(scores, kind="stable")[:limit]
    return np.stack([_theta_from_unitary(units[i], generators) for i in order])


def _golden_min(fn, lo: float, hi: float):
    """Golden-section minimum of ``fn`` on ``[lo, hi]``; returns (x, fn(x))."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(_GOLDEN_EVALS):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    return (c, fc) if fc <= fd else (d, fd)


def _polish(objective: _Objective, theta: np.ndarray, value: float,
            steps: int) -> tuple[np.ndarray, float]:
    """Coordinate-wise golden-section refinement around the GA optimum."""
    x = theta.copy()
    fx = value
    n = x.shape[0]
    width = 0.3

    def line_value(k: int, v: float) -> float:
        trial = x.copy()
        trial[k] = v
        return float(objective(trial[None, :])[0])

    for step in range(steps):
        k = step % n
        if k == 0 and step:
            width = max(width * 0.5, _POLISH_MIN_WIDTH)
        lo = max(x[k] - width, -np.pi)
        hi = min(x[k] + width, np.pi)
        xk, fk = _golden_min(lambda v: line_value(k, v), lo, hi)
        if fk < fx:
            x[k] = xk
            fx = fk
    return x, fx


def optimize_lqu(rho: DensityMatrix, spectrum,
                 config: GAConfig | None = None) -> OptimizeResult:
    """Minimize ``I(rho, (V Lambda V^dagger) (x) identity)`` over unitaries V.

    The population lives in the box ``[-pi, pi]^(d1^2-1)``; individual 0 of
    the initial population is the zero vector (``K = Lambda``), which already
    solves the problem exactly for states diagonal in the spectrum
    eigenbasis. Elitism keeps the best individual each generation, so the
    history is non-increasing.

    Raises
    ------
    DegenerateSpectrum
        If the spectrum has eigenvalue gaps below 1e-9.
    DimensionMismatch
        If the spectrum is not ``d1 x d1``.
    """
    cfg = config if config is not None else GAConfig()
    spec = require_hermitian(spectrum, what="spectrum")
    if spec.shape != (rho.dim_a, rho.dim_a):
        raise DimensionMismatch(
            f"spectrum shape {spec.shape} does not match dim_a {rho.dim_a}"
        )
    _check_spectrum_gaps(spec)
    gens, _ = generator_basis(rho.dim_a)
    n = len(gens)
    objective = _Objective(rho, spec, gens)
    rng = np.random.default_rng(cfg.seed)
    pop_size = cfg.population_size

    pop = rng.uniform(-np.pi, np.pi, size=(pop_size, n))
    pop[0] = 0.0
    seeds = _warm_start_thetas(rho, spec, gens, objective, limit=pop_size // 4)
    if seeds.size:
        pop[1:1 + seeds.shape[0]] = seeds
    fitness = objective(pop)
    history: list[float] = []
    children = pop_size - 1

    for gen in range(cfg.generations):
        sigma = cfg.mutation_sigma * 0.5 ** (gen // 100)
        # all stochastic draws for this generation happen up front, in a
        # fixed order, so results do not depend on evaluation scheduling
        picks = rng.integers(0, pop_size, size=(2 * children, cfg.tournament_size))
        cross_draws = rng.random(children)
        blend = rng.random((children, n))
        noise = rng.standard_normal((children, n))

        parents = _tournament(fitness, picks)
        first = pop[parents[:children]]
        second = pop[parents[children:]]
        mixed = blend * first + (1.0 - blend) * second
        crossed = np.where((cross_draws < cfg.crossover_rate)[:, None], mixed, first)
        offspring = np.clip(crossed + sigma * noise, -np.pi, np.pi)
        child_fitness = objective(offspring)

        best = int(np.argmin(fitness))
        new_pop = np.empty_like(pop)
        new_pop[0] = pop[best]
        new_pop[1:] = offspring
        new_fitness = np.empty_like(fitness)
        new_fitness[0] = fitness[best]
        new_fitness[1:] = child_fitness
        pop, fitness = new_pop, new_fitness

        history.append(float(fitness.min()))
        if (len(history) > cfg.stall_generations
                and history[-1 - cfg.stall_generations] - history[-1] < cfg.stall_tolerance):
            break

    best = int(np.argmin(fitness))
    theta, value = _polish(objective, pop[best], float(fitness[best]), cfg.polish_steps)

    observable = observable_from_params(theta, spec, gens)
    reference = skew_information(rho, kron(observable, np.eye(rho.dim_b)))
    hist = np.asarray(history, dtype=np.float64)
    hist.setflags(write=False)
    theta = theta.copy()
    theta.setflags(write=False)
    observable.setflags(write=False)
    return OptimizeResult(
        value=reference,
        best_params=theta,
        observable=observable,
        history=hist,
        evaluations=objective.evaluations,
    )
