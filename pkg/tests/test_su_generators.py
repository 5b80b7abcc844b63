"""Traceless Hermitian generator basis, structure constants, spectrum split.

Basis ordering under test: diagonal generators first, then symmetric
off-diagonal pairs, then antisymmetric ones.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_random_hermitian, make_random_unitary
from lqubound import (
    DegenerateDirection,
    DimensionMismatch,
    WrongDimension,
    build_generators,
    check_spectrum_invariance,
    generator_basis,
    spectrum_decompose,
    structure_constants,
)

SY = np.array([[0.0, -1j], [1j, 0.0]], dtype=np.complex128)


class TestBuildGenerators:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_count(self, d):
        gens = build_generators(d)
        assert len(gens) == d * d - 1
        assert gens.dim == d

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_traceless_hermitian(self, d):
        for lam in build_generators(d):
            assert abs(np.trace(lam)) < 1e-14
            np.testing.assert_allclose(lam, lam.conj().T, atol=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_orthonormality(self, d):
        gens = build_generators(d)
        gram = np.array([[np.trace(a @ b).real for b in gens] for a in gens])
        # [TRIVIAL] Tr(lam_i lam_j) = 2 delta_ij
        np.testing.assert_allclose(gram, 2.0 * np.eye(len(gens)), atol=1e-13)

    def test_qubit_basis_is_pauli(self):
        gens = build_generators(2)
        # [TRIVIAL] diagonal-first ordering: sigma_z, sigma_x, then -sigma_y
        np.testing.assert_allclose(gens[0], np.diag([1.0, -1.0]), atol=1e-15)
        np.testing.assert_allclose(gens[1], np.array([[0, 1], [1, 0]]), atol=1e-15)
        np.testing.assert_allclose(gens[2], -SY, atol=1e-15)

    def test_qutrit_diagonal_generators(self):
        gens = build_generators(3)
        # [TRIVIAL] from sqrt(2/(j(j+1))) (sum_k<=j |k><k| - j |j+1><j+1|)
        np.testing.assert_allclose(gens[0], np.diag([1.0, -1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(
            gens[1], np.diag([1.0, 1.0, -2.0]) / np.sqrt(3.0), atol=1e-15
        )

    def test_matrices_are_readonly(self):
        gens = build_generators(3)
        with pytest.raises((ValueError, RuntimeError)):
            gens[0][0, 0] = 5.0

    def test_rejects_dim_below_two(self):
        with pytest.raises(WrongDimension):
            build_generators(1)


class TestStructureConstants:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_f_totally_antisymmetric(self, d):
        consts = structure_constants(build_generators(d))
        f = consts.f
        np.testing.assert_allclose(f, -np.swapaxes(f, 0, 1), atol=1e-13)
        np.testing.assert_allclose(f, np.transpose(f, (1, 2, 0)), atol=1e-13)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_g_totally_symmetric(self, d):
        g = structure_constants(build_generators(d)).g
        for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]:
            np.testing.assert_allclose(g, np.transpose(g, perm), atol=1e-13)

    def test_qubit_constants(self):
        consts = structure_constants(build_generators(2))
        # [DERIVED] lam1 lam2 = sigma_z sigma_x = i sigma_y = -i lam3,
        # so f_123 = -1 and the symmetric part vanishes
        assert consts.f[0, 1, 2] == pytest.approx(-1.0)
        np.testing.assert_allclose(consts.g, 0.0, atol=1e-14)

    def test_qutrit_g112(self):
        g = structure_constants(build_generators(3)).g
        # [DERIVED] lam1^2 - (2/3)I = (1/sqrt3) lam2, worked out by hand
        assert g[0, 0, 1] == pytest.approx(1.0 / np.sqrt(3.0))

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_product_expansion(self, d):
        """lam_i lam_j = (2/d) delta_ij I + sum_k (g_ijk + i f_ijk) lam_k."""
        gens, consts = generator_basis(d)
        n = len(gens)
        mats = np.stack(list(gens))
        worst = 0.0
        for i in range(n):
            for j in range(n):
                lhs = gens[i] @ gens[j]
                rhs = (2.0 / d) * (i == j) * np.eye(d, dtype=np.complex128)
                rhs = rhs + np.tensordot(
                    consts.g[i, j] + 1j * consts.f[i, j], mats, axes=1
                )
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        assert worst < 1e-11

    def test_cached_basis_identity(self):
        a = generator_basis(3)
        b = generator_basis(3)
        assert a is b


class TestSpectrumDecompose:
    def test_qubit_sigma_z_spectrum(self):
        gens = build_generators(2)
        dec = spectrum_decompose(np.diag([1.0, -1.0]), gens)
        # [TRIVIAL] diag(1,-1) is exactly lam1: beta 0, s = (1,0,0), alpha 1
        assert dec.beta == pytest.approx(0.0, abs=1e-15)
        assert dec.alpha == pytest.approx(1.0)
        np.testing.assert_allclose(dec.s, [1.0, 0.0, 0.0], atol=1e-15)

    def test_qudit4_alpha(self):
        gens = build_generators(4)
        dec = spectrum_decompose(np.diag([3.0, 1.0, -1.0, -3.0]), gens)
        # [DERIVED] alpha^2 = sum_k eig_k^2 / 2 = (9+1+1+9)/2 = 10
        assert dec.alpha == pytest.approx(np.sqrt(10.0))
        assert dec.beta == pytest.approx(0.0, abs=1e-14)

    def test_beta_tracks_trace(self):
        gens = build_generators(3)
        dec = spectrum_decompose(np.diag([2.0, 1.0, 1.0]), gens)
        assert dec.beta == pytest.approx(4.0 / 3.0)

    def test_reconstruct_roundtrip(self, rng):
        gens = build_generators(4)
        m = make_random_hermitian(rng, 4)
        dec = spectrum_decompose(m, gens)
        np.testing.assert_allclose(dec.reconstruct(gens), m, atol=1e-12)

    def test_identity_is_degenerate_direction(self):
        gens = build_generators(3)
        with pytest.raises(DegenerateDirection):
            spectrum_decompose(np.eye(3), gens)

    def test_dimension_mismatch(self):
        gens = build_generators(3)
        with pytest.raises(DimensionMismatch):
            spectrum_decompose(np.diag([1.0, -1.0]), gens)


class TestSpectrumInvariance:
    def test_hundred_random_pairs_d4(self):
        """(beta, alpha) must not move under unitary conjugation."""
        rng = np.random.default_rng(77)
        gens = build_generators(4)
        for _ in range(100):
            lam = make_random_hermitian(rng, 4)
            if abs(np.trace(lam @ lam).real - np.trace(lam).real ** 2 / 4.0) < 1e-6:
                continue
            v = make_random_unitary(rng, 4)
            assert check_spectrum_invariance(lam, v, gens)

    def test_rejects_non_unitary(self):
        gens = build_generators(3)
        with pytest.raises(ValueError):
            check_spectrum_invariance(np.diag([1.0, 0.0, -1.0]), np.ones((3, 3)), gens)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=5), st.integers(min_value=0, max_value=2**31 - 1))
def test_property_decompose_reconstruct(d, seed):
    """Any Hermitian matrix with a nonzero traceless part round-trips."""
    rng = np.random.default_rng(seed)
    m = make_random_hermitian(rng, d)
    gens = build_generators(d)
    try:
        dec = spectrum_decompose(m, gens)
    except DegenerateDirection:
        return
    np.testing.assert_allclose(dec.reconstruct(gens), m, atol=1e-11)
    traceless = m - np.trace(m).real / d * np.eye(d)
    assert dec.alpha == pytest.approx(
        np.sqrt(np.trace(traceless @ traceless).real / 2.0), rel=1e-9
    )
