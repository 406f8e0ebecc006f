import numpy as np
import pytest

import ilcsolve as il
from ilcsolve.exceptions import DimensionMismatchError, ZeroMatrixError

from helpers import (
    EXAMPLE_G,
    EXAMPLE_YD_INCONSISTENT,
    EXAMPLE_YD_SOLVABLE,
    inconsistent_reference,
    random_system,
    solvable_reference,
)


def assert_decomposition_invariants(dec, g, atol=1e-10):
    h1, f1 = dec.range_basis, dec.range_dual
    h2, f2 = dec.complement_basis, dec.complement_dual
    p, m = h1.shape
    assert h2.shape == (p, p - m)
    assert np.allclose(f1.T @ h1, np.eye(m), atol=atol)
    assert np.allclose(f2.T @ h2, np.eye(p - m), atol=atol)
    assert np.allclose(f2.T @ h1, 0.0, atol=atol)
    assert np.allclose(f1.T @ h2, 0.0, atol=atol)
    assert np.allclose(h1 @ f1.T + h2 @ f2.T, np.eye(p), atol=atol)
    assert np.allclose(f2.T @ g, 0.0, atol=atol)
    # both split projectors are idempotent
    proj1 = h1 @ f1.T
    proj2 = h2 @ f2.T
    assert np.allclose(proj1 @ proj1, proj1, atol=1e-9)
    assert np.allclose(proj2 @ proj2, proj2, atol=1e-9)


class TestBuildDecomposition:
    def test_example_pivot_columns_kept_verbatim(self, example_dec):
        assert example_dec.rank == 2
        assert np.allclose(example_dec.range_basis, EXAMPLE_G[:, :2])
        expected_f1 = np.array(
            [
                [1.0 / 9.0, 0.0],
                [0.0, 3.0 / 25.0],
                [0.0, 4.0 / 25.0],
                [2.0 / 9.0, 0.0],
                [2.0 / 9.0, 0.0],
            ]
        )
        assert np.allclose(example_dec.range_dual, expected_f1, atol=1e-12)
        assert example_dec.orthogonal

    def test_identity_full_rank(self):
        dec = il.build_decomposition(np.eye(3))
        assert dec.rank == 3
        assert np.allclose(dec.range_basis, np.eye(3))
        assert np.allclose(dec.range_dual, np.eye(3))
        assert dec.complement_basis.shape == (3, 0)
        assert np.allclose(dec.range_basis @ dec.range_dual.T, np.eye(3))

    def test_single_column(self):
        dec = il.build_decomposition(np.array([[1.0], [1.0]]))
        assert np.allclose(dec.range_basis[:, 0], [1.0, 1.0])
        assert np.allclose(dec.range_dual[:, 0], [0.5, 0.5])
        h2 = dec.complement_basis[:, 0]
        expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
        assert np.allclose(h2, expected) or np.allclose(h2, -expected)

    def test_zero_matrix_refused(self):
        with pytest.raises(ZeroMatrixError):
            il.build_decomposition(np.zeros((3, 2)))

    def test_invariants_on_random_systems(self, rng):
        for _ in range(60):
            g = random_system(rng)
            dec = il.build_decomposition(g)
            assert dec.rank == il.rank_of(g)
            assert_decomposition_invariants(dec, g)


class TestInjectedBases:
    def test_matches_default_when_given_same_bases(self, example_g, example_dec):
        dec = il.decomposition_from_bases(
            example_g, example_dec.range_basis, example_dec.complement_basis
        )
        assert dec.orthogonal
        assert np.allclose(dec.range_dual, example_dec.range_dual, atol=1e-10)
        assert_decomposition_invariants(dec, example_g)

    def test_skewed_complement_flagged_non_orthogonal(self, example_g, example_dec):
        h1 = example_dec.range_basis
        h2 = example_dec.complement_basis + h1 @ np.ones((2, 3))
        dec = il.decomposition_from_bases(example_g, h1, h2)
        assert not dec.orthogonal
        assert_decomposition_invariants(dec, example_g)

    def test_rejects_non_spanning_basis(self, example_g):
        bad_h1 = np.eye(5)[:, :2]  # does not span the column space
        h2 = np.eye(5)[:, 2:]
        with pytest.raises(ValueError):
            il.decomposition_from_bases(example_g, bad_h1, h2)

    def test_rejects_wrong_column_count(self, example_g, example_dec):
        with pytest.raises(DimensionMismatchError):
            il.decomposition_from_bases(
                example_g, example_dec.range_basis, example_dec.complement_basis[:, :2]
            )


class TestTrackable:
    def test_example_solvable_case(self, example_dec):
        assert il.is_trackable(example_dec, EXAMPLE_YD_SOLVABLE)

    def test_example_inconsistent_case(self, example_dec):
        assert not il.is_trackable(example_dec, EXAMPLE_YD_INCONSISTENT)

    def test_zero_reference_always_trackable(self, example_dec):
        assert il.is_trackable(example_dec, np.zeros(5))

    def test_matches_uncontrollable_component_and_oracle(self, rng):
        for _ in range(60):
            g = random_system(rng)
            dec = il.build_decomposition(g)
            if dec.rank < g.shape[0]:
                yd = (
                    solvable_reference(rng, g)
                    if rng.random() < 0.5
                    else inconsistent_reference(rng, g)
                )
            else:
                yd = rng.standard_normal(g.shape[0])
            tracked = il.is_trackable(dec, yd)
            residual = il.uncontrollable_component(dec, yd)
            assert tracked == (np.max(np.abs(residual), initial=0.0) < 1e-8)
            assert tracked == il.solvability_oracle(g, yd)

    def test_linear_combinations_stay_trackable(self, rng, example_g, example_dec):
        for _ in range(10):
            y1 = solvable_reference(rng, example_g)
            y2 = solvable_reference(rng, example_g)
            a, b = rng.standard_normal(2)
            assert il.is_trackable(example_dec, a * y1 + b * y2)


class TestClassify:
    def test_example_system(self, example_g):
        info = il.classify_system(example_g)
        assert info.rank == 2
        assert not info.trackability_property
        assert not info.realizability_property
        assert info.realizable_subspace_trivial

    def test_identity(self):
        info = il.classify_system(np.eye(3))
        assert info.trackability_property
        assert info.realizability_property
        assert not info.realizable_subspace_trivial

    def test_tall_full_column_rank(self):
        g = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        info = il.classify_system(g)
        assert info.rank == 2
        assert not info.trackability_property
        assert not info.realizability_property
        assert not info.realizable_subspace_trivial


class TestComponentsAndProjection:
    def test_trackable_reference_has_zero_component(self, example_dec):
        comp = il.uncontrollable_component(example_dec, EXAMPLE_YD_SOLVABLE)
        assert comp.shape == (3,)
        assert np.max(np.abs(comp)) < 1e-12

    def test_inconsistent_reference_has_component(self, example_dec):
        comp = il.uncontrollable_component(example_dec, EXAMPLE_YD_INCONSISTENT)
        assert np.max(np.abs(comp)) > 1e-3

    def test_zero_error(self, example_dec):
        assert np.allclose(il.uncontrollable_component(example_dec, np.zeros(5)), 0.0)

    def test_projection_hand_value(self, example_dec):
        projected = il.project_trackable(example_dec, EXAMPLE_YD_INCONSISTENT)
        expected = np.array([7.0 / 9.0, 6.0 / 5.0, 8.0 / 5.0, 14.0 / 9.0, 14.0 / 9.0])
        assert np.allclose(projected, expected, atol=1e-12)
        gap = np.linalg.norm(EXAMPLE_YD_INCONSISTENT - projected)
        assert gap == pytest.approx(np.sqrt(14.0) / 3.0, abs=1e-12)

    def test_projection_fixes_trackable(self, example_dec):
        assert np.allclose(
            il.project_trackable(example_dec, EXAMPLE_YD_SOLVABLE),
            EXAMPLE_YD_SOLVABLE,
            atol=1e-12,
        )

    def test_projection_idempotent(self, rng):
        for _ in range(20):
            g = random_system(rng)
            dec = il.build_decomposition(g)
            y = rng.standard_normal(g.shape[0])
            once = il.project_trackable(dec, y)
            twice = il.project_trackable(dec, once)
            assert np.allclose(once, twice, atol=1e-9)

    def test_dimension_mismatch(self, example_dec):
        with pytest.raises(DimensionMismatchError):
            il.is_trackable(example_dec, np.ones(4))
        with pytest.raises(DimensionMismatchError):
            il.uncontrollable_component(example_dec, np.ones(6))
        with pytest.raises(DimensionMismatchError):
            il.project_trackable(example_dec, np.ones(2))
