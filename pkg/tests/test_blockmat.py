import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfbgeo.core.blockmat import (
    BlockOp,
    blockop_from_json,
    blockop_to_json,
    cmat_from_json,
    conj_i,
    mat_exp,
    mat_log_near_id,
    norm_12,
    polar_unitary,
    restricted_norm,
    takagi,
)
from hfbgeo.core.errors import DimensionMismatch, LogDomain, SingularInput


def _random_block(rng, n, scale=1.0):
    return BlockOp(*[scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) for _ in range(4)])


class TestNorms:
    def test_identity_has_restricted_norm_two(self):
        assert restricted_norm(BlockOp.identity(3)) == pytest.approx(2.0)

    def test_off_diagonal_blocks_use_hilbert_schmidt(self):
        z = np.zeros((2, 2), dtype=complex)
        # operator norm 1, Hilbert-Schmidt norm sqrt(2)
        x12 = np.eye(2, dtype=complex)
        assert restricted_norm(BlockOp(z, x12, z, z)) == pytest.approx(2.0 * np.sqrt(2.0))

    def test_norm_12_dominates_restricted_norm(self, rng):
        for _ in range(5):
            x = _random_block(rng, 4)
            assert norm_12(x) >= restricted_norm(x) - 1e-12

    def test_p_plus_and_p_minus_split_identity(self):
        total = BlockOp.p_plus(3) + BlockOp.p_minus(3)
        np.testing.assert_allclose(total.dense(), np.eye(6))
        np.testing.assert_allclose(BlockOp.d_sign(3).dense(), (BlockOp.p_plus(3) - BlockOp.p_minus(3)).dense())


class TestConjugation:
    def test_conj_i_is_an_involution(self, rng):
        x = _random_block(rng, 3)
        np.testing.assert_allclose(conj_i(conj_i(x)).dense(), x.dense())

    def test_conj_i_matches_dense_conjugation(self, rng):
        n = 3
        x = _random_block(rng, n)
        i_op = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
        expected = i_op @ np.conj(x.dense()) @ i_op
        np.testing.assert_allclose(conj_i(x).dense(), expected, atol=1e-14)


class TestPolarAndLog:
    def test_polar_unitary_is_unitary(self, rng):
        g = _random_block(rng, 3)
        u = polar_unitary(g).dense()
        np.testing.assert_allclose(u @ u.conj().T, np.eye(6), atol=1e-12)

    def test_polar_unitary_rejects_singular(self):
        with pytest.raises(SingularInput):
            polar_unitary(BlockOp.p_plus(2))

    def test_log_inverts_exp_near_identity(self, rng):
        small = _random_block(rng, 2, scale=0.05)
        g = mat_exp(small)
        np.testing.assert_allclose(mat_exp(mat_log_near_id(g)).dense(), g.dense(), atol=1e-12)

    def test_log_domain_is_enforced(self):
        with pytest.raises(LogDomain):
            mat_log_near_id(2.0 * np.eye(3))


class TestTakagi:
    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(min_value=1, max_value=5), seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_factorizes_complex_symmetric(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = a + a.T
        s, q = takagi(b)
        np.testing.assert_allclose(q @ np.diag(s) @ q.T, b, atol=1e-8)
        np.testing.assert_allclose(q.conj().T @ q, np.eye(n), atol=1e-8)
        assert np.all(np.diff(s) <= 1e-12)

    def test_zero_matrix(self):
        s, q = takagi(np.zeros((3, 3), dtype=complex))
        np.testing.assert_array_equal(s, np.zeros(3))
        np.testing.assert_allclose(q, np.eye(3))

    def test_rejects_non_symmetric(self):
        with pytest.raises(SingularInput):
            takagi(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


class TestJson:
    def test_block_encoding_keeps_every_block(self, rng):
        blocks = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4)]
        decoded = blockop_from_json(blockop_to_json(BlockOp(*blocks)))
        for name, block in zip(("x11", "x12", "x21", "x22"), blocks):
            np.testing.assert_array_equal(getattr(decoded, name), block)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cmat_from_json({"n": 3, "re": [[1.0, 0.0], [0.0, 1.0]]})

    def test_missing_field(self):
        with pytest.raises(DimensionMismatch):
            cmat_from_json({"re": [[1.0]]})

    def test_missing_block(self):
        unit = {"n": 1, "re": [[1.0]], "im": [[0.0]]}
        with pytest.raises(DimensionMismatch):
            blockop_from_json({"x11": unit, "x12": unit, "x21": unit})

    def test_imaginary_part_defaults_to_zero(self):
        m = cmat_from_json({"n": 2, "re": [[1.0, 2.0], [3.0, 4.0]]})
        np.testing.assert_array_equal(m, np.array([[1, 2], [3, 4]], dtype=complex))
