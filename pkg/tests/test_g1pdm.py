import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfbgeo.core.boggroup import random_unitary
from hfbgeo.core.errors import BadSpec, ClusterAmbiguity, DimensionMismatch, NotAdmissible
from hfbgeo.core.g1pdm import (
    G1pdm,
    act,
    diagonalization_residual,
    diagonalize,
    expand_spectrum,
    g1pdm_from_json,
    is_pure,
    projection_residual,
    random_g1pdm,
    same_orbit,
    spectral_data,
    validate_g1pdm,
)

GRID = (0.0, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5)


def pair_state() -> G1pdm:
    """gamma = 0.3 on two modes paired by alpha_12 = 0.2."""
    gamma = 0.3 * np.eye(2)
    alpha = np.array([[0.0, 0.2], [-0.2, 0.0]])
    return G1pdm(gamma, alpha)


class TestSpectrum:
    def test_expand_round_robin_sorted(self):
        assert expand_spectrum([0.4, 0.0], 4) == [0.4, 0.4, 0.0, 0.0]
        assert expand_spectrum([0.1, 0.5, 0.3], 4) == [0.5, 0.3, 0.1, 0.1]

    @pytest.mark.parametrize("spec,n", [([], 2), ([0.1, 0.2, 0.3], 2), ([0.6], 2), ([-0.1], 1)])
    def test_expand_rejects(self, spec, n):
        with pytest.raises(BadSpec):
            expand_spectrum(spec, n)

    def test_spectral_data_clusters(self):
        data = spectral_data(np.array([0.5, 0.5, 0.3, 0.0]))
        assert data.lambdas == (0.5, 0.3)
        assert data.mults == (2, 1)
        assert data.rank_p0 == 1
        assert data.has_half

    def test_spectral_data_snaps_near_half(self):
        data = spectral_data(np.array([0.5 - 1e-12, 0.2]), tol=1e-10)
        assert data.lambdas[0] == 0.5

    def test_ambiguous_clusters(self):
        with pytest.raises(ClusterAmbiguity):
            spectral_data(np.array([0.3, 0.3015]), tol=1e-3)

    def test_non_diagonal_rejected(self):
        with pytest.raises(BadSpec):
            spectral_data(np.array([[0.3, 0.1], [0.1, 0.2]]))


class TestAdmissibility:
    def test_p_minus_is_pure(self):
        G = G1pdm.p_minus(3)
        assert validate_g1pdm(G).admissible()
        assert is_pure(G)
        assert projection_residual(G) == pytest.approx(0.0)

    def test_pair_state_is_mixed_but_admissible(self):
        report = validate_g1pdm(pair_state())
        assert report.admissible()
        assert report.gamma_margin == pytest.approx(0.3 - 0.09 - 0.04)
        assert not is_pure(pair_state())

    def test_too_large_gamma(self):
        with pytest.raises(NotAdmissible):
            diagonalize(G1pdm(2.0 * np.eye(2), np.zeros((2, 2))))

    def test_orbit_preserves_admissibility(self):
        G = act(random_unitary(3, 3, 1), G1pdm.diagonal([0.4, 0.2, 0.0]))
        assert validate_g1pdm(G).admissible(1e-10)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            G1pdm(np.eye(2), np.zeros((3, 3)))


class TestDiagonalize:
    def test_pair_state(self):
        W, lam = diagonalize(pair_state())
        expected = 0.5 - np.sqrt(0.08)
        np.testing.assert_allclose(np.diag(lam), [expected, expected], atol=1e-12)
        assert diagonalization_residual(pair_state(), W, lam) < 1e-10

    @settings(max_examples=30, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=4),
        values=st.lists(st.sampled_from(GRID), min_size=1, max_size=4, unique=True),
        seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
        component=st.integers(min_value=0, max_value=1),
    )
    def test_recovers_spectrum(self, n, values, seed, component):
        values = values[:n]
        G = random_g1pdm(seed, n, values, component)
        W, lam = diagonalize(G)
        np.testing.assert_allclose(np.diag(lam), expand_spectrum(values, n), atol=1e-9)
        assert diagonalization_residual(G, W, lam) < 1e-9

    def test_half_block_across_components(self):
        for component in (0, 1):
            G = random_g1pdm(17, 3, [0.5, 0.2], component)
            W, lam = diagonalize(G)
            np.testing.assert_allclose(np.diag(lam), [0.5, 0.5, 0.2], atol=1e-9)


class TestSameOrbit:
    def test_same_spectrum_other_component(self):
        g1 = random_g1pdm(1, 3, [0.4, 0.1], 0)
        g2 = random_g1pdm(2, 3, [0.4, 0.1], 1)
        match = same_orbit(g1, g2)
        assert match.same
        np.testing.assert_allclose(act(match.witness, g1).dense(), g2.dense(), atol=1e-9)

    def test_different_spectrum(self):
        g1 = random_g1pdm(1, 3, [0.4, 0.1])
        g2 = random_g1pdm(2, 3, [0.39, 0.1])
        match = same_orbit(g1, g2)
        assert not match.same
        assert match.witness is None
        assert match.residual == pytest.approx(0.01, abs=1e-9)


class TestJson:
    def test_missing_alpha(self):
        with pytest.raises(DimensionMismatch):
            g1pdm_from_json({"gamma": {"n": 1, "re": [[0.2]]}})

    def test_reads_pair_state(self):
        obj = {
            "gamma": {"n": 2, "re": [[0.3, 0.0], [0.0, 0.3]]},
            "alpha": {"n": 2, "re": [[0.0, 0.2], [-0.2, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
        }
        np.testing.assert_allclose(g1pdm_from_json(obj).dense(), pair_state().dense())
