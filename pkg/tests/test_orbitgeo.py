import numpy as np
import pytest
from scipy.linalg import expm

from hfbgeo.core.blockmat import BlockOp, restricted_norm
from hfbgeo.core.boggroup import BogAlgebra, exp_alg, random_algebra, random_unitary, z2_index
from hfbgeo.core.errors import BadSpec, DegenerateSpectrum, OutsideRadius
from hfbgeo.core.g1pdm import G1pdm, act, projection_residual, spectral_data
from hfbgeo.core.orbitgeo import (
    BasePoint,
    closed_range_constants,
    connectivity_witness,
    derivation_block,
    derivation_inverse,
    extended_cond_expectation,
    geodesic_exponential,
    geodesic_pminus,
    isotropy_basis,
    isotropy_dimension,
    local_cross_section,
    orbit_distance,
    random_isotropy_element,
    random_tangent,
    reductive_complement,
    section_constants,
    section_residual,
    tangent_basis,
    tangent_norms,
)


def _random_block(rng, n):
    return BlockOp(*[rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(4)])


def _near(base, seed, fraction):
    """exp(tX) for a tangent X scaled to fraction * radius."""
    constants = section_constants(base)
    X = random_tangent(base, seed)
    _, comm, _ = tangent_norms(base, X)
    return exp_alg(X * (fraction * constants.radius / comm))


class TestConstants:
    def test_two_level_spectrum(self, base_04):
        c_tilde, c_zero = closed_range_constants(base_04.spec)
        assert c_tilde == pytest.approx(3.0 / 28.0)
        assert c_zero == pytest.approx(3.0 / 86.0)

    def test_radius_below_c_zero_third(self, base_04):
        constants = section_constants(base_04)
        assert 0 < constants.radius <= constants.c_zero / 6.0
        assert constants.res_bound == pytest.approx(2.0 * max(1.0, constants.big_k))

    def test_pure_state_uses_only_the_pairing_sum(self):
        # only (0, 0) contributes: |0 + 0 - 1| = 1
        base = BasePoint.from_spectrum((0.0,), 2)
        c_tilde, c_zero = closed_range_constants(base.spec)
        assert c_tilde == pytest.approx(1.0)
        assert c_zero == pytest.approx(0.5)
        assert section_constants(base).radius == pytest.approx(0.5 / 6.0)

    def test_degenerate_gap(self):
        spec = spectral_data(np.array([0.3, 0.3 + 5e-11]), tol=1e-12)
        with pytest.raises(DegenerateSpectrum):
            closed_range_constants(spec, tol=1e-10)


class TestIsotropy:
    def test_dimensions(self, base_04):
        assert isotropy_dimension(base_04.spec) == 8
        assert len(isotropy_basis(base_04)) == 8
        assert len(tangent_basis(base_04)) == 20

    def test_half_block_adds_pairing_directions(self):
        base = BasePoint.from_spectrum((0.5, 0.2), 4)
        # mults (2, 2), no kernel; the half block contributes 2 * 1
        assert isotropy_dimension(base.spec) == 4 + 4 + 2
        assert len(isotropy_basis(base)) == isotropy_dimension(base.spec)

    def test_isotropy_elements_fix_gamma(self, base_half):
        K = random_isotropy_element(base_half, 4)
        np.testing.assert_allclose(act(K, base_half.gamma).dense(), base_half.gamma.dense(), atol=1e-12)

    def test_connectivity_witness(self, base_half, base_04):
        S = connectivity_witness(base_half)
        assert z2_index(S) == 1
        np.testing.assert_allclose(act(S, base_half.gamma).dense(), base_half.gamma.dense(), atol=1e-14)
        assert connectivity_witness(base_04) is None


class TestDerivation:
    def test_inverse_on_complement(self, base_04, rng):
        X = _random_block(rng, base_04.n)
        complement = X - extended_cond_expectation(base_04, X)
        forward = derivation_inverse(base_04, derivation_block(base_04.gamma, X))
        backward = derivation_block(base_04.gamma, derivation_inverse(base_04, X))
        np.testing.assert_allclose(forward.dense(), complement.dense(), atol=1e-12)
        np.testing.assert_allclose(backward.dense(), complement.dense(), atol=1e-12)

    def test_inverse_with_half_block(self, base_half, rng):
        X = _random_block(rng, base_half.n)
        complement = X - extended_cond_expectation(base_half, X)
        forward = derivation_inverse(base_half, derivation_block(base_half.gamma, X))
        np.testing.assert_allclose(forward.dense(), complement.dense(), atol=1e-12)

    @pytest.mark.parametrize("spectrum,n", [((0.4, 0.0), 4), ((0.5, 0.3, 0.1), 4), ((0.45, 0.2, 0.0), 3)])
    def test_closed_range(self, spectrum, n, rng):
        base = BasePoint.from_spectrum(spectrum, n)
        c_tilde, c_zero = closed_range_constants(base.spec)
        for _ in range(10):
            X = _random_block(rng, n)
            complement = X - extended_cond_expectation(base, X)
            dX = derivation_block(base.gamma, X)
            assert restricted_norm(dX) >= c_tilde * restricted_norm(complement) * (1 - 1e-9)
            assert np.linalg.norm(dX.dense(), 2) >= c_zero * np.linalg.norm(complement.dense(), 2) * (1 - 1e-9)

    def test_tangent_norm_order(self, base_04):
        for seed in range(5):
            _, res, n12 = tangent_norms(base_04, random_tangent(base_04, seed))
            assert res <= n12 * (1 + 1e-12)


class TestSection:
    def test_section_reproduces_orbit_point(self, base_04):
        U = _near(base_04, 3, 0.5)
        s = local_cross_section(base_04, U)
        assert section_residual(base_04, U, s) < 1e-9

    def test_section_ignores_witness(self, base_04):
        U = _near(base_04, 5, 0.5)
        K = random_isotropy_element(base_04, 6)
        s1 = local_cross_section(base_04, U)
        s2 = local_cross_section(base_04, U @ K)
        np.testing.assert_allclose(s1.dense(), s2.dense(), atol=1e-9)

    def test_section_ignores_odd_witness(self, base_half):
        U = _near(base_half, 7, 0.4)
        s1 = local_cross_section(base_half, U)
        s2 = local_cross_section(base_half, U @ connectivity_witness(base_half))
        np.testing.assert_allclose(s1.dense(), s2.dense(), atol=1e-9)

    def test_outside_radius(self, base_04):
        U = random_unitary(2, base_04.n)
        assert orbit_distance(base_04, U) > section_constants(base_04).radius
        with pytest.raises(OutsideRadius):
            local_cross_section(base_04, U)

    def test_reductive_complement_is_idempotent(self, base_04):
        U = random_unitary(9, base_04.n)
        m = reductive_complement(base_04, U)
        X = random_algebra(10, base_04.n)
        np.testing.assert_allclose(m(m(X)).dense(), m(X).dense(), atol=1e-12)


class TestGeodesic:
    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 2.5])
    def test_matches_expm(self, t):
        y = random_algebra(12, 3).x2
        generator = BogAlgebra(np.zeros((3, 3), dtype=complex), y).dense()
        flow = expm(t * generator)
        np.testing.assert_allclose(geodesic_exponential(y, t), flow, atol=1e-10)
        p_minus = G1pdm.p_minus(3).dense()
        G = geodesic_pminus(y, t)
        np.testing.assert_allclose(G.dense(), flow @ p_minus @ flow.conj().T, atol=1e-10)
        assert projection_residual(G) < 1e-10

    def test_rejects_symmetric_y(self):
        with pytest.raises(BadSpec):
            geodesic_pminus(np.eye(2), 1.0)
