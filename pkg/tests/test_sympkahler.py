import numpy as np
import pytest

from hfbgeo.core.boggroup import BogAlgebra, ad, random_algebra, random_unitary
from hfbgeo.core.errors import DimensionMismatch, InKernel, NotInComplement, NotInPolarization
from hfbgeo.core.g1pdm import G1pdm, act, random_g1pdm
from hfbgeo.core.orbitgeo import BasePoint, random_tangent
from hfbgeo.core.sympkahler import (
    GComplexElem,
    cocycle_estimates,
    cocycle_gamma,
    cocycle_splus,
    cocycle_trace,
    coboundary_functional,
    complex_structure,
    kaehler_closed_form,
    kaehler_positivity,
    metric,
    polarization_build,
    polarization_decompose,
    polarization_isotropy_residual,
    polarization_rank_report,
    radical_check,
    radical_dimension,
    symplectic_form,
)


@pytest.fixture
def half_base():
    """n = 5 around Lambda = diag(1/2, 1/2, 1/2, 0.3, 0.3)."""
    return BasePoint.from_spectrum((0.5, 0.3), 5)


def _element(P, rng):
    coeffs = rng.standard_normal(len(P.basis)) + 1j * rng.standard_normal(len(P.basis))
    return GComplexElem.from_dense(sum(c * e.dense() for c, e in zip(coeffs, P.basis)))


class TestCocycles:
    def test_form_at_orbit_point_pulls_back(self):
        B = BasePoint.from_spectrum((0.4, 0.1), 3)
        U = random_unitary(9, 3, component=1)
        X, Y = random_algebra(10, 3), random_algebra(11, 3)
        value = symplectic_form(B, U, ad(U, X), ad(U, Y))
        assert value == pytest.approx(cocycle_gamma(B.gamma, X, Y), abs=1e-10)

    def test_at_p_minus_equals_minus_s_plus(self):
        X, Y = random_algebra(1, 4), random_algebra(2, 4)
        assert cocycle_gamma(G1pdm.p_minus(4), X, Y) == pytest.approx(-cocycle_splus(X, Y), abs=1e-12)

    def test_closed_form_matches_trace(self):
        G = random_g1pdm(3, 4, [0.45, 0.2, 0.0])
        X, Y = random_algebra(4, 4), random_algebra(5, 4)
        assert cocycle_gamma(G, X, Y) == pytest.approx(cocycle_trace(G, X, Y), abs=1e-10)

    def test_coboundary_split(self):
        G = random_g1pdm(6, 3, [0.4, 0.1], component=1)
        X, Y = random_algebra(7, 3), random_algebra(8, 3)
        split = -cocycle_splus(X, Y) + coboundary_functional(G, X.commutator(Y))
        assert cocycle_gamma(G, X, Y) == pytest.approx(split, abs=1e-10)

    def test_cyclic_identity(self):
        G = random_g1pdm(9, 3, [0.3, 0.0])
        X, Y, Z = (random_algebra(s, 3) for s in (10, 11, 12))
        total = (
            cocycle_gamma(G, X.commutator(Y), Z)
            + cocycle_gamma(G, Y.commutator(Z), X)
            + cocycle_gamma(G, Z.commutator(X), Y)
        )
        assert total == pytest.approx(0.0, abs=1e-10)

    def test_invariance(self):
        G = random_g1pdm(13, 3, [0.5, 0.2])
        X, Y = random_algebra(14, 3), random_algebra(15, 3)
        U = random_unitary(16, 3, component=1)
        assert cocycle_gamma(act(U, G), ad(U, X), ad(U, Y)) == pytest.approx(cocycle_gamma(G, X, Y), abs=1e-10)

    def test_antisymmetric(self):
        G = random_g1pdm(17, 2, [0.35])
        X, Y = random_algebra(18, 2), random_algebra(19, 2)
        assert cocycle_gamma(G, X, Y) == pytest.approx(-cocycle_gamma(G, Y, X), abs=1e-12)

    def test_estimates_hold(self):
        for seed in range(5):
            G = random_g1pdm(seed, 3, [0.45, 0.1])
            assert cocycle_estimates(G, random_algebra(seed + 20, 3), random_algebra(seed + 40, 3)).holds()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cocycle_splus(random_algebra(0, 2), random_algebra(1, 3))


class TestRadical:
    def test_base_point_radical_is_isotropy(self, base_04):
        report = radical_check(base_04)
        assert report.null_dim == 8
        assert report.matches()

    def test_half_block(self, base_half):
        assert radical_check(base_half).matches()

    def test_radical_along_the_orbit(self):
        G = random_g1pdm(21, 4, [0.4, 0.0], component=1)
        assert radical_dimension(G) == 8


class TestPolarization:
    @pytest.mark.parametrize("spectrum,n", [((0.5, 0.3), 5), ((0.4, 0.0), 4), ((0.5,), 2), ((0.3,), 1)])
    def test_ranks_consistent(self, spectrum, n):
        P = polarization_build(BasePoint.from_spectrum(spectrum, n))
        assert polarization_rank_report(P).consistent()

    def test_isotropic_for_s_gamma(self, half_base):
        P = polarization_build(half_base)
        assert P.branch == "half"
        assert polarization_isotropy_residual(half_base, P) < 1e-10

    def test_positivity_matches_closed_form(self, half_base, rng):
        P = polarization_build(half_base)
        for _ in range(5):
            a = _element(P, rng)
            value = kaehler_positivity(half_base, a)
            assert value > 0
            assert value == pytest.approx(kaehler_closed_form(half_base, a), abs=1e-8)

    def test_single_block_value(self, half_base):
        n = half_base.n
        x = np.zeros((n, n), dtype=complex)
        x[0, 3] = 1.0 + 2.0j
        zero = np.zeros_like(x)
        value = kaehler_positivity(half_base, GComplexElem(x, zero, zero))
        assert value == pytest.approx(2.0 * (0.5 - 0.3) * 5.0, abs=1e-10)

    def test_lower_block_entry_is_rejected(self, half_base):
        n = half_base.n
        x = np.zeros((n, n), dtype=complex)
        x[3, 0] = 1.0
        zero = np.zeros_like(x)
        with pytest.raises(NotInPolarization):
            kaehler_positivity(half_base, GComplexElem(x, zero, zero))

    def test_isotropy_entry_is_in_kernel(self, half_base):
        n = half_base.n
        x = np.zeros((n, n), dtype=complex)
        x[0, 1] = 1.0
        zero = np.zeros_like(x)
        with pytest.raises(InKernel):
            kaehler_positivity(half_base, GComplexElem(x, zero, zero))

    def test_decomposition(self, half_base):
        X = random_tangent(half_base, 22)
        a = polarization_decompose(half_base, X)
        np.testing.assert_allclose((a + a.conj_bar()).dense(), X.dense(), atol=1e-12)
        assert polarization_build(half_base).residual(a) < 1e-12


class TestComplexStructure:
    @pytest.mark.parametrize("spectrum,n", [((0.5, 0.3), 5), ((0.45, 0.2, 0.0), 3)])
    def test_j_squares_to_minus_one(self, spectrum, n):
        base = BasePoint.from_spectrum(spectrum, n)
        X = random_tangent(base, 23)
        JX = complex_structure(base, X)
        np.testing.assert_allclose(complex_structure(base, JX).dense(), -X.dense(), atol=1e-10)

    def test_j_preserves_omega_and_metric_is_positive(self, half_base):
        X, Y = random_tangent(half_base, 24), random_tangent(half_base, 25)
        JX, JY = complex_structure(half_base, X), complex_structure(half_base, Y)
        g = half_base.gamma
        assert cocycle_gamma(g, JX, JY) == pytest.approx(cocycle_gamma(g, X, Y), abs=1e-9)
        assert metric(half_base, X, X) > 0

    @pytest.mark.parametrize("seed", [26, 27, 28])
    def test_sign_convention(self, base_04, seed):
        X = random_tangent(base_04, seed)
        a = polarization_decompose(base_04, X)
        np.testing.assert_allclose(complex_structure(base_04, X).dense(),
                                   (1j * (a - a.conj_bar())).to_bog().dense(), atol=1e-12)
        flipped = (1j * (a.conj_bar() - a)).to_bog()
        assert metric(base_04, X, X) > 0
        assert cocycle_gamma(base_04.gamma, X, flipped) < 0

    def test_rejects_isotropy_component(self, base_04):
        n = base_04.n
        x1 = np.zeros((n, n), dtype=complex)
        x1[0, 0] = 1j
        with pytest.raises(NotInComplement):
            complex_structure(base_04, BogAlgebra(x1, np.zeros((n, n), dtype=complex)))
