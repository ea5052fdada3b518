import numpy as np
import pytest

from hfbgeo.core import boggroup
from hfbgeo.core.boggroup import random_algebra, random_unitary, validate_unitary
from hfbgeo.core.errors import CapExceeded, DimensionMismatch, IndexOutOfRange, NotAdmissible
from hfbgeo.core.fockoracle import (
    FockSpace,
    QfState,
    diagonal_state,
    equivariance_residual,
    g1pdm_of_state,
    generator_phase_residual,
    implementer,
    implementer_residual,
    is_pure_state,
    number_stats,
    pairing_count,
    projectivity,
    quasifree_state,
    random_monomial,
    unitarity_residual,
    wick_residual,
)
from hfbgeo.core.g1pdm import G1pdm, act, random_g1pdm


@pytest.fixture(scope="module")
def fock3():
    return FockSpace(3)


class TestFockSpace:
    def test_car(self, fock3):
        assert fock3.car_residual() < 1e-13

    def test_mode_cap(self):
        with pytest.raises(CapExceeded):
            FockSpace(7)
        assert FockSpace(7, cap=7).dim == 128

    def test_mode_range(self, fock3):
        with pytest.raises(IndexOutOfRange):
            fock3.creation(0)
        with pytest.raises(IndexOutOfRange):
            fock3.annihilation(4)

    def test_slater_ordering(self, fock3):
        psi = fock3.slater([1, 3])
        expected = np.zeros(8, dtype=complex)
        expected[0b101] = 1.0
        np.testing.assert_allclose(psi, expected)
        np.testing.assert_allclose(fock3.slater([3, 1]), -expected)

    def test_number_operator_counts_occupations(self, fock3):
        np.testing.assert_allclose(np.diag(fock3.number_operator()).real, fock3.occupation_counts())


class TestImplementer:
    @pytest.mark.parametrize("component", [0, 1])
    def test_implements_the_unitary(self, fock3, component):
        U = random_unitary(31, 3, component)
        op = implementer(fock3, U)
        assert implementer_residual(fock3, U, op) < 1e-9
        assert unitarity_residual(op) < 1e-9

    def test_odd_component_flips_parity(self, fock3):
        op = implementer(fock3, random_unitary(32, 3, component=1))
        parity = fock3.parity_operator()
        np.testing.assert_allclose(op @ parity @ op.conj().T, -parity, atol=1e-9)

    def test_projective_representation(self, fock3):
        U, V = random_unitary(33, 3), random_unitary(34, 3, component=1)
        assert projectivity(fock3, U, V) == pytest.approx(1.0, abs=1e-9)

    def test_quadratic_generator_up_to_phase(self, fock3):
        assert generator_phase_residual(fock3, random_algebra(35, 3, scale=0.7)) < 1e-9

    def test_dimension_mismatch(self, fock3):
        with pytest.raises(DimensionMismatch):
            implementer(fock3, random_unitary(0, 2))


class TestQuasiFreeStates:
    def test_vacuum_is_the_state_of_p_minus(self, fock3):
        state = quasifree_state(fock3, G1pdm.p_minus(3))
        vacuum = fock3.vacuum()
        np.testing.assert_allclose(state.rho, np.outer(vacuum, vacuum), atol=1e-12)
        assert is_pure_state(state)

    def test_diagonal_state_occupations(self):
        F = FockSpace(2)
        G = g1pdm_of_state(F, QfState(diagonal_state([0.3, 0.1]), 2))
        np.testing.assert_allclose(G.gamma, np.diag([0.3, 0.1]), atol=1e-14)
        np.testing.assert_allclose(G.alpha, np.zeros((2, 2)), atol=1e-14)

    @pytest.mark.parametrize("spectrum,component", [([0.4, 0.1], 0), ([0.5, 0.0], 1), ([0.25], 0)])
    def test_round_trip(self, fock3, spectrum, component):
        G = random_g1pdm(36, 3, spectrum, component)
        state = quasifree_state(fock3, G)
        state.validate()
        np.testing.assert_allclose(g1pdm_of_state(fock3, state).dense(), G.dense(), atol=1e-9)

    def test_equivariance(self, fock3):
        G = random_g1pdm(37, 3, [0.45, 0.2])
        assert equivariance_residual(fock3, G, random_unitary(38, 3, component=1)) < 1e-9

    def test_validate_rejects_bad_trace(self):
        with pytest.raises(NotAdmissible):
            QfState(2.0 * diagonal_state([0.2]), 1).validate()

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            QfState(np.eye(3), 2)


class TestWick:
    def test_pairing_count(self):
        assert [pairing_count(k) for k in (2, 4, 6, 8)] == [1, 3, 15, 105]

    @pytest.mark.parametrize("degree", [2, 4, 6])
    def test_even_monomials_factor(self, fock3, degree):
        state = quasifree_state(fock3, random_g1pdm(39, 3, [0.4, 0.15]))
        assert wick_residual(fock3, state, random_monomial(40 + degree, 3, degree)) < 1e-9

    @pytest.mark.parametrize("degree", [1, 3, 5])
    def test_odd_monomials_vanish(self, fock3, degree):
        state = quasifree_state(fock3, random_g1pdm(41, 3, [0.35, 0.05]))
        assert wick_residual(fock3, state, random_monomial(50 + degree, 3, degree)) < 1e-10

    def test_degree_limit(self, fock3):
        state = quasifree_state(fock3, G1pdm.p_minus(3))
        with pytest.raises(DimensionMismatch):
            wick_residual(fock3, state, random_monomial(0, 3, 10))


class TestNumberStatistics:
    def test_mean_is_trace_gamma(self, fock3):
        stats = number_stats(fock3, quasifree_state(fock3, random_g1pdm(42, 3, [0.3, 0.2, 0.1])))
        assert stats.mean == pytest.approx(stats.trace_gamma, abs=1e-10)

    def test_pure_variance_from_pairing(self, fock3):
        G = act(random_unitary(43, 3), G1pdm.p_minus(3))
        stats = number_stats(fock3, quasifree_state(fock3, G))
        assert stats.two_tr_alpha > 1e-6
        assert stats.variance == pytest.approx(stats.two_tr_alpha, abs=1e-9)

    def test_slater_has_sharp_number(self, fock3):
        psi = fock3.slater([2, 3])
        stats = number_stats(fock3, QfState(np.outer(psi, psi.conj()), 3))
        assert stats.mean == pytest.approx(2.0)
        assert stats.variance == pytest.approx(0.0, abs=1e-12)


class TestConjugationFault:
    def test_broken_bar_spares_car(self, monkeypatch):
        assert validate_unitary(random_unitary(5, 3)) < 1e-12
        monkeypatch.setattr(boggroup, "bar", lambda x: x)
        # Bogoliubov relations break, the Fock-space relations do not
        assert validate_unitary(random_unitary(5, 3)) > 1e-6
        assert FockSpace(3).car_residual() < 1e-13
