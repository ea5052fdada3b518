import numpy as np
import pytest

from hfbgeo.core.boggroup import BogUnitary, random_unitary
from hfbgeo.core.errors import BadSpec, CapExceeded, DimensionMismatch
from hfbgeo.core.g1pdm import G1pdm, act, validate_g1pdm
from hfbgeo.core.hfbopt import (
    HfbParams,
    build_hubbard,
    descent_directions,
    energy_gradient,
    ground_energy,
    hfb_energy,
    hfb_result_to_json,
    minimize_hfb,
    one_body_ground_energy,
    orbit_energy,
)
from hfbgeo.execution_plane.checks.v1.hfb_checks import gradient_agreement

QUICK = HfbParams(seed=3, restarts=1, max_iter=150, outer_sweeps=1)


class TestHamiltonians:
    @pytest.mark.parametrize(
        "sites,u_int,convention,expected",
        [
            (2, 0.0, "spinless", -1.0),
            (3, 0.0, "spinless", -np.sqrt(2.0)),
            (2, 0.0, "spinful", -2.0),
            (2, 4.0, "spinful", -1.0),
        ],
    )
    def test_exact_ground_energies(self, sites, u_int, convention, expected):
        H = build_hubbard(sites, 1.0, u_int, 0.0, convention)
        assert ground_energy(H) == pytest.approx(expected, abs=1e-12)
        if u_int == 0.0:
            assert one_body_ground_energy(H) == pytest.approx(expected, abs=1e-12)

    def test_periodic_ring(self):
        H = build_hubbard(3, 1.0, 0.0, 0.0, "spinless", periodic=True)
        assert one_body_ground_energy(H) == pytest.approx(-2.0, abs=1e-12)

    def test_mode_cap(self):
        with pytest.raises(CapExceeded):
            build_hubbard(4, 1.0, 4.0, 0.0, "spinful")

    @pytest.mark.parametrize("sites,convention", [(2, "bosonic"), (0, "spinless")])
    def test_bad_lattice(self, sites, convention):
        with pytest.raises(BadSpec):
            build_hubbard(sites, 1.0, 0.0, 0.0, convention)

    def test_vacuum_energy(self):
        H = build_hubbard(2, 1.0, 4.0, 0.5, "spinful")
        assert hfb_energy(H, G1pdm.p_minus(4)) == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(DimensionMismatch):
            hfb_energy(H, G1pdm.p_minus(2))

    def test_orbit_energy_matches_hfb_energy(self):
        H = build_hubbard(2, 1.0, 2.0, 0.3, "spinless")
        U = random_unitary(5, 2, component=1)
        lambdas = np.array([0.4, 0.1])
        G = act(U, G1pdm.diagonal(lambdas))
        assert orbit_energy(H, U, lambdas) == pytest.approx(hfb_energy(H, G), abs=1e-10)


class TestGradient:
    def test_modes_agree(self):
        H = build_hubbard(2, 1.0, 4.0, 0.0, "spinful")
        assert gradient_agreement(H, 11) < 1e-5

    def test_zero_at_vacuum(self):
        # a number-conserving H cannot lower the vacuum to first order
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinless")
        lambdas = np.zeros(2)
        basis = descent_directions(lambdas)
        grad = energy_gradient(H, BogUnitary.identity(2), lambdas, basis, "generator")
        np.testing.assert_allclose(grad, 0.0, atol=1e-9)

    def test_unknown_mode(self):
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinless")
        with pytest.raises(BadSpec):
            energy_gradient(H, random_unitary(0, 2), np.zeros(2), descent_directions(np.zeros(2)), "newton")


class TestMinimize:
    def test_quadratic_spinless_dimer(self):
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinless")
        result = minimize_hfb(H, G1pdm.p_minus(2), QUICK)
        assert result.energy == pytest.approx(-1.0, abs=1e-6)
        assert result.projection_residual < 1e-6
        assert validate_g1pdm(result.gamma_star).admissible(1e-9)

    @pytest.mark.slow
    def test_quadratic_spinful_dimer(self):
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinful")
        result = minimize_hfb(H, G1pdm.p_minus(4), QUICK)
        assert result.energy == pytest.approx(-2.0, abs=1e-6)

    def test_interacting_dimer_respects_variational_bound(self):
        H = build_hubbard(2, 1.0, 4.0, 0.0, "spinful")
        params = HfbParams(seed=1, restarts=1, max_iter=20, search_spectrum=False)
        result = minimize_hfb(H, G1pdm.p_minus(4), params)
        exact = ground_energy(H)
        assert result.energy >= exact - 1e-9
        assert result.energy <= 0.0
        out = hfb_result_to_json(result, exact)
        assert out["exact_ground_energy"] == pytest.approx(-1.0)
        assert out["gap"] == pytest.approx(result.energy + 1.0)
        assert set(out["gamma_star"]) == {"gamma", "alpha"}

    def test_history_never_increases(self):
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinless")
        result = minimize_hfb(H, G1pdm.p_minus(2), HfbParams(seed=2, restarts=1, search_spectrum=False))
        assert all(b <= a + 1e-12 for a, b in zip(result.history, result.history[1:]))

    def test_dimension_mismatch(self):
        H = build_hubbard(2, 1.0, 0.0, 0.0, "spinless")
        with pytest.raises(DimensionMismatch):
            minimize_hfb(H, G1pdm.p_minus(3))
