# hfbgeo/execution_plane/checks/v1/fock_checks.py
"""
Fock-space oracle: CAR, implementers, quasi-free states, Wick's theorem and
particle-number statistics. Bound by the Fock mode cap.
"""
import numpy as np

from hfbgeo.core.boggroup import random_algebra, random_unitary
from hfbgeo.core.errors import NotAdmissible
from hfbgeo.core.fockoracle import (
    FockSpace,
    QfState,
    equivariance_residual,
    g1pdm_of_state,
    generator_phase_residual,
    implementer,
    implementer_residual,
    number_stats,
    projectivity,
    quasifree_state,
    random_monomial,
    unitarity_residual,
    wick_residual,
)
from hfbgeo.core.g1pdm import G1pdm, act, random_g1pdm
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, sweep_grid

EVEN_DEGREES = (4, 6)
ODD_DEGREES = (3, 5)

FIELDS = (
    "car_residual",
    "implementer_residual",
    "unitarity_residual",
    "projectivity_defect",
    "generator_phase_residual",
    "state_valid",
    "roundtrip_residual",
    "equivariance_residual",
    "gamma_bound_min",
    "wick_even_residual",
    "wick_odd_residual",
    "mean_residual",
    "pure_variance_residual",
    "slater_variance",
)

CRITERIA = (
    Criterion("fockoracle.car", "car_residual", 1e-13),
    Criterion("fockoracle.implementer", "implementer_residual", 1e-9),
    Criterion("fockoracle.implementer_unitary", "unitarity_residual", 1e-9),
    Criterion("fockoracle.projectivity", "projectivity_defect", 1e-9),
    Criterion("fockoracle.generator_phase", "generator_phase_residual", 1e-9),
    Criterion("fockoracle.state_valid", "state_valid", kind="flag"),
    Criterion("fockoracle.roundtrip", "roundtrip_residual", 1e-9),
    Criterion("fockoracle.equivariance", "equivariance_residual", 1e-9),
    Criterion("fockoracle.gamma_bound", "gamma_bound_min", -1e-10, kind="min"),
    Criterion("fockoracle.wick_even", "wick_even_residual", 1e-9),
    Criterion("fockoracle.wick_odd", "wick_odd_residual", 1e-10),
    Criterion("fockoracle.number_mean", "mean_residual", 1e-10),
    Criterion("fockoracle.number_variance", "pure_variance_residual", 1e-9),
    Criterion("fockoracle.slater_variance", "slater_variance", 1e-12),
)


def fock_trial(F: FockSpace, spectrum: tuple, scale: float):
    n = F.n
    p_minus = G1pdm.p_minus(n)

    def trial(_: int, seed: int) -> dict:
        rng = np.random.default_rng(seed)
        s_u, s_v, s_x, s_g, s_w, s_m = (int(s) for s in rng.integers(0, 2 ** 63, size=6))
        c_u, c_v, c_g = (int(c) for c in rng.integers(0, 2, size=3))

        U = random_unitary(s_u, n, c_u, scale)
        V = random_unitary(s_v, n, c_v, scale)
        op = implementer(F, U)

        G = random_g1pdm(s_g, n, spectrum, c_g)
        state = quasifree_state(F, G)
        try:
            state.validate()
            valid = True
        except NotAdmissible:
            valid = False
        back = g1pdm_of_state(F, state)
        bound = back.gamma - back.gamma @ back.gamma - back.alpha @ back.alpha.conj().T
        stats = number_stats(F, state)

        monomial_seeds = [int(s) for s in np.random.default_rng(s_m).integers(0, 2 ** 63, size=4)]
        even = max(wick_residual(F, state, random_monomial(s, n, d))
                   for s, d in zip(monomial_seeds[:2], EVEN_DEGREES))
        odd = max(wick_residual(F, state, random_monomial(s, n, d))
                  for s, d in zip(monomial_seeds[2:], ODD_DEGREES))

        pure = quasifree_state(F, act(random_unitary(s_w, n, c_u, scale), p_minus))
        pure_stats = number_stats(F, pure)

        occupied = [k + 1 for k in range(n) if rng.integers(0, 2)]
        psi = F.slater(occupied)
        slater = number_stats(F, QfState(np.outer(psi, psi.conj()), n))

        return {
            "implementer_residual": implementer_residual(F, U, op),
            "unitarity_residual": unitarity_residual(op),
            "projectivity_defect": abs(projectivity(F, U, V) - 1.0),
            "generator_phase_residual": generator_phase_residual(F, random_algebra(s_x, n, scale)),
            "state_valid": valid,
            "roundtrip_residual": float(np.linalg.norm(back.dense() - G.dense(), 2)),
            "equivariance_residual": equivariance_residual(F, G, V),
            "gamma_bound_min": float(np.linalg.eigvalsh((bound + bound.conj().T) / 2)[0]),
            "wick_even_residual": even,
            "wick_odd_residual": odd,
            "mean_residual": abs(stats.mean - stats.trace_gamma),
            "pure_variance_residual": abs(pure_stats.variance - pure_stats.two_tr_alpha),
            "slater_variance": abs(slater.variance),
        }

    return trial


def fock_sweep(cfg) -> Sweep:
    F = FockSpace(cfg.n, cfg.fock_cap)
    return Sweep(
        command="fock-verify",
        fields=FIELDS,
        trial=fock_trial(F, cfg.spectrum, cfg.scale),
        criteria=CRITERIA,
        context=f"n={cfg.n} spectrum={list(cfg.spectrum)}",
        setup={"car_residual": F.car_residual()},
    )


def run(ctx: dict, params: dict) -> list:
    return sweep_grid(ctx, params, lambda cfg: [fock_sweep(cfg)])


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
