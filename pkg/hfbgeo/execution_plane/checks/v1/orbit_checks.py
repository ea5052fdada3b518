# hfbgeo/execution_plane/checks/v1/orbit_checks.py
"""
Orbit geometry around a diagonal base point.

Sweeps:
  - section-test: U = exp(tX) K near Gamma; section property, witness
    independence and the norm bound on the canonical witness
  - constants:    closed-range inequalities (restricted and operator norm),
    the inverse of the block derivation, the exponential bound and the
    norm bound on exp(epsilon X) inside c0/3
  - geodesic:     closed-form geodesics through P- against expm conjugation,
    one row per (trial, t)
"""
import math

import numpy as np
from scipy.linalg import expm

from hfbgeo.core.blockmat import BlockOp, restricted_norm
from hfbgeo.core.boggroup import BogAlgebra, exp_alg, random_algebra
from hfbgeo.core.g1pdm import G1pdm, projection_residual, validate_g1pdm
from hfbgeo.core.orbitgeo import (
    BasePoint,
    connectivity_witness,
    derivation,
    derivation_block,
    derivation_inverse,
    extended_cond_expectation,
    geodesic_exponential,
    geodesic_pminus,
    local_cross_section,
    orbit_distance,
    random_isotropy_element,
    random_tangent,
    section_constants,
    section_residual,
    tangent_norms,
)
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, select_sweeps, sweep_grid

# relative slack on the K and res-norm bounds; ||U||_res >= 2 so the P- bound of 2 is attained
BOUND_RTOL = 1e-12

# fraction of the radius the sampled distance aims for, drawn from [0, OVERSHOOT)
OVERSHOOT = 1.25

SECTION_FIELDS = (
    "distance",
    "inside_radius",
    "section_residual",
    "witness_independence",
    "witness_v_hs",
    "witness_res_norm",
    "radius",
    "big_k",
)

CONSTANTS_FIELDS = (
    "closed_range_ratio",
    "closed_range_op_ratio",
    "inverse_residual",
    "inverse_residual_reversed",
    "exp_bound_excess",
    "tangent_norm_order",
    "near_distance",
    "near_v_hs",
    "near_res_norm",
    "c_tilde",
    "c_zero",
)

GEODESIC_FIELDS = (
    "t",
    "ty_norm",
    "geodesic_residual",
    "exponential_residual",
    "projection_residual",
    "admissible",
)


def _spectrum_context(cfg) -> str:
    return f"n={cfg.n} spectrum={list(cfg.spectrum)}"


def _random_block(seed: int, n: int, scale: float) -> BlockOp:
    rng = np.random.default_rng(seed)
    blocks = [scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) for _ in range(4)]
    return BlockOp(*blocks)


# =========================================================================
# SECTION
# =========================================================================

def section_trial(base: BasePoint, scale: float, tol: float, section_tol: float):
    constants = section_constants(base, tol)
    stabilizer = connectivity_witness(base)

    def trial(_: int, seed: int) -> dict:
        rng = np.random.default_rng(seed)
        s_x, s_k, s_k2 = (int(s) for s in rng.integers(0, 2 ** 63, size=3))
        target = float(rng.uniform(0.0, OVERSHOOT)) * constants.radius

        X = random_tangent(base, s_x, scale)
        _, comm, _ = tangent_norms(base, X)
        t = target / comm if comm > 0 else 0.0
        U = exp_alg(X * t) @ random_isotropy_element(base, s_k, scale)
        dist = orbit_distance(base, U)

        row = {
            "distance": dist,
            "inside_radius": dist < constants.radius,
            "section_residual": float("nan"),
            "witness_independence": float("nan"),
            "witness_v_hs": float("nan"),
            "witness_res_norm": float("nan"),
        }
        if dist >= constants.radius:
            return row

        s = local_cross_section(base, U, section_tol, constants)
        K2 = random_isotropy_element(base, s_k2, scale)
        if stabilizer is not None and rng.integers(0, 2):
            K2 = K2 @ stabilizer
        s2 = local_cross_section(base, U @ K2, section_tol, constants)

        row["section_residual"] = section_residual(base, U, s)
        row["witness_independence"] = float(np.linalg.norm(s2.dense() - s.dense(), 2))
        if dist <= constants.c_zero / 3.0:
            row["witness_v_hs"] = float(np.linalg.norm(s.v, "fro"))
            row["witness_res_norm"] = restricted_norm(s.block())
        return row

    return trial, constants


def section_sweep(cfg) -> Sweep:
    base = BasePoint.from_spectrum(cfg.spectrum, cfg.n, cfg.tol)
    trial, constants = section_trial(base, cfg.scale, cfg.tol, cfg.section_tol)
    return Sweep(
        command="section-test",
        fields=SECTION_FIELDS,
        trial=trial,
        criteria=(
            Criterion("orbitgeo.section", "section_residual", 1e-9),
            Criterion("orbitgeo.section_witness", "witness_independence", 1e-9),
            Criterion("orbitgeo.norm_bound_k", "witness_v_hs", constants.big_k, rtol=BOUND_RTOL),
            Criterion("orbitgeo.norm_bound_res", "witness_res_norm", constants.res_bound, rtol=BOUND_RTOL),
        ),
        context=_spectrum_context(cfg),
        setup={"radius": constants.radius, "big_k": constants.big_k},
    )


# =========================================================================
# CONSTANTS
# =========================================================================

def constants_trial(base: BasePoint, scale: float, tol: float, epsilon: float):
    constants = section_constants(base, tol)
    gamma = base.gamma

    def _ratio(lhs: float, c: float, rhs: float) -> float:
        if math.isinf(c) or rhs <= 1e-14:
            return float("nan")
        return lhs / (c * rhs)

    def trial(_: int, seed: int) -> dict:
        rng = np.random.default_rng(seed)
        s_b, s_x, s_e = (int(s) for s in rng.integers(0, 2 ** 63, size=3))

        X = _random_block(s_b, base.n, scale)
        complement = X - extended_cond_expectation(base, X)
        dX = derivation_block(gamma, X)

        closed = _ratio(restricted_norm(dX), constants.c_tilde, restricted_norm(complement))
        closed_op = _ratio(
            float(np.linalg.norm(dX.dense(), 2)),
            constants.c_zero,
            float(np.linalg.norm(complement.dense(), 2)),
        )
        inverse = derivation_inverse(base, dX) - complement
        reversed_ = derivation_block(gamma, derivation_inverse(base, X)) - complement

        # ||Y||_res <= 1 keeps the conjugation series inside e^2 ||delta(Y)||_res
        Y = random_algebra(s_x, base.n, scale)
        Y = Y * (float(rng.uniform(0.0, 1.0)) / Y.res_norm())
        excess = orbit_distance(base, exp_alg(Y)) - math.e ** 2 * derivation(gamma, Y).res_norm()

        tangent = random_tangent(base, s_x, scale)
        _, res, n12 = tangent_norms(base, tangent)

        near = exp_alg(random_algebra(s_e, base.n, epsilon))
        near_dist = orbit_distance(base, near)
        in_ball = near_dist <= constants.c_zero / 3.0
        nan = float("nan")

        return {
            "closed_range_ratio": closed,
            "closed_range_op_ratio": closed_op,
            "inverse_residual": float(np.linalg.norm(inverse.dense(), 2)),
            "inverse_residual_reversed": float(np.linalg.norm(reversed_.dense(), 2)),
            "exp_bound_excess": excess,
            "tangent_norm_order": res <= n12 * (1.0 + 1e-12),
            "near_distance": near_dist,
            "near_v_hs": float(np.linalg.norm(near.v, "fro")) if in_ball else nan,
            "near_res_norm": restricted_norm(near.block()) if in_ball else nan,
        }

    return trial, constants


def constants_sweep(cfg) -> Sweep:
    base = BasePoint.from_spectrum(cfg.spectrum, cfg.n, cfg.tol)
    trial, constants = constants_trial(base, cfg.scale, cfg.tol, cfg.epsilon)
    return Sweep(
        command="constants",
        fields=CONSTANTS_FIELDS,
        trial=trial,
        criteria=(
            Criterion("orbitgeo.closed_range", "closed_range_ratio", 1.0 - 1e-9, kind="min"),
            Criterion("orbitgeo.closed_range_op", "closed_range_op_ratio", 1.0 - 1e-9, kind="min"),
            Criterion("orbitgeo.derivation_inverse", "inverse_residual", 1e-10),
            Criterion("orbitgeo.derivation_inverse_reversed", "inverse_residual_reversed", 1e-10),
            Criterion("orbitgeo.exp_bound", "exp_bound_excess", 1e-12),
            Criterion("orbitgeo.tangent_norms", "tangent_norm_order", kind="flag"),
            Criterion("orbitgeo.norm_bound_near_k", "near_v_hs", constants.big_k, rtol=BOUND_RTOL),
            Criterion("orbitgeo.norm_bound_near_res", "near_res_norm", constants.res_bound, rtol=BOUND_RTOL),
        ),
        context=_spectrum_context(cfg),
        setup={"c_tilde": constants.c_tilde, "c_zero": constants.c_zero},
    )


# =========================================================================
# GEODESIC
# =========================================================================

def geodesic_trial(n: int, scale: float, t_values: tuple):
    p_minus = G1pdm.p_minus(n).dense()

    def trial(_: int, seed: int) -> list:
        y = random_algebra(seed, n, scale).x2
        generator = BogAlgebra(np.zeros((n, n), dtype=complex), y).dense()
        rows = []
        for t in t_values:
            flow = expm(t * generator)
            G = geodesic_pminus(y, t)
            rows.append({
                "t": float(t),
                "ty_norm": float(abs(t) * np.linalg.norm(y, 2)),
                "geodesic_residual": float(np.linalg.norm(G.dense() - flow @ p_minus @ flow.conj().T, 2)),
                "exponential_residual": float(np.linalg.norm(geodesic_exponential(y, t) - flow, 2)),
                "projection_residual": projection_residual(G),
                "admissible": validate_g1pdm(G).admissible(1e-9),
            })
        return rows

    return trial


def geodesic_sweep(cfg) -> Sweep:
    return Sweep(
        command="geodesic",
        fields=GEODESIC_FIELDS,
        trial=geodesic_trial(cfg.n, cfg.scale, tuple(cfg.t_values)),
        criteria=(
            Criterion("orbitgeo.geodesic", "geodesic_residual", 1e-9),
            Criterion("orbitgeo.geodesic_exponential", "exponential_residual", 1e-9),
            Criterion("orbitgeo.geodesic_pure", "projection_residual", 1e-9),
            Criterion("orbitgeo.geodesic_admissible", "admissible", kind="flag"),
        ),
        context=f"n={cfg.n} t={list(cfg.t_values)}",
    )


SWEEPS = {"section": section_sweep, "constants": constants_sweep, "geodesic": geodesic_sweep}


def run(ctx: dict, params: dict) -> list:
    builders = select_sweeps(SWEEPS, params)
    return sweep_grid(ctx, params, lambda cfg: [build(cfg) for build in builders])


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
