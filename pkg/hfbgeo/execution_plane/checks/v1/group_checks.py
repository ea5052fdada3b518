# hfbgeo/execution_plane/checks/v1/group_checks.py
"""
Bogoliubov group properties: defining relations, exp/log round trip, the Z2
index (homomorphism, conjugation invariance, Fredholm analogue) and the
orthogonal picture with its cocycle.
"""
import numpy as np

from hfbgeo.core.boggroup import (
    algebra_to_real,
    exp_alg,
    from_orthogonal,
    kernel_dimensions,
    log_near_id,
    random_algebra,
    random_unitary,
    to_orthogonal,
    validate_unitary,
    vershik_cocycle,
    z2_index,
)
from hfbgeo.core.sympkahler import cocycle_splus
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, sweep_grid

LOG_SCALE = 0.05

FIELDS = (
    "component",
    "unitary_residual",
    "exp_log_residual",
    "index_expected",
    "index_homomorphism",
    "index_conjugation",
    "fredholm",
    "orthogonal_residual",
    "orthogonal_roundtrip",
    "orthogonal_homomorphism",
    "vershik_residual",
)

CRITERIA = (
    Criterion("boggroup.unitary", "unitary_residual", 1e-10),
    Criterion("boggroup.exp_log", "exp_log_residual", 1e-10),
    Criterion("boggroup.index_component", "index_expected", kind="flag"),
    Criterion("boggroup.index_homomorphism", "index_homomorphism", kind="flag"),
    Criterion("boggroup.index_conjugation", "index_conjugation", kind="flag"),
    Criterion("boggroup.fredholm_index", "fredholm", kind="flag"),
    Criterion("boggroup.orthogonal", "orthogonal_residual", 1e-10),
    Criterion("boggroup.orthogonal_roundtrip", "orthogonal_roundtrip", 1e-10),
    Criterion("boggroup.orthogonal_homomorphism", "orthogonal_homomorphism", 1e-10),
    Criterion("boggroup.vershik_pullback", "vershik_residual", 1e-10),
)


def group_trial(n: int, scale: float = 1.0):
    def trial(_: int, seed: int) -> dict:
        rng = np.random.default_rng(seed)
        s_u, s_v, s_w, s_x, s_y = (int(s) for s in rng.integers(0, 2 ** 63, size=5))
        comp_u, comp_v = (int(c) for c in rng.integers(0, 2, size=2))

        U = random_unitary(s_u, n, comp_u, scale)
        V = random_unitary(s_v, n, comp_v, scale)
        W = random_unitary(s_w, n, 0, scale)

        X = random_algebra(s_x, n, LOG_SCALE)
        exp_log = (log_near_id(exp_alg(X)) - X).frobenius()

        idx_u, idx_v = z2_index(U), z2_index(V)
        ker_u, ker_u_star = kernel_dimensions(U)

        o_u, o_v = to_orthogonal(U), to_orthogonal(V)
        back = from_orthogonal(o_u)

        A, B = random_algebra(s_x, n, scale), random_algebra(s_y, n, scale)
        vershik = abs(vershik_cocycle(algebra_to_real(A), algebra_to_real(B)) + 2.0 * cocycle_splus(A, B))

        return {
            "component": comp_u,
            "unitary_residual": max(validate_unitary(U), validate_unitary(U @ V)),
            "exp_log_residual": exp_log,
            "index_expected": idx_u == comp_u and idx_v == comp_v,
            "index_homomorphism": z2_index(U @ V) == (idx_u + idx_v) % 2,
            "index_conjugation": z2_index(W @ U @ W.adjoint()) == idx_u,
            "fredholm": ker_u == ker_u_star,
            "orthogonal_residual": float(np.linalg.norm(o_u.T @ o_u - np.eye(2 * n), 2)),
            "orthogonal_roundtrip": float(np.linalg.norm(back.dense() - U.dense(), 2)),
            "orthogonal_homomorphism": float(np.linalg.norm(to_orthogonal(U @ V) - o_u @ o_v, 2)),
            "vershik_residual": vershik,
        }
    return trial


def group_sweep(cfg) -> Sweep:
    return Sweep(
        command="group",
        fields=FIELDS,
        trial=group_trial(cfg.n, cfg.scale),
        criteria=CRITERIA,
        context=f"n={cfg.n}",
    )


def run(ctx: dict, params: dict) -> list:
    return sweep_grid(ctx, params, lambda cfg: [group_sweep(cfg)], uses_spectrum=False)


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
