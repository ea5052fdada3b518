# hfbgeo/execution_plane/checks/v1/hfb_checks.py
"""
HFB minimization on small Hubbard models.

Each case is one Sweep; a trial is one minimization with its own restart
seed. Quadratic cases (u_int = 0) must reach the one-body ground energy,
interacting cases must stay above the exact ground energy, and both gradient
modes must agree at a random orbit point.

Step params:
    cases: list of {convention, sites, u_int, hopping, mu, periodic}
    trials, max_n
"""
import logging
from dataclasses import replace

import numpy as np

from hfbgeo.control_plane.config import HubbardSettings
from hfbgeo.core.boggroup import random_unitary
from hfbgeo.core.g1pdm import G1pdm, expand_spectrum
from hfbgeo.core.hfbopt import (
    build_hubbard,
    descent_directions,
    energy_gradient,
    ground_energy,
    minimize_hfb,
    one_body_ground_energy,
)
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, merge_outcomes
from hfbgeo.execution_plane.common.connectors.seed_counter import trial_seeds

logger = logging.getLogger(__name__)

QUADRATIC_TOL = 1e-6
VARIATIONAL_SLACK = 1e-9
GRADIENT_RTOL = 1e-5

DEFAULT_CASES = (
    HubbardSettings(sites=2, u_int=0.0, convention="spinless"),
    HubbardSettings(sites=3, u_int=0.0, convention="spinless"),
    HubbardSettings(sites=2, u_int=0.0, convention="spinful"),
    HubbardSettings(sites=2, u_int=4.0, convention="spinful"),
)

FIELDS = (
    "convention",
    "sites",
    "u_int",
    "energy",
    "exact_energy",
    "gap",
    "pairing_norm",
    "projection_residual",
    "converged",
    "variational_ok",
    "quadratic_error",
    "gradient_rel_error",
)

CRITERIA = (
    Criterion("hfbopt.variational", "variational_ok", kind="flag"),
    Criterion("hfbopt.quadratic", "quadratic_error", QUADRATIC_TOL),
    Criterion("hfbopt.gradient", "gradient_rel_error", GRADIENT_RTOL),
)


def gradient_agreement(H, seed: int, spectrum=(0.3, 0.1, 0.0)) -> float:
    """Relative distance between the finite-difference and generator gradients."""
    rng = np.random.default_rng(seed)
    U = random_unitary(int(rng.integers(0, 2 ** 63)), H.n, int(rng.integers(0, 2)))
    lambdas = np.array(expand_spectrum(spectrum[:H.n], H.n))
    basis = descent_directions(lambdas)
    fd = energy_gradient(H, U, lambdas, basis, "fd")
    gen = energy_gradient(H, U, lambdas, basis, "generator")
    return float(np.linalg.norm(fd - gen) / max(np.linalg.norm(gen), 1e-12))


def hfb_trial(H, settings, hfb):
    quadratic = settings.u_int == 0.0
    exact = one_body_ground_energy(H) if quadratic else ground_energy(H)
    init = G1pdm.p_minus(H.n)

    def trial(_: int, seed: int) -> dict:
        result = minimize_hfb(H, init, hfb.to_params(seed))
        return {
            "convention": settings.convention,
            "sites": settings.sites,
            "u_int": settings.u_int,
            "energy": result.energy,
            "exact_energy": exact,
            "gap": result.energy - exact,
            "pairing_norm": result.pairing_norm,
            "projection_residual": result.projection_residual,
            "converged": result.converged,
            "variational_ok": result.energy >= exact - VARIATIONAL_SLACK,
            "quadratic_error": abs(result.energy - exact) if quadratic else float("nan"),
            "gradient_rel_error": gradient_agreement(H, seed),
        }

    return trial


def hfb_sweep(cfg, settings=None) -> Sweep:
    settings = settings or cfg.hubbard
    H = build_hubbard(
        settings.sites, settings.hopping, settings.u_int, settings.mu,
        settings.convention, settings.periodic, cfg.fock_cap,
    )
    return Sweep(
        command="hfb-minimize",
        fields=FIELDS,
        trial=hfb_trial(H, settings, cfg.hfb),
        criteria=CRITERIA,
        context=f"{settings.convention} L={settings.sites} U={settings.u_int}",
    )


def _case(raw) -> HubbardSettings:
    if isinstance(raw, HubbardSettings):
        return raw
    return replace(HubbardSettings(), **dict(raw))


def run(ctx: dict, params: dict) -> list:
    cfg = ctx["config"]
    threads = ctx.get("threads", cfg.threads)
    trials = int(params.get("trials", cfg.trials))
    max_n = int(params.get("max_n", cfg.fock_cap))
    cases = [_case(c) for c in params.get("cases", DEFAULT_CASES)]

    outcomes = []
    stream = int(ctx.get("stream", 0)) * 10_000
    for settings in cases:
        modes = settings.sites * (2 if settings.convention == "spinful" else 1)
        if modes > max_n:
            logger.info("hfb: skipping %s L=%d (%d modes > %d)", settings.convention, settings.sites, modes, max_n)
            continue
        stream += 1
        sweep = hfb_sweep(cfg, settings)
        rows = sweep.run(trial_seeds(cfg.seed, trials, stream), threads)
        outcomes.extend(sweep.judge(rows))
    return merge_outcomes(outcomes)


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
