# hfbgeo/execution_plane/checks/v1/g1pdm_checks.py
"""
g1-pdm orbit properties: diagonalization, same-orbit witnesses, and the
connected-component dichotomy of the isotropy group.

Sweeps:
  - orbit-check: random Gamma on the orbit of the requested spectrum (both
    components), merged with the group rows for the same trial
"""
import numpy as np

from hfbgeo.core.boggroup import random_unitary, z2_index
from hfbgeo.core.g1pdm import (
    G1pdm,
    act,
    diagonalization_residual,
    diagonalize,
    expand_spectrum,
    random_g1pdm,
    same_orbit,
    validate_g1pdm,
)
from hfbgeo.core.orbitgeo import BasePoint, connectivity_witness, random_isotropy_element
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, sweep_grid
from hfbgeo.execution_plane.checks.v1 import group_checks

FIELDS = (
    "admissible",
    "diag_residual",
    "spectrum_error",
    "same_orbit_residual",
    "distinct_detected",
    "isotropy_index",
    "stabilizer_residual",
)

CRITERIA = (
    Criterion("g1pdm.admissible", "admissible", kind="flag"),
    Criterion("g1pdm.diagonalize", "diag_residual", 1e-9),
    Criterion("g1pdm.spectrum", "spectrum_error", 1e-9),
    Criterion("g1pdm.same_orbit", "same_orbit_residual", 1e-9),
    Criterion("g1pdm.distinct_orbits", "distinct_detected", kind="flag"),
    Criterion("orbitgeo.isotropy_index", "isotropy_index", kind="flag"),
    Criterion("orbitgeo.stabilizer", "stabilizer_residual", 1e-12),
)


def _shifted(values: list[float]) -> list[float]:
    """A spectrum that differs from ``values`` in one entry."""
    out = list(values)
    out[0] = out[0] - 0.01 if out[0] >= 0.25 else out[0] + 0.01
    return out


def g1pdm_trial(n: int, spectrum: tuple, tol: float, scale: float = 1.0):
    lam = expand_spectrum(spectrum, n)
    base = BasePoint.from_spectrum(spectrum, n, tol)
    stabilizer = connectivity_witness(base)

    def trial(_: int, seed: int) -> dict:
        rng = np.random.default_rng(seed)
        s1, s2, s3, s4 = (int(s) for s in rng.integers(0, 2 ** 63, size=4))
        c1, c2 = (int(c) for c in rng.integers(0, 2, size=2))

        G = random_g1pdm(s1, n, spectrum, c1)
        W, Lam = diagonalize(G, tol)
        match = same_orbit(G, random_g1pdm(s2, n, spectrum, c2))
        other = act(random_unitary(s3, n, c2, scale), G1pdm.diagonal(_shifted(lam)))

        if stabilizer is None:
            # no 1/2: the isotropy group is connected, every sample has index 0
            isotropy_index = z2_index(random_isotropy_element(base, s4, scale)) == 0
            stab_residual = float("nan")
        else:
            isotropy_index = z2_index(stabilizer) == 1
            stab_residual = float(np.linalg.norm(act(stabilizer, base.gamma).dense() - base.gamma.dense(), 2))

        return {
            "admissible": validate_g1pdm(G).admissible(1e-9),
            "diag_residual": diagonalization_residual(G, W, Lam),
            "spectrum_error": float(np.max(np.abs(np.diag(Lam).real - np.asarray(lam)))),
            "same_orbit_residual": match.residual if match.same else float("inf"),
            "distinct_detected": not same_orbit(G, other).same,
            "isotropy_index": isotropy_index,
            "stabilizer_residual": stab_residual,
        }
    return trial


def orbit_check_sweep(cfg) -> Sweep:
    """Group rows and g1-pdm rows for the same trial, one CSV line each."""
    group = group_checks.group_trial(cfg.n, cfg.scale)
    orbit = g1pdm_trial(cfg.n, cfg.spectrum, cfg.tol, cfg.scale)

    def trial(k: int, seed: int) -> dict:
        return {**group(k, seed), **orbit(k, seed)}

    return Sweep(
        command="orbit-check",
        fields=group_checks.FIELDS + FIELDS,
        trial=trial,
        criteria=group_checks.CRITERIA + CRITERIA,
        context=f"n={cfg.n} spectrum={list(cfg.spectrum)}",
    )


def g1pdm_sweep(cfg) -> Sweep:
    return Sweep(
        command="g1pdm",
        fields=FIELDS,
        trial=g1pdm_trial(cfg.n, cfg.spectrum, cfg.tol, cfg.scale),
        criteria=CRITERIA,
        context=f"n={cfg.n} spectrum={list(cfg.spectrum)}",
    )


def run(ctx: dict, params: dict) -> list:
    return sweep_grid(ctx, params, lambda cfg: [g1pdm_sweep(cfg)])


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
