# hfbgeo/execution_plane/checks/v1/symplectic_checks.py
"""
Cocycles, the radical of s_Gamma, and Kaehler polarizations.

Sweeps:
  - cocycle-test:      cocycle identity, closed form vs trace, invariance,
                       s at P- against -s+, coboundary split, norm estimates
  - radical-test:      Gram null space at the base point (setup) and the
                       radical dimension along the orbit (per trial)
  - polarization-test: positivity on P, single-block values, decomposition,
                       Ad-invariance and the complex structure J
"""
import numpy as np

from hfbgeo.core.boggroup import ad, random_algebra, random_unitary
from hfbgeo.core.errors import InKernel
from hfbgeo.core.g1pdm import G1pdm, act, random_g1pdm
from hfbgeo.core.orbitgeo import (
    BasePoint,
    isotropy_dimension,
    random_isotropy_element,
    random_tangent,
    tangent_basis,
)
from hfbgeo.core.sympkahler import (
    GComplexElem,
    cocycle_estimates,
    cocycle_gamma,
    cocycle_splus,
    cocycle_trace,
    coboundary_functional,
    complex_structure,
    kaehler_closed_form,
    kaehler_lower_bound,
    kaehler_positivity,
    metric,
    omega_gram,
    polarization_ad_residual,
    polarization_build,
    polarization_decompose,
    polarization_isotropy_residual,
    polarization_rank_report,
    positivity_failed,
    radical_check,
    radical_dimension,
)
from hfbgeo.execution_plane.checks.sweep import Criterion, Sweep, select_sweeps, sweep_grid

COCYCLE_FIELDS = (
    "jacobi_gamma",
    "jacobi_splus",
    "closed_form_residual",
    "invariance_residual",
    "pminus_residual",
    "coboundary_residual",
    "estimates_hold",
)

RADICAL_FIELDS = (
    "radical_dim",
    "isotropy_dim",
    "radical_matches",
    "setup_null_dim",
    "setup_null_dim_ok",
    "setup_max_angle",
    "omega_nondegenerate",
)

POLARIZATION_FIELDS = (
    "in_p_residual",
    "isotropy_residual",
    "positivity_value",
    "closed_form_value",
    "closed_form_residual",
    "lower_bound_ok",
    "single_block_residual",
    "decompose_residual",
    "ad_residual",
    "j_squared_residual",
    "j_symplectic_residual",
    "metric_value",
    "ranks_consistent",
)


def _spectrum_context(cfg) -> str:
    return f"n={cfg.n} spectrum={list(cfg.spectrum)}"


def _subseeds(seed: int, count: int) -> tuple:
    rng = np.random.default_rng(seed)
    return tuple(int(s) for s in rng.integers(0, 2 ** 63, size=count)), rng


# =========================================================================
# COCYCLE
# =========================================================================

def _cyclic(form, X, Y, Z) -> float:
    return abs(form(X.commutator(Y), Z) + form(Y.commutator(Z), X) + form(Z.commutator(X), Y))


def cocycle_trial(n: int, spectrum: tuple, scale: float):
    p_minus = G1pdm.p_minus(n)

    def trial(_: int, seed: int) -> dict:
        (s_g, s_x, s_y, s_z, s_u), rng = _subseeds(seed, 5)
        G = random_g1pdm(s_g, n, spectrum, int(rng.integers(0, 2)))
        X, Y, Z = (random_algebra(s, n, scale) for s in (s_x, s_y, s_z))
        U = random_unitary(s_u, n, int(rng.integers(0, 2)), scale)

        s_xy = cocycle_gamma(G, X, Y)
        split = -cocycle_splus(X, Y) + coboundary_functional(G, X.commutator(Y))

        return {
            "jacobi_gamma": _cyclic(lambda a, b: cocycle_gamma(G, a, b), X, Y, Z),
            "jacobi_splus": _cyclic(cocycle_splus, X, Y, Z),
            "closed_form_residual": abs(s_xy - cocycle_trace(G, X, Y)),
            "invariance_residual": abs(cocycle_gamma(act(U, G), ad(U, X), ad(U, Y)) - s_xy),
            "pminus_residual": abs(cocycle_gamma(p_minus, X, Y) + cocycle_splus(X, Y)),
            "coboundary_residual": abs(s_xy - split),
            "estimates_hold": cocycle_estimates(G, X, Y).holds(),
        }

    return trial


def cocycle_sweep(cfg) -> Sweep:
    return Sweep(
        command="cocycle-test",
        fields=COCYCLE_FIELDS,
        trial=cocycle_trial(cfg.n, cfg.spectrum, cfg.scale),
        criteria=(
            Criterion("sympkahler.cocycle_identity", "jacobi_gamma", 1e-10),
            Criterion("sympkahler.cocycle_identity_splus", "jacobi_splus", 1e-10),
            Criterion("sympkahler.closed_form", "closed_form_residual", 1e-10),
            Criterion("sympkahler.invariance", "invariance_residual", 1e-10),
            Criterion("sympkahler.pminus_splus", "pminus_residual", 1e-12),
            Criterion("sympkahler.coboundary", "coboundary_residual", 1e-10),
            Criterion("sympkahler.estimates", "estimates_hold", kind="flag"),
        ),
        context=_spectrum_context(cfg),
    )


# =========================================================================
# RADICAL
# =========================================================================

def radical_sweep(cfg) -> Sweep:
    base = BasePoint.from_spectrum(cfg.spectrum, cfg.n, cfg.tol)
    report = radical_check(base)
    expected = isotropy_dimension(base.spec)
    tangent_dim = len(tangent_basis(base))
    gram = omega_gram(base)
    full_rank = tangent_dim == 0 or int(np.linalg.matrix_rank(gram, tol=1e-8)) == tangent_dim

    def trial(_: int, seed: int) -> dict:
        (s_g,), rng = _subseeds(seed, 1)
        G = random_g1pdm(s_g, cfg.n, cfg.spectrum, int(rng.integers(0, 2)))
        dim = radical_dimension(G)
        return {"radical_dim": dim, "isotropy_dim": expected, "radical_matches": dim == expected}

    return Sweep(
        command="radical-test",
        fields=RADICAL_FIELDS,
        trial=trial,
        criteria=(
            Criterion("sympkahler.radical_base", "setup_null_dim_ok", kind="flag"),
            Criterion("sympkahler.radical_angles", "setup_max_angle", 1e-8),
            Criterion("sympkahler.radical_orbit", "radical_matches", kind="flag"),
            Criterion("sympkahler.omega_nondegenerate", "omega_nondegenerate", kind="flag"),
        ),
        context=_spectrum_context(cfg),
        setup={
            "setup_null_dim": report.null_dim,
            "setup_null_dim_ok": report.null_dim == report.isotropy_dim,
            "setup_max_angle": report.max_angle,
            "omega_nondegenerate": full_rank,
        },
    )


# =========================================================================
# POLARIZATION
# =========================================================================

def _single_block(base: BasePoint, rng: np.random.Generator) -> float:
    """|trace value - 2(l_a - l_b)|x_ab|^2| for one x entry across two blocks."""
    labels = base.spec.block_labels()
    pairs = [(a, b) for a in range(base.n) for b in range(base.n) if labels[a] < labels[b]]
    if not pairs:
        return float("nan")
    a, b = pairs[int(rng.integers(0, len(pairs)))]
    d = base.eigenvalues()
    x = np.zeros((base.n, base.n), dtype=complex)
    x[a, b] = complex(rng.standard_normal(), rng.standard_normal())
    zero = np.zeros_like(x)
    value = kaehler_positivity(base, GComplexElem(x, zero, zero))
    return abs(value - 2.0 * (d[a] - d[b]) * abs(x[a, b]) ** 2)


def polarization_trial(base: BasePoint, scale: float):
    P = polarization_build(base)

    def trial(_: int, seed: int) -> dict:
        (s_x, s_y, s_k), rng = _subseeds(seed, 3)
        coeffs = scale * (rng.standard_normal(len(P.basis)) + 1j * rng.standard_normal(len(P.basis)))
        a = GComplexElem.from_dense(sum(c * e.dense() for c, e in zip(coeffs, P.basis)))

        closed = kaehler_closed_form(base, a)
        try:
            value = kaehler_positivity(base, a)
        except InKernel:
            # P = k_C (n = 1): nothing to be positive on
            value = float("nan")

        X, Y = random_tangent(base, s_x, scale), random_tangent(base, s_y, scale)
        half = polarization_decompose(base, X)
        JX, JY = complex_structure(base, X), complex_structure(base, Y)

        return {
            "in_p_residual": P.residual(a),
            "positivity_value": value,
            "closed_form_value": closed,
            "closed_form_residual": abs(value - closed),
            "lower_bound_ok": not positivity_failed(value, kaehler_lower_bound(base, a)),
            "single_block_residual": _single_block(base, rng),
            "decompose_residual": float(np.linalg.norm((half + half.conj_bar()).dense() - X.dense()) + P.residual(half)),
            "ad_residual": polarization_ad_residual(P, random_isotropy_element(base, s_k, scale)),
            "j_squared_residual": (complex_structure(base, JX) + X).frobenius(),
            "j_symplectic_residual": abs(cocycle_gamma(base.gamma, JX, JY) - cocycle_gamma(base.gamma, X, Y)),
            "metric_value": metric(base, X, X) if X.frobenius() > 0 else float("nan"),
        }

    return trial, P


def polarization_sweep(cfg) -> Sweep:
    base = BasePoint.from_spectrum(cfg.spectrum, cfg.n, cfg.tol)
    trial, P = polarization_trial(base, cfg.scale)
    return Sweep(
        command="polarization-test",
        fields=POLARIZATION_FIELDS,
        trial=trial,
        criteria=(
            Criterion("sympkahler.polarization_ranks", "ranks_consistent", kind="flag"),
            Criterion("sympkahler.polarization_isotropic", "isotropy_residual", 1e-10),
            Criterion("sympkahler.polarization_member", "in_p_residual", 1e-10),
            Criterion("sympkahler.positivity", "positivity_value", 0.0, kind="min"),
            Criterion("sympkahler.positivity_closed_form", "closed_form_residual", 1e-8),
            Criterion("sympkahler.positivity_bound", "lower_bound_ok", kind="flag"),
            Criterion("sympkahler.single_block", "single_block_residual", 1e-10),
            Criterion("sympkahler.decomposition", "decompose_residual", 1e-10),
            Criterion("sympkahler.ad_invariance", "ad_residual", 1e-9),
            Criterion("sympkahler.j_squared", "j_squared_residual", 1e-8),
            Criterion("sympkahler.j_symplectic", "j_symplectic_residual", 1e-8),
            Criterion("sympkahler.metric_positive", "metric_value", 0.0, kind="min"),
        ),
        context=_spectrum_context(cfg),
        setup={
            "ranks_consistent": polarization_rank_report(P).consistent(),
            "isotropy_residual": polarization_isotropy_residual(base, P),
        },
    )


SWEEPS = {"cocycle": cocycle_sweep, "radical": radical_sweep, "polarization": polarization_sweep}


def run(ctx: dict, params: dict) -> list:
    builders = select_sweeps(SWEEPS, params)
    return sweep_grid(ctx, params, lambda cfg: [build(cfg) for build in builders])


run.__hfbgeo_check__ = {
    "version": "1.0.0",
    "interface": "hfbgeo.interfaces.check.v1"
}
