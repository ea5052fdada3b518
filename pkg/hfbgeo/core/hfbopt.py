# hfbgeo/core/hfbopt.py
"""
Toy Hamiltonians and HFB Minimization

The HFB energy of a g1-pdm is the expectation of the Hamiltonian in its
quasi-free state, evaluated on the brute-force Fock space. Minimization runs a
Riemannian descent along an orbit, Gamma = U diag(Lambda, 1 - Lambda) U* with the
retraction U <- U exp(-eta G), and an outer coordinate search over Lambda.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hfbgeo.core.boggroup import BogAlgebra, BogUnitary, algebra_basis, exp_alg, random_unitary
from hfbgeo.core.errors import BadSpec, CapExceeded, DimensionMismatch, NumericalError
from hfbgeo.core.fockoracle import (
    DEFAULT_CAP,
    FockSpace,
    diagonal_state,
    implementer,
    quadratic_generator,
    quasifree_state,
)
from hfbgeo.core.g1pdm import G1pdm, act, diagonalize, g1pdm_to_json, projection_residual
from hfbgeo.core.orbitgeo import BasePoint, tangent_basis

logger = logging.getLogger(__name__)

CONVENTIONS = ("spinful", "spinless")
GRADIENT_MODES = ("fd", "generator")


@dataclass(frozen=True, eq=False)
class LatticeHamiltonian:
    sites: int
    hopping: float
    u_int: float
    mu: float
    convention: str
    periodic: bool
    one_body: np.ndarray
    matrix: np.ndarray
    fock: FockSpace

    @property
    def n(self) -> int:
        return self.fock.n


def _bonds(sites: int, periodic: bool) -> list[tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(sites - 1)]
    if periodic and sites > 2:
        bonds.append((sites - 1, 0))
    return bonds


def build_hubbard(
    sites: int,
    hopping: float,
    u_int: float,
    mu: float,
    convention: str = "spinful",
    periodic: bool = False,
    cap: int = DEFAULT_CAP,
) -> LatticeHamiltonian:
    """
    -t sum (c*_i c_j + h.c.) + U sum n_i(up) n_i(down) - mu N  (spinful, mode 2 i + s), or
    -t sum (c*_i c_j + h.c.) + U sum n_i n_(i+1) - mu N          (spinless).

    Raises:
        CapExceeded: if the mode count exceeds the Fock cap
        BadSpec: unknown convention or sites < 1
    """
    if convention not in CONVENTIONS:
        raise BadSpec(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if sites < 1:
        raise BadSpec(f"sites must be >= 1, got {sites}")
    spins = 2 if convention == "spinful" else 1
    n = spins * sites
    if n > cap:
        raise CapExceeded(f"build_hubbard: {n} modes exceed the Fock cap {cap}")

    def mode(site: int, spin: int = 0) -> int:
        return spins * site + spin

    one_body = -mu * np.eye(n, dtype=complex)
    for i, j in _bonds(sites, periodic):
        for s in range(spins):
            one_body[mode(i, s), mode(j, s)] -= hopping
            one_body[mode(j, s), mode(i, s)] -= hopping

    F = FockSpace(n, cap)
    cs = [F.annihilation(k) for k in range(1, n + 1)]
    nums = [c.conj().T @ c for c in cs]
    matrix = np.zeros((F.dim, F.dim), dtype=complex)
    for a, b in zip(*np.nonzero(one_body)):
        matrix = matrix + one_body[a, b] * cs[a].conj().T @ cs[b]
    if convention == "spinful":
        for i in range(sites):
            matrix = matrix + u_int * nums[mode(i, 0)] @ nums[mode(i, 1)]
    else:
        for i, j in _bonds(sites, periodic):
            matrix = matrix + u_int * nums[i] @ nums[j]

    logger.debug("build_hubbard: %s L=%d t=%g U=%g mu=%g (%d modes)", convention, sites, hopping, u_int, mu, n)
    return LatticeHamiltonian(sites, hopping, u_int, mu, convention, periodic, one_body, matrix, F)


def ground_energy(H: LatticeHamiltonian) -> float:
    return float(np.linalg.eigvalsh((H.matrix + H.matrix.conj().T) / 2)[0])


def one_body_ground_energy(H: LatticeHamiltonian) -> float:
    """sum of the negative one-body eigenvalues; exact when u_int = 0."""
    eps = np.linalg.eigvalsh(H.one_body)
    return float(np.sum(np.minimum(eps, 0.0)))


def hfb_energy(H: LatticeHamiltonian, G: G1pdm) -> float:
    if G.n != H.n:
        raise DimensionMismatch(f"hfb_energy: G1pdm n={G.n} vs Hamiltonian n={H.n}")
    state = quasifree_state(H.fock, G)
    return float(state.expectation(H.matrix).real)


def orbit_energy(H: LatticeHamiltonian, U: BogUnitary, lambdas: np.ndarray) -> float:
    """Energy of act(U, diag(Lambda, 1 - Lambda)) without re-diagonalizing."""
    op = implementer(H.fock, U)
    rho = op @ diagonal_state(lambdas) @ op.conj().T
    return float(np.trace(rho @ H.matrix).real)


# =========================================================================
# GRADIENT
# =========================================================================

def descent_directions(lambdas: np.ndarray, tol: float = 1e-8) -> list[BogAlgebra]:
    """Orthonormal basis of m_Gamma; the full algebra basis if Lambda cannot be clustered."""
    try:
        return tangent_basis(BasePoint.from_lambda(np.diag(lambdas), tol))
    except NumericalError:
        return algebra_basis(len(lambdas))


def energy_gradient(
    H: LatticeHamiltonian,
    U: BogUnitary,
    lambdas: np.ndarray,
    basis: list[BogAlgebra],
    mode: str = "fd",
    fd_step: float = 1e-5,
) -> np.ndarray:
    """
    Directional derivatives d/ds E(act(U exp(s X_k), D)) at s = 0.

    fd: central differences. generator: Tr(H 𝕌_U [Q_k, rho_D] 𝕌_U*) with Q_k the
    quadratic generator of X_k.
    """
    if mode not in GRADIENT_MODES:
        raise BadSpec(f"gradient mode must be one of {GRADIENT_MODES}, got {mode!r}")
    grad = np.zeros(len(basis))
    if mode == "fd":
        for k, X in enumerate(basis):
            plus = orbit_energy(H, U @ exp_alg(X * fd_step), lambdas)
            minus = orbit_energy(H, U @ exp_alg(X * -fd_step), lambdas)
            grad[k] = (plus - minus) / (2.0 * fd_step)
        return grad

    op = implementer(H.fock, U)
    rho_d = diagonal_state(lambdas)
    h_pulled = op.conj().T @ H.matrix @ op
    for k, X in enumerate(basis):
        q = quadratic_generator(H.fock, X)
        grad[k] = float(np.trace(h_pulled @ (q @ rho_d - rho_d @ q)).real)
    return grad


# =========================================================================
# MINIMIZATION
# =========================================================================

@dataclass(frozen=True)
class HfbParams:
    step: float = 0.5
    max_iter: int = 200
    grad_tol: float = 1e-6
    seed: int = 0
    fd_step: float = 1e-5
    restarts: int = 2
    search_spectrum: bool = True
    outer_sweeps: int = 2
    grid_points: int = 6
    gradient_mode: str = "fd"
    armijo: float = 1e-4
    shrink: float = 0.5
    min_step: float = 1e-10


@dataclass(frozen=True, eq=False)
class HfbResult:
    gamma_star: G1pdm
    energy: float
    pairing_norm: float
    projection_residual: float
    iterations: int
    converged: bool
    lambdas: tuple[float, ...] = ()
    history: list = field(default_factory=list)


@dataclass
class _Descent:
    U: BogUnitary
    energy: float
    iterations: int
    converged: bool
    history: list


def _descend(H: LatticeHamiltonian, U: BogUnitary, lambdas: np.ndarray, params: HfbParams) -> _Descent:
    basis = descent_directions(lambdas)
    energy = orbit_energy(H, U, lambdas)
    history = [energy]
    if not basis:
        return _Descent(U, energy, 0, True, history)

    for iteration in range(1, params.max_iter + 1):
        grad = energy_gradient(H, U, lambdas, basis, params.gradient_mode, params.fd_step)
        g_norm = float(np.linalg.norm(grad))
        if g_norm <= params.grad_tol:
            return _Descent(U, energy, iteration - 1, True, history)

        direction = BogAlgebra.zeros(H.n)
        for g_k, X in zip(grad, basis):
            direction = direction + X * float(g_k)

        eta = params.step
        while eta >= params.min_step:
            trial = U @ exp_alg(direction * -eta)
            trial_energy = orbit_energy(H, trial, lambdas)
            if trial_energy <= energy - params.armijo * eta * g_norm ** 2:
                break
            eta *= params.shrink
        else:
            logger.debug("line search stalled at iteration %d (|g| = %.3e)", iteration, g_norm)
            return _Descent(U, energy, iteration, False, history)

        U, energy = trial, trial_energy
        history.append(energy)
    return _Descent(U, energy, params.max_iter, False, history)


def _golden_section(fn, lo: float, hi: float, iterations: int = 30) -> tuple[float, float]:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iterations):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = fn(d)
    return (c, fc) if fc <= fd else (d, fd)


def _search_spectrum(H: LatticeHamiltonian, U: BogUnitary, lambdas: np.ndarray, params: HfbParams) -> np.ndarray:
    """Coordinate search over each lambda_k in [0, 1/2] at fixed U: grid, then golden section."""
    lam = np.array(lambdas, dtype=float)
    grid = np.linspace(0.0, 0.5, max(2, params.grid_points))
    for k in range(lam.size):
        def energy_at(value, k=k):
            trial = lam.copy()
            trial[k] = value
            return orbit_energy(H, U, trial)

        values = [energy_at(v) for v in grid]
        best = int(np.argmin(values))
        lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]
        value, energy = _golden_section(energy_at, lo, hi)
        current = energy_at(lam[k])
        if min(energy, values[best]) < current:
            lam[k] = value if energy <= values[best] else grid[best]
    return lam


def _starting_points(init: G1pdm, params: HfbParams) -> list[tuple[BogUnitary, np.ndarray]]:
    W, lam = diagonalize(init)
    starts = [(W.adjoint(), np.diag(lam).real.copy())]
    seeds = np.random.SeedSequence(params.seed).generate_state(max(params.restarts, 0) * 2)
    for r in range(max(params.restarts, 0)):
        for component in (0, 1):
            U = random_unitary(int(seeds[2 * r + component]), init.n, component)
            starts.append((U, np.diag(lam).real.copy()))
    return starts


def minimize_hfb(H: LatticeHamiltonian, init: G1pdm, params: Optional[HfbParams] = None) -> HfbResult:
    """
    Minimize E(Gamma) = omega_Gamma(H) over admissible g1-pdms.

    Every start runs the orbit descent, then (with search_spectrum) alternates a
    coordinate search over Lambda with further orbit descents. The lowest energy
    over all starts wins; NotConverged is reported through the flag only.
    """
    params = params or HfbParams()
    if init.n != H.n:
        raise DimensionMismatch(f"minimize_hfb: init n={init.n} vs Hamiltonian n={H.n}")

    best: Optional[tuple[_Descent, np.ndarray]] = None
    total_iterations = 0
    for index, (U, lam) in enumerate(_starting_points(init, params)):
        run = _descend(H, U, lam, params)
        total_iterations += run.iterations
        history = list(run.history)
        if params.search_spectrum:
            for _ in range(params.outer_sweeps):
                lam = _search_spectrum(H, run.U, lam, params)
                run = _descend(H, run.U, lam, params)
                total_iterations += run.iterations
                history.extend(run.history)
        run.history = history
        logger.debug("start %d: energy %.10f converged=%s", index, run.energy, run.converged)
        if best is None or run.energy < best[0].energy:
            best = (run, lam)

    run, lam = best
    gamma_star = act(run.U, G1pdm.diagonal(lam))
    if not run.converged:
        logger.warning("minimize_hfb: not converged after %d iterations", total_iterations)
    return HfbResult(
        gamma_star=gamma_star,
        energy=run.energy,
        pairing_norm=float(np.linalg.norm(gamma_star.alpha)),
        projection_residual=projection_residual(gamma_star),
        iterations=total_iterations,
        converged=run.converged,
        lambdas=tuple(float(x) for x in lam),
        history=run.history,
    )


def hfb_result_to_json(result: HfbResult, exact: Optional[float] = None) -> dict:
    out = {
        "gamma_star": g1pdm_to_json(result.gamma_star),
        "energy": result.energy,
        "pairing_norm": result.pairing_norm,
        "projection_residual": result.projection_residual,
        "iterations": result.iterations,
        "converged": result.converged,
        "lambdas": list(result.lambdas),
    }
    if exact is not None:
        out["exact_ground_energy"] = exact
        out["gap"] = result.energy - exact
    return out
