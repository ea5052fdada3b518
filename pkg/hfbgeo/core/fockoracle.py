# hfbgeo/core/fockoracle.py
"""
Brute-Force Fermionic Fock Space

Jordan-Wigner construction on 2^n states. Mode 1 is the most significant tensor
factor: basis index = sum_k b_k 2^(n-k), index 0 is the vacuum, and
c*_k1 ... c*_km |0> = +|b> for k1 < ... < km.

Operators are plain complex ndarrays of shape (2^n, 2^n).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Sequence, Union

import numpy as np
from scipy.linalg import eigh, expm

from hfbgeo.core.boggroup import BogAlgebra, BogUnitary, exp_alg
from hfbgeo.core.errors import (
    BadSpec,
    CapExceeded,
    DimensionMismatch,
    IndexOutOfRange,
    NotAdmissible,
    VacuumDegeneracy,
)
from hfbgeo.core.g1pdm import G1pdm, act, diagonalize

logger = logging.getLogger(__name__)

DEFAULT_CAP = 6

_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # a|1> = |0>
_PARITY = np.diag([1.0, -1.0]).astype(complex)
_EYE2 = np.eye(2, dtype=complex)


class FockSpace:
    """CAR operators on the 2^n-dimensional Fock space over C^n."""

    def __init__(self, n: int, cap: int = DEFAULT_CAP):
        if n < 1:
            raise DimensionMismatch(f"FockSpace needs n >= 1, got {n}")
        if n > cap:
            raise CapExceeded(f"FockSpace n={n} exceeds the mode cap {cap}")
        self.n = n
        self.cap = cap
        self.dim = 2 ** n

    def __repr__(self) -> str:
        return f"FockSpace(n={self.n}, dim={self.dim})"

    @cached_property
    def _annihilators(self) -> list[np.ndarray]:
        ops = []
        for k in range(self.n):
            factors = [_PARITY] * k + [_LOWER] + [_EYE2] * (self.n - k - 1)
            ops.append(reduce(np.kron, factors))
        return ops

    def _check_mode(self, k: int):
        if not 1 <= k <= self.n:
            raise IndexOutOfRange(f"mode k={k} outside 1..{self.n}")

    def annihilation(self, k: int) -> np.ndarray:
        self._check_mode(k)
        return self._annihilators[k - 1]

    def creation(self, k: int) -> np.ndarray:
        return self.annihilation(k).conj().T

    def create_vec(self, f: np.ndarray) -> np.ndarray:
        """c*(f) = sum f_k c*_k."""
        f = np.asarray(f, dtype=complex)
        return sum(f[k] * self._annihilators[k].conj().T for k in range(self.n))

    def annihilate_vec(self, f: np.ndarray) -> np.ndarray:
        """c(f) = sum conj(f_k) c_k."""
        f = np.asarray(f, dtype=complex)
        return sum(np.conj(f[k]) * self._annihilators[k] for k in range(self.n))

    def number_operator(self) -> np.ndarray:
        return sum(c.conj().T @ c for c in self._annihilators)

    def occupation_counts(self) -> np.ndarray:
        return np.array([bin(i).count("1") for i in range(self.dim)], dtype=float)

    def parity_operator(self) -> np.ndarray:
        return np.diag((-1.0) ** self.occupation_counts()).astype(complex)

    def vacuum(self) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1.0
        return psi

    def slater(self, occupied: Sequence[int]) -> np.ndarray:
        """c*_k1 c*_k2 ... |0> for the listed (1-based) modes, applied right to left."""
        psi = self.vacuum()
        for k in reversed(list(occupied)):
            psi = self.creation(k) @ psi
        return psi

    def car_residual(self) -> float:
        worst = 0.0
        one = np.eye(self.dim)
        for j in range(1, self.n + 1):
            for k in range(1, self.n + 1):
                cj, ck = self.annihilation(j), self.annihilation(k)
                ckd = ck.conj().T
                worst = max(
                    worst,
                    np.abs(cj @ ckd + ckd @ cj - (j == k) * one).max(),
                    np.abs(cj @ ck + ck @ cj).max(),
                )
        return float(worst)


# =========================================================================
# IMPLEMENTERS
# =========================================================================

def transformed_creation(F: FockSpace, U: BogUnitary, k: int) -> np.ndarray:
    """c*(u phi_k) + c(v phi_k) for the real basis vector phi_k (1-based)."""
    return F.create_vec(U.u[:, k - 1]) + F.annihilate_vec(U.v[:, k - 1])


def _fix_phase(op: np.ndarray) -> np.ndarray:
    col = op[:, 0]
    entry = col[int(np.argmax(np.abs(col)))]
    return op * (np.conj(entry) / abs(entry))


def implementer(F: FockSpace, U: BogUnitary, gap: float = 0.5) -> np.ndarray:
    """
    Unitary 𝕌 with 𝕌 c*(f) 𝕌* = c*(u f) + c(v f-bar).

    The image of the vacuum spans the common kernel of the transformed
    annihilators; the remaining columns follow by applying transformed creators in
    ascending mode order.

    Raises:
        VacuumDegeneracy: if the kernel is not numerically one-dimensional
    """
    if U.n != F.n:
        raise DimensionMismatch(f"implementer: BogUnitary n={U.n} vs FockSpace n={F.n}")
    creators = [transformed_creation(F, U, k) for k in range(1, F.n + 1)]
    penalty = sum(b @ b.conj().T for b in creators)
    w, vecs = eigh((penalty + penalty.conj().T) / 2)
    if w[0] >= 1e-10 or (F.dim > 1 and w[1] < gap):
        raise VacuumDegeneracy(f"implementer: vacuum eigenvalues {w[0]:.3e}, {w[1]:.3e}")
    psi0 = vecs[:, 0]

    op = np.zeros((F.dim, F.dim), dtype=complex)
    for index in range(F.dim):
        psi = psi0
        modes = [k for k in range(F.n) if index >> (F.n - 1 - k) & 1]
        for k in reversed(modes):
            psi = creators[k] @ psi
        op[:, index] = psi
    return _fix_phase(op)


def implementer_residual(F: FockSpace, U: BogUnitary, op: np.ndarray) -> float:
    worst = 0.0
    for k in range(1, F.n + 1):
        lhs = op @ F.creation(k) @ op.conj().T
        worst = max(worst, np.linalg.norm(lhs - transformed_creation(F, U, k), 2))
    return float(worst)


def unitarity_residual(op: np.ndarray) -> float:
    return float(np.linalg.norm(op.conj().T @ op - np.eye(op.shape[0]), 2))


def projectivity(F: FockSpace, U: BogUnitary, V: BogUnitary) -> float:
    """|<𝕌_UV, 𝕌_U 𝕌_V>_HS| / 2^n, equal to 1 for a projective representation."""
    lhs = implementer(F, U @ V)
    rhs = implementer(F, U) @ implementer(F, V)
    return float(abs(np.vdot(lhs, rhs)) / F.dim)


def quadratic_generator(F: FockSpace, X: BogAlgebra) -> np.ndarray:
    """Anti-Hermitian Q with exp(Q) implementing exp(X) up to a phase."""
    if X.n != F.n:
        raise DimensionMismatch(f"quadratic_generator: BogAlgebra n={X.n} vs FockSpace n={F.n}")
    cs = [F.annihilation(k) for k in range(1, F.n + 1)]
    cds = [c.conj().T for c in cs]
    q = np.zeros((F.dim, F.dim), dtype=complex)
    for a in range(F.n):
        for b in range(F.n):
            if X.x1[a, b]:
                q += X.x1[a, b] * cds[a] @ cs[b]
            if X.x2[a, b]:
                q += 0.5 * X.x2[a, b] * cds[a] @ cds[b]
                q += 0.5 * np.conj(X.x2[a, b]) * cs[a] @ cs[b]
    return q


def generator_phase_residual(F: FockSpace, X: BogAlgebra) -> float:
    """1 - |<𝕌_exp(X), exp(Q)>_HS| / 2^n."""
    lhs = implementer(F, exp_alg(X))
    rhs = expm(quadratic_generator(F, X))
    return float(1.0 - abs(np.vdot(lhs, rhs)) / F.dim)


# =========================================================================
# QUASI-FREE STATES
# =========================================================================

@dataclass(frozen=True, eq=False)
class QfState:
    rho: np.ndarray
    n: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2 ** self.n, 2 ** self.n):
            raise DimensionMismatch(f"QfState rho has shape {rho.shape}, expected {2 ** self.n}")
        object.__setattr__(self, "rho", rho)

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ op))

    def validate(self, tol: float = 1e-9):
        herm = np.linalg.norm(self.rho - self.rho.conj().T, 2)
        w = np.linalg.eigvalsh((self.rho + self.rho.conj().T) / 2)
        trace = np.trace(self.rho).real
        if herm > tol or w[0] < -tol or abs(trace - 1.0) > tol:
            raise NotAdmissible(f"QfState: hermiticity {herm:.2e}, min eig {w[0]:.2e}, trace {trace:.12f}")

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.count_nonzero(np.linalg.eigvalsh((self.rho + self.rho.conj().T) / 2) > tol))


def diagonal_state(lambdas: Sequence[float]) -> np.ndarray:
    """tensor product of diag(1 - l_k, l_k), mode 1 first."""
    factors = [np.diag([1.0 - lam, lam]).astype(complex) for lam in lambdas]
    return reduce(np.kron, factors)


def state_from_witness(F: FockSpace, U: BogUnitary, lambdas: Sequence[float]) -> QfState:
    """State with g1-pdm act(U, diag(Lambda, 1 - Lambda))."""
    op = implementer(F, U)
    return QfState(op @ diagonal_state(lambdas) @ op.conj().T, F.n)


def quasifree_state(F: FockSpace, G: G1pdm) -> QfState:
    if G.n != F.n:
        raise DimensionMismatch(f"quasifree_state: G1pdm n={G.n} vs FockSpace n={F.n}")
    W, lam = diagonalize(G)
    return state_from_witness(F, W.adjoint(), np.diag(lam).real)


def g1pdm_of_state(F: FockSpace, state: QfState) -> G1pdm:
    """gamma[m, k] = <c*_k c_m>, alpha*[m, k] = <c*_k c*_m>."""
    n = F.n
    gamma = np.zeros((n, n), dtype=complex)
    alpha_star = np.zeros((n, n), dtype=complex)
    for m in range(1, n + 1):
        cm = F.annihilation(m)
        for k in range(1, n + 1):
            ckd = F.creation(k)
            gamma[m - 1, k - 1] = state.expectation(ckd @ cm)
            alpha_star[m - 1, k - 1] = state.expectation(ckd @ cm.conj().T)
    return G1pdm(gamma, alpha_star.conj().T)


def transported_state(F: FockSpace, state: QfState, U: BogUnitary) -> QfState:
    """omega_U(A) = omega(𝕌 A 𝕌*); its g1-pdm is U* Gamma U."""
    op = implementer(F, U)
    return QfState(op.conj().T @ state.rho @ op, F.n)


# =========================================================================
# WICK / NUMBER STATISTICS
# =========================================================================

Selector = Union[tuple[str, int], tuple[str, np.ndarray]]


def selector_operator(F: FockSpace, selector: Selector) -> np.ndarray:
    """('create' | 'annihilate', mode index or coefficient vector)."""
    kind, target = selector
    if isinstance(target, (int, np.integer)):
        if kind == "create":
            return F.creation(int(target))
        if kind == "annihilate":
            return F.annihilation(int(target))
    else:
        if kind == "create":
            return F.create_vec(target)
        if kind == "annihilate":
            return F.annihilate_vec(target)
    raise BadSpec(f"unknown selector kind {kind!r}")


def _pairing_sum(pair_value, idx: tuple[int, ...]) -> complex:
    if not idx:
        return 1.0
    first, rest = idx[0], idx[1:]
    total = 0.0
    for pos, j in enumerate(rest):
        sign = -1.0 if pos % 2 else 1.0
        remaining = rest[:pos] + rest[pos + 1:]
        total += sign * pair_value(first, j) * _pairing_sum(pair_value, remaining)
    return total


def wick_expansion(state: QfState, ops: list[np.ndarray]) -> complex:
    """Sum over pairings of sign * product of two-point functions."""
    cache: dict[tuple[int, int], complex] = {}

    def pair_value(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = state.expectation(ops[i] @ ops[j])
        return cache[(i, j)]

    return complex(_pairing_sum(pair_value, tuple(range(len(ops)))))


def pairing_count(length: int) -> int:
    count = 1
    for k in range(length - 1, 0, -2):
        count *= k
    return count


def wick_residual(F: FockSpace, state: QfState, selectors: list[Selector]) -> float:
    """|direct expectation - pairing sum|; for odd length, |direct expectation|."""
    if len(selectors) > 8:
        raise DimensionMismatch(f"wick_residual supports monomials up to degree 8, got {len(selectors)}")
    ops = [selector_operator(F, s) for s in selectors]
    direct = state.expectation(reduce(np.matmul, ops)) if ops else 1.0
    if len(ops) % 2:
        return float(abs(direct))
    return float(abs(direct - wick_expansion(state, ops)))


@dataclass(frozen=True)
class NumberStats:
    mean: float
    variance: float
    two_tr_alpha: float
    trace_gamma: float


def number_stats(F: FockSpace, state: QfState) -> NumberStats:
    number = F.number_operator()
    mean = state.expectation(number).real
    variance = state.expectation(number @ number).real - mean ** 2
    G = g1pdm_of_state(F, state)
    return NumberStats(
        mean=float(mean),
        variance=float(variance),
        two_tr_alpha=float(2.0 * np.trace(G.alpha.conj().T @ G.alpha).real),
        trace_gamma=float(np.trace(G.gamma).real),
    )


def random_monomial(seed: int, n: int, degree: int) -> list[Selector]:
    rng = np.random.default_rng(seed)
    kinds = rng.choice(["create", "annihilate"], size=degree)
    return [
        (str(kind), rng.standard_normal(n) + 1j * rng.standard_normal(n))
        for kind in kinds
    ]


def is_pure_state(state: QfState, tol: float = 1e-9) -> bool:
    return state.rank(tol) == 1


def equivariance_residual(F: FockSpace, G: G1pdm, U: BogUnitary) -> float:
    """|| Gamma(omega_U) - U* Gamma U ||."""
    moved = transported_state(F, quasifree_state(F, G), U)
    expected = act(U.adjoint(), G)
    return float(np.linalg.norm(g1pdm_of_state(F, moved).dense() - expected.dense(), 2))
