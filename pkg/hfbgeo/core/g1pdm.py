# hfbgeo/core/g1pdm.py
"""
Generalized One-Particle Density Matrices

G1pdm stores (gamma, alpha) of Gamma = [[gamma, alpha], [alpha*, 1 - gamma-bar]].
Diagonalization follows the constructive route: eigendecompose the 2n x 2n
Hermitian Gamma, pair each eigenvector psi (lambda < 1/2) with I psi (1 - lambda),
and split the lambda = 1/2 eigenspace into an isotropic half through a Takagi
factorization of the symmetric Gram matrix <I xi_i, xi_j>.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh, polar

from hfbgeo.core.blockmat import DEFAULT_TOL, BlockOp, bar, cmat_from_json, cmat_to_json, takagi
from hfbgeo.core.boggroup import BogUnitary, random_unitary, validate_unitary
from hfbgeo.core.errors import (
    BadSpec,
    ClusterAmbiguity,
    DimensionMismatch,
    NotAdmissible,
    NumericalFailure,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class G1pdm:
    gamma: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=complex)
        alpha = np.asarray(self.alpha, dtype=complex)
        if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape != alpha.shape:
            raise DimensionMismatch(f"gamma {gamma.shape} and alpha {alpha.shape} must be equal n x n")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "alpha", alpha)

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def dense(self) -> np.ndarray:
        one = np.eye(self.n)
        return np.block([[self.gamma, self.alpha], [self.alpha.conj().T, one - bar(self.gamma)]])

    def block(self) -> BlockOp:
        return BlockOp.from_dense(self.dense())

    @classmethod
    def from_dense(cls, m: np.ndarray) -> "G1pdm":
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:])

    @classmethod
    def p_minus(cls, n: int) -> "G1pdm":
        return cls(np.zeros((n, n)), np.zeros((n, n)))

    @classmethod
    def diagonal(cls, lambdas: Sequence[float]) -> "G1pdm":
        """diag(Lambda, 1 - Lambda)."""
        lam = np.asarray(lambdas, dtype=float)
        return cls(np.diag(lam), np.zeros((lam.size, lam.size)))


@dataclass(frozen=True)
class G1pdmReport:
    hermiticity: float
    antisymmetry: float
    min_eigenvalue: float
    max_eigenvalue: float
    gamma_margin: float  # min eigenvalue of gamma - gamma^2 - alpha alpha*
    trace_gamma: float

    def admissible(self, tol: float = DEFAULT_TOL) -> bool:
        return (
            self.hermiticity <= tol
            and self.antisymmetry <= tol
            and self.min_eigenvalue >= -tol
            and self.max_eigenvalue <= 1 + tol
            and self.gamma_margin >= -tol
        )


@dataclass(frozen=True, eq=False)
class SpectralData:
    """
    Distinct eigenvalues of Lambda in (0, 1/2], strictly decreasing, with their
    0/1 diagonal projections; p0 is the kernel projection (possibly rank 0).
    """
    lambdas: tuple[float, ...]
    mults: tuple[int, ...]
    projs: tuple[np.ndarray, ...]
    p0: np.ndarray
    half_index: Optional[int] = None

    @property
    def n(self) -> int:
        return self.p0.shape[0]

    @property
    def has_half(self) -> bool:
        return self.half_index is not None

    @property
    def rank_p0(self) -> int:
        return int(round(np.trace(self.p0).real))

    @property
    def half_proj(self) -> Optional[np.ndarray]:
        return None if self.half_index is None else self.projs[self.half_index]

    def ordered_blocks(self) -> list[tuple[float, np.ndarray]]:
        """(lambda_i, p_i) strictly decreasing, with (0, p0) last."""
        return list(zip(self.lambdas, self.projs)) + [(0.0, self.p0)]

    def block_labels(self) -> np.ndarray:
        """For each basis index, the position of its block in ordered_blocks()."""
        labels = np.empty(self.n, dtype=int)
        for pos, (_, p) in enumerate(self.ordered_blocks()):
            labels[np.diag(p).real > 0.5] = pos
        return labels

    def lambda_matrix(self) -> np.ndarray:
        lam = np.zeros((self.n, self.n))
        for value, p in zip(self.lambdas, self.projs):
            lam += value * p.real
        return lam


# =========================================================================
# VALIDATION / ACTION
# =========================================================================

def validate_g1pdm(G: G1pdm) -> G1pdmReport:
    gamma, alpha = G.gamma, G.alpha
    w = np.linalg.eigvalsh((G.dense() + G.dense().conj().T) / 2)
    margin = gamma - gamma @ gamma - alpha @ alpha.conj().T
    return G1pdmReport(
        hermiticity=float(np.linalg.norm(gamma - gamma.conj().T, 2)),
        antisymmetry=float(np.linalg.norm(alpha + alpha.T, 2)),
        min_eigenvalue=float(w[0]),
        max_eigenvalue=float(w[-1]),
        gamma_margin=float(np.linalg.eigvalsh((margin + margin.conj().T) / 2)[0]),
        trace_gamma=float(np.trace(gamma).real),
    )


def act(U: BogUnitary, G: G1pdm) -> G1pdm:
    """U Gamma U*."""
    if U.n != G.n:
        raise DimensionMismatch(f"act: BogUnitary n={U.n} vs G1pdm n={G.n}")
    m = U.dense()
    return G1pdm.from_dense(m @ G.dense() @ m.conj().T)


def is_pure(G: G1pdm, tol: float = DEFAULT_TOL) -> bool:
    m = G.dense()
    return float(np.linalg.norm(m @ m - m, 2)) <= tol


def projection_residual(G: G1pdm) -> float:
    m = G.dense()
    return float(np.linalg.norm(m @ m - m, 2))


# =========================================================================
# DIAGONALIZATION
# =========================================================================

def _apply_i(psi: np.ndarray) -> np.ndarray:
    """I (f, g) = (g-bar, f-bar) on column vectors of C^2n."""
    n = psi.shape[0] // 2
    return np.concatenate([np.conj(psi[n:]), np.conj(psi[:n])], axis=0)


def _fix_phase(psi: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real positive."""
    out = psi.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        entry = out[idx, k]
        if abs(entry) > 0:
            out[:, k] *= np.conj(entry) / abs(entry)
    return out


def _isotropic_half(xi: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of an m-dimensional subspace S of the 2m-dimensional
    lambda = 1/2 eigenspace with I S orthogonal to S.
    """
    n = xi.shape[0] // 2
    # B_ij = <I xi_i, xi_j> is bilinear (no conjugation) and symmetric
    swap = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    gram = xi.T @ swap @ xi
    gram = (gram + gram.T) / 2
    _, q = takagi(gram)
    # eta = xi conj(Q) is an I-fixed (real) orthonormal basis
    eta = xi @ np.conj(q)
    m = eta.shape[1] // 2
    return (eta[:, 0:2 * m:2] + 1j * eta[:, 1:2 * m:2]) / np.sqrt(2)


def diagonalize(G: G1pdm, tol: float = DEFAULT_TOL) -> tuple[BogUnitary, np.ndarray]:
    """
    Bogoliubov diagonalization: act(W, G) = diag(Lambda, 1 - Lambda).

    Returns:
        (W, Lambda) with Lambda diagonal, entries in [0, 1/2], sorted decreasing.
        W is canonical only up to right multiplication by the isotropy group.

    Raises:
        NotAdmissible: if G is not a valid g1-pdm
        NumericalFailure: if the residual exceeds tol after one refinement pass
    """
    report = validate_g1pdm(G)
    if not report.admissible(max(tol, 1e-9)):
        raise NotAdmissible(f"diagonalize: input is not an admissible g1-pdm ({report})")

    n = G.n
    m = G.dense()
    w, vecs = eigh((m + m.conj().T) / 2)

    half_mask = np.abs(w - 0.5) <= tol
    low_mask = w < 0.5 - tol
    half_dim = int(np.count_nonzero(half_mask))
    if half_dim % 2 or int(np.count_nonzero(low_mask)) != n - half_dim // 2:
        raise NumericalFailure(
            f"diagonalize: eigenvalue pairing lambda <-> 1 - lambda broken "
            f"(half-space dim {half_dim}, low count {int(np.count_nonzero(low_mask))}, n={n})"
        )

    low_idx = np.flatnonzero(low_mask)
    order = np.argsort(-w[low_idx], kind="stable")
    low_idx = low_idx[order]
    low_vals = np.clip(w[low_idx], 0.0, 0.5)

    columns = []
    values = []
    if half_dim:
        columns.append(_isotropic_half(vecs[:, half_mask]))
        values.extend([0.5] * (half_dim // 2))
    columns.append(vecs[:, low_idx])
    values.extend(low_vals.tolist())

    psi = _fix_phase(np.concatenate(columns, axis=1))
    w_star = np.concatenate([psi, _apply_i(psi)], axis=1)
    lam = np.diag(np.asarray(values, dtype=float))
    target = G1pdm.diagonal(values).dense()

    W = BogUnitary.from_dense(w_star.conj().T)
    residual = np.linalg.norm(W.dense() @ m @ W.dense().conj().T - target, 2)
    if residual > tol:
        # nearest unitary keeps the I-commuting block form
        u_polar, _ = polar(w_star)
        W = BogUnitary.from_dense(u_polar.conj().T)
        residual = np.linalg.norm(W.dense() @ m @ W.dense().conj().T - target, 2)
        logger.debug("diagonalize refinement: residual %.3e", residual)
    if residual > tol:
        raise NumericalFailure(f"diagonalize: residual {residual:.3e} exceeds tol {tol:.1e}")
    return W, lam


def diagonalization_residual(G: G1pdm, W: BogUnitary, lam: np.ndarray) -> float:
    target = G1pdm.diagonal(np.diag(lam).real).dense()
    return float(np.linalg.norm(act(W, G).dense() - target, 2))


def spectral_data(lam: np.ndarray, tol: float = DEFAULT_TOL) -> SpectralData:
    """
    Cluster the diagonal of Lambda into distinct eigenvalues.

    Values within tol/2 of 1/2 snap to 1/2; values <= tol join the kernel.

    Raises:
        BadSpec: entries outside [0, 1/2 + tol] or a non-diagonal input
        ClusterAmbiguity: two clusters separated by less than 2 tol
    """
    lam = np.asarray(lam)
    if lam.ndim == 1:
        lam = np.diag(lam)
    if np.linalg.norm(lam - np.diag(np.diag(lam))) > tol:
        raise BadSpec("spectral_data needs a diagonal Lambda")
    d = np.diag(lam).real.astype(float).copy()
    n = d.size
    if d.min() < -tol or d.max() > 0.5 + tol:
        raise BadSpec(f"spectral_data: eigenvalues must lie in [0, 1/2], got [{d.min():.3g}, {d.max():.3g}]")
    d[np.abs(d - 0.5) <= tol / 2] = 0.5
    d[d <= tol] = 0.0

    order = np.argsort(-d, kind="stable")
    clusters: list[list[int]] = []
    for idx in order:
        if clusters:
            gap = d[clusters[-1][-1]] - d[idx]
            if gap <= tol:
                clusters[-1].append(int(idx))
                continue
            if gap < 2 * tol:
                raise ClusterAmbiguity(f"spectral_data: clusters separated by {gap:.3e} < 2 tol")
        clusters.append([int(idx)])

    lambdas, mults, projs = [], [], []
    p0 = np.zeros((n, n))
    half_index = None
    for members in clusters:
        value = float(np.mean(d[members]))
        proj = np.zeros((n, n))
        proj[members, members] = 1.0
        if value == 0.0:
            p0 = proj
            continue
        if value == 0.5:
            half_index = len(lambdas)
        lambdas.append(value)
        mults.append(len(members))
        projs.append(proj)
    return SpectralData(tuple(lambdas), tuple(mults), tuple(projs), p0, half_index)


# =========================================================================
# ORBITS / RANDOM
# =========================================================================

@dataclass(frozen=True, eq=False)
class OrbitMatch:
    same: bool
    witness: Optional[BogUnitary] = None
    residual: float = field(default=float("nan"))


def same_orbit(g1: G1pdm, g2: G1pdm, tol: float = 1e-9) -> OrbitMatch:
    """
    Orbit equality by comparing sorted Lambda; on success the witness W2* W1
    conjugates g1 to g2 and is verified.
    """
    if g1.n != g2.n:
        raise DimensionMismatch(f"same_orbit: n={g1.n} vs n={g2.n}")
    w1, lam1 = diagonalize(g1)
    w2, lam2 = diagonalize(g2)
    gap = float(np.max(np.abs(np.diag(lam1) - np.diag(lam2))))
    if gap > tol:
        return OrbitMatch(False, None, gap)
    witness = w2.adjoint() @ w1
    residual = float(np.linalg.norm(act(witness, g1).dense() - g2.dense(), 2))
    if residual > max(tol, 10 * gap):
        raise NumericalFailure(f"same_orbit: witness residual {residual:.3e} exceeds tol {tol:.1e}")
    return OrbitMatch(True, witness, residual)


def expand_spectrum(spec: Sequence[float], n: int) -> list[float]:
    """
    Expand a requested eigenvalue list to n entries, round-robin over the listed
    values, sorted decreasing.

    Raises:
        BadSpec: empty request, more than n values, or values outside [0, 1/2]
    """
    values = [float(x) for x in spec]
    if not values:
        raise BadSpec("spectrum request is empty")
    if len(values) > n:
        raise BadSpec(f"spectrum request has {len(values)} values for n={n}")
    if min(values) < 0 or max(values) > 0.5:
        raise BadSpec(f"spectrum values must lie in [0, 1/2], got {values}")
    full = [values[k % len(values)] for k in range(n)]
    return sorted(full, reverse=True)


def random_g1pdm(seed: int, n: int, spec: Sequence[float], component: int = 0) -> G1pdm:
    lam = expand_spectrum(spec, n)
    return act(random_unitary(seed, n, component), G1pdm.diagonal(lam))


def g1pdm_to_json(G: G1pdm) -> dict:
    return {"gamma": cmat_to_json(G.gamma), "alpha": cmat_to_json(G.alpha)}


def g1pdm_from_json(obj: dict) -> G1pdm:
    try:
        return G1pdm(cmat_from_json(obj["gamma"]), cmat_from_json(obj["alpha"]))
    except KeyError as e:
        raise DimensionMismatch(f"Malformed G1pdm JSON, missing {e}") from e


def bog_unitary_to_json(U: BogUnitary) -> dict:
    return {"u": cmat_to_json(U.u), "v": cmat_to_json(U.v), "residual": validate_unitary(U)}
