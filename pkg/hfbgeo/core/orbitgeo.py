# hfbgeo/core/orbitgeo.py
"""
Orbit Geometry Around a Diagonal Base Point

Everything here is written for Gamma = diag(Lambda, 1 - Lambda) with Lambda
diagonal in the fixed basis, so the spectral projections are coordinate
projections and the conditional expectation is an entrywise mask.

Provides:
  - BasePoint / SectionConstants
  - conditional expectation (algebra and full block operators), derivation, its inverse
  - closed-range constants and the local cross-section radius
  - local cross sections and reductive complements
  - geodesics through P- and connectivity witnesses
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh, polar, svdvals

from hfbgeo.core.blockmat import DEFAULT_TOL, BlockOp, bar, norm_12, restricted_norm
from hfbgeo.core.boggroup import (
    BogAlgebra,
    BogUnitary,
    algebra_basis,
    exp_alg,
    swap_s1,
)
from hfbgeo.core.errors import (
    BadSpec,
    DegenerateSpectrum,
    DimensionMismatch,
    OutsideRadius,
    SingularCompression,
)
from hfbgeo.core.g1pdm import G1pdm, SpectralData, act, expand_spectrum, spectral_data

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BasePoint:
    lam: np.ndarray
    spec: SpectralData
    gamma: G1pdm

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    @property
    def has_half(self) -> bool:
        return self.spec.has_half

    @classmethod
    def from_lambda(cls, lam: np.ndarray, tol: float = DEFAULT_TOL) -> "BasePoint":
        spec = spectral_data(lam, tol)
        snapped = spec.lambda_matrix()
        return cls(snapped, spec, G1pdm.diagonal(np.diag(snapped)))

    @classmethod
    def from_spectrum(cls, values: Sequence[float], n: int, tol: float = DEFAULT_TOL) -> "BasePoint":
        return cls.from_lambda(np.diag(expand_spectrum(values, n)), tol)

    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.lam).real

    def block_mask(self) -> np.ndarray:
        labels = self.spec.block_labels()
        return labels[:, None] == labels[None, :]

    def half_mask(self) -> np.ndarray:
        if not self.has_half:
            return np.zeros((self.n, self.n), dtype=bool)
        h = np.diag(self.spec.half_proj).real > 0.5
        return np.outer(h, h)


@dataclass(frozen=True)
class SectionConstants:
    c_tilde: float
    c_zero: float
    big_k: float
    c_one: float
    radius: float
    res_bound: float  # bound on ||U||_res, 2 max(1, K)


def _check_dims(B: BasePoint, n: int, what: str):
    if B.n != n:
        raise DimensionMismatch(f"{what}: base point n={B.n} vs operand n={n}")


# =========================================================================
# CONDITIONAL EXPECTATION / DERIVATION
# =========================================================================

def cond_expectation(B: BasePoint, X: BogAlgebra) -> BogAlgebra:
    """E_Gamma: keeps the diagonal blocks of x1 and, with 1/2 present, the corner of x2."""
    _check_dims(B, X.n, "cond_expectation")
    return BogAlgebra(np.where(B.block_mask(), X.x1, 0), np.where(B.half_mask(), X.x2, 0))


def extended_cond_expectation(B: BasePoint, X: BlockOp) -> BlockOp:
    _check_dims(B, X.n, "extended_cond_expectation")
    diag, corner = B.block_mask(), B.half_mask()
    return BlockOp(
        np.where(diag, X.x11, 0),
        np.where(corner, X.x12, 0),
        np.where(corner, X.x21, 0),
        np.where(diag, X.x22, 0),
    )


def tangent_project(B: BasePoint, X: BogAlgebra) -> BogAlgebra:
    return X - cond_expectation(B, X)


def derivation(G: G1pdm, X: BogAlgebra) -> BogAlgebra:
    """delta_Gamma(X) = [i Gamma, X]."""
    if G.n != X.n:
        raise DimensionMismatch(f"derivation: G1pdm n={G.n} vs BogAlgebra n={X.n}")
    g, x = 1j * G.dense(), X.dense()
    return BogAlgebra.from_dense(g @ x - x @ g)


def derivation_block(G: G1pdm, X: BlockOp) -> BlockOp:
    if G.n != X.n:
        raise DimensionMismatch(f"derivation_block: G1pdm n={G.n} vs BlockOp n={X.n}")
    g, x = 1j * G.dense(), X.dense()
    return BlockOp.from_dense(g @ x - x @ g)


def derivation_inverse(B: BasePoint, X: BlockOp) -> BlockOp:
    """
    Bounded inverse of the block derivation on the complement of the commutant.

    Entrywise: a diagonal-block entry (a, b) is divided by i(l_a - l_b), an
    off-diagonal-block entry by +-i(l_a + l_b - 1); the commutant entries map to 0.
    """
    _check_dims(B, X.n, "derivation_inverse")
    d = B.eigenvalues()
    keep_diag, keep_corner = B.block_mask(), B.half_mask()
    gap_diag = d[:, None] - d[None, :]
    gap_off = d[:, None] + d[None, :] - 1.0
    gap_diag = np.where(keep_diag, 1.0, gap_diag)
    gap_off = np.where(keep_corner, 1.0, gap_off)

    def _solve_diag(x):
        return np.where(keep_diag, 0, -1j * x / gap_diag)

    def _solve_off(x):
        return np.where(keep_corner, 0, -1j * x / gap_off)

    return BlockOp(_solve_diag(X.x11), _solve_off(X.x12), -_solve_off(X.x21), -_solve_diag(X.x22))


# =========================================================================
# CONSTANTS
# =========================================================================

def _gap_sums(spec: SpectralData, tol: float) -> tuple[float, float, bool, bool]:
    values = list(spec.lambdas) + [0.0]
    half = spec.half_index
    sum1 = sum2 = 0.0
    has1 = has2 = False
    for i, li in enumerate(values):
        for j, lj in enumerate(values):
            if i != j:
                gap = abs(li - lj)
                if gap <= tol:
                    raise DegenerateSpectrum(f"closed_range_constants: |l_i - l_j| = {gap:.3e} <= tol")
                sum1 += 1.0 / gap
                has1 = True
            if half is not None and i == half and j == half:
                continue
            gap = abs(li + lj - 1.0)
            if gap <= tol:
                raise DegenerateSpectrum(f"closed_range_constants: |l_i + l_j - 1| = {gap:.3e} <= tol")
            sum2 += 1.0 / gap
            has2 = True
    return sum1, sum2, has1, has2


def closed_range_constants(spec: SpectralData, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """(c_tilde, c_zero); an empty sum contributes 0 and its reciprocal is dropped."""
    sum1, sum2, has1, has2 = _gap_sums(spec, tol)
    inverses = [1.0 / s for s, present in ((sum1, has1), (sum2, has2)) if present]
    c_tilde = min(inverses) if inverses else math.inf
    total = sum1 + sum2
    c_zero = 0.5 / total if total > 0 else math.inf
    return c_tilde, c_zero


def section_constants(B: BasePoint, tol: float = DEFAULT_TOL) -> SectionConstants:
    c_tilde, c_zero = closed_range_constants(B.spec, tol)
    rank_off = B.n - B.spec.rank_p0
    lam_hs = float(np.linalg.norm(B.lam))
    c_one = c_zero / 6.0 + 2.0 * lam_hs + 2.0 * math.sqrt(rank_off)
    big_k = 9.0 / math.sqrt(65.0) * c_one + 2.0 * math.sqrt(rank_off)
    res_bound = 2.0 * max(1.0, big_k)
    if math.isinf(c_zero) or math.isinf(c_tilde):
        radius = 1.0
    else:
        radius = 0.5 * min(c_zero / 3.0, c_tilde / res_bound ** 2)
    logger.debug("section constants: c~=%.6g c0=%.6g K=%.6g radius=%.6g", c_tilde, c_zero, big_k, radius)
    return SectionConstants(c_tilde, c_zero, big_k, c_one, radius, res_bound)


# =========================================================================
# SECTIONS / COMPLEMENTS
# =========================================================================

def orbit_distance(B: BasePoint, U: BogUnitary) -> float:
    """||U Gamma U* - Gamma||_res."""
    return restricted_norm(act(U, B.gamma).block() - B.gamma.block())


def local_cross_section(
    B: BasePoint,
    U: BogUnitary,
    tol: float = DEFAULT_TOL,
    constants: Optional[SectionConstants] = None,
) -> BogUnitary:
    """
    s(U Gamma U*) = U Omega(E~(U*)), Omega the unitary part of the polar decomposition.

    Raises:
        OutsideRadius: if ||U Gamma U* - Gamma||_res >= radius
        SingularCompression: if E~(U*) is not invertible
    """
    _check_dims(B, U.n, "local_cross_section")
    constants = constants or section_constants(B)
    dist = orbit_distance(B, U)
    if dist >= constants.radius:
        raise OutsideRadius(f"local_cross_section: distance {dist:.3e} >= radius {constants.radius:.3e}")

    m = extended_cond_expectation(B, U.adjoint().block()).dense()
    sigma_min = svdvals(m)[-1]
    if sigma_min <= tol:
        raise SingularCompression(f"local_cross_section: sigma_min(E~(U*)) = {sigma_min:.3e}")
    omega, _ = polar(m, side="right")
    return BogUnitary.from_dense(U.dense() @ omega)


def section_residual(B: BasePoint, U: BogUnitary, s: BogUnitary) -> float:
    return float(np.linalg.norm(act(s, B.gamma).dense() - act(U, B.gamma).dense(), 2))


class ReductiveComplement:
    """m at U Gamma U*: X -> X - U E_Gamma(U* X U) U*."""

    def __init__(self, base: BasePoint, witness: BogUnitary):
        _check_dims(base, witness.n, "reductive_complement")
        self.base = base
        self.witness = witness

    def isotropy_part(self, X: BogAlgebra) -> BogAlgebra:
        u = self.witness.dense()
        inner = BogAlgebra.from_dense(u.conj().T @ X.dense() @ u)
        return BogAlgebra.from_dense(u @ cond_expectation(self.base, inner).dense() @ u.conj().T)

    def __call__(self, X: BogAlgebra) -> BogAlgebra:
        return X - self.isotropy_part(X)


def reductive_complement(B: BasePoint, U: BogUnitary) -> ReductiveComplement:
    return ReductiveComplement(B, U)


# =========================================================================
# GEODESICS / COMPONENTS
# =========================================================================

def _hermitian_function(a: np.ndarray, fn) -> np.ndarray:
    w, v = eigh((a + a.conj().T) / 2)
    return (v * fn(np.sqrt(np.clip(w, 0.0, None)))) @ v.conj().T


def geodesic_exponential(y: np.ndarray, t: float) -> np.ndarray:
    """exp(tX) for X = [[0, y], [y-bar, 0]] in closed form."""
    yy_star = y @ y.conj().T
    y_star_y = y.conj().T @ y

    def cos(s):
        return np.cos(t * s)

    def sinc(s):
        return t * np.sinc(t * s / np.pi)

    return np.block([
        [_hermitian_function(yy_star, cos), y @ _hermitian_function(y_star_y, sinc)],
        [bar(y) @ _hermitian_function(yy_star, sinc), _hermitian_function(y_star_y, cos)],
    ])


def geodesic_pminus(y: np.ndarray, t: float, tol: float = DEFAULT_TOL) -> G1pdm:
    y = np.asarray(y, dtype=complex)
    if y.ndim != 2 or y.shape[0] != y.shape[1]:
        raise DimensionMismatch(f"geodesic_pminus needs a square y, got {y.shape}")
    if np.linalg.norm(y + y.T) > tol * max(1.0, np.linalg.norm(y)):
        raise BadSpec("geodesic_pminus needs an antisymmetric y")
    n = y.shape[0]
    m = geodesic_exponential(y, t)
    lower = m[:, n:]
    return G1pdm.from_dense(lower @ lower.conj().T)


def connectivity_witness(B: BasePoint) -> Optional[BogUnitary]:
    """Swap on a lambda = 1/2 basis vector; it has odd index and fixes Gamma."""
    if not B.has_half:
        return None
    k = int(np.flatnonzero(np.diag(B.spec.half_proj).real > 0.5)[0]) + 1
    return swap_s1(k, B.n)


# =========================================================================
# BASES / SAMPLING
# =========================================================================

def isotropy_basis(B: BasePoint) -> list[BogAlgebra]:
    return [X for X in algebra_basis(B.n) if cond_expectation(B, X).frobenius() > 0.5]


def tangent_basis(B: BasePoint) -> list[BogAlgebra]:
    return [X for X in algebra_basis(B.n) if cond_expectation(B, X).frobenius() < 0.5]


def isotropy_dimension(spec: SpectralData) -> int:
    mults = list(spec.mults) + [spec.rank_p0]
    m_half = spec.mults[spec.half_index] if spec.has_half else 0
    return sum(m * m for m in mults) + m_half * (m_half - 1)


def random_isotropy_element(B: BasePoint, seed: int, scale: float = 1.0) -> BogUnitary:
    rng = np.random.default_rng(seed)
    basis = isotropy_basis(B)
    coeffs = rng.standard_normal(len(basis)) * scale
    X = BogAlgebra.zeros(B.n)
    for c, E in zip(coeffs, basis):
        X = X + E * float(c)
    return exp_alg(X)


def random_tangent(B: BasePoint, seed: int, scale: float = 1.0) -> BogAlgebra:
    rng = np.random.default_rng(seed)
    X = BogAlgebra.zeros(B.n)
    for E in tangent_basis(B):
        X = X + E * float(rng.standard_normal() * scale)
    return X


def tangent_norms(B: BasePoint, X: BogAlgebra) -> tuple[float, float, float]:
    """(||X - E(X)||_res, ||[X, Gamma]||_res, ||[X, Gamma]||_(1,2))."""
    _check_dims(B, X.n, "tangent_norms")
    g, x = B.gamma.dense(), X.dense()
    tangent = BlockOp.from_dense(x @ g - g @ x)
    return tangent_project(B, X).res_norm(), restricted_norm(tangent), norm_12(tangent)
