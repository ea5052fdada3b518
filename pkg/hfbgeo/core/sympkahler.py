# hfbgeo/core/sympkahler.py
"""
Cocycles, Symplectic Form and Kaehler Polarizations

The complexification g of u_Bog is written as [[x, z], [y, -x^T]] with z, y
antisymmetric, conjugation X-bar = -X*. A real element X = [[x1, x2], [x2-bar, x1-bar]]
sits in g as (x, z, y) = (x1, x2, x2-bar).

The polarization at a diagonal base point is a coordinate pattern: x upper
block-triangular in the ordering lambda_1 > lambda_2 > ... > lambda_0 = 0, z zero
(or confined to the 1/2 corner), y arbitrary.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import subspace_angles, svd, svdvals

from hfbgeo.core.blockmat import BlockOp, norm_12
from hfbgeo.core.boggroup import BogAlgebra, BogUnitary, ad, algebra_basis
from hfbgeo.core.errors import (
    DimensionMismatch,
    InKernel,
    NotInComplement,
    NotInPolarization,
    RankAmbiguity,
)
from hfbgeo.core.g1pdm import G1pdm
from hfbgeo.core.orbitgeo import BasePoint, cond_expectation, tangent_basis

logger = logging.getLogger(__name__)


# =========================================================================
# COCYCLES
# =========================================================================

def cocycle_splus(X: BogAlgebra, Y: BogAlgebra) -> float:
    """s+(X, Y) = 2 Im Tr(x2 y2-bar)."""
    if X.n != Y.n:
        raise DimensionMismatch(f"cocycle_splus: n={X.n} vs n={Y.n}")
    return float(2.0 * np.imag(np.trace(X.x2 @ np.conj(Y.x2))))


def cocycle_trace(G: G1pdm, X: BogAlgebra, Y: BogAlgebra) -> float:
    """Tr(X [i Gamma, Y]) evaluated densely."""
    g, x, y = 1j * G.dense(), X.dense(), Y.dense()
    return float(np.real(np.trace(x @ (g @ y - y @ g))))


def cocycle_gamma(G: G1pdm, X: BogAlgebra, Y: BogAlgebra) -> float:
    """s_Gamma(X, Y) = -2 Im(Tr(x1 z1) + Tr(x2-bar z2)) with [Gamma, Y] = [[z1, z2], ...]."""
    if not G.n == X.n == Y.n:
        raise DimensionMismatch(f"cocycle_gamma: n={G.n}, {X.n}, {Y.n}")
    g, y = G.dense(), Y.dense()
    n = G.n
    z = g @ y - y @ g
    z1, z2 = z[:n, :n], z[:n, n:]
    return float(-2.0 * np.imag(np.trace(X.x1 @ z1) + np.trace(np.conj(X.x2) @ z2)))


def cocycle_complex(G: G1pdm, a, b) -> complex:
    """C-bilinear Tr(a [i Gamma, b]) on g; a, b are GComplexElem or BogAlgebra."""
    g, x, y = 1j * G.dense(), a.dense(), b.dense()
    return complex(np.trace(x @ (g @ y - y @ g)))


def coboundary_functional(G: G1pdm, Z: BogAlgebra) -> float:
    """f(Z) = -Tr(Z i Gamma_0), Gamma_0 = Gamma - P-."""
    gamma_0 = G.dense() - G1pdm.p_minus(G.n).dense()
    return float(np.real(-np.trace(Z.dense() @ (1j * gamma_0))))


def gamma_zero_norm_12(G: G1pdm) -> float:
    return norm_12(BlockOp.from_dense(G.dense() - G1pdm.p_minus(G.n).dense()))


@dataclass(frozen=True)
class CocycleEstimates:
    functional: float   # |f(Z)| / (||Gamma_0||_12 ||Z||_res)
    gamma_zero: float   # |s_Gamma0(X, Y)| / (4 ||Gamma_0||_12 ||X|| ||Y||)
    splus: float        # |s+(X, Y)| / (1/2 ||X|| ||Y||)

    def holds(self, slack: float = 1e-10) -> bool:
        return max(self.functional, self.gamma_zero, self.splus) <= 1.0 + slack


def cocycle_estimates(G: G1pdm, X: BogAlgebra, Y: BogAlgebra) -> CocycleEstimates:
    """Ratios of the cocycle magnitudes to their norm bounds; each must be <= 1."""
    bound_g0 = gamma_zero_norm_12(G)
    nx, ny = X.res_norm(), Y.res_norm()
    Z = X.commutator(Y)
    gamma_0 = G1pdm.from_dense(G.dense() - G1pdm.p_minus(G.n).dense())

    def _ratio(value, bound):
        return abs(value) / bound if bound > 0 else (0.0 if abs(value) < 1e-14 else np.inf)

    return CocycleEstimates(
        functional=_ratio(coboundary_functional(G, Z), bound_g0 * Z.res_norm()),
        gamma_zero=_ratio(cocycle_trace(gamma_0, X, Y), 4.0 * bound_g0 * nx * ny),
        splus=_ratio(cocycle_splus(X, Y), 0.5 * nx * ny),
    )


# =========================================================================
# RADICAL / SYMPLECTIC FORM
# =========================================================================

def _gram(G: G1pdm, basis: list[BogAlgebra]) -> np.ndarray:
    size = len(basis)
    gram = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            gram[i, j] = cocycle_gamma(G, basis[i], basis[j])
            gram[j, i] = -gram[i, j]
    return gram


def _null_dimension(gram: np.ndarray, tol: float) -> int:
    s = svdvals(gram) if gram.size else np.zeros(0)
    ambiguous = s[(s > tol) & (s < 10 * tol)]
    if ambiguous.size:
        raise RankAmbiguity(f"singular value {ambiguous.min():.3e} inside guard band ({tol:.1e}, {10 * tol:.1e})")
    return int(np.count_nonzero(s <= tol))


@dataclass(frozen=True)
class RadicalReport:
    null_dim: int
    isotropy_dim: int
    max_angle: float

    def matches(self, tol: float = 1e-8) -> bool:
        return self.null_dim == self.isotropy_dim and self.max_angle <= tol


def radical_check(B: BasePoint, tol: float = 1e-8) -> RadicalReport:
    """Compare the null space of the s_Gamma Gram matrix with the isotropy algebra."""
    basis = algebra_basis(B.n)
    gram = _gram(B.gamma, basis)
    null_dim = _null_dimension(gram, tol)

    iso_idx = np.flatnonzero([cond_expectation(B, E).frobenius() > 0.5 for E in basis])
    max_angle = 0.0 if null_dim == iso_idx.size else np.pi / 2
    if null_dim and null_dim == iso_idx.size:
        _, s, vh = svd(gram)
        null_vecs = vh[s <= tol].T
        iso_span = np.eye(len(basis))[:, iso_idx]
        max_angle = float(np.max(subspace_angles(null_vecs, iso_span)))
    logger.debug("radical: null dim %d, isotropy dim %d, angle %.2e", null_dim, iso_idx.size, max_angle)
    return RadicalReport(null_dim, int(iso_idx.size), max_angle)


def radical_dimension(G: G1pdm, tol: float = 1e-8) -> int:
    return _null_dimension(_gram(G, algebra_basis(G.n)), tol)


def symplectic_form(B: BasePoint, witness: BogUnitary, x_tan: BogAlgebra, y_tan: BogAlgebra) -> float:
    """omega at U Gamma U* on representatives: s_Gamma(U* X U, U* Y U)."""
    w_star = witness.adjoint()
    return cocycle_gamma(B.gamma, ad(w_star, x_tan), ad(w_star, y_tan))


def omega_gram(B: BasePoint) -> np.ndarray:
    return _gram(B.gamma, tangent_basis(B))


# =========================================================================
# COMPLEXIFICATION
# =========================================================================

@dataclass(frozen=True, eq=False)
class GComplexElem:
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(m) for m in (self.x, self.z, self.y)}
        if len(shapes) != 1:
            raise DimensionMismatch(f"GComplexElem blocks disagree in shape: {sorted(shapes)}")
        for name in ("x", "z", "y"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def dense(self) -> np.ndarray:
        return np.block([[self.x, self.z], [self.y, -self.x.T]])

    @classmethod
    def from_dense(cls, m: np.ndarray) -> "GComplexElem":
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:], m[n:, :n])

    @classmethod
    def from_bog(cls, X: BogAlgebra) -> "GComplexElem":
        return cls(X.x1, X.x2, np.conj(X.x2))

    def to_bog(self, tol: float = 1e-8) -> BogAlgebra:
        X = BogAlgebra(self.x, self.z)
        if np.linalg.norm(X.dense() - self.dense()) > tol * max(1.0, np.linalg.norm(self.dense())):
            raise NotInComplement("GComplexElem is not a real (u_Bog) element")
        return X

    def conj_bar(self) -> "GComplexElem":
        """X-bar = -X*."""
        return GComplexElem(-self.x.conj().T, -self.y.conj().T, -self.z.conj().T)

    def antisymmetry(self) -> float:
        return float(max(np.linalg.norm(self.z + self.z.T), np.linalg.norm(self.y + self.y.T)))

    def __add__(self, other: "GComplexElem") -> "GComplexElem":
        return GComplexElem(self.x + other.x, self.z + other.z, self.y + other.y)

    def __sub__(self, other: "GComplexElem") -> "GComplexElem":
        return GComplexElem(self.x - other.x, self.z - other.z, self.y - other.y)

    def __mul__(self, scalar: complex) -> "GComplexElem":
        return GComplexElem(scalar * self.x, scalar * self.z, scalar * self.y)

    __rmul__ = __mul__


def _unit(n: int, j: int, k: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[j, k] = 1.0
    return e


def _antisym_unit(n: int, j: int, k: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[j, k], e[k, j] = 1.0, -1.0
    return e


# =========================================================================
# POLARIZATION
# =========================================================================

@dataclass(frozen=True, eq=False)
class Polarization:
    base: BasePoint
    branch: str
    x_mask: np.ndarray  # allowed (row, col) entries of x
    z_mask: np.ndarray  # allowed antisymmetric entries of z
    basis: list = field(default_factory=list)
    k_basis: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.base.n

    def residual(self, X: GComplexElem) -> float:
        """Distance of X from P: the mass outside the pattern plus antisymmetry defect."""
        outside = np.linalg.norm(np.where(self.x_mask, 0, X.x)) + np.linalg.norm(np.where(self.z_mask, 0, X.z))
        return float(outside + X.antisymmetry())

    def k_residual(self, X: GComplexElem) -> float:
        """Distance of X from k_C (block-diagonal x, z and y in the corner)."""
        diag = self.base.block_mask()
        corner = self.base.half_mask()
        outside = (
            np.linalg.norm(np.where(diag, 0, X.x))
            + np.linalg.norm(np.where(corner, 0, X.z))
            + np.linalg.norm(np.where(corner, 0, X.y))
        )
        return float(outside)


def polarization_build(B: BasePoint) -> Polarization:
    n = B.n
    labels = B.spec.block_labels()
    x_mask = labels[:, None] <= labels[None, :]
    z_mask = B.half_mask()
    zero = np.zeros((n, n), dtype=complex)

    basis = [GComplexElem(_unit(n, j, k), zero, zero) for j in range(n) for k in range(n) if x_mask[j, k]]
    basis += [GComplexElem(zero, _antisym_unit(n, j, k), zero)
              for j in range(n) for k in range(j + 1, n) if z_mask[j, k]]
    basis += [GComplexElem(zero, zero, _antisym_unit(n, j, k)) for j in range(n) for k in range(j + 1, n)]

    diag = B.block_mask()
    k_basis = [GComplexElem(_unit(n, j, k), zero, zero) for j in range(n) for k in range(n) if diag[j, k]]
    for j in range(n):
        for k in range(j + 1, n):
            if z_mask[j, k]:
                k_basis.append(GComplexElem(zero, _antisym_unit(n, j, k), zero))
                k_basis.append(GComplexElem(zero, zero, _antisym_unit(n, j, k)))

    branch = "half" if B.has_half else "no_half"
    logger.debug("polarization (%s): dim P = %d, dim k = %d", branch, len(basis), len(k_basis))
    return Polarization(B, branch, x_mask, z_mask, basis, k_basis)


def polarization_complement(B: BasePoint) -> list[GComplexElem]:
    """Basis of N: strictly lower x, z outside the corner, y = 0."""
    n = B.n
    labels = B.spec.block_labels()
    corner = B.half_mask()
    zero = np.zeros((n, n), dtype=complex)
    out = [GComplexElem(_unit(n, j, k), zero, zero)
           for j in range(n) for k in range(n) if labels[j] > labels[k]]
    out += [GComplexElem(zero, _antisym_unit(n, j, k), zero)
            for j in range(n) for k in range(j + 1, n) if not corner[j, k]]
    return out


def _span_rank(elems: list[GComplexElem], tol: float = 1e-9) -> int:
    if not elems:
        return 0
    return int(np.linalg.matrix_rank(np.array([e.dense().ravel() for e in elems]), tol=tol))


def g_dimension(n: int) -> int:
    return 2 * n * n - n


@dataclass(frozen=True)
class PolarizationRanks:
    dim_g: int
    dim_p: int
    dim_pbar: int
    dim_sum: int
    dim_intersection: int
    dim_k: int
    k_in_p: bool
    dim_complement_sum: int

    def consistent(self) -> bool:
        return (
            self.dim_sum == self.dim_g
            and self.dim_intersection == self.dim_k
            and self.k_in_p
            and 2 * self.dim_p - self.dim_k == self.dim_g
            and self.dim_complement_sum == self.dim_g
        )


def polarization_rank_report(P: Polarization) -> PolarizationRanks:
    bars = [a.conj_bar() for a in P.basis]
    dim_p, dim_pbar = _span_rank(P.basis), _span_rank(bars)
    dim_sum = _span_rank(P.basis + bars)
    dim_k = _span_rank(P.k_basis)
    return PolarizationRanks(
        dim_g=g_dimension(P.n),
        dim_p=dim_p,
        dim_pbar=dim_pbar,
        dim_sum=dim_sum,
        dim_intersection=dim_p + dim_pbar - dim_sum,
        dim_k=dim_k,
        k_in_p=_span_rank(P.basis + P.k_basis) == dim_p,
        dim_complement_sum=_span_rank(P.basis + polarization_complement(P.base)),
    )


def polarization_isotropy_residual(B: BasePoint, P: Polarization) -> float:
    """max |s_Gamma(a, b)| over basis pairs of P."""
    g = 1j * B.gamma.dense()
    mats = [a.dense() for a in P.basis]
    commuted = [g @ m - m @ g for m in mats]
    worst = 0.0
    for a in mats:
        for c in commuted:
            worst = max(worst, abs(np.trace(a @ c)))
    return float(worst)


def polarization_ad_residual(P: Polarization, U: BogUnitary) -> float:
    """max over the basis of the distance of U a U* from P."""
    u = U.dense()
    return max(P.residual(GComplexElem.from_dense(u @ a.dense() @ u.conj().T)) for a in P.basis)


def polarization_decompose(B: BasePoint, X: BogAlgebra) -> GComplexElem:
    """a in P with X = a + a-bar (unique modulo k_C)."""
    labels = B.spec.block_labels()
    upper = labels[:, None] < labels[None, :]
    diag = B.block_mask()
    corner = B.half_mask()
    ax = np.where(upper, X.x1, 0) + 0.5 * np.where(diag, X.x1, 0)
    az = 0.5 * np.where(corner, X.x2, 0)
    ay = np.conj(X.x2) - 0.5 * np.where(corner, np.conj(X.x2), 0)
    return GComplexElem(ax, az, ay)


# =========================================================================
# POSITIVITY / COMPLEX STRUCTURE
# =========================================================================

def kaehler_closed_form(B: BasePoint, X: GComplexElem) -> float:
    """
    Tr(Gamma [X, X*]) entrywise:
    sum 2(l_a - l_b)|x_ab|^2 + sum (1 - l_a - l_b)|y_ab|^2 + sum (l_a + l_b - 1)|z_ab|^2.
    """
    d = B.eigenvalues()
    diff = d[:, None] - d[None, :]
    total = d[:, None] + d[None, :]
    value = (
        np.sum(2.0 * diff * np.abs(X.x) ** 2)
        + np.sum((1.0 - total) * np.abs(X.y) ** 2)
        + np.sum((total - 1.0) * np.abs(X.z) ** 2)
    )
    return float(value)


def kaehler_lower_bound(B: BasePoint, X: GComplexElem) -> float:
    """(1 - 2 l_1)||y||^2 (or (1 - 2 l_2)||(1 - p_half) y||^2) plus the smallest-gap bound on x."""
    labels = B.spec.block_labels()
    lambdas = list(B.spec.lambdas)
    if B.has_half:
        rest = [v for v in lambdas if v != 0.5]
        lam2 = rest[0] if rest else 0.0
        h = np.diag(B.spec.half_proj).real > 0.5
        y_part = (1.0 - 2.0 * lam2) * np.linalg.norm(X.y[~h, :]) ** 2
    else:
        lam1 = lambdas[0] if lambdas else 0.0
        y_part = (1.0 - 2.0 * lam1) * np.linalg.norm(X.y) ** 2
    upper = labels[:, None] < labels[None, :]
    values = sorted(set(lambdas + [0.0]), reverse=True)
    min_gap = min((a - b for a, b in zip(values, values[1:])), default=0.0)
    x_part = 2.0 * min_gap * np.linalg.norm(np.where(upper, X.x, 0)) ** 2
    return float(y_part + x_part)


def kaehler_positivity(B: BasePoint, X: GComplexElem, tol: float = 1e-8) -> float:
    """
    -i s_Gamma(X, X-bar) for X in P.

    Raises:
        NotInPolarization: if X is not in P to tol
        InKernel: if X lies in k_C
    """
    P = polarization_build(B)
    if P.residual(X) > tol * max(1.0, np.linalg.norm(X.dense())):
        raise NotInPolarization(f"kaehler_positivity: residual {P.residual(X):.3e} outside P")
    if P.k_residual(X) <= tol:
        raise InKernel("kaehler_positivity: X lies in k_C, value is zero")
    value = -1j * cocycle_complex(B.gamma, X, X.conj_bar())
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        logger.warning("kaehler_positivity: imaginary part %.3e", value.imag)
    return float(value.real)


def positivity_failed(value: float, bound: float) -> bool:
    return value < -1e-10 or value < 0.5 * bound


def complex_structure(B: BasePoint, x_tan: BogAlgebra, tol: float = 1e-8) -> BogAlgebra:
    """
    J X = i(a - a-bar) for X = a + a-bar, a in P.

    The sign is fixed by positivity: with i(a-bar - a) instead, g(v, v) =
    omega(v, J v) comes out negative on every nonzero tangent.

    Raises:
        NotInComplement: if X has an isotropy component
    """
    iso = cond_expectation(B, x_tan).frobenius()
    if iso > tol * max(1.0, x_tan.frobenius()):
        raise NotInComplement(f"complex_structure: isotropy component {iso:.3e}")
    a = polarization_decompose(B, x_tan)
    return (1j * (a - a.conj_bar())).to_bog()


def metric(B: BasePoint, x_tan: BogAlgebra, y_tan: BogAlgebra) -> float:
    """g(v, w) = omega(v, J w)."""
    return cocycle_gamma(B.gamma, x_tan, complex_structure(B, y_tan))

