# hfbgeo/core/boggroup.py
"""
Bogoliubov Group and Lie Algebra

BogUnitary stores (u, v) of U = [[u, v], [v-bar, u-bar]]; BogAlgebra stores
(x1, x2) of X = [[x1, x2], [x2-bar, x1-bar]]. Assembling from the two blocks makes
every element commute with the conjugation I exactly.

Real picture: the identification z <-> (Re z, Im z) uses the interleaved basis
(Re phi_1, Im phi_1, Re phi_2, ...), so J0 (multiplication by i) is block-diagonal
with 90 degree rotations.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, logm, svdvals

from hfbgeo.core.blockmat import DEFAULT_TOL, BlockOp, bar, restricted_norm
from hfbgeo.core.errors import (
    BadSpec,
    DimensionMismatch,
    IllConditioned,
    IndexOutOfRange,
    LogDomain,
    NotOrthogonal,
)

logger = logging.getLogger(__name__)


def _as_square(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a square n x n matrix, got {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class BogUnitary:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _as_square(self.u, "u"))
        object.__setattr__(self, "v", _as_square(self.v, "v"))
        if self.u.shape != self.v.shape:
            raise DimensionMismatch(f"u {self.u.shape} and v {self.v.shape} differ")

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def dense(self) -> np.ndarray:
        return np.block([[self.u, self.v], [bar(self.v), bar(self.u)]])

    def block(self) -> BlockOp:
        return BlockOp(self.u, self.v, bar(self.v), bar(self.u))

    @classmethod
    def from_dense(cls, m: np.ndarray) -> "BogUnitary":
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:])

    @classmethod
    def identity(cls, n: int) -> "BogUnitary":
        return cls(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))

    def adjoint(self) -> "BogUnitary":
        # U* = [[u*, v^T], [v*, u^T]]
        return BogUnitary(self.u.conj().T, self.v.T)

    def __matmul__(self, other: "BogUnitary") -> "BogUnitary":
        if self.n != other.n:
            raise DimensionMismatch(f"Cannot compose n={self.n} with n={other.n}")
        return BogUnitary(
            self.u @ other.u + self.v @ bar(other.v),
            self.u @ other.v + self.v @ bar(other.u),
        )


@dataclass(frozen=True, eq=False)
class BogAlgebra:
    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x1", _as_square(self.x1, "x1"))
        object.__setattr__(self, "x2", _as_square(self.x2, "x2"))
        if self.x1.shape != self.x2.shape:
            raise DimensionMismatch(f"x1 {self.x1.shape} and x2 {self.x2.shape} differ")

    @property
    def n(self) -> int:
        return self.x1.shape[0]

    def dense(self) -> np.ndarray:
        return np.block([[self.x1, self.x2], [bar(self.x2), bar(self.x1)]])

    def block(self) -> BlockOp:
        return BlockOp(self.x1, self.x2, bar(self.x2), bar(self.x1))

    @classmethod
    def from_dense(cls, m: np.ndarray) -> "BogAlgebra":
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:])

    @classmethod
    def zeros(cls, n: int) -> "BogAlgebra":
        z = np.zeros((n, n), dtype=complex)
        return cls(z, z.copy())

    def __add__(self, other: "BogAlgebra") -> "BogAlgebra":
        return BogAlgebra(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: "BogAlgebra") -> "BogAlgebra":
        return BogAlgebra(self.x1 - other.x1, self.x2 - other.x2)

    def __mul__(self, scalar: float) -> "BogAlgebra":
        return BogAlgebra(scalar * self.x1, scalar * self.x2)

    __rmul__ = __mul__

    def __neg__(self) -> "BogAlgebra":
        return BogAlgebra(-self.x1, -self.x2)

    def commutator(self, other: "BogAlgebra") -> "BogAlgebra":
        a, b = self.dense(), other.dense()
        return BogAlgebra.from_dense(a @ b - b @ a)

    def res_norm(self) -> float:
        return restricted_norm(self.block())

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.dense()))


# =========================================================================
# VALIDATION
# =========================================================================

def validate_unitary(U: BogUnitary) -> float:
    """Largest operator-norm violation of the defining relations of U_Bog."""
    u, v = U.u, U.v
    one = np.eye(U.n)
    relations = (
        u @ u.conj().T + v @ v.conj().T - one,
        u.conj().T @ u + v.T @ bar(v) - one,
        u.conj().T @ v + v.T @ bar(u),
        u @ v.T + v @ u.T,
    )
    return float(max(np.linalg.norm(r, 2) for r in relations))


def validate_algebra(X: BogAlgebra) -> float:
    """Largest violation of x1* = -x1 and x2^T = -x2."""
    return float(max(
        np.linalg.norm(X.x1 + X.x1.conj().T, 2),
        np.linalg.norm(X.x2 + X.x2.T, 2),
    ))


def is_bog_unitary(U: BogUnitary, tol: float = DEFAULT_TOL) -> bool:
    return validate_unitary(U) <= tol


def is_bog_algebra(X: BogAlgebra, tol: float = DEFAULT_TOL) -> bool:
    return validate_algebra(X) <= tol


def project_algebra(X: BogAlgebra) -> BogAlgebra:
    """Nearest element of u_Bog (skew part of x1, antisymmetric part of x2)."""
    return BogAlgebra((X.x1 - X.x1.conj().T) / 2, (X.x2 - X.x2.T) / 2)


# =========================================================================
# EXPONENTIAL / LOGARITHM
# =========================================================================

def exp_alg(X: BogAlgebra) -> BogUnitary:
    return BogUnitary.from_dense(expm(X.dense()))


def log_near_id(U: BogUnitary) -> BogAlgebra:
    """
    Logarithm of a Bogoliubov unitary close to the identity.

    Raises:
        LogDomain: if ||U - 1||_res >= 1
    """
    dist = restricted_norm(U.block() - BlockOp.identity(U.n))
    if dist >= 1.0:
        raise LogDomain(f"log_near_id needs ||U - 1||_res < 1, got {dist:.6f}")
    return project_algebra(BogAlgebra.from_dense(np.asarray(logm(U.dense()), dtype=complex)))


def ad(U: BogUnitary, X: BogAlgebra) -> BogAlgebra:
    """Ad_U X = U X U*."""
    m = U.dense()
    return BogAlgebra.from_dense(m @ X.dense() @ m.conj().T)


# =========================================================================
# Z2 INDEX AND SWAP
# =========================================================================

def z2_index(U: BogUnitary, tol: float = 1e-8) -> int:
    """
    dim ker(u) mod 2.

    Singular values <= tol count as kernel; the assembled U has sigma_max = 1, so
    tol is already relative.

    Raises:
        IllConditioned: if a singular value lies in the guard band (tol, 10 tol)
    """
    s = svdvals(U.u)
    ambiguous = s[(s > tol) & (s < 10 * tol)]
    if ambiguous.size:
        raise IllConditioned(
            f"z2_index: singular value {ambiguous.min():.3e} inside guard band ({tol:.1e}, {10 * tol:.1e})"
        )
    return int(np.count_nonzero(s <= tol) % 2)


def kernel_dimensions(U: BogUnitary, tol: float = 1e-8) -> tuple[int, int]:
    """(dim ker u, dim ker u*); equal at finite n (index zero)."""
    s = svdvals(U.u)
    s_adj = svdvals(U.u.conj().T)
    return int(np.count_nonzero(s <= tol)), int(np.count_nonzero(s_adj <= tol))


def swap_s1(k: int, n: int) -> BogUnitary:
    """Swap of the k-th basis vector (1-based) between the two copies of H."""
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"swap_s1 index k={k} outside 1..{n}")
    e = np.zeros((n, n), dtype=complex)
    e[k - 1, k - 1] = 1.0
    return BogUnitary(np.eye(n, dtype=complex) - e, e)


# =========================================================================
# RANDOM GENERATION
# =========================================================================

def random_algebra(seed: int, n: int, scale: float = 1.0) -> BogAlgebra:
    if scale <= 0:
        raise BadSpec(f"random_algebra needs scale > 0, got {scale}")
    rng = np.random.default_rng(seed)
    g1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return project_algebra(BogAlgebra(g1, g2)) * scale


def random_unitary(seed: int, n: int, component: int = 0, scale: float = 1.0) -> BogUnitary:
    if component not in (0, 1):
        raise BadSpec(f"component must be 0 or 1, got {component}")
    U = exp_alg(random_algebra(seed, n, scale))
    if component == 1:
        U = U @ swap_s1(1, n)
    return U


def algebra_basis(n: int) -> list[BogAlgebra]:
    """
    Standard real basis of u_Bog, orthonormal for <X, Y> = Re Tr(X* Y) / 2.

    Order: diagonal i e_kk, then for j < k the two Hermitian-type pairs of x1, then
    for j < k the real and imaginary antisymmetric units of x2. Size 2n^2 - n.
    """
    basis = []
    zero = np.zeros((n, n), dtype=complex)
    for k in range(n):
        x1 = zero.copy()
        x1[k, k] = 1j
        basis.append(BogAlgebra(x1, zero.copy()))
    for j in range(n):
        for k in range(j + 1, n):
            x1 = zero.copy()
            x1[j, k], x1[k, j] = 1.0, -1.0
            basis.append(BogAlgebra(x1 / np.sqrt(2), zero.copy()))
            x1 = zero.copy()
            x1[j, k], x1[k, j] = 1j, 1j
            basis.append(BogAlgebra(x1 / np.sqrt(2), zero.copy()))
    for j in range(n):
        for k in range(j + 1, n):
            for phase in (1.0, 1j):
                x2 = zero.copy()
                x2[j, k], x2[k, j] = phase, -phase
                basis.append(BogAlgebra(zero.copy(), x2 / np.sqrt(2)))
    return basis


# =========================================================================
# REAL (ORTHOGONAL) PICTURE
# =========================================================================

def _real_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Real 2n x 2n matrix of z -> a z + b z-bar in the interleaved basis."""
    n = a.shape[0]
    o = np.zeros((2 * n, 2 * n))
    o[0::2, 0::2] = a.real + b.real
    o[0::2, 1::2] = b.imag - a.imag
    o[1::2, 0::2] = a.imag + b.imag
    o[1::2, 1::2] = a.real - b.real
    return o


def _complex_parts(o: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of _real_matrix: the linear and antilinear coefficients."""
    rr, ri = o[0::2, 0::2], o[0::2, 1::2]
    ir, ii = o[1::2, 0::2], o[1::2, 1::2]
    a = (rr + ii) / 2 + 1j * (ir - ri) / 2
    b = (rr - ii) / 2 + 1j * (ir + ri) / 2
    return a, b


def j_zero(n: int) -> np.ndarray:
    """Multiplication by i on H^R."""
    return np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))


def to_orthogonal(U: BogUnitary) -> np.ndarray:
    """O = u + v I0 acting on H^R."""
    return _real_matrix(U.u, U.v)


def from_orthogonal(o: np.ndarray, tol: float = DEFAULT_TOL) -> BogUnitary:
    """
    Raises:
        NotOrthogonal: if O is not a real orthogonal 2n x 2n matrix
    """
    o = np.asarray(o)
    size = o.shape[0]
    if o.shape != (size, size) or size % 2 or np.iscomplexobj(o) and np.abs(o.imag).max() > tol:
        raise NotOrthogonal(f"Expected a real 2n x 2n matrix, got shape {o.shape}")
    o = np.real(o)
    residual = np.linalg.norm(o.T @ o - np.eye(size), 2)
    if residual > tol:
        raise NotOrthogonal(f"||O^T O - 1|| = {residual:.3e} exceeds tol {tol:.1e}")
    u, v = _complex_parts(o)
    return BogUnitary(u, v)


def algebra_to_real(X: BogAlgebra) -> np.ndarray:
    """Lie-algebra level of to_orthogonal: x1 + x2 I0 on H^R."""
    return _real_matrix(X.x1, X.x2)


def vershik_cocycle(a: np.ndarray, b: np.ndarray) -> float:
    """
    alpha(A, B) = Tr([A_a, B_a] J0) = 2 Tr(A_a B_a J0), with A_a = (A + J0 A J0)/2
    the antilinear part.
    """
    n = a.shape[0] // 2
    j0 = j_zero(n)
    a_anti = (a + j0 @ a @ j0) / 2
    b_anti = (b + j0 @ b @ j0) / 2
    return float(2.0 * np.trace(a_anti @ b_anti @ j0))
