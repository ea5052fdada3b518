# hfbgeo/core/blockmat.py
"""
Block Operator Kernel

Complex n x n matrices (CMat) are plain numpy arrays written against the fixed
coordinate basis, so the basis conjugation I0 is entrywise conjugation and needs
no stored object. BlockOp is the 2x2 block operator on H + H.

Provides:
  - bar / transpose_t / conj_i involutions
  - restricted and (1,2) norms
  - polar unitary part, matrix exponential and logarithm near the identity
  - Takagi factorization of complex symmetric matrices
  - JSON matrix encoding
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Union

import numpy as np
from scipy.linalg import block_diag, expm, logm, polar, sqrtm, svdvals

from hfbgeo.core.errors import DimensionMismatch, LogDomain, SingularInput

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlockOp:
    """2x2 block operator [[x11, x12], [x21, x22]] with n x n blocks."""
    x11: np.ndarray
    x12: np.ndarray
    x21: np.ndarray
    x22: np.ndarray

    def __post_init__(self):
        shapes = {b.shape for b in (self.x11, self.x12, self.x21, self.x22)}
        if len(shapes) != 1:
            raise DimensionMismatch(f"BlockOp blocks disagree in shape: {sorted(shapes)}")
        (shape,) = shapes
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise DimensionMismatch(f"BlockOp blocks must be square n x n, got {shape}")

    @property
    def n(self) -> int:
        return self.x11.shape[0]

    def dense(self) -> np.ndarray:
        return np.block([[self.x11, self.x12], [self.x21, self.x22]])

    @classmethod
    def from_dense(cls, m: np.ndarray) -> "BlockOp":
        size = m.shape[0]
        if m.shape != (size, size) or size % 2:
            raise DimensionMismatch(f"Expected a 2n x 2n matrix, got {m.shape}")
        n = size // 2
        return cls(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])

    @classmethod
    def identity(cls, n: int) -> "BlockOp":
        return cls.from_dense(np.eye(2 * n, dtype=complex))

    @classmethod
    def zeros(cls, n: int) -> "BlockOp":
        return cls.from_dense(np.zeros((2 * n, 2 * n), dtype=complex))

    @classmethod
    def p_plus(cls, n: int) -> "BlockOp":
        z = np.zeros((n, n), dtype=complex)
        return cls(np.eye(n, dtype=complex), z, z, z)

    @classmethod
    def p_minus(cls, n: int) -> "BlockOp":
        z = np.zeros((n, n), dtype=complex)
        return cls(z, z, z, np.eye(n, dtype=complex))

    @classmethod
    def d_sign(cls, n: int) -> "BlockOp":
        """D = P+ - P-."""
        z = np.zeros((n, n), dtype=complex)
        return cls(np.eye(n, dtype=complex), z, z, -np.eye(n, dtype=complex))

    def adjoint(self) -> "BlockOp":
        return BlockOp.from_dense(self.dense().conj().T)

    def __matmul__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp.from_dense(self.dense() @ other.dense())

    def __add__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp.from_dense(self.dense() + other.dense())

    def __sub__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp.from_dense(self.dense() - other.dense())

    def __mul__(self, scalar: complex) -> "BlockOp":
        return BlockOp.from_dense(scalar * self.dense())

    __rmul__ = __mul__

    def __neg__(self) -> "BlockOp":
        return BlockOp.from_dense(-self.dense())


MatrixLike = Union[np.ndarray, BlockOp]


def bar(x: np.ndarray) -> np.ndarray:
    """x-bar = I0 x I0, entrywise conjugation in the fixed basis."""
    return np.conj(x)


def transpose_t(x: np.ndarray) -> np.ndarray:
    """x^T = (x-bar)^*, the plain transpose in the fixed basis."""
    return np.transpose(x)


def conj_i(x: BlockOp) -> BlockOp:
    """I X I for the conjugation I = [[0, I0], [I0, 0]]."""
    return BlockOp(bar(x.x22), bar(x.x21), bar(x.x12), bar(x.x11))


def restricted_norm(x: BlockOp) -> float:
    return 2.0 * max(
        np.linalg.norm(x.x11, 2),
        np.linalg.norm(x.x22, 2),
        np.linalg.norm(x.x12, "fro"),
        np.linalg.norm(x.x21, "fro"),
    )


def norm_12(x: BlockOp) -> float:
    """Trace norms on the diagonal blocks, Hilbert-Schmidt off the diagonal."""
    return 2.0 * max(
        np.linalg.norm(x.x11, "nuc"),
        np.linalg.norm(x.x22, "nuc"),
        np.linalg.norm(x.x12, "fro"),
        np.linalg.norm(x.x21, "fro"),
    )


def polar_unitary(g: BlockOp, tol: float = DEFAULT_TOL) -> BlockOp:
    """
    Unitary part G|G|^-1 of an invertible block operator.

    Raises:
        SingularInput: if the smallest singular value is <= tol (relative to the largest)
    """
    m = g.dense()
    s = svdvals(m)
    if s[-1] <= tol * max(1.0, s[0]):
        raise SingularInput(
            f"polar_unitary needs an invertible operator: sigma_min={s[-1]:.3e} <= tol={tol:.1e}"
        )
    u, _ = polar(m, side="right")
    return BlockOp.from_dense(u)


def mat_exp(x: MatrixLike) -> MatrixLike:
    """Matrix exponential (scaling and squaring with Pade approximants)."""
    if isinstance(x, BlockOp):
        return BlockOp.from_dense(expm(x.dense()))
    return expm(x)


def _distance_to_identity(g: MatrixLike) -> float:
    if isinstance(g, BlockOp):
        return restricted_norm(g - BlockOp.identity(g.n))
    return float(np.linalg.norm(g - np.eye(g.shape[0]), 2))


def mat_log_near_id(g: MatrixLike) -> MatrixLike:
    """
    Principal logarithm of an operator close to the identity.

    Inside the domain the principal branch coincides with the series
    sum (-1)^(k+1) (G - 1)^k / k.

    Raises:
        LogDomain: if ||G - 1|| >= 1 (restricted norm for BlockOp, operator norm otherwise)
    """
    dist = _distance_to_identity(g)
    if dist >= 1.0:
        raise LogDomain(f"mat_log_near_id needs ||G - 1|| < 1, got {dist:.6f}")
    if isinstance(g, BlockOp):
        return BlockOp.from_dense(np.asarray(logm(g.dense()), dtype=complex))
    return np.asarray(logm(g), dtype=complex)


def takagi(b: np.ndarray, tol: float = 1e-12, rounding: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """
    Autonne-Takagi factorization B = Q diag(s) Q^T of a complex symmetric matrix.

    Singular values are grouped after rounding; each degenerate group is fixed by
    the square root of the symmetric unitary V_g^T W_g.

    Args:
        b: square complex symmetric matrix
        tol: symmetry tolerance |B - B^T|
        rounding: decimal places used to group singular values

    Returns:
        (s, Q) with s decreasing and Q unitary
    """
    size = b.shape[0]
    if b.shape != (size, size):
        raise DimensionMismatch(f"takagi needs a square matrix, got {b.shape}")
    if np.linalg.norm(b - b.T) >= tol * max(1.0, np.linalg.norm(b)):
        raise SingularInput("takagi needs a complex symmetric matrix")
    if np.allclose(b, 0):
        return np.zeros(size), np.eye(size, dtype=complex)

    v, s, wh = np.linalg.svd(b)
    w = wh.conj().T
    rounded = np.round(s, rounding)

    groups = []
    start = 0
    for _, members in groupby(rounded):
        width = len(list(members))
        groups.append(list(range(start, start + width)))
        start += width

    roots = [sqrtm(v[:, idx].T @ w[:, idx]) for idx in groups]
    q = v @ np.conj(block_diag(*roots))
    return s, q


# =========================================================================
# JSON ENCODING
# =========================================================================

def cmat_to_json(x: np.ndarray) -> dict:
    x = np.asarray(x, dtype=complex)
    return {"n": int(x.shape[0]), "re": x.real.tolist(), "im": x.imag.tolist()}


def cmat_from_json(obj: dict) -> np.ndarray:
    try:
        n = int(obj["n"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DimensionMismatch(f"Malformed CMat JSON: {e}") from e
    if re.shape != (n, n) or im.shape != (n, n):
        raise DimensionMismatch(f"CMat JSON declares n={n} but carries {re.shape}/{im.shape}")
    return re + 1j * im


def blockop_to_json(x: BlockOp) -> dict:
    return {name: cmat_to_json(getattr(x, name)) for name in ("x11", "x12", "x21", "x22")}


def blockop_from_json(obj: dict) -> BlockOp:
    try:
        return BlockOp(*(cmat_from_json(obj[name]) for name in ("x11", "x12", "x21", "x22")))
    except KeyError as e:
        raise DimensionMismatch(f"Malformed BlockOp JSON, missing block {e}") from e
