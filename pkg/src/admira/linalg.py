"""Dense linear-algebra kernel shared by every other module.

All routines operate on real matrices and are deterministic: singular
vectors follow a fixed sign convention (first nonzero entry of each left
singular vector is non-negative), so repeated calls on identical input
return identical factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SvdFactors",
    "svd",
    "svd_truncated",
    "least_squares_minnorm",
    "frobenius_norm",
    "nuclear_norm",
    "as_matrix",
    "fix_signs",
]

# singular values below NEGLIGIBLE_SIGMA * sigma_1 count as numerical noise
NEGLIGIBLE_SIGMA = 1e-12

# default relative cutoff deciding the numerical rank in least squares
DEFAULT_RANK_TOL = 1e-10


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``M`` to a 2-d float array with finite entries."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


@dataclass(frozen=True)
class SvdFactors:
    """Singular triplets ``U @ diag(sigma) @ V.T``.

    ``U`` (m, k) and ``V`` (n, k) have orthonormal columns; ``sigma`` is
    non-negative and non-increasing. ``k`` may be smaller than requested
    when trailing singular values are negligible.
    """

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def k(self) -> int:
        return self.sigma.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.T


def fix_signs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flip (u_j, v_j) pairs so the first nonzero entry of u_j is positive."""
    U = np.array(U, copy=True)
    V = np.array(V, copy=True)
    for j in range(U.shape[1]):
        col = U[:, j]
        scale = np.abs(col).max()
        if scale == 0.0:
            continue
        lead = np.flatnonzero(np.abs(col) > 1e-12 * scale)[0]
        if col[lead] < 0:
            U[:, j] = -col
            V[:, j] = -V[:, j]
    return U, V


def svd(M) -> SvdFactors:
    """Full singular value decomposition with deterministic signs.

    Parameters
    ----------
    M : array_like, shape (m, n)
        Real matrix with finite entries.

    Returns
    -------
    SvdFactors
        Factors with ``k = min(m, n)``; ``reconstruct()`` recovers ``M`` to
        machine precision.
    """
    A = as_matrix(M)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    U, V = fix_signs(U, Vt.T)
    return SvdFactors(U, s, V)


def _finalize_triplets(U, s, V, k):
    """Slice to the top k triplets, fix signs, drop negligible ones."""
    U, V = fix_signs(U[:, :k], V[:, :k])
    s = np.asarray(s[:k], dtype=float)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((U.shape[0], 0)), np.zeros(0), np.zeros((V.shape[0], 0))
    keep = s > NEGLIGIBLE_SIGMA * s[0]
    return U[:, keep], s[keep], V[:, keep]


def svd_truncated(M, k: int, backend: str = "dense") -> SvdFactors:
    """Top-k singular triplets of ``M``.

    Triplets with sigma below ``NEGLIGIBLE_SIGMA * sigma_1`` are dropped, so
    the returned factor count can be smaller than ``k`` (zero for a zero
    matrix).

    Parameters
    ----------
    M : array_like, shape (m, n)
    k : int
        Number of triplets requested, ``1 <= k <= min(m, n)``.
    backend : {"dense", "lanczos"}
        "dense" truncates a full decomposition. "lanczos" uses ARPACK with a
        fixed start vector (deterministic) and falls back to "dense" when
        ``k`` is too close to ``min(m, n)`` for the iterative solver.
    """
    A = as_matrix(M)
    kmax = min(A.shape)
    if not 1 <= k <= kmax:
        raise ValueError(f"k must be in [1, {kmax}], got {k}")
    if backend == "dense":
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        V = Vt.T
    elif backend == "lanczos":
        U, s, V = _lanczos_topk(A, k)
    else:
        raise ValueError(f"unknown SVD backend {backend!r}")
    return SvdFactors(*_finalize_triplets(U, s, V, k))


def _lanczos_topk(A, k):
    from scipy.sparse.linalg import svds

    if k >= min(A.shape) or min(A.shape) < 3 or not A.any():
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        return U, s, Vt.T
    v0 = np.ones(min(A.shape))
    U, s, Vt = svds(A, k=k, v0=v0)
    order = np.argsort(s)[::-1]
    return U[:, order], s[order], Vt.T[:, order]


def least_squares_minnorm(Phi, b, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Minimum-norm least-squares solution of ``Phi @ x ~ b``.

    The numerical rank is decided by singular values >= ``rank_tol`` times
    the largest one, and the minimizer with the smallest 2-norm is returned,
    so rank-deficient or duplicated columns are handled rather than
    rejected. ``b = 0`` returns the zero vector.
    """
    A = as_matrix(Phi, "Phi")
    y = np.asarray(b, dtype=float).ravel()
    if y.shape[0] != A.shape[0]:
        raise ValueError(f"b has length {y.shape[0]}, expected {A.shape[0]}")
    if not np.all(np.isfinite(y)):
        raise ValueError("b contains non-finite entries")
    if not y.any():
        return np.zeros(A.shape[1])
    x, *_ = np.linalg.lstsq(A, y, rcond=rank_tol)
    return x


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(as_matrix(M), "fro"))


def nuclear_norm(M) -> float:
    """Sum of all singular values of ``M``."""
    return float(np.linalg.svd(as_matrix(M), compute_uv=False).sum())
