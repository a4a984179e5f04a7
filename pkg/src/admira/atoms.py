"""Rank-one atoms and atomic decompositions of low-rank iterates.

A low-rank iterate is carried as a weighted sum of unit-norm rank-one
factors instead of a dense matrix, which keeps selection, merging and
re-truncation cheap: the dense matrix is only materialized on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    _finalize_triplets,
    as_matrix,
    least_squares_minnorm,
    svd_truncated,
)

__all__ = [
    "Atom",
    "AtomSet",
    "AtomExpansion",
    "empty_expansion",
    "leading_atoms",
    "merge",
    "project",
    "assemble",
    "truncate_expansion",
]

# |<psi_i, psi_j>_F| above 1 - DUPLICATE_TOL marks two atoms as the same direction
DUPLICATE_TOL = 1e-10

UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Atom:
    """Unit-norm rank-one factor pair; represents the matrix ``outer(u, v)``."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).ravel()
        v = np.asarray(self.v, dtype=float).ravel()
        for name, w in (("u", u), ("v", v)):
            if abs(np.linalg.norm(w) - 1.0) > UNIT_TOL:
                raise ValueError(f"atom factor {name} must have unit norm")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def matrix(self) -> np.ndarray:
        return np.outer(self.u, self.v)


class AtomSet:
    """Ordered atom collection stored as stacked left/right factors.

    ``left`` is (m, t) and ``right`` is (n, t); column j of each holds atom
    j. Columns are unit norm; the curated constructors (`from_atoms`,
    `merge`) additionally keep atoms pairwise non-collinear, while the raw
    constructor accepts degenerate stacks so downstream truncation can
    collapse them.
    """

    def __init__(self, left, right):
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        if left.ndim != 2 or right.ndim != 2 or left.shape[1] != right.shape[1]:
            raise ValueError("left/right factor shapes are inconsistent")
        if left.shape[1]:
            norms_ok = (
                np.abs(np.linalg.norm(left, axis=0) - 1.0).max() <= UNIT_TOL
                and np.abs(np.linalg.norm(right, axis=0) - 1.0).max() <= UNIT_TOL
            )
            if not norms_ok:
                raise ValueError("atom factors must have unit norm columns")
        self.left = left
        self.right = right

    @classmethod
    def empty(cls, m: int, n: int) -> "AtomSet":
        return cls(np.zeros((m, 0)), np.zeros((n, 0)))

    @classmethod
    def from_atoms(cls, atoms, m: int | None = None, n: int | None = None) -> "AtomSet":
        atoms = list(atoms)
        if not atoms:
            if m is None or n is None:
                raise ValueError("m and n are required for an empty atom set")
            return cls.empty(m, n)
        left = np.column_stack([a.u for a in atoms])
        right = np.column_stack([a.v for a in atoms])
        inner = (left.T @ left) * (right.T @ right)
        np.fill_diagonal(inner, 0.0)
        if np.abs(inner).max() >= 1.0 - DUPLICATE_TOL:
            raise ValueError("atom set contains collinear atoms")
        return cls(left, right)

    @property
    def m(self) -> int:
        return self.left.shape[0]

    @property
    def n(self) -> int:
        return self.right.shape[0]

    def __len__(self) -> int:
        return self.left.shape[1]

    def __iter__(self):
        for j in range(len(self)):
            yield Atom(self.left[:, j], self.right[:, j])

    def inner_products(self, other: "AtomSet") -> np.ndarray:
        """Pairwise Frobenius inner products ``<psi_i, phi_j>`` as a matrix."""
        return (self.left.T @ other.left) * (self.right.T @ other.right)

    def __repr__(self) -> str:
        return f"AtomSet(m={self.m}, n={self.n}, atoms={len(self)})"


@dataclass(frozen=True, eq=False)
class AtomExpansion:
    """Weighted atom sum representing ``sum_j coeffs[j] * outer(u_j, v_j)``."""

    atoms: AtomSet
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if c.shape[0] != len(self.atoms):
            raise ValueError("one coefficient per atom is required")
        object.__setattr__(self, "coeffs", c)

    def __len__(self) -> int:
        return len(self.atoms)


def empty_expansion(m: int, n: int) -> AtomExpansion:
    return AtomExpansion(AtomSet.empty(m, n), np.zeros(0))


def leading_atoms(M, k: int, backend: str = "dense") -> AtomExpansion:
    """Best orthonormal atom selection for ``M``: its top-k singular triplets.

    Coefficients are the singular values. Negligible triplets are dropped,
    so fewer than ``k`` atoms may come back; a zero matrix yields an empty
    expansion (nothing worth selecting) rather than an error. Among all atom
    sets of size <= k this maximizes the Frobenius norm of the projection of
    ``M``.
    """
    A = as_matrix(M)
    if k < 1:
        raise ValueError("k must be positive")
    f = svd_truncated(A, min(k, min(A.shape)), backend=backend)
    return AtomExpansion(AtomSet(f.U, f.V), f.sigma)


def merge(set_a: AtomSet, set_b: AtomSet) -> AtomSet:
    """Union of two atom sets: concatenation with later near-duplicates dropped."""
    if set_a.m != set_b.m or set_a.n != set_b.n:
        raise ValueError("atom sets live in different matrix spaces")
    left = np.hstack([set_a.left, set_b.left])
    right = np.hstack([set_a.right, set_b.right])
    keep: list[int] = []
    for j in range(left.shape[1]):
        if keep:
            inner = (left[:, keep].T @ left[:, j]) * (right[:, keep].T @ right[:, j])
            if np.abs(inner).max() > 1.0 - DUPLICATE_TOL:
                continue
        keep.append(j)
    return AtomSet(left[:, keep], right[:, keep])


def _vectorized_atoms(aset: AtomSet) -> np.ndarray:
    # column j is vec(outer(u_j, v_j)) in row-major order
    return np.einsum("mt,nt->mnt", aset.left, aset.right).reshape(
        aset.m * aset.n, len(aset)
    )


def project(aset: AtomSet, M) -> np.ndarray:
    """Orthogonal projection of ``M`` onto span(aset) in Frobenius geometry.

    Computed by minimum-norm least squares on the vectorized atoms, so it is
    exact (and idempotent) for non-orthonormal sets too. An empty set
    projects everything to zero.
    """
    A = as_matrix(M)
    if A.shape != (aset.m, aset.n):
        raise ValueError(f"matrix shape {A.shape} does not match atom set")
    if len(aset) == 0:
        return np.zeros_like(A)
    coeffs = least_squares_minnorm(_vectorized_atoms(aset), A.ravel())
    return (aset.left * coeffs) @ aset.right.T


def assemble(exp: AtomExpansion) -> np.ndarray:
    """Materialize the dense matrix of an expansion."""
    return (exp.atoms.left * exp.coeffs) @ exp.atoms.right.T


def truncate_expansion(exp: AtomExpansion, r: int) -> AtomExpansion:
    """Best rank-r approximation of an expansion, kept in factored form.

    Works on the stacked factors only: orthonormalize left and right stacks
    by QR, decompose the small core, keep the top r triplets. Never forms
    the dense m-by-n matrix, and agrees with re-selecting atoms from the
    assembled matrix up to the usual sign/degeneracy freedom.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if len(exp) == 0:
        return exp
    aset = exp.atoms
    Ql, Rl = np.linalg.qr(aset.left)
    Qr, Rr = np.linalg.qr(aset.right)
    core = (Rl * exp.coeffs) @ Rr.T
    Uc, s, Vct = np.linalg.svd(core, full_matrices=False)
    k = min(r, s.shape[0])
    U, sigma, V = _finalize_triplets(Ql @ Uc, s, Qr @ Vct.T, k)
    return AtomExpansion(AtomSet(U, V), sigma)
