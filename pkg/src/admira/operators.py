"""Linear measurement operators on matrices and their adjoints.

Two concrete families are provided: dense Gaussian maps (near-isometries on
low-rank matrices) and entry samplers (matrix completion). Operators are
immutable after construction, so apply/adjoint calls are thread-safe.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from .atoms import AtomExpansion, AtomSet, assemble

__all__ = [
    "MeasurementOperator",
    "GaussianOperator",
    "EntrySampler",
    "gaussian_operator",
    "entry_sampler",
    "MemoryBudgetExceeded",
    "DEFAULT_MEMORY_BUDGET",
]

# bytes of dense coefficient storage a Gaussian operator may allocate
DEFAULT_MEMORY_BUDGET = 1 << 30


class MemoryBudgetExceeded(RuntimeError):
    """Dense operator storage would exceed the configured memory budget."""


class MeasurementOperator(ABC):
    """Linear map from (m, n) matrices to length-p measurement vectors."""

    kind = "abstract"

    def __init__(self, m: int, n: int, p: int):
        if min(m, n, p) < 1:
            raise ValueError("m, n and p must be positive")
        self.m = int(m)
        self.n = int(n)
        self.p = int(p)

    def _check_matrix(self, X) -> np.ndarray:
        A = np.asarray(X, dtype=float)
        if A.shape != (self.m, self.n):
            raise ValueError(f"expected matrix shape {(self.m, self.n)}, got {A.shape}")
        return A

    def _check_vector(self, y) -> np.ndarray:
        w = np.asarray(y, dtype=float).ravel()
        if w.shape[0] != self.p:
            raise ValueError(f"expected measurement length {self.p}, got {w.shape[0]}")
        return w

    @abstractmethod
    def apply(self, X) -> np.ndarray:
        """Measure a dense matrix: returns a length-p vector."""

    @abstractmethod
    def adjoint(self, y) -> np.ndarray:
        """Adjoint map: satisfies ``<apply(X), y> == <X, adjoint(y)>_F``."""

    def apply_expansion(self, exp: AtomExpansion) -> np.ndarray:
        """Measure an atom expansion; equals ``apply(assemble(exp))``."""
        return self.apply(assemble(exp))

    def apply_atoms(self, aset: AtomSet) -> np.ndarray:
        """(p, t) matrix whose column j is the measurement of atom j."""
        cols = np.empty((self.p, len(aset)))
        for j in range(len(aset)):
            cols[:, j] = self.apply(np.outer(aset.left[:, j], aset.right[:, j]))
        return cols

    def __repr__(self) -> str:
        return f"{type(self).__name__}(m={self.m}, n={self.n}, p={self.p})"


class GaussianOperator(MeasurementOperator):
    """Dense i.i.d. Gaussian measurement map with entry variance 1/p.

    The variance makes ``E ||apply(X)||^2 = ||X||_F^2``, i.e. the map is an
    isometry in expectation. Fully reproducible from (m, n, p, seed).
    """

    kind = "gaussian"

    def __init__(self, m, n, p, seed, max_bytes: int = DEFAULT_MEMORY_BUDGET):
        super().__init__(m, n, p)
        need = 8 * self.p * self.m * self.n
        if need > max_bytes:
            raise MemoryBudgetExceeded(
                f"dense operator needs {need} bytes, budget is {max_bytes}"
            )
        self.seed = seed
        rng = np.random.default_rng(seed)
        self.matrix = rng.standard_normal((self.p, self.m * self.n)) / np.sqrt(self.p)

    def apply(self, X) -> np.ndarray:
        return self.matrix @ self._check_matrix(X).ravel()

    def adjoint(self, y) -> np.ndarray:
        return (self.matrix.T @ self._check_vector(y)).reshape(self.m, self.n)


class EntrySampler(MeasurementOperator):
    """Observes p distinct entries of the matrix, in a fixed order.

    The adjoint zero-fills measurements back onto the observed positions, so
    ``apply(adjoint(y)) == y`` and ``adjoint(apply(X))`` masks X by the
    sample set. Expansion-aware paths never materialize the dense matrix.
    """

    kind = "entry"

    def __init__(self, m, n, rows, cols, seed=None):
        rows = np.asarray(rows, dtype=np.intp).ravel()
        cols = np.asarray(cols, dtype=np.intp).ravel()
        if rows.shape != cols.shape:
            raise ValueError("rows and cols must have equal length")
        super().__init__(m, n, rows.shape[0])
        if rows.min(initial=0) < 0 or rows.max(initial=0) >= self.m:
            raise ValueError("row index out of range")
        if cols.min(initial=0) < 0 or cols.max(initial=0) >= self.n:
            raise ValueError("column index out of range")
        flat = rows * self.n + cols
        if np.unique(flat).shape[0] != self.p:
            raise ValueError("sample positions must be distinct")
        self.rows = rows
        self.cols = cols
        self.seed = seed

    @classmethod
    def random(cls, m, n, p, seed) -> "EntrySampler":
        """Sample p positions uniformly without replacement, seeded."""
        if p > m * n:
            raise ValueError(f"cannot sample {p} distinct entries from a {m}x{n} matrix")
        rng = np.random.default_rng(seed)
        flat = rng.choice(m * n, size=p, replace=False)
        rows, cols = np.divmod(flat, n)
        return cls(m, n, rows, cols, seed=seed)

    def apply(self, X) -> np.ndarray:
        return self._check_matrix(X)[self.rows, self.cols]

    def adjoint(self, y) -> np.ndarray:
        Z = np.zeros((self.m, self.n))
        Z[self.rows, self.cols] = self._check_vector(y)
        return Z

    def apply_expansion(self, exp: AtomExpansion) -> np.ndarray:
        # O(p * t): only the sampled positions of each rank-one term are formed
        s = exp.atoms
        return (s.left[self.rows, :] * s.right[self.cols, :]) @ exp.coeffs

    def apply_atoms(self, aset: AtomSet) -> np.ndarray:
        return aset.left[self.rows, :] * aset.right[self.cols, :]


def gaussian_operator(m, n, p, seed, max_bytes: int = DEFAULT_MEMORY_BUDGET):
    """Build a dense Gaussian operator (entries i.i.d. N(0, 1/p))."""
    return GaussianOperator(m, n, p, seed, max_bytes=max_bytes)


def entry_sampler(m, n, p, seed):
    """Build an entry sampler with p distinct uniform positions."""
    return EntrySampler.random(m, n, p, seed)
