"""Greedy rank-r recovery loop over an abstract measurement operator.

Each iteration forms the proxy matrix A*(b - A x_hat), selects the 2r
dominant atoms of the proxy, merges them with the current atom set, solves
a least-squares fit over the merged span in measurement space, and
re-truncates the fit to rank r. The loop stops on a small relative
residual, a stalled residual, an iteration cap, or a zero proxy.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .atoms import (
    AtomExpansion,
    AtomSet,
    assemble,
    empty_expansion,
    leading_atoms,
    merge,
    truncate_expansion,
)
from .linalg import DEFAULT_RANK_TOL, as_matrix, frobenius_norm, least_squares_minnorm

__all__ = [
    "AdmiraConfig",
    "AdmiraState",
    "AdmiraResult",
    "TraceRow",
    "UnrecoverableEnergy",
    "proxy",
    "admira_step",
    "restricted_least_squares",
    "admira_solve",
    "unrecoverable_energy",
    "CONVERGED",
    "MAX_ITER",
    "STALLED",
    "ZERO_PROXY",
]

CONVERGED = "converged"
MAX_ITER = "max_iter"
STALLED = "stalled"
ZERO_PROXY = "zero_proxy"

# consecutive small relative residual changes before declaring a stall
STALL_WINDOW = 3


@dataclass(frozen=True)
class AdmiraConfig:
    """Solver parameters.

    ``max_iter = None`` resolves to ``6 * (rank + 1)``, the point past which
    extra iterations stop paying off. ``residual_tol`` is relative to
    ``||b||_2``; ``stall_tol`` bounds the relative residual change that,
    sustained over three iterations, stops the loop (measurement operators
    without isometry behaviour, such as entry samplers, can cycle).
    """

    rank: int
    max_iter: int | None = None
    residual_tol: float = 1e-7
    stall_tol: float = 1e-6
    ls_rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if min(self.residual_tol, self.stall_tol, self.ls_rank_tol) <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def iteration_limit(self) -> int:
        return 6 * (self.rank + 1) if self.max_iter is None else self.max_iter


@dataclass
class AdmiraState:
    """One solver iterate: current expansion, iteration count, residual."""

    expansion: AtomExpansion
    iteration: int
    residual: np.ndarray
    zero_proxy: bool = False

    @property
    def atom_set(self) -> AtomSet:
        return self.expansion.atoms


@dataclass
class TraceRow:
    iteration: int
    residual_l2: float
    rel_residual: float
    error_fro: float | None = None


@dataclass
class AdmiraResult:
    """Final expansion plus the per-iteration trace and the stop reason."""

    expansion: AtomExpansion
    trace: list[TraceRow] = field(default_factory=list)
    stop_reason: str = MAX_ITER
    algorithm: str = "admira"

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def matrix(self) -> np.ndarray:
        return assemble(self.expansion)


def proxy(op, b, xhat: AtomExpansion) -> np.ndarray:
    """Proxy matrix ``A*(b - A xhat)`` steering the atom selection."""
    y = op._check_vector(b)
    return op.adjoint(y - op.apply_expansion(xhat))


def restricted_least_squares(
    op, b, aset: AtomSet, ls_rank_tol: float = DEFAULT_RANK_TOL
) -> AtomExpansion:
    """Least-squares fit of ``b`` over span(aset) in measurement space.

    Column j of the design matrix is the measurement of atom j; the
    coefficients are the minimum-norm minimizer, so duplicated or
    numerically dependent atoms are harmless.
    """
    if len(aset) == 0:
        raise ValueError("atom set must be non-empty")
    Phi = op.apply_atoms(aset)
    coeffs = least_squares_minnorm(Phi, b, ls_rank_tol)
    return AtomExpansion(aset, coeffs)


def admira_step(state: AdmiraState, op, b, config: AdmiraConfig) -> AdmiraState:
    """Advance the solver by one iteration.

    Selects up to 2r new atoms from the proxy, merges them with the current
    set (at most 3r atoms total), re-fits over the merged span, truncates
    back to rank r, and recomputes the residual. A zero proxy cannot make
    progress and comes back flagged, with the iterate unchanged.
    """
    r = config.rank
    selection = leading_atoms(proxy(op, b, state.expansion), 2 * r)
    if len(selection) == 0:
        return AdmiraState(state.expansion, state.iteration, state.residual, zero_proxy=True)
    merged = merge(selection.atoms, state.atom_set)
    fitted = restricted_least_squares(op, b, merged, config.ls_rank_tol)
    truncated = truncate_expansion(fitted, r)
    residual = op._check_vector(b) - op.apply_expansion(truncated)
    return AdmiraState(truncated, state.iteration + 1, residual)


def admira_solve(op, b, config: AdmiraConfig, truth=None) -> AdmiraResult:
    """Run the full greedy recovery loop.

    Parameters
    ----------
    op : MeasurementOperator
    b : array_like, shape (p,)
        Measurements, possibly noisy.
    config : AdmiraConfig
    truth : array_like, optional
        Known ground-truth matrix; when given, each trace row also records
        the Frobenius error against it. Never influences control flow.

    Returns
    -------
    AdmiraResult
        Stop reason is "converged" (relative residual <= residual_tol),
        "stalled", "max_iter", or "zero_proxy".
    """
    y = op._check_vector(b)
    if not np.all(np.isfinite(y)):
        raise ValueError("measurements contain non-finite entries")
    if truth is not None:
        truth = as_matrix(truth, "truth")

    b_norm = float(np.linalg.norm(y))
    state = AdmiraState(empty_expansion(op.m, op.n), 0, y.copy())
    trace: list[TraceRow] = []
    changes: deque[float] = deque(maxlen=STALL_WINDOW)
    prev_res = b_norm
    stop = MAX_ITER

    for _ in range(config.iteration_limit):
        state = admira_step(state, op, y, config)
        if state.zero_proxy:
            stop = ZERO_PROXY
            break
        res = float(np.linalg.norm(state.residual))
        rel = res / b_norm
        err = frobenius_norm(truth - assemble(state.expansion)) if truth is not None else None
        trace.append(TraceRow(state.iteration, res, rel, err))
        if rel <= config.residual_tol:
            stop = CONVERGED
            break
        changes.append(abs(prev_res - res) / max(prev_res, 1e-300))
        prev_res = res
        if len(changes) == STALL_WINDOW and max(changes) < config.stall_tol:
            stop = STALLED
            break

    return AdmiraResult(state.expansion, trace, stop)


@dataclass(frozen=True)
class UnrecoverableEnergy:
    """Inherent error floor of rank-r recovery from noisy measurements.

    ``value`` is the sum of the three components: Frobenius norm of the
    rank-r tail, nuclear norm of the tail scaled by r**-0.5, and the noise
    2-norm. A matrix of rank <= r with clean measurements has value 0.
    """

    value: float
    tail_frobenius: float
    tail_nuclear_scaled: float
    noise_l2: float


def unrecoverable_energy(X, r: int, nu=None) -> UnrecoverableEnergy:
    """Evaluate the error floor for approximating ``X`` at rank ``r``."""
    if r < 1:
        raise ValueError("r must be positive")
    A = as_matrix(X)
    s = np.linalg.svd(A, compute_uv=False)
    tail = s[r:]
    tail_fro = float(np.linalg.norm(tail))
    tail_nuc = float(tail.sum()) / np.sqrt(r)
    noise = 0.0 if nu is None else float(np.linalg.norm(np.asarray(nu, dtype=float)))
    return UnrecoverableEnergy(tail_fro + tail_nuc + noise, tail_fro, tail_nuc, noise)
