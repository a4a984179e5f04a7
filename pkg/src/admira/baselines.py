"""Comparison algorithms: greedy rank-one pursuit and singular value
thresholding.

Both emit the same result/trace shape as the main solver so the experiment
harness can treat every algorithm uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import AtomExpansion, AtomSet, empty_expansion, leading_atoms, merge
from .linalg import svd
from .operators import EntrySampler
from .solver import (
    CONVERGED,
    MAX_ITER,
    STALLED,
    ZERO_PROXY,
    AdmiraResult,
    TraceRow,
    restricted_least_squares,
)

__all__ = [
    "PursuitConfig",
    "SvtConfig",
    "rank_one_pursuit",
    "svt_solve",
    "UnsupportedOperatorError",
]


class UnsupportedOperatorError(TypeError):
    """Algorithm does not support this measurement operator kind."""


@dataclass(frozen=True)
class PursuitConfig:
    """Rank-one pursuit parameters; ``variant`` is "omp" or "mp"."""

    max_atoms: int
    residual_tol: float = 1e-7
    variant: str = "omp"

    def __post_init__(self):
        if self.max_atoms < 1:
            raise ValueError("max_atoms must be positive")
        if self.variant not in ("omp", "mp"):
            raise ValueError(f"unknown pursuit variant {self.variant!r}")


def _mp_append(exp: AtomExpansion, atom_set: AtomSet, coeff: float) -> AtomExpansion:
    # fold a re-selected direction into its existing coefficient
    if len(exp) > 0:
        inner = exp.atoms.inner_products(atom_set)[:, 0]
        j = int(np.abs(inner).argmax())
        if abs(inner[j]) > 1.0 - 1e-10:
            coeffs = exp.coeffs.copy()
            coeffs[j] += coeff * np.sign(inner[j])
            return AtomExpansion(exp.atoms, coeffs)
    merged = merge(exp.atoms, atom_set)
    return AtomExpansion(merged, np.append(exp.coeffs, coeff))


def rank_one_pursuit(op, b, config: PursuitConfig) -> AdmiraResult:
    """Greedy pursuit selecting one atom per iteration from the proxy.

    The selected atom is the dominant singular pair of ``A*(b - A x_hat)``,
    which maximizes the correlation with the residual over all rank-one
    directions. The OMP variant re-fits all selected atoms by least squares
    each iteration (residual non-increasing); the MP variant only assigns
    the new atom its correlation coefficient
    ``<residual, A psi> / ||A psi||^2`` (the single-atom least-squares fit),
    so both variants coincide on the first iteration.
    """
    y = op._check_vector(b)
    if not np.all(np.isfinite(y)):
        raise ValueError("measurements contain non-finite entries")
    b_norm = float(np.linalg.norm(y))
    exp = empty_expansion(op.m, op.n)
    residual = y.copy()
    trace: list[TraceRow] = []
    stop = MAX_ITER

    for k in range(1, config.max_atoms + 1):
        selection = leading_atoms(op.adjoint(residual), 1)
        if len(selection) == 0:
            stop = ZERO_PROXY
            break
        if config.variant == "omp":
            merged = merge(exp.atoms, selection.atoms)
            if len(merged) == len(exp.atoms):
                stop = STALLED
                break
            exp = restricted_least_squares(op, y, merged)
        else:
            phi = op.apply_atoms(selection.atoms)[:, 0]
            exp = _mp_append(exp, selection.atoms, float(phi @ residual / (phi @ phi)))
        residual = y - op.apply_expansion(exp)
        res = float(np.linalg.norm(residual))
        rel = res / b_norm
        trace.append(TraceRow(k, res, rel))
        if rel <= config.residual_tol:
            stop = CONVERGED
            break

    return AdmiraResult(exp, trace, stop, algorithm=config.variant)


@dataclass(frozen=True)
class SvtConfig:
    """Singular value thresholding parameters.

    ``tau = None`` resolves to ``5 * sqrt(m * n)`` and ``step = None`` to
    ``1.2 * m * n / p`` — the standard choices from the SVT literature (this
    solver is a comparison subject, so its knobs are plain configuration).
    The stopping rule mirrors the main solver's relative-residual tolerance
    for a fair iteration-count comparison.
    """

    tau: float | None = None
    step: float | None = None
    max_iter: int = 500
    residual_tol: float = 1e-7

    def __post_init__(self):
        if self.tau is not None and self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.step is not None and self.step <= 0:
            raise ValueError("step must be positive")
        if self.max_iter < 1 or self.residual_tol <= 0:
            raise ValueError("max_iter and residual_tol must be positive")


def _shrink_expansion(Y: np.ndarray, tau: float) -> AtomExpansion:
    f = svd(Y)
    shrunk = f.sigma - tau
    keep = shrunk > 0.0
    return AtomExpansion(AtomSet(f.U[:, keep], f.V[:, keep]), shrunk[keep])


def svt_solve(sampler, b, config: SvtConfig | None = None) -> AdmiraResult:
    """Matrix completion by iterative singular value shrinkage.

    Maintains a sparse dual variable supported on the observed entries;
    each iteration shrinks its singular values by ``tau`` and takes a
    gradient step on the residual. Requires an entry-sampling operator.
    """
    if not isinstance(sampler, EntrySampler):
        raise UnsupportedOperatorError(
            "singular value thresholding requires an entry-sampling operator"
        )
    config = config or SvtConfig()
    y = sampler._check_vector(b)
    if not np.all(np.isfinite(y)):
        raise ValueError("measurements contain non-finite entries")

    m, n, p = sampler.m, sampler.n, sampler.p
    tau = config.tau if config.tau is not None else 5.0 * np.sqrt(m * n)
    step = config.step if config.step is not None else 1.2 * m * n / p

    b_norm = float(np.linalg.norm(y))
    if b_norm == 0.0:
        return AdmiraResult(empty_expansion(m, n), [], ZERO_PROXY, algorithm="svt")

    data = sampler.adjoint(y)
    sigma1 = float(np.linalg.svd(data, compute_uv=False)[0])
    k0 = int(np.ceil(tau / (step * sigma1)))
    Y = (k0 * step) * data

    exp = empty_expansion(m, n)
    trace: list[TraceRow] = []
    stop = MAX_ITER
    for k in range(1, config.max_iter + 1):
        exp = _shrink_expansion(Y, tau)
        residual = y - sampler.apply_expansion(exp)
        res = float(np.linalg.norm(residual))
        rel = res / b_norm
        trace.append(TraceRow(k, res, rel))
        if rel <= config.residual_tol:
            stop = CONVERGED
            break
        Y += step * sampler.adjoint(residual)

    return AdmiraResult(exp, trace, stop, algorithm="svt")
