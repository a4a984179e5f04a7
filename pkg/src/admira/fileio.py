"""Line-oriented file formats: full-precision CSV, observed-entry triples,
operator specs, problem files, and solver traces.

Formats are deliberately plain text. Observed entries are ``row col value``
triples with 1-based indices; Gaussian operators serialize as seed plus
dimensions only and are regenerated on load. All numbers are written with
17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .operators import EntrySampler, GaussianOperator

__all__ = [
    "format_number",
    "write_csv",
    "save_observed_entries",
    "load_observed_entries",
    "save_problem",
    "load_problem",
    "save_trace",
    "save_rip_estimates",
    "save_orthogonality_pairs",
    "save_dense_matrix",
    "load_dense_matrix",
]


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(path, header, rows) -> None:
    """Write rows of numbers/strings as CSV at full precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_number(x) for x in row) + "\n")


def save_observed_entries(path, sampler: EntrySampler, values) -> None:
    """Write one ``row col value`` triple per line (1-based indices)."""
    values = np.asarray(values, dtype=float).ravel()
    if values.shape[0] != sampler.p:
        raise ValueError(f"expected {sampler.p} values, got {values.shape[0]}")
    with open(path, "w", encoding="utf-8") as fh:
        for r, c, v in zip(sampler.rows, sampler.cols, values):
            fh.write(f"{r + 1} {c + 1} {format_number(float(v))}\n")


def load_observed_entries(path):
    """Read ``row col value`` triples; returns 0-based (rows, cols, values)."""
    rows, cols, values = [], [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'row col value'")
            rows.append(int(parts[0]) - 1)
            cols.append(int(parts[1]) - 1)
            values.append(float(parts[2]))
    return np.array(rows, dtype=int), np.array(cols, dtype=int), np.array(values)


def save_problem(path, operator, b) -> None:
    """Write a Gaussian-operator problem as key=value lines plus measurements.

    The operator is stored as seed and dimensions only, so it must have been
    built from an integer seed.
    """
    if not isinstance(operator, GaussianOperator):
        raise ValueError("problem files store Gaussian operators; use observed-entry "
                         "triples for samplers")
    if operator.seed is None:
        raise ValueError("operator has no stored seed and cannot be serialized")
    b = np.asarray(b, dtype=float).ravel()
    if b.shape[0] != operator.p:
        raise ValueError(f"expected {operator.p} measurements, got {b.shape[0]}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("kind=gaussian\n")
        fh.write(f"m={operator.m}\n")
        fh.write(f"n={operator.n}\n")
        fh.write(f"p={operator.p}\n")
        fh.write(f"seed={int(operator.seed)}\n")
        for v in b:
            fh.write(f"b={format_number(float(v))}\n")


def load_problem(path):
    """Read a problem file; returns (operator, b)."""
    meta = {}
    b = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key = key.strip()
            if key == "b":
                b.append(float(value))
            else:
                meta[key] = value.strip()
    if meta.get("kind") != "gaussian":
        raise ValueError(f"unsupported problem kind {meta.get('kind')!r}")
    for key in ("m", "n", "p", "seed"):
        if key not in meta:
            raise ValueError(f"problem file is missing {key}")
    op = GaussianOperator(int(meta["m"]), int(meta["n"]), int(meta["p"]), int(meta["seed"]))
    if len(b) != op.p:
        raise ValueError(f"expected {op.p} measurements, found {len(b)}")
    return op, np.array(b)


def save_trace(path, result) -> None:
    """Export a solver trace as CSV; the error column appears only if known."""
    with_error = any(row.error_fro is not None for row in result.trace)
    header = ["iter", "residual_l2", "rel_residual"] + (["error_fro"] if with_error else [])
    rows = []
    for row in result.trace:
        out = [row.iteration, row.residual_l2, row.rel_residual]
        if with_error:
            out.append(row.error_fro if row.error_fro is not None else math.nan)
        rows.append(out)
    write_csv(path, header, rows)


def save_rip_estimates(path, estimates) -> None:
    """Export isometry-constant estimates as ``r,delta_hat,samples,seed``."""
    rows = [[e.r, e.delta_hat, e.samples_used, e.seed] for e in estimates]
    write_csv(path, ["r", "delta_hat", "samples", "seed"], rows)


def save_orthogonality_pairs(path, report) -> None:
    """Export per-pair orthogonality checks as ``pair_id,lhs,rhs_sqrt2,rhs_1``."""
    rows = [[c.pair_id, c.lhs, c.rhs_sqrt2, c.rhs_1] for c in report.pairs]
    write_csv(path, ["pair_id", "lhs", "rhs_sqrt2", "rhs_1"], rows)


def save_dense_matrix(path, X) -> None:
    np.savetxt(path, np.asarray(X, dtype=float), fmt="%.17g", delimiter=",")


def load_dense_matrix(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=","))
