"""Adjacency recovery from the mixing factor, identifiability checks, and the
batch inference pipeline.

The mixing matrix Phi = (I - A)^{-1} B determines the adjacency uniquely via
``A = I - Diag(Phi^{-1})^{-1} Phi^{-1}``; the map is invariant to any
invertible diagonal column scaling of Phi, which is why a decomposition that
recovers Phi only up to column scales still identifies A exactly.  Column
*permutations* are not harmless, so blind runs (no pinned variances) first
canonicalize the column order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cp import (
    CorrelationTensor,
    ExogenousCorrelation,
    SolverOptions,
    cp_decompose_constrained,
    kruskal_rank,
    windowed_correlations,
)
from .graphs import threshold_edges

__all__ = [
    "RecoveryError",
    "StageError",
    "IdentifiabilityReport",
    "TopologyEstimate",
    "recover_adjacency",
    "align_blind_columns",
    "check_identifiability",
    "infer_topology_batch",
    "with_threshold",
    "majority_vote",
]

_INFEASIBLE_COST = 1e9


class RecoveryError(ValueError):
    """Adjacency recovery failed (singular factor or vanishing diagonal)."""

    def __init__(self, message: str, cond: float | None = None):
        if cond is not None:
            message = f"{message} (condition estimate {cond:.3e})"
        super().__init__(message)
        self.cond = cond


@dataclass
class IdentifiabilityReport:
    """Checkable uniqueness conditions for a variance table with misses.

    ``kruskal_rank_rx`` is the Kruskal rank of the fully-known columns,
    capped at 2 (only the >= 2 bound matters).  The partial condition tests,
    for every node pair (i, j), linear independence of the two variance
    sub-vectors restricted to the union of their known windows.
    """

    kruskal_rank_rx: int
    full_condition_met: bool
    partial_condition_met: bool
    failing_pairs: list[tuple[int, int]]


@dataclass
class TopologyEstimate:
    """Output of one batch inference run."""

    a_hat: np.ndarray
    s_hat: np.ndarray
    fit: float
    converged: bool
    eta: float
    report: IdentifiabilityReport | None = None
    phi: np.ndarray | None = None
    restart_supports: list[np.ndarray] | None = None
    blind_aligned: bool = False
    solver_max_rel_increase: float = 0.0


def recover_adjacency(phi_hat, diag_tol: float = 1e-12, max_cond: float = 1e12) -> np.ndarray:
    """Adjacency from a mixing-matrix estimate: A = I - Diag(M)^{-1} M, M = Phi^{-1}."""
    phi_hat = np.asarray(phi_hat, dtype=float)
    if phi_hat.ndim != 2 or phi_hat.shape[0] != phi_hat.shape[1]:
        raise ValueError("mixing matrix must be square")
    cond = float(np.linalg.cond(phi_hat))
    if not np.isfinite(cond) or cond > max_cond:
        raise RecoveryError("mixing matrix is singular or ill-conditioned", cond)
    inv = np.linalg.inv(phi_hat)
    diag = np.diag(inv).copy()
    if np.any(np.abs(diag) <= diag_tol):
        raise RecoveryError(
            "inverse mixing matrix has a vanishing diagonal entry "
            "(an input gain is effectively zero)"
        )
    a = np.eye(phi_hat.shape[0]) - inv / diag[:, None]
    np.fill_diagonal(a, 0.0)
    return a


def _assignment_cost(inv: np.ndarray) -> np.ndarray:
    """Plausibility cost of normalizing inverse row r at position i.

    Normalizing a row by its i-th entry yields a candidate adjacency row;
    rows of a well-recovered sparse nonnegative network have no negative
    entries and no entries above 1, so both are penalized.  The ratio is
    invariant to the row scale, hence to the unknown column scalings.
    """
    n = inv.shape[0]
    cost = np.full((n, n), _INFEASIBLE_COST)
    row_scale = np.abs(inv).max(axis=1)
    for r in range(n):
        for i in range(n):
            denom = inv[r, i]
            if abs(denom) <= 1e-12 * max(row_scale[r], 1e-300):
                continue
            v = -inv[r] / denom
            v[i] = 0.0
            neg = np.clip(-v, 0.0, None).sum()
            big = np.clip(np.abs(v) - 1.0, 0.0, None).sum()
            cost[r, i] = neg + big
    return cost


def align_blind_columns(phi_hat) -> tuple[np.ndarray, np.ndarray]:
    """Canonicalize the column order of a blind mixing estimate.

    A decomposition with no pinned variances recovers the mixing matrix only
    up to a column permutation (and scaling), and adjacency recovery is not
    permutation-invariant.  This picks the assignment of inverse rows to
    positions that minimizes the total implausibility of the induced
    adjacency rows, via the Hungarian method.  Returns the reordered matrix
    and the column order applied.
    """
    phi_hat = np.asarray(phi_hat, dtype=float)
    cond = float(np.linalg.cond(phi_hat))
    if not np.isfinite(cond) or cond > 1e12:
        raise RecoveryError("mixing matrix is singular or ill-conditioned", cond)
    inv = np.linalg.inv(phi_hat)
    cost = _assignment_cost(inv)
    rows, cols = linear_sum_assignment(cost)
    src = np.empty(phi_hat.shape[0], dtype=np.int64)
    src[cols] = rows
    return phi_hat[:, src], src


def check_identifiability(rx: ExogenousCorrelation, tol: float = 1e-8) -> IdentifiabilityReport:
    """Report which uniqueness conditions a variance table supports.

    Never raises: pairs whose union-window values are unavailable (NaN)
    simply count as failing.
    """
    values, mask = rx.values, rx.mask
    m, n = values.shape

    full_cols = mask.all(axis=0)
    if full_cols.any():
        kr = kruskal_rank(values[:, full_cols], max_k=2)
    else:
        kr = 0
    full_met = kr >= 2

    failing: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            rows = mask[:, i] | mask[:, j]
            u = values[rows, i]
            v = values[rows, j]
            if u.size < 2 or not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                failing.append((i, j))
                continue
            uu = float(u @ u)
            vv = float(v @ v)
            uv = float(u @ v)
            if uu == 0.0 or vv == 0.0 or (uu * vv - uv * uv) / (uu * vv) <= tol:
                failing.append((i, j))
    return IdentifiabilityReport(
        kruskal_rank_rx=kr,
        full_condition_met=full_met,
        partial_condition_met=not failing,
        failing_pairs=failing,
    )


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and the original error."""

    def __init__(self, stage: str, original: BaseException):
        super().__init__(f"[stage: {stage}] {original}")
        self.stage = stage
        self.original = original


def infer_topology_batch(
    y,
    boundaries,
    rx_known: ExogenousCorrelation,
    eta: float,
    opts: SolverOptions | None = None,
    use_abs: bool = False,
) -> TopologyEstimate:
    """Batch topology inference from nodal time series.

    Pipeline: per-window sample correlations -> constrained decomposition ->
    adjacency recovery from the spatial factor -> edge thresholding.  Blind
    runs (empty mask) canonicalize the factor's column order first and, when
    the solver kept its restarts, also report each restart's support so a
    consensus can be formed.  Failures are re-raised as :class:`StageError`.
    """
    blind = not rx_known.mask.any()
    try:
        slices = windowed_correlations(y, boundaries)
        tensor = CorrelationTensor(slices)
    except Exception as exc:
        raise StageError("correlation", exc) from exc
    try:
        factors = cp_decompose_constrained(tensor, rx_known, opts)
    except Exception as exc:
        raise StageError("decomposition", exc) from exc
    try:
        phi = factors.z1
        if blind:
            phi, _ = align_blind_columns(phi)
        a_hat = recover_adjacency(phi)
    except Exception as exc:
        raise StageError("recovery", exc) from exc
    s_hat = threshold_edges(a_hat, eta, use_abs=use_abs)
    restart_supports = None
    if blind and factors.restart_results is not None:
        restart_supports = []
        for rr in factors.restart_results:
            try:
                phi_r, _ = align_blind_columns(rr.z1)
                a_r = recover_adjacency(phi_r)
            except RecoveryError:
                continue
            restart_supports.append(threshold_edges(a_r, eta, use_abs=use_abs))

    report = check_identifiability(rx_known)
    return TopologyEstimate(
        a_hat=a_hat,
        s_hat=s_hat,
        fit=factors.fit,
        converged=factors.converged,
        eta=eta,
        report=report,
        phi=phi,
        restart_supports=restart_supports,
        blind_aligned=blind,
        solver_max_rel_increase=factors.max_rel_increase,
    )


def with_threshold(estimate: TopologyEstimate, eta: float, use_abs: bool = False) -> TopologyEstimate:
    """Re-threshold an estimate at a new edge threshold."""
    s_hat = threshold_edges(estimate.a_hat, eta, use_abs=use_abs)
    return replace(estimate, eta=eta, s_hat=s_hat)


def majority_vote(estimates: list[np.ndarray]) -> np.ndarray:
    """Most frequent support pattern; ties resolved by first appearance."""
    if not estimates:
        raise ValueError("need at least one estimate")
    shape = np.asarray(estimates[0]).shape
    counts: dict[bytes, int] = {}
    order: dict[bytes, int] = {}
    patterns: dict[bytes, np.ndarray] = {}
    for idx, s in enumerate(estimates):
        s = np.asarray(s)
        if s.shape != shape:
            raise ValueError("all estimates must share the same shape")
        key = (s != 0).astype(np.int64).tobytes()
        if key not in counts:
            counts[key] = 0
            order[key] = idx
            patterns[key] = (s != 0).astype(np.int64)
        counts[key] += 1
    best = max(counts, key=lambda k: (counts[k], -order[k]))
    return patterns[best]
