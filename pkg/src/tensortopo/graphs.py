"""Directed graph generators, edge thresholding, and error metrics.

Graphs are represented by two plain arrays:

* an *edge indicator* ``s``: an ``(n, n)`` binary matrix with zero diagonal,
  ``s[i, j] = 1`` marking a directed edge from node ``j`` into node ``i``;
* an *adjacency matrix* ``a``: an ``(n, n)`` real matrix of edge weights,
  also with zero diagonal, whose support matches the indicator.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "DEFAULT_KRONECKER_SEED",
    "KroneckerGraph",
    "kronecker_indicator",
    "weights_from_indicator",
    "kronecker_graph",
    "erdos_renyi",
    "threshold_edges",
    "eier",
    "emse",
    "spectral_radius",
]

# 4-node seed used for the synthetic Kronecker benchmark graphs.
DEFAULT_KRONECKER_SEED = np.array(
    [
        [0, 0, 1, 1],
        [0, 0, 1, 1],
        [0, 1, 0, 1],
        [1, 0, 1, 0],
    ],
    dtype=np.int64,
)


class KroneckerGraph(NamedTuple):
    """Weighted adjacency matrix, its binary support, and the stability rescale."""

    adjacency: np.ndarray
    indicator: np.ndarray
    scale: float


def _as_square(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {x.shape}")
    return x


def spectral_radius(a) -> float:
    """Largest eigenvalue magnitude of a square matrix."""
    a = _as_square(a, "a")
    if a.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def kronecker_indicator(seed, power: int) -> np.ndarray:
    """Binary support from repeated Kronecker products of a seed, diagonal zeroed.

    Some seeds place ones on the diagonal of the product; those are removed so
    the result is a valid edge indicator.
    """
    seed = np.asarray(seed)
    if seed.ndim != 2 or seed.shape[0] != seed.shape[1]:
        raise ValueError(f"seed must be square, got shape {seed.shape}")
    if not np.isin(seed, (0, 1)).all():
        raise ValueError("seed must be binary")
    if power < 1:
        raise ValueError("power must be >= 1")
    s = seed.astype(np.int64)
    for _ in range(power - 1):
        s = np.kron(s, seed.astype(np.int64))
    np.fill_diagonal(s, 0)
    return s


def weights_from_indicator(
    s,
    weight_lo: float,
    weight_hi: float,
    rng_seed: int | np.random.Generator = 0,
    stabilize: bool = True,
) -> tuple[np.ndarray, float]:
    """Draw uniform edge weights on the support of ``s``.

    Each nonzero entry gets an independent Unif(weight_lo, weight_hi) draw
    (weight_lo == weight_hi produces constant weights).  When ``stabilize``
    is set and the resulting matrix has spectral radius >= 1, the whole
    matrix is rescaled by 0.95 / rho so that (I - A) stays well conditioned;
    the applied factor is returned (1.0 when no rescale happened).
    """
    s = np.asarray(s)
    if not np.isin(s, (0, 1)).all():
        raise ValueError("indicator must be binary")
    if np.any(np.diag(s) != 0):
        raise ValueError("indicator must have a zero diagonal")
    if not 0 < weight_lo <= weight_hi:
        raise ValueError("need 0 < weight_lo <= weight_hi")
    rng = np.random.default_rng(rng_seed)
    a = s * rng.uniform(weight_lo, weight_hi, size=s.shape)
    scale = 1.0
    if stabilize:
        rho = spectral_radius(a)
        if rho >= 1.0:
            scale = 0.95 / rho
            a = a * scale
    return a, scale


def kronecker_graph(
    seed,
    power: int,
    weight_lo: float = 0.2,
    weight_hi: float = 0.5,
    rng_seed: int | np.random.Generator = 0,
    stabilize: bool = True,
) -> KroneckerGraph:
    """Weighted Kronecker random graph.

    The support is the ``power``-fold Kronecker product of the binary seed
    with its diagonal zeroed; weights are Unif(weight_lo, weight_hi) on that
    support.  ``scale`` records the stability rescale (see
    :func:`weights_from_indicator`).
    """
    if not 0 < weight_lo < weight_hi:
        raise ValueError("need 0 < weight_lo < weight_hi")
    s = kronecker_indicator(seed, power)
    a, scale = weights_from_indicator(s, weight_lo, weight_hi, rng_seed, stabilize)
    return KroneckerGraph(a, s, scale)


def erdos_renyi(n: int, p: float, rng_seed: int | np.random.Generator = 0) -> np.ndarray:
    """Directed Erdos-Renyi indicator: each off-diagonal entry is 1 w.p. ``p``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    s = (rng.random((n, n)) < p).astype(np.int64)
    np.fill_diagonal(s, 0)
    return s


def threshold_edges(a_hat, eta: float, use_abs: bool = False) -> np.ndarray:
    """Declare an edge wherever the estimated weight exceeds ``eta``.

    The comparison is one-sided on the raw value by default; ``use_abs``
    switches to ``|a_hat| > eta`` for data whose estimates may be negative.
    """
    a_hat = _as_square(a_hat, "a_hat")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    values = np.abs(a_hat) if use_abs else a_hat
    s = (values > eta).astype(np.int64)
    np.fill_diagonal(s, 0)
    return s


def eier(truth, estimate) -> float:
    """Edge identification error rate: percent of mismatched off-diagonal entries."""
    truth = _as_square(truth, "truth")
    estimate = _as_square(estimate, "estimate")
    if truth.shape != estimate.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {estimate.shape}")
    n = truth.shape[0]
    diff = (truth != 0) != (estimate != 0)
    np.fill_diagonal(diff, False)
    return float(np.count_nonzero(diff)) / (n * (n - 1)) * 100.0


def emse(truth, estimate) -> float:
    """Mean squared weight error: squared Frobenius distance over n(n-1)."""
    truth = _as_square(truth, "truth")
    estimate = _as_square(estimate, "estimate")
    if truth.shape != estimate.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {estimate.shape}")
    n = truth.shape[0]
    return float(np.sum((truth - estimate) ** 2)) / (n * (n - 1))
