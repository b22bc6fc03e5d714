"""Online topology tracking via exponentially-weighted recursive least squares.

Vectorizing a window's correlation slice gives ``r = H rho`` where
``H = Phi (.) Phi`` (column-wise Kronecker square of the mixing matrix) and
``rho`` is the window's per-node input variance vector.  ``H`` is tracked by
an exponentially-weighted LS estimator updated in O(N^3) per window through
the rank-one inverse update; each column of ``H`` is then a (noisy)
vectorized rank-one matrix whose leading eigen-pair yields the mixing
column, and the adjacency follows by the usual diagonal-normalized inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .cp import sample_correlation
from .graphs import threshold_edges
from .recovery import RecoveryError, recover_adjacency

__all__ = [
    "TrackerState",
    "WindowObservation",
    "MixingEstimate",
    "WindowEstimate",
    "tracker_init",
    "tracker_update",
    "power_iteration",
    "extract_mixing",
    "track_topology",
]


@dataclass
class TrackerState:
    """Recursive estimator state after ``window_index`` updates.

    ``q`` is the weighted cross-moment (N^2 x N), ``w`` the inverse weighted
    Gram of the variance vectors (N x N), and ``h`` the current estimate
    ``q @ w``.  Only fixed-size arrays are stored; no window history.
    """

    n: int
    beta: float
    q: np.ndarray
    w: np.ndarray
    h: np.ndarray
    window_index: int


class WindowObservation(NamedTuple):
    """Vectorized correlation slice and the window's input variances."""

    r_bar: np.ndarray
    rho: np.ndarray


class MixingEstimate(NamedTuple):
    """Mixing matrix with per-column rank-one diagnostics."""

    phi: np.ndarray
    residuals: np.ndarray
    rank1_ok: np.ndarray


@dataclass
class WindowEstimate:
    """Per-window tracking output."""

    window_index: int
    a_hat: np.ndarray | None
    s_hat: np.ndarray | None
    recovered: bool
    eta: float
    max_column_residual: float
    error: str | None = None


def tracker_init(n: int, beta: float = 0.999, a: float = 1e5) -> TrackerState:
    """Fresh tracker: w = a*I (weak prior; large ``a`` means little confidence
    in the all-zero initial estimate), q = 0."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < beta <= 1.0:
        raise ValueError("beta must be in (0, 1]")
    if a <= 0:
        raise ValueError("a must be positive")
    return TrackerState(
        n=n,
        beta=beta,
        q=np.zeros((n * n, n)),
        w=a * np.eye(n),
        h=np.zeros((n * n, n)),
        window_index=0,
    )


def tracker_update(state: TrackerState, obs: WindowObservation) -> TrackerState:
    """One exponentially-weighted RLS step.

    ``q <- beta q + r rho^T`` and ``w`` gets the rank-one inverse update
    (matrix inversion lemma), so ``h = q w`` is the weighted LS estimate
    including the initialization prior.  Returns a new state.
    """
    n = state.n
    r_bar = np.asarray(obs.r_bar, dtype=float).reshape(-1)
    rho = np.asarray(obs.rho, dtype=float).reshape(-1)
    if r_bar.size != n * n or rho.size != n:
        raise ValueError(f"observation does not match {n} nodes")
    if not (np.all(np.isfinite(r_bar)) and np.all(np.isfinite(rho))):
        raise ValueError("observation contains non-finite values")
    beta = state.beta
    q = beta * state.q + np.outer(r_bar, rho)
    w_rho = state.w @ rho
    denom = beta + float(rho @ w_rho)
    w = (state.w - np.outer(w_rho, w_rho) / denom) / beta
    w = (w + w.T) / 2.0
    h = q @ w
    return TrackerState(n=n, beta=beta, q=q, w=w, h=h,
                        window_index=state.window_index + 1)


def power_iteration(sym, start=None, tol: float = 1e-10, max_iter: int = 1000):
    """Leading eigen-pair of a symmetric matrix via power iteration.

    Returns (eigenvalue, unit eigenvector).  The eigenvalue is the Rayleigh
    quotient at the final iterate, so it carries the correct sign even though
    the iteration converges to the largest-magnitude eigenvalue.
    """
    sym = np.asarray(sym, dtype=float)
    n = sym.shape[0]
    if start is None:
        start = sym[:, int(np.argmax(np.abs(np.diag(sym))))]
    v = np.asarray(start, dtype=float).copy()
    norm = np.linalg.norm(v)
    if norm == 0:
        v = np.ones(n)
        norm = np.sqrt(n)
    v /= norm
    lam = float(v @ sym @ v)
    for _ in range(max_iter):
        nxt = sym @ v
        norm = np.linalg.norm(nxt)
        if norm == 0:
            return 0.0, v
        nxt /= norm
        # eigenvectors are sign-ambiguous; compare up to sign
        if min(np.linalg.norm(nxt - v), np.linalg.norm(nxt + v)) < tol:
            v = nxt
            break
        v = nxt
    lam = float(v @ sym @ v)
    return lam, v


def extract_mixing(state: TrackerState, rank1_residual_tol: float = 0.1) -> MixingEstimate:
    """Mixing-matrix estimate from the current ``h``.

    Column i is reshaped (column-major) to an N x N matrix, symmetrized, and
    its leading eigen-pair gives the column as sqrt(lambda) * v, with the
    sign fixed so the largest-magnitude entry is positive.  A column is
    flagged (``rank1_ok = False``) when the leading eigenvalue is not
    positive or the rank-one residual is large, both signs that the
    estimate has not settled yet.
    """
    if state.window_index < 1:
        raise ValueError("tracker has not been updated yet")
    n = state.n
    phi = np.empty((n, n))
    residuals = np.empty(n)
    ok = np.empty(n, dtype=bool)
    for i in range(n):
        hbar = state.h[:, i].reshape(n, n, order="F")
        hbar = (hbar + hbar.T) / 2.0
        lam, v = power_iteration(hbar)
        norm_h = np.linalg.norm(hbar)
        res = np.linalg.norm(hbar - lam * np.outer(v, v)) / norm_h if norm_h > 0 else 1.0
        col = np.sqrt(abs(lam)) * v
        peak = np.argmax(np.abs(col))
        if col[peak] < 0:
            col = -col
        phi[:, i] = col
        residuals[i] = res
        ok[i] = (lam > 0) and (res <= rank1_residual_tol)
    return MixingEstimate(phi=phi, residuals=residuals, rank1_ok=ok)


def track_topology(
    stream: Iterable[tuple[np.ndarray, np.ndarray]],
    beta: float = 0.999,
    eta: float = 0.0,
    a: float = 1e5,
    use_abs: bool = False,
) -> Iterator[WindowEstimate]:
    """Track a piecewise-constant topology over a stream of windows.

    ``stream`` yields ``(y_window, rho)`` pairs: the raw samples of one
    window (shape (L, N)) and that window's per-node input variances.  One
    estimate is emitted per window; when the extracted mixing matrix is not
    invertible the window is emitted as non-recovered and tracking continues.
    """
    state: TrackerState | None = None
    for y_window, rho in stream:
        y_window = np.asarray(y_window, dtype=float)
        if state is None:
            state = tracker_init(y_window.shape[1], beta=beta, a=a)
        corr = sample_correlation(y_window, (0, y_window.shape[0]))
        r_bar = corr.flatten(order="F")
        state = tracker_update(state, WindowObservation(r_bar, np.asarray(rho, dtype=float)))
        mixing = extract_mixing(state)
        max_res = float(mixing.residuals.max())
        try:
            a_hat = recover_adjacency(mixing.phi)
        except RecoveryError as exc:
            yield WindowEstimate(
                window_index=state.window_index,
                a_hat=None,
                s_hat=None,
                recovered=False,
                eta=eta,
                max_column_residual=max_res,
                error=str(exc),
            )
            continue
        yield WindowEstimate(
            window_index=state.window_index,
            a_hat=a_hat,
            s_hat=threshold_edges(a_hat, eta, use_abs=use_abs),
            recovered=True,
            eta=eta,
            max_column_residual=max_res,
        )
