"""Structural-equation-model simulation with piecewise-stationary inputs.

The model per sample is ``y = A y + B x + e`` with zero-diagonal adjacency
``A`` and diagonal input gain ``B``, i.e. ``y = (I - A)^{-1} (B x + e)``.
Exogenous inputs are zero-mean Gaussians whose per-node variances are held
constant inside each time window and change across windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "IllConditionedError",
    "WindowPlan",
    "random_gains",
    "mixing_matrix",
    "simulate_exogenous",
    "simulate_endogenous",
    "piecewise_topology_series",
    "analytic_correlation",
    "analytic_tensor",
]


class IllConditionedError(ValueError):
    """Raised when (I - A) or a mixing matrix is singular or near-singular."""

    def __init__(self, message: str, cond: float):
        super().__init__(f"{message} (condition estimate {cond:.3e})")
        self.cond = cond


@dataclass
class WindowPlan:
    """Window boundaries plus per-window exogenous variances.

    ``boundaries`` holds M+1 sample indices; window m covers the half-open
    range ``[boundaries[m], boundaries[m+1])``.  ``variances`` is an (M, N)
    array of per-node input variances, or None when they are unknown (e.g.
    for ingested real data).
    """

    boundaries: np.ndarray
    variances: np.ndarray | None = None
    dropped_samples: int = field(default=0, compare=False)

    def __post_init__(self):
        self.boundaries = np.asarray(self.boundaries, dtype=np.int64)
        if self.boundaries.ndim != 1 or self.boundaries.size < 2:
            raise ValueError("boundaries must hold at least two indices")
        if np.any(np.diff(self.boundaries) <= 0):
            raise ValueError("boundaries must be strictly increasing")
        if self.boundaries[0] < 0:
            raise ValueError("boundaries must be nonnegative sample indices")
        if self.variances is not None:
            self.variances = np.asarray(self.variances, dtype=float)
            if self.variances.ndim != 2 or self.variances.shape[0] != self.m_windows:
                raise ValueError(
                    "variances must be an (m_windows, n_nodes) array, got "
                    f"shape {self.variances.shape} for {self.m_windows} windows"
                )
            if np.any(self.variances <= 0):
                raise ValueError("window variances must be strictly positive")

    @property
    def m_windows(self) -> int:
        return self.boundaries.size - 1

    @property
    def t_max(self) -> int:
        return int(self.boundaries[-1])

    def window(self, m: int) -> tuple[int, int]:
        return int(self.boundaries[m]), int(self.boundaries[m + 1])

    @classmethod
    def uniform(cls, m_windows: int, length: int, variances=None) -> "WindowPlan":
        if m_windows < 1 or length < 1:
            raise ValueError("m_windows and length must be positive")
        bounds = np.arange(m_windows + 1, dtype=np.int64) * length
        return cls(bounds, variances)


def random_gains(n: int, lo: float = 2.0, hi: float = 3.0,
                 rng_seed: int | np.random.Generator = 0) -> np.ndarray:
    """Diagonal input gains drawn Unif(lo, hi); all entries must end up nonzero."""
    rng = np.random.default_rng(rng_seed)
    b = rng.uniform(lo, hi, size=n)
    if np.any(b == 0):
        raise ValueError("input gains must be nonzero")
    return b


def _check_gains(b, n: int) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or b.size != n:
        raise ValueError(f"gains must be a length-{n} vector, got shape {b.shape}")
    if np.any(b == 0):
        raise ValueError("input gains must all be nonzero")
    return b


def mixing_matrix(a, b, max_cond: float = 1e12) -> np.ndarray:
    """Mixing matrix (I - A)^{-1} Diag(b) relating inputs to observations."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be square")
    n = a.shape[0]
    b = _check_gains(b, n)
    i_minus_a = np.eye(n) - a
    cond = float(np.linalg.cond(i_minus_a))
    if not np.isfinite(cond) or cond > max_cond:
        raise IllConditionedError("(I - A) is singular or ill-conditioned", cond)
    return np.linalg.solve(i_minus_a, np.diag(b))


def simulate_exogenous(plan: WindowPlan, rng_seed: int | np.random.Generator = 0) -> np.ndarray:
    """Zero-mean Gaussian inputs, independent across nodes and samples.

    Within window m node i has variance ``plan.variances[m, i]``.  Returns a
    (t_max, n) array.
    """
    if plan.variances is None:
        raise ValueError("plan must carry per-window variances for simulation")
    n = plan.variances.shape[1]
    rng = np.random.default_rng(rng_seed)
    x = np.empty((plan.t_max, n))
    for m in range(plan.m_windows):
        start, stop = plan.window(m)
        sigma = np.sqrt(plan.variances[m])
        x[start:stop] = rng.standard_normal((stop - start, n)) * sigma
    return x


def simulate_endogenous(a, b, x, noise_var: float = 0.0,
                        rng_seed: int | np.random.Generator = 0) -> np.ndarray:
    """Propagate inputs through the network: y_t = (I - A)^{-1}(B x_t + e_t)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("x must be a (t_max, n) array")
    n = x.shape[1]
    a = np.asarray(a, dtype=float)
    if a.shape != (n, n):
        raise ValueError(f"adjacency shape {a.shape} does not match {n} nodes")
    b = _check_gains(b, n)
    if noise_var < 0:
        raise ValueError("noise_var must be >= 0")
    drive = x * b
    if noise_var > 0:
        rng = np.random.default_rng(rng_seed)
        drive = drive + rng.standard_normal(x.shape) * np.sqrt(noise_var)
    i_minus_a = np.eye(n) - a
    cond = float(np.linalg.cond(i_minus_a))
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditionedError("(I - A) is singular or ill-conditioned", cond)
    # solve (I - A) y_t = drive_t for all t at once
    return np.linalg.solve(i_minus_a, drive.T).T


def piecewise_topology_series(
    base,
    pattern: str,
    m_windows: int,
    rng_seed: int | np.random.Generator = 0,
    drift_amp: float = 0.1,
    drift_rate: float = 0.01,
    drop_prob: float = 0.2,
    change_windows: tuple[int, ...] = (50, 100),
) -> list[np.ndarray]:
    """Per-window adjacency matrices under one of two variation patterns.

    ``"p1"`` adds a slow common-phase sinusoid ``drift_amp * sin(drift_rate*m)``
    to every nonzero weight of the base matrix (window index m starts at 0, so
    the first window equals the base).  ``"p2"`` zeroes each surviving edge
    independently with probability ``drop_prob`` at each window listed in
    ``change_windows``; drops persist for all later windows.
    """
    base = np.asarray(base, dtype=float)
    if base.ndim != 2 or base.shape[0] != base.shape[1]:
        raise ValueError("base adjacency must be square")
    if m_windows < 1:
        raise ValueError("m_windows must be positive")
    support = base != 0
    series: list[np.ndarray] = []
    if pattern == "p1":
        for m in range(m_windows):
            a_m = base.copy()
            a_m[support] += drift_amp * np.sin(drift_rate * m)
            series.append(a_m)
    elif pattern == "p2":
        rng = np.random.default_rng(rng_seed)
        current = base.copy()
        for m in range(m_windows):
            if m in change_windows:
                alive = current != 0
                drops = alive & (rng.random(current.shape) < drop_prob)
                current = current.copy()
                current[drops] = 0.0
            series.append(current.copy())
    else:
        raise ValueError(f"unknown pattern {pattern!r}, expected 'p1' or 'p2'")
    return series


def analytic_correlation(phi, rho) -> np.ndarray:
    """Noise-free observation correlation Phi Diag(rho) Phi^T for one window."""
    phi = np.asarray(phi, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1 or phi.shape[1] != rho.size:
        raise ValueError("rho must be a per-node variance vector matching phi")
    r = (phi * rho) @ phi.T
    return (r + r.T) / 2.0


def analytic_tensor(phi, variances) -> np.ndarray:
    """Stack of analytic correlation slices, shape (n, n, m)."""
    variances = np.asarray(variances, dtype=float)
    if variances.ndim != 2:
        raise ValueError("variances must be an (m, n) array")
    slices = [analytic_correlation(phi, rho) for rho in variances]
    return np.stack(slices, axis=-1)
