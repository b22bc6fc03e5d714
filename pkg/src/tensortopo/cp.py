"""Windowed correlation tensors and their constrained rank-N decomposition.

The three-way tensor stacks per-window observation correlation matrices as
frontal slices.  Its decomposition into N rank-one terms uses one shared
spatial factor for the first two modes (the slices are symmetric) and a
window factor whose entries may be pinned to known input variances.

The solver is a block-coordinate scheme with a guaranteed non-increasing
objective: the shared factor moves along its least-squares update direction
with an exact quartic line search, and the window factor rows are exact
(equality-constrained) least-squares solutions accepted only when they do
not increase the per-window residual.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RankFeasibilityWarning",
    "CorrelationTensor",
    "ExogenousCorrelation",
    "SolverOptions",
    "CPFactors",
    "sample_correlation",
    "windowed_correlations",
    "build_tensor",
    "khatri_rao",
    "kruskal_rank",
    "unfold",
    "reconstruct",
    "cp_decompose_constrained",
]


class RankFeasibilityWarning(UserWarning):
    """Decomposition rank exceeds the smallest tensor dimension."""


# ---------------------------------------------------------------------------
# data containers


@dataclass
class CorrelationTensor:
    """Stack of per-window correlation slices, shape (n, n, m).

    Each frontal slice must be symmetric (relative tolerance 1e-10) and
    positive semidefinite up to a small negative-eigenvalue tolerance.
    """

    values: np.ndarray
    sym_rtol: float = 1e-10
    psd_tol: float = 1e-8

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 3 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError(f"expected an (n, n, m) array, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("tensor entries must be finite")
        asym = np.abs(self.values - self.values.transpose(1, 0, 2)).max(initial=0.0)
        scale = max(1.0, np.abs(self.values).max(initial=0.0))
        if asym > self.sym_rtol * scale:
            raise ValueError(f"slice asymmetry {asym:.3e} exceeds tolerance")
        for m in range(self.m):
            w = np.linalg.eigvalsh((self.values[:, :, m] + self.values[:, :, m].T) / 2)
            if w[0] < -self.psd_tol * max(1.0, w[-1]):
                raise ValueError(f"slice {m} is not positive semidefinite (eigmin {w[0]:.3e})")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[2]


@dataclass
class ExogenousCorrelation:
    """Per-window input variances with a known-entry mask.

    ``values`` is (m, n); row m holds the per-node input variances of window
    m.  ``mask`` marks which entries are known; unknown entries may be NaN.
    Known entries must be strictly positive.
    """

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.values.ndim != 2:
            raise ValueError("values must be an (m, n) array")
        if self.mask.shape != self.values.shape:
            raise ValueError("mask shape must match values")
        known = self.values[self.mask]
        if known.size and (not np.all(np.isfinite(known)) or np.any(known <= 0)):
            raise ValueError("known variances must be finite and strictly positive")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def n_known(self) -> int:
        return int(self.mask.sum())

    @classmethod
    def full(cls, values) -> "ExogenousCorrelation":
        values = np.asarray(values, dtype=float)
        return cls(values, np.ones(values.shape, dtype=bool))

    @classmethod
    def with_misses(cls, values, miss_prob: float,
                    rng_seed: int | np.random.Generator = 0) -> "ExogenousCorrelation":
        if not 0.0 <= miss_prob <= 1.0:
            raise ValueError("miss_prob must be in [0, 1]")
        values = np.asarray(values, dtype=float)
        rng = np.random.default_rng(rng_seed)
        mask = rng.random(values.shape) >= miss_prob
        return cls(values, mask)

    @classmethod
    def blind(cls, m: int, n: int) -> "ExogenousCorrelation":
        return cls(np.full((m, n), np.nan), np.zeros((m, n), dtype=bool))


@dataclass
class SolverOptions:
    """Knobs for :func:`cp_decompose_constrained`.

    ``restarts=None`` selects 1 when every window-factor entry is pinned and
    10 otherwise.
    """

    max_sweeps: int = 500
    fit_tol: float = 1e-9
    restarts: int | None = None
    ridge: float = 1e-12
    rng_seed: int = 0
    keep_restarts: bool = False


@dataclass
class RestartResult:
    z1: np.ndarray
    z3: np.ndarray
    fit: float
    converged: bool
    max_rel_increase: float


@dataclass
class CPFactors:
    """Decomposition result; ``z1`` and ``z2`` are entrywise equal."""

    z1: np.ndarray
    z2: np.ndarray
    z3: np.ndarray
    fit: float
    converged: bool
    sweeps: int
    objective_history: np.ndarray
    max_rel_increase: float
    restart_results: list[RestartResult] | None = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# tensor construction


def sample_correlation(y, window: tuple[int, int]) -> np.ndarray:
    """Sample correlation (1/L) sum_t y_t y_t^T over a half-open window."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        raise ValueError("series must be a (t_max, n) array")
    start, stop = int(window[0]), int(window[1])
    if not 0 <= start < stop <= y.shape[0]:
        raise ValueError(f"window [{start}, {stop}) outside series of length {y.shape[0]}")
    block = y[start:stop]
    c = block.T @ block / (stop - start)
    return (c + c.T) / 2.0


def windowed_correlations(y, boundaries) -> np.ndarray:
    """Sample correlation slices for consecutive windows, shape (n, n, m)."""
    boundaries = np.asarray(boundaries, dtype=np.int64)
    slices = [
        sample_correlation(y, (boundaries[m], boundaries[m + 1]))
        for m in range(boundaries.size - 1)
    ]
    return np.stack(slices, axis=-1)


def build_tensor(slices) -> CorrelationTensor:
    """Stack symmetric correlation slices (window order) into a tensor."""
    if isinstance(slices, np.ndarray) and slices.ndim == 3:
        values = slices
    else:
        slices = [np.asarray(s, dtype=float) for s in slices]
        if not slices:
            raise ValueError("no slices given")
        shape = slices[0].shape
        for s in slices:
            if s.shape != shape:
                raise ValueError("all slices must share the same shape")
        values = np.stack(slices, axis=-1)
    if values.shape[2] < 2:
        raise ValueError("at least two window slices are required")
    return CorrelationTensor(values)


# ---------------------------------------------------------------------------
# multilinear utilities


def khatri_rao(a, b) -> np.ndarray:
    """Column-wise Kronecker product of two matrices with equal column counts."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("inputs must be matrices")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"column counts differ: {a.shape[1]} vs {b.shape[1]}")
    out = a[:, None, :] * b[None, :, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1])


def unfold(values: np.ndarray, mode: int) -> np.ndarray:
    """Matricize an (n1, n2, n3) array so that columns follow the column-wise
    Kronecker ordering of the two complementary factors (slowest mode last)."""
    if values.ndim != 3:
        raise ValueError("unfold expects a three-way array")
    if mode == 0:
        return values.transpose(0, 2, 1).reshape(values.shape[0], -1)
    if mode == 1:
        return values.transpose(1, 2, 0).reshape(values.shape[1], -1)
    if mode == 2:
        return values.transpose(2, 1, 0).reshape(values.shape[2], -1)
    raise ValueError("mode must be 0, 1, or 2")


def reconstruct(z1, z2, z3) -> np.ndarray:
    """Dense tensor from rank-one terms: entry (j,k,l) = sum_i z1[j,i] z2[k,i] z3[l,i]."""
    return np.einsum("ji,ki,li->jkl", z1, z2, z3, optimize=True)


def kruskal_rank(z, tol: float | None = None, max_k: int | None = None) -> int:
    """Largest k such that every k-column subset has full column rank.

    Rank deficiency is decided from the smallest singular value of each
    subset.  ``max_k`` caps the search (the result is then min(kr, max_k)),
    which keeps wide matrices tractable when only a small bound is needed.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.size == 0:
        raise ValueError("kruskal_rank expects a nonempty matrix")
    rows, cols = z.shape
    if np.any(np.linalg.norm(z, axis=0) == 0):
        return 0
    k_cap = min(rows, cols)
    if max_k is not None:
        k_cap = min(k_cap, max_k)
    for k in range(1, k_cap + 1):
        for subset in itertools.combinations(range(cols), k):
            sv = np.linalg.svd(z[:, subset], compute_uv=False)
            cutoff = tol if tol is not None else max(z[:, subset].shape) * np.finfo(float).eps * sv[0]
            if sv[-1] <= cutoff:
                return k - 1
    return k_cap


# ---------------------------------------------------------------------------
# constrained decomposition


def _objective(values: np.ndarray, z: np.ndarray, z3: np.ndarray) -> float:
    diff = values - reconstruct(z, z, z3)
    return float(np.sum(diff * diff))


def _solve_gram(gram: np.ndarray, rhs: np.ndarray, ridge: float) -> np.ndarray:
    """Solve gram @ x = rhs with a ridge fallback for singular Gram matrices."""
    try:
        x = np.linalg.solve(gram, rhs)
        if np.all(np.isfinite(x)):
            return x
    except np.linalg.LinAlgError:
        pass
    bump = ridge * max(np.trace(gram), 1.0)
    eye = np.eye(gram.shape[0])
    try:
        return np.linalg.solve(gram + bump * eye, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(gram + bump * eye, rhs, rcond=None)[0]


def _symmetric_step(values, z, z3, obj_curr, ridge):
    """Move the shared spatial factor along its LS direction; exact line search."""
    gram = (z3.T @ z3) * (z.T @ z)
    mttkrp = np.einsum("jkl,ki,li->ji", values, z, z3, optimize=True)
    target = _solve_gram(gram, mttkrp.T, ridge).T
    delta = target - z
    if not np.all(np.isfinite(delta)):
        return z, obj_curr

    err = values - reconstruct(z, z, z3)
    cross = np.einsum("ji,ki,li->jkl", delta, z, z3, optimize=True)
    lin = cross + cross.transpose(1, 0, 2)
    quad = reconstruct(delta, delta, z3)
    # residual(t) = err - t*lin - t^2*quad, objective is quartic in t
    c0 = float(np.sum(err * err))
    c1 = -2.0 * float(np.sum(err * lin))
    c2 = float(np.sum(lin * lin)) - 2.0 * float(np.sum(err * quad))
    c3 = 2.0 * float(np.sum(lin * quad))
    c4 = float(np.sum(quad * quad))

    candidates = [1.0]
    deriv = np.array([4.0 * c4, 3.0 * c3, 2.0 * c2, c1])
    if np.any(deriv[:-1] != 0):
        roots = np.roots(deriv)
        for r in roots:
            if abs(r.imag) < 1e-12 * max(1.0, abs(r.real)) and r.real > 0:
                candidates.append(float(r.real))

    def poly(t):
        return c0 + t * (c1 + t * (c2 + t * (c3 + t * c4)))

    t_best = min(candidates, key=poly)
    z_new = z + t_best * delta
    obj_new = _objective(values, z_new, z3)
    if obj_new <= obj_curr:
        return z_new, obj_new
    # rare float disagreement with the polynomial: probe remaining candidates
    for t in sorted(candidates, key=poly):
        z_new = z + t * delta
        obj_new = _objective(values, z_new, z3)
        if obj_new <= obj_curr:
            return z_new, obj_new
    return z, obj_curr


def _window_step(values, z, z3, known_mask, known_vals, obj_curr, ridge):
    """Exact constrained LS update of the window factor, row by row.

    Pinned entries keep their known values; free entries solve the reduced
    normal equations.  A candidate row is kept only if it does not increase
    that window's residual.
    """
    if known_mask.all():
        return z3, obj_curr
    gram_z = z.T @ z
    gram = gram_z * gram_z
    rhs = np.einsum("jkl,ji,ki->li", values, z, z, optimize=True)

    z3_new = z3.copy()
    for l in range(z3.shape[0]):
        free = ~known_mask[l]
        if not free.any():
            continue
        if free.all():
            row = _solve_gram(gram, rhs[l], ridge)
        else:
            fixed_vals = known_vals[l, known_mask[l]]
            reduced_rhs = rhs[l, free] - gram[np.ix_(free, known_mask[l])] @ fixed_vals
            sol = _solve_gram(gram[np.ix_(free, free)], reduced_rhs, ridge)
            row = z3[l].copy()
            row[known_mask[l]] = fixed_vals
            row[free] = sol
        if np.all(np.isfinite(row)):
            z3_new[l] = row

    res_old = np.sum((values - reconstruct(z, z, z3)) ** 2, axis=(0, 1))
    res_new = np.sum((values - reconstruct(z, z, z3_new)) ** 2, axis=(0, 1))
    worse = res_new > res_old
    if worse.any():
        z3_new[worse] = z3[worse]
    obj_new = _objective(values, z, z3_new)
    if obj_new <= obj_curr:
        return z3_new, obj_new
    return z3, obj_curr


def _single_solve(values, known_mask, known_vals, opts: SolverOptions, rng):
    n = values.shape[0]
    m = values.shape[2]
    norm = float(np.linalg.norm(values))
    scale = norm if norm > 0 else 1.0

    z = rng.uniform(size=(n, n))
    z3 = rng.uniform(size=(m, n))
    z3[known_mask] = known_vals[known_mask]

    obj = _objective(values, z, z3)
    history = [obj]
    converged = False
    for _ in range(opts.max_sweeps):
        z, obj = _symmetric_step(values, z, z3, obj, opts.ridge)
        z3, obj = _window_step(values, z, z3, known_mask, known_vals, obj, opts.ridge)
        history.append(obj)
        fit_prev = np.sqrt(history[-2]) / scale
        fit_curr = np.sqrt(history[-1]) / scale
        if fit_prev - fit_curr < opts.fit_tol:
            converged = True
            break

    history = np.asarray(history)
    increases = np.diff(history) / np.maximum(history[:-1], np.finfo(float).tiny)
    max_rel_increase = float(increases.max(initial=0.0))
    fit = float(np.sqrt(history[-1]) / scale)
    return z, z3, fit, converged, history, max_rel_increase


def cp_decompose_constrained(
    tensor: CorrelationTensor,
    known: ExogenousCorrelation,
    opts: SolverOptions | None = None,
) -> CPFactors:
    """Rank-N decomposition with equal spatial factors and pinned variances.

    Runs ``opts.restarts`` independently-initialized solves (entries i.i.d.
    Unif(0, 1)) and returns the one with the best fit.  ``fit`` is the
    relative reconstruction error; ``converged`` is False when the sweep
    budget ran out before the fit stopped improving.
    """
    if opts is None:
        opts = SolverOptions()
    values = tensor.values
    n, m = tensor.n, tensor.m
    if known.values.shape != (m, n):
        raise ValueError(
            f"variance table shape {known.values.shape} does not match tensor ({m}, {n})"
        )
    if n > min(n, m):
        warnings.warn(
            f"decomposition rank {n} exceeds the smallest tensor dimension {min(n, m)}; "
            "the factors are not essentially unique from the tensor alone",
            RankFeasibilityWarning,
            stacklevel=2,
        )

    known_vals = np.where(known.mask, known.values, 0.0)
    restarts = opts.restarts
    if restarts is None:
        restarts = 1 if known.mask.all() else 10
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    seed_seq = np.random.SeedSequence(opts.rng_seed)
    children = seed_seq.spawn(restarts)

    best = None
    collected: list[RestartResult] = []
    for child in children:
        rng = np.random.default_rng(child)
        z, z3, fit, converged, history, max_inc = _single_solve(
            values, known.mask, known_vals, opts, rng
        )
        if opts.keep_restarts:
            collected.append(RestartResult(z, z3, fit, converged, max_inc))
        if best is None or fit < best[2]:
            best = (z, z3, fit, converged, history, max_inc)

    z, z3, fit, converged, history, max_inc = best
    overall_inc = max([max_inc] + [r.max_rel_increase for r in collected]) if collected else max_inc
    return CPFactors(
        z1=z,
        z2=z.copy(),
        z3=z3,
        fit=fit,
        converged=converged,
        sweeps=len(history) - 1,
        objective_history=history,
        max_rel_increase=overall_inc,
        restart_results=collected if opts.keep_restarts else None,
    )
