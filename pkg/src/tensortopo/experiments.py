"""Experiment orchestration: seeded trials, metric aggregation, presets.

An experiment is described by a declarative config (YAML/JSON-friendly
dict).  ``run_experiment`` expands any list-valued window parameters into a
grid of cells, runs independently seeded trials per cell, and returns a
JSON-able report whose aggregates are recomputable from the per-trial rows.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import fileio
from .cp import ExogenousCorrelation, SolverOptions
from .graphs import (
    DEFAULT_KRONECKER_SEED,
    eier,
    emse,
    erdos_renyi,
    kronecker_indicator,
    threshold_edges,
    weights_from_indicator,
)
from .recovery import StageError, infer_topology_batch, majority_vote, with_threshold
from .sem import (
    WindowPlan,
    piecewise_topology_series,
    random_gains,
    simulate_endogenous,
    simulate_exogenous,
)
from .tracking import track_topology

__all__ = [
    "ExperimentConfig",
    "TrialResult",
    "IngestResult",
    "ConsensusReport",
    "PRESETS",
    "oracle_threshold",
    "run_experiment",
    "ingest_csv",
    "consensus_report",
    "write_plot_csv",
]

_MODES = ("batch", "partial", "blind", "track", "consensus")


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment.

    ``m`` and ``l`` may be lists; the grid of their combinations forms the
    report's cells.  The mode fixes how much of the input-variance table is
    known: ``batch`` pins everything, ``partial`` drops entries with
    ``miss_prob``, ``blind`` pins nothing.  ``track`` runs the online
    tracker over a piecewise-constant topology, and ``consensus`` repeats
    blind inference on a fixed CSV and votes on the support.
    """

    mode: str
    graph: dict = field(default_factory=lambda: {"kind": "kronecker", "power": 2})
    m: int | list[int] = 10
    l: int | list[int] = 1000
    variance_mode: str = "vector"
    variance_lo: float = 0.5
    variance_hi: float = 2.0
    gain_lo: float = 2.0
    gain_hi: float = 3.0
    noise_var: float = 0.01
    miss_prob: float = 0.5
    trials: int = 1
    rng_seed: int = 0
    eta_policy: str = "oracle_sweep"
    eta_value: float = 0.0
    oracle_scope: str = "per_trial"
    use_abs: bool = False
    solver: dict = field(default_factory=dict)
    track: dict = field(default_factory=dict)
    data_path: str | None = None
    runs: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {_MODES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.eta_policy not in ("oracle_sweep", "fixed"):
            raise ValueError("eta_policy must be 'oracle_sweep' or 'fixed'")
        if self.oracle_scope not in ("per_trial", "global"):
            raise ValueError("oracle_scope must be 'per_trial' or 'global'")
        if self.variance_mode not in ("vector", "scalar"):
            raise ValueError("variance_mode must be 'vector' or 'scalar'")
        if self.mode == "consensus" and self.data_path is None:
            raise ValueError("consensus mode requires data_path")
        if self.mode == "consensus" and self.eta_policy != "fixed":
            raise ValueError("consensus mode has no ground truth; eta_policy must be 'fixed'")
        kind = self.graph.get("kind")
        if self.mode != "consensus" and kind not in ("kronecker", "erdos_renyi"):
            raise ValueError(f"unknown graph kind {kind!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrialResult:
    trial: int
    eta: float | None = None
    eier: float | None = None
    emse: float | None = None
    fit: float | None = None
    converged: bool | None = None
    wall_time: float = 0.0
    max_rel_increase: float | None = None
    per_window_eier: list[float] | None = None
    per_window_emse: list[float] | None = None
    error: str | None = None


@dataclass
class IngestResult:
    """Series plus the window plan carved out of it."""

    values: np.ndarray
    plan: WindowPlan
    names: list[str] | None
    dropped_rows: int


@dataclass
class ConsensusReport:
    """Frequency table of unique support patterns across repeated runs."""

    patterns: list[np.ndarray]
    counts: list[int]
    modal: np.ndarray
    modal_count: int
    total: int
    tie: bool

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "modal_count": self.modal_count,
            "tie": self.tie,
            "modal": self.modal.tolist(),
            "table": [
                {"count": c, "support": p.tolist()}
                for p, c in zip(self.patterns, self.counts)
            ],
        }


# ---------------------------------------------------------------------------
# threshold selection


def oracle_threshold(a_hat, s_true, n_grid: int = 50, use_abs: bool = False):
    """Threshold minimizing the edge error against a known truth.

    Sweeps ``n_grid`` log-spaced values between the smallest and largest
    positive estimate magnitudes.  Evaluation-only: requires ground truth.
    Returns (eta, eier_at_eta).
    """
    a_hat = np.asarray(a_hat, dtype=float)
    vals = np.abs(a_hat) if use_abs else a_hat.copy()
    off = ~np.eye(a_hat.shape[0], dtype=bool)
    pos = vals[off & (vals > 0)]
    if pos.size == 0:
        return 0.0, eier(s_true, np.zeros_like(a_hat, dtype=np.int64))
    lo = float(pos.min()) * (1.0 - 1e-9)
    hi = float(pos.max())
    grid = np.geomspace(lo, hi, n_grid) if hi > lo else np.array([lo])
    best_eta, best_err = 0.0, np.inf
    for eta in grid:
        err = eier(s_true, threshold_edges(a_hat, float(eta), use_abs=use_abs))
        if err < best_err:
            best_eta, best_err = float(eta), err
    return best_eta, best_err


def _pooled_oracle_threshold(pairs, n_grid: int = 50, use_abs: bool = False) -> float:
    """One threshold minimizing the mean edge error over (a_hat, s_true) pairs."""
    pooled = []
    for a_hat, _ in pairs:
        vals = np.abs(a_hat) if use_abs else np.asarray(a_hat, dtype=float)
        off = ~np.eye(vals.shape[0], dtype=bool)
        pos = vals[off & (vals > 0)]
        if pos.size:
            pooled.append(pos)
    if not pooled:
        return 0.0
    pooled = np.concatenate(pooled)
    lo = float(pooled.min()) * (1.0 - 1e-9)
    hi = float(pooled.max())
    grid = np.geomspace(lo, hi, n_grid) if hi > lo else np.array([lo])
    best_eta, best_err = 0.0, np.inf
    for eta in grid:
        errs = [
            eier(s_true, threshold_edges(a_hat, float(eta), use_abs=use_abs))
            for a_hat, s_true in pairs
        ]
        err = float(np.mean(errs))
        if err < best_err:
            best_eta, best_err = float(eta), err
    return best_eta


# ---------------------------------------------------------------------------
# seeded trial construction


def _trial_seed(cfg_seed: int, cell_index: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg_seed, cell_index, trial])


def _build_graph(graph: dict, rng: np.random.Generator):
    kind = graph["kind"]
    if kind == "kronecker":
        seed = np.asarray(graph.get("seed", DEFAULT_KRONECKER_SEED))
        s = kronecker_indicator(seed, graph.get("power", 2))
    elif kind == "erdos_renyi":
        s = erdos_renyi(graph["n"], graph["p"], rng)
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    lo = graph.get("weight_lo", 0.2 if kind == "kronecker" else 1.0)
    hi = graph.get("weight_hi", 0.5 if kind == "kronecker" else 1.0)
    a, _ = weights_from_indicator(s, lo, hi, rng, stabilize=graph.get("stabilize", True))
    return a, s


def _window_variances(m: int, n: int, cfg: ExperimentConfig, rng: np.random.Generator):
    if cfg.variance_mode == "scalar":
        per_window = rng.uniform(cfg.variance_lo, cfg.variance_hi, size=(m, 1))
        return np.repeat(per_window, n, axis=1)
    return rng.uniform(cfg.variance_lo, cfg.variance_hi, size=(m, n))


def _solver_options(cfg: ExperimentConfig, seed_seq: np.random.SeedSequence) -> SolverOptions:
    fields = dict(cfg.solver)
    fields.setdefault("rng_seed", int(seed_seq.generate_state(1)[0]))
    return SolverOptions(**fields)


def _run_batch_trial(cfg: ExperimentConfig, m: int, l: int, cell_index: int, trial: int) -> TrialResult:
    started = time.perf_counter()
    root = _trial_seed(cfg.rng_seed, cell_index, trial)
    (graph_ss, gain_ss, var_ss, x_ss, noise_ss, mask_ss, solver_ss) = root.spawn(7)
    try:
        a_true, s_true = _build_graph(cfg.graph, np.random.default_rng(graph_ss))
        n = a_true.shape[0]
        b = random_gains(n, cfg.gain_lo, cfg.gain_hi, np.random.default_rng(gain_ss))
        variances = _window_variances(m, n, cfg, np.random.default_rng(var_ss))
        plan = WindowPlan.uniform(m, l, variances)
        x = simulate_exogenous(plan, np.random.default_rng(x_ss))
        y = simulate_endogenous(a_true, b, x, cfg.noise_var, np.random.default_rng(noise_ss))

        if cfg.mode == "batch":
            rx = ExogenousCorrelation.full(variances)
        elif cfg.mode == "partial":
            rx = ExogenousCorrelation.with_misses(
                variances, cfg.miss_prob, np.random.default_rng(mask_ss)
            )
        else:
            rx = ExogenousCorrelation.blind(m, n)

        opts = _solver_options(cfg, solver_ss)
        eta = cfg.eta_value if cfg.eta_policy == "fixed" else 0.0
        est = infer_topology_batch(y, plan.boundaries, rx, eta, opts, use_abs=cfg.use_abs)
        if cfg.eta_policy == "oracle_sweep" and cfg.oracle_scope == "per_trial":
            eta, _ = oracle_threshold(est.a_hat, s_true, use_abs=cfg.use_abs)
            est = with_threshold(est, eta, use_abs=cfg.use_abs)
        result = TrialResult(
            trial=trial,
            eta=est.eta,
            eier=eier(s_true, est.s_hat),
            emse=emse(a_true, est.a_hat),
            fit=est.fit,
            converged=est.converged,
            max_rel_increase=est.solver_max_rel_increase,
            wall_time=time.perf_counter() - started,
        )
        # stash for a possible global sweep (not serialized)
        result._oracle_pair = (est.a_hat, s_true)  # type: ignore[attr-defined]
        return result
    except (StageError, ValueError) as exc:
        return TrialResult(trial=trial, error=str(exc), wall_time=time.perf_counter() - started)


def _simulate_tracked_windows(cfg, a_series, b, variances, l, x_ss, noise_ss):
    """Yield (y_window, rho) pairs for a piecewise-constant topology."""
    x_rng = np.random.default_rng(x_ss)
    noise_rng = np.random.default_rng(noise_ss)
    for a_m, rho in zip(a_series, variances):
        n = a_m.shape[0]
        x = x_rng.standard_normal((l, n)) * np.sqrt(rho)
        y = simulate_endogenous(a_m, b, x, cfg.noise_var, noise_rng)
        yield y, rho


def _run_track_trial(cfg: ExperimentConfig, l: int, cell_index: int, trial: int) -> TrialResult:
    started = time.perf_counter()
    root = _trial_seed(cfg.rng_seed, cell_index, trial)
    (graph_ss, gain_ss, var_ss, x_ss, noise_ss, drop_ss) = root.spawn(6)
    track = dict(cfg.track)
    pattern = track.get("pattern", "static")
    m_windows = int(track.get("m_windows", 110))
    beta = float(track.get("beta", 0.999))
    prior = float(track.get("prior_scale", 1e5))
    try:
        a0, _ = _build_graph(cfg.graph, np.random.default_rng(graph_ss))
        n = a0.shape[0]
        b = random_gains(n, cfg.gain_lo, cfg.gain_hi, np.random.default_rng(gain_ss))
        if pattern == "static":
            a_series = [a0] * m_windows
        else:
            a_series = piecewise_topology_series(
                a0,
                pattern,
                m_windows,
                np.random.default_rng(drop_ss),
                drop_prob=float(track.get("drop_prob", 0.2)),
                change_windows=tuple(track.get("change_windows", (50, 100))),
                drift_amp=float(track.get("drift_amp", 0.1)),
                drift_rate=float(track.get("drift_rate", 0.01)),
            )
        variances = _window_variances(m_windows, n, cfg, np.random.default_rng(var_ss))
        stream = _simulate_tracked_windows(cfg, a_series, b, variances, l, x_ss, noise_ss)

        eta = cfg.eta_value if cfg.eta_policy == "fixed" else 0.0
        per_eier: list[float] = []
        per_emse: list[float] = []
        for est, a_true in zip(track_topology(stream, beta=beta, eta=eta, a=prior,
                                              use_abs=cfg.use_abs), a_series):
            s_true = (a_true != 0).astype(np.int64)
            if not est.recovered:
                per_eier.append(float("nan"))
                per_emse.append(float("nan"))
                continue
            if cfg.eta_policy == "oracle_sweep":
                w_eta, w_err = oracle_threshold(est.a_hat, s_true, use_abs=cfg.use_abs)
                per_eier.append(w_err)
            else:
                per_eier.append(eier(s_true, est.s_hat))
            per_emse.append(emse(a_true, est.a_hat))
        return TrialResult(
            trial=trial,
            eta=eta,
            per_window_eier=per_eier,
            per_window_emse=per_emse,
            wall_time=time.perf_counter() - started,
        )
    except (StageError, ValueError) as exc:
        return TrialResult(trial=trial, error=str(exc), wall_time=time.perf_counter() - started)


def _run_trial(cfg: ExperimentConfig, params: dict, cell_index: int, trial: int) -> TrialResult:
    if cfg.mode == "track":
        return _run_track_trial(cfg, params["l"], cell_index, trial)
    return _run_batch_trial(cfg, params["m"], params["l"], cell_index, trial)


def _run_trial_from_dict(args):
    cfg_dict, params, cell_index, trial = args
    return _run_trial(ExperimentConfig.from_dict(cfg_dict), params, cell_index, trial)


# ---------------------------------------------------------------------------
# aggregation


def _quantiles(values: list[float]):
    arr = np.asarray(values, dtype=float)
    arr = arr[np.isfinite(arr)]
    if arr.size == 0:
        return {"mean": None, "median": None, "p25": None, "p75": None}
    return {
        "mean": float(np.mean(arr)),
        "median": float(np.median(arr)),
        "p25": float(np.percentile(arr, 25)),
        "p75": float(np.percentile(arr, 75)),
    }


def _aggregate_batch(trials: list[TrialResult]) -> dict:
    ok = [t for t in trials if t.error is None]
    eiers = [t.eier for t in ok]
    agg = {
        "n_trials": len(trials),
        "n_failed": len(trials) - len(ok),
        "eier": _quantiles(eiers),
        "emse": _quantiles([t.emse for t in ok]),
        "fit": _quantiles([t.fit for t in ok]),
        "success_rate": (float(np.mean([e == 0.0 for e in eiers])) if eiers else None),
    }
    return agg


def _aggregate_track(trials: list[TrialResult]) -> dict:
    ok = [t for t in trials if t.error is None]
    agg: dict = {"n_trials": len(trials), "n_failed": len(trials) - len(ok)}
    if not ok:
        agg["per_window"] = []
        return agg
    n_windows = len(ok[0].per_window_eier)
    per_window = []
    for w in range(n_windows):
        e_vals = [t.per_window_eier[w] for t in ok]
        m_vals = [t.per_window_emse[w] for t in ok]
        per_window.append(
            {
                "window": w,
                "eier_mean": _quantiles(e_vals)["mean"],
                "eier_median": _quantiles(e_vals)["median"],
                "emse_mean": _quantiles(m_vals)["mean"],
                "emse_median": _quantiles(m_vals)["median"],
            }
        )
    agg["per_window"] = per_window
    return agg


def _trial_dict(t: TrialResult) -> dict:
    d = asdict(t)
    return d


def run_experiment(config: ExperimentConfig | dict) -> dict:
    """Run all cells and trials of a config; returns a JSON-able report.

    Per-trial failures are recorded in the rows, not raised.  With
    ``workers > 1`` trials run in a process pool; results are identical to a
    sequential run because every trial derives its own RNG streams from
    (rng_seed, cell index, trial index).
    """
    cfg = config if isinstance(config, ExperimentConfig) else ExperimentConfig.from_dict(config)
    if cfg.mode == "consensus":
        return _run_consensus(cfg)

    ms = cfg.m if isinstance(cfg.m, list) else [cfg.m]
    ls = cfg.l if isinstance(cfg.l, list) else [cfg.l]
    if cfg.mode == "track":
        cells = [{"l": int(l)} for l in ls]
    else:
        cells = [{"m": int(m), "l": int(l)} for m in ms for l in ls]

    report_cells = []
    for cell_index, params in enumerate(cells):
        if cfg.workers > 1:
            jobs = [(cfg.to_dict(), params, cell_index, t) for t in range(cfg.trials)]
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                trials = list(pool.map(_run_trial_from_dict, jobs))
        else:
            trials = [_run_trial(cfg, params, cell_index, t) for t in range(cfg.trials)]

        if (
            cfg.mode in ("batch", "partial", "blind")
            and cfg.eta_policy == "oracle_sweep"
            and cfg.oracle_scope == "global"
        ):
            pairs = [t._oracle_pair for t in trials if t.error is None]  # type: ignore[attr-defined]
            if pairs:
                eta = _pooled_oracle_threshold(pairs, use_abs=cfg.use_abs)
                for t in trials:
                    if t.error is None:
                        a_hat, s_true = t._oracle_pair  # type: ignore[attr-defined]
                        t.eta = eta
                        t.eier = eier(s_true, threshold_edges(a_hat, eta, use_abs=cfg.use_abs))

        agg = _aggregate_track(trials) if cfg.mode == "track" else _aggregate_batch(trials)
        report_cells.append(
            {"params": params, "trials": [_trial_dict(t) for t in trials], "aggregates": agg}
        )

    return {
        "config": cfg.to_dict(),
        "mode": cfg.mode,
        "eta_selection": (
            f"oracle_sweep/{cfg.oracle_scope} (evaluation-only, uses ground truth)"
            if cfg.eta_policy == "oracle_sweep"
            else f"fixed({cfg.eta_value})"
        ),
        "cells": report_cells,
    }


def _run_consensus(cfg: ExperimentConfig) -> dict:
    ingest = ingest_csv(cfg.data_path, l=cfg.l if isinstance(cfg.l, int) else cfg.l[0])
    m = ingest.plan.m_windows
    n = ingest.values.shape[1]
    supports = []
    fits = []
    for run in range(cfg.runs):
        ss = _trial_seed(cfg.rng_seed, 0, run)
        solver = dict(cfg.solver)
        solver.setdefault("restarts", 1)
        solver["rng_seed"] = int(ss.generate_state(1)[0])
        est = infer_topology_batch(
            ingest.values,
            ingest.plan.boundaries,
            ExogenousCorrelation.blind(m, n),
            cfg.eta_value,
            SolverOptions(**solver),
            use_abs=cfg.use_abs,
        )
        supports.append(est.s_hat)
        fits.append(est.fit)
    report = consensus_report(supports)
    return {
        "config": cfg.to_dict(),
        "mode": "consensus",
        "eta_selection": f"fixed({cfg.eta_value})",
        "names": ingest.names,
        "fits": fits,
        "consensus": report.to_dict(),
    }


# ---------------------------------------------------------------------------
# ingestion and consensus


def ingest_csv(path, l: int | None = None, boundaries=None, center: bool = True) -> IngestResult:
    """Load a nodal series CSV and carve it into windows.

    With fixed ``l``, windows are consecutive blocks of that length and the
    trailing remainder is dropped (count reported).  Alternatively explicit
    ``boundaries`` may be given.  ``center`` removes each column's mean.
    """
    values, names = fileio.load_series_csv(path)
    t_max = values.shape[0]
    if center:
        values = values - values.mean(axis=0, keepdims=True)
    if (l is None) == (boundaries is None):
        raise ValueError("provide exactly one of l or boundaries")
    if l is not None:
        if l < 1:
            raise ValueError("window length must be positive")
        m = t_max // l
        if m < 1:
            raise ValueError(f"series of {t_max} samples is shorter than one window of {l}")
        plan = WindowPlan(np.arange(m + 1, dtype=np.int64) * l)
        dropped = t_max - m * l
    else:
        plan = WindowPlan(np.asarray(boundaries, dtype=np.int64))
        if plan.t_max > t_max:
            raise ValueError("boundaries exceed the series length")
        dropped = t_max - plan.t_max
    plan.dropped_samples = dropped
    return IngestResult(values=values, plan=plan, names=names, dropped_rows=dropped)


def consensus_report(estimates: list[np.ndarray]) -> ConsensusReport:
    """Frequency table of unique supports plus the majority-vote winner."""
    if not estimates:
        raise ValueError("need at least one estimate")
    keys: list[bytes] = []
    patterns: dict[bytes, np.ndarray] = {}
    counts: dict[bytes, int] = {}
    for s in estimates:
        pattern = (np.asarray(s) != 0).astype(np.int64)
        key = pattern.tobytes()
        if key not in patterns:
            patterns[key] = pattern
            counts[key] = 0
            keys.append(key)
        counts[key] += 1
    modal = majority_vote(estimates)
    modal_count = counts[modal.tobytes()]
    tie = sum(1 for k in keys if counts[k] == modal_count) > 1
    ordered = sorted(keys, key=lambda k: -counts[k])
    return ConsensusReport(
        patterns=[patterns[k] for k in ordered],
        counts=[counts[k] for k in ordered],
        modal=modal,
        modal_count=modal_count,
        total=len(estimates),
        tie=tie,
    )


# ---------------------------------------------------------------------------
# plot data


def write_plot_csv(report: dict, path) -> None:
    """Emit plot-ready rows: one per cell (batch) or per window (tracking)."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if report["mode"] == "track":
            writer.writerow(
                ["l", "window", "eier_mean", "eier_median", "emse_mean", "emse_median"]
            )
            for cell in report["cells"]:
                for row in cell["aggregates"].get("per_window", []):
                    writer.writerow(
                        [
                            cell["params"]["l"],
                            row["window"],
                            row["eier_mean"],
                            row["eier_median"],
                            row["emse_mean"],
                            row["emse_median"],
                        ]
                    )
        elif report["mode"] == "consensus":
            writer.writerow(["pattern_rank", "count", "total"])
            for rank, entry in enumerate(report["consensus"]["table"]):
                writer.writerow([rank, entry["count"], report["consensus"]["total"]])
        else:
            writer.writerow(
                [
                    "m",
                    "l",
                    "eier_mean",
                    "eier_median",
                    "eier_p25",
                    "eier_p75",
                    "emse_mean",
                    "success_rate",
                    "n_trials",
                    "n_failed",
                ]
            )
            for cell in report["cells"]:
                agg = cell["aggregates"]
                writer.writerow(
                    [
                        cell["params"]["m"],
                        cell["params"]["l"],
                        agg["eier"]["mean"],
                        agg["eier"]["median"],
                        agg["eier"]["p25"],
                        agg["eier"]["p75"],
                        agg["emse"]["mean"],
                        agg["success_rate"],
                        agg["n_trials"],
                        agg["n_failed"],
                    ]
                )


# ---------------------------------------------------------------------------
# presets: the benchmark scenarios shipped with the package (desk-scale
# trial counts; raise them via overrides to reproduce summary curves)

PRESETS: dict[str, dict] = {
    "fig3": {
        "mode": "batch",
        "graph": {"kind": "kronecker", "power": 3},
        "m": [5, 10, 20],
        "l": 1000,
        "trials": 3,
    },
    "fig4a": {
        "mode": "batch",
        "graph": {"kind": "kronecker", "power": 2},
        "m": [10, 20],
        "l": [250, 500, 1000],
        "trials": 50,
    },
    "fig4b": {
        "mode": "partial",
        "graph": {"kind": "kronecker", "power": 2},
        "m": [10, 20],
        "l": [250, 500, 1000],
        "miss_prob": 0.5,
        "trials": 50,
    },
    "fig4c": {
        "mode": "blind",
        "graph": {"kind": "kronecker", "power": 2},
        "m": [10, 20],
        "l": [250, 500, 1000],
        "trials": 50,
    },
    "fig6": {
        "mode": "blind",
        "graph": {"kind": "erdos_renyi", "n": 5, "p": 0.4},
        "m": 10,
        "l": [250, 500, 1000],
        "trials": 100,
    },
    "fig7": {
        "mode": "track",
        "graph": {"kind": "kronecker", "power": 2},
        "l": 500,
        "track": {"pattern": "p1", "m_windows": 200, "beta": 0.999},
        "trials": 3,
    },
    "fig8": {
        "mode": "track",
        "graph": {"kind": "kronecker", "power": 2},
        "l": 2000,
        "track": {"pattern": "p2", "m_windows": 200, "beta": 0.999},
        "trials": 3,
    },
    "stocks": {
        "mode": "consensus",
        "l": 100,
        "runs": 100,
        "eta_policy": "fixed",
        "eta_value": 0.05,
    },
}
