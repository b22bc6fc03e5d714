"""Flat-file formats: matrices, nodal series, variance tables, tensors.

Matrix CSVs are row-major with a one-line ``n,<count>`` header.  Series CSVs
hold one row per time sample and one column per node, with an optional
header of node names.  Variance tables are (windows x nodes) CSVs where an
empty cell or ``nan`` marks an unknown entry.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .cp import CorrelationTensor, ExogenousCorrelation

__all__ = [
    "save_matrix_csv",
    "load_matrix_csv",
    "save_matrix_json",
    "load_matrix_json",
    "save_series_csv",
    "load_series_csv",
    "save_rx_csv",
    "load_rx_csv",
    "load_rho_csv",
    "save_tensor_dir",
    "load_tensor_dir",
]


def save_matrix_csv(path, matrix) -> None:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("expected a square matrix")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", matrix.shape[0]])
        for row in matrix:
            writer.writerow([repr(float(v)) for v in row])


def load_matrix_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "n":
        raise ValueError(f"{path}: missing 'n' header row")
    n = int(rows[0][1])
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise ValueError(f"{path}: expected {n} rows of {n} values")
    return np.array([[float(v) for v in r] for r in body])


def save_matrix_json(path, matrix) -> None:
    matrix = np.asarray(matrix)
    payload = {"n": int(matrix.shape[0]), "values": matrix.tolist()}
    Path(path).write_text(json.dumps(payload))


def load_matrix_json(path) -> np.ndarray:
    payload = json.loads(Path(path).read_text())
    matrix = np.array(payload["values"], dtype=float)
    if matrix.shape != (payload["n"], payload["n"]):
        raise ValueError(f"{path}: values do not match declared size {payload['n']}")
    return matrix


def save_series_csv(path, values, names: list[str] | None = None) -> None:
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValueError("series must be a (t_max, n) array")
    if names is not None and len(names) != values.shape[1]:
        raise ValueError("one name per node required")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if names is not None:
            writer.writerow(names)
        for row in values:
            writer.writerow([repr(float(v)) for v in row])


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_series_csv(path) -> tuple[np.ndarray, list[str] | None]:
    """Read a rectangular numeric series CSV; returns (values, names).

    A first row with any non-numeric cell is taken as the node-name header.
    Ragged rows and non-numeric data cells are errors.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError(f"{path}: empty file")
    names = None
    if any(not _is_float(cell) for cell in rows[0]):
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: row {i + 1} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            if not _is_float(cell):
                raise ValueError(f"{path}: non-numeric cell {cell!r} at row {i + 1}")
            values[i, j] = float(cell)
    if names is not None and len(names) != width:
        raise ValueError(f"{path}: header width does not match data")
    return values, names


def save_rx_csv(path, rx: ExogenousCorrelation) -> None:
    """Write a variance table; unknown entries become empty cells."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for m in range(rx.m):
            row = [
                repr(float(rx.values[m, i])) if rx.mask[m, i] else ""
                for i in range(rx.n)
            ]
            writer.writerow(row)


def load_rx_csv(path) -> ExogenousCorrelation:
    """Read a variance table; empty or nan cells are treated as unknown."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ValueError(f"{path}: empty variance table")
    width = len(rows[0])
    values = np.full((len(rows), width), np.nan)
    mask = np.zeros((len(rows), width), dtype=bool)
    for m, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: row {m + 1} has {len(row)} cells, expected {width}")
        for i, cell in enumerate(row):
            cell = cell.strip()
            if cell == "" or cell.lower() == "nan":
                continue
            values[m, i] = float(cell)
            mask[m, i] = True
    return ExogenousCorrelation(values, mask)


def load_rho_csv(path) -> np.ndarray:
    """Fully-known (windows x nodes) variance table for tracking."""
    rx = load_rx_csv(path)
    if not rx.mask.all():
        raise ValueError(f"{path}: tracking variances must not contain misses")
    return rx.values


def save_tensor_dir(path, tensor: CorrelationTensor, boundaries=None) -> None:
    """Write per-slice CSVs plus a JSON manifest {n, m, boundaries}."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    digits = max(3, len(str(tensor.m - 1)))
    for m in range(tensor.m):
        save_matrix_csv(root / f"slice_{m:0{digits}d}.csv", tensor.values[:, :, m])
    manifest = {
        "n": tensor.n,
        "m": tensor.m,
        "boundaries": None if boundaries is None else [int(b) for b in np.asarray(boundaries)],
    }
    (root / "manifest.json").write_text(json.dumps(manifest))


def load_tensor_dir(path) -> tuple[CorrelationTensor, np.ndarray | None]:
    root = Path(path)
    manifest = json.loads((root / "manifest.json").read_text())
    digits = max(3, len(str(manifest["m"] - 1)))
    slices = [
        load_matrix_csv(root / f"slice_{m:0{digits}d}.csv") for m in range(manifest["m"])
    ]
    values = np.stack(slices, axis=-1)
    if values.shape[0] != manifest["n"]:
        raise ValueError(f"{path}: slice size does not match manifest")
    boundaries = manifest.get("boundaries")
    tensor = CorrelationTensor(values)
    return tensor, None if boundaries is None else np.asarray(boundaries, dtype=np.int64)
