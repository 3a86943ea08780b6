"""CSV ingestion and export for the command-line tools.

Dialect: a header row is required, fields are comma-separated, decimals use
'.', numeric cells are unquoted. Rows with missing cells (empty fields, or
fewer fields than the header) are dropped and counted; any other malformed
content is an error.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegeneracyError, ValidationError


@dataclass(frozen=True)
class Dataset:
    """A parsed regression dataset."""

    names: list[str]
    response_name: str
    X: np.ndarray
    y: np.ndarray
    dropped_rows: int
    standardized: bool = False


def read_dataset(path: str, response: str | None) -> Dataset:
    """Parse a CSV file into predictors and (optionally) a response column.

    Parameters
    ----------
    path : str
        CSV file with a header row.
    response : str or None
        Name of the response column; every other column is a predictor.
        When None, all columns are predictors and ``y`` comes back empty.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read {path!r}: {exc}") from exc
    if not lines:
        raise ValidationError(f"{path!r} is empty")

    header = [name.strip() for name in lines[0].split(",")]
    if len(set(header)) != len(header):
        raise ValidationError(f"{path!r} has duplicate column names")
    if response is not None and response not in header:
        raise ValidationError(f"response column {response!r} not found in {path!r}")
    width = len(header)
    response_pos = header.index(response) if response is not None else None

    rows: list[list[float]] = []
    dropped = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            dropped += 1
            continue
        cells = line.split(",")
        if len(cells) > width:
            raise ValidationError(
                f"{path!r} line {lineno}: {len(cells)} cells, expected {width}"
            )
        if len(cells) < width or any(not cell.strip() for cell in cells):
            dropped += 1
            continue
        try:
            rows.append([float(cell) for cell in cells])
        except ValueError:
            bad = next(cell for cell in cells if not _is_number(cell))
            raise ValidationError(
                f"{path!r} line {lineno}: non-numeric cell {bad.strip()!r}"
            ) from None
    if not rows:
        raise ValidationError(f"{path!r} has no complete data rows")

    data = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise ValidationError(f"{path!r} contains non-finite values")
    predictor_cols = [i for i in range(width) if i != response_pos]
    return Dataset(
        names=[header[i] for i in predictor_cols],
        response_name=response or "",
        X=np.ascontiguousarray(data[:, predictor_cols]),
        y=data[:, response_pos].copy() if response_pos is not None else np.zeros(0),
        dropped_rows=dropped,
    )


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def standardize_columns(X) -> np.ndarray:
    """Center/scale every column to mean 0, sd 1 (population divisor n).

    Constant columns come back as all zeros, so screening skips them as
    degenerate instead of dividing by zero.
    """
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=0)
    sd = np.sqrt(((X - mean) ** 2).sum(axis=0) / X.shape[0])
    out = (X - mean) / np.where(sd > 0.0, sd, 1.0)
    out[:, sd == 0.0] = 0.0
    return np.ascontiguousarray(out)


def standardize(dataset: Dataset) -> Dataset:
    """Center and scale predictors and response to mean 0, sd 1.

    Uses the population divisor n throughout. A constant response is an
    error since nothing can be regressed on it.
    """
    y = dataset.y
    y_mean = y.mean()
    y_sd = float(np.sqrt(((y - y_mean) ** 2).sum() / y.shape[0]))
    if y_sd == 0.0:
        raise DegeneracyError("response is constant; cannot standardize")
    return replace(
        dataset,
        X=standardize_columns(dataset.X),
        y=(y - y_mean) / y_sd,
        standardized=True,
    )


def write_dataset_csv(X, y, path: str, names: list[str] | None = None,
                      response_name: str = "y") -> None:
    """Write (X, y) in the same schema ``read_dataset`` ingests."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    if names is None:
        names = [f"x{j + 1}" for j in range(p)]
    if len(names) != p:
        raise ValidationError(f"{len(names)} names for {p} columns")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join([*names, response_name]) + "\n")
        for i in range(n):
            cells = [repr(float(v)) for v in X[i]]
            cells.append(repr(float(y[i])))
            fh.write(",".join(cells) + "\n")
