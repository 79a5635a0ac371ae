"""CSV ingestion and the machine-readable output files.

Floats are written with 17 significant digits so that a write/read cycle
reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .exceptions import CsvParseError, ResponseDomainError
from .glm import Dataset, Family, check_response

__all__ = ["load_csv", "write_dataset", "write_path_csv", "write_cv_csv", "fmt", "PATH_COLUMNS"]

PATH_COLUMNS = ("k", "lambda", "active_size", "corrector", "kkt_residual")


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _response_index(header: list, response: Union[str, int]) -> int:
    if isinstance(response, (int, np.integer)):
        idx = int(response)
    elif response in header:
        return header.index(response)
    elif str(response).lstrip("-").isdigit():
        idx = int(response)
    else:
        raise CsvParseError(f"response column {response!r} not found in header {header}")
    if not -len(header) <= idx < len(header):
        raise CsvParseError(f"response column index {idx} out of range for {len(header)} columns")
    return idx % len(header)


def load_csv(path, response: Union[str, int] = 0, family=None) -> Dataset:
    """Read a headed CSV file into a :class:`Dataset`.

    Parameters
    ----------
    path : path-like
        File with a header row and numeric cells only.
    response : str or int
        Response column, by header name or by 0-based position.
    family : Family or str, optional
        Model family; ``None`` means logistic.  The response is checked
        against the family's support.

    Raises
    ------
    CsvParseError
        Missing header, ragged rows or non-numeric cells (with line and column).
    ResponseDomainError
        A response value outside the family's support (with line).
    """
    family = Family.coerce(family if family is not None else Family.LOGISTIC)
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise CsvParseError(f"{path}: empty file, a header row is required") from None
        if len(header) < 2:
            raise CsvParseError(f"{path}: need a response column and at least one predictor")
        ridx = _response_index(header, response)
        rows = []
        lines = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise CsvParseError(f"{path}: line {line} has {len(row)} cells, header has {len(header)}")
            vals = []
            for j, cell in enumerate(row):
                try:
                    v = float(cell)
                except ValueError:
                    raise CsvParseError(
                        f"{path}: line {line}, column {j + 1} ({header[j]!r}): non-numeric value {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise CsvParseError(f"{path}: line {line}, column {j + 1} ({header[j]!r}): non-finite value {cell!r}")
                vals.append(v)
            rows.append(vals)
            lines.append(line)
    if not rows:
        raise CsvParseError(f"{path}: no data rows")
    M = np.array(rows, dtype=float)
    y = M[:, ridx]
    X = np.delete(M, ridx, axis=1)
    try:
        check_response(y, family)
    except ResponseDomainError:
        i = int(np.flatnonzero((y != 0) & (y != 1))[0] if family == Family.LOGISTIC
                else np.flatnonzero((y < 0) | (y != np.floor(y)))[0])
        raise ResponseDomainError(
            f"{path}: line {lines[i]}: {family.value} response {y[i]:g} outside its support"
        ) from None
    return Dataset(X, y, family)


def write_dataset(path, data: Dataset, names: Optional[list] = None, response_name: str = "y") -> None:
    """Write the response first, then the predictors, with a header row."""
    names = names or [f"x{j + 1}" for j in range(data.p)]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([response_name] + list(names))
        for yi, xi in zip(data.y, data.X):
            w.writerow([fmt(yi)] + [fmt(v) for v in xi])


def write_path_csv(path, solution, coefs: Optional[np.ndarray] = None) -> None:
    """One row per path point: ``k, lambda, active_size, corrector, kkt_residual, beta_0..beta_p``.

    ``k`` counts from 1.  ``coefs`` overrides the stored coefficients (used for
    back-transformed standardised fits).  The first point has corrector ``none``.
    """
    coefs = solution.coefs if coefs is None else np.asarray(coefs)
    p1 = coefs.shape[1]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(PATH_COLUMNS) + [f"beta_{j}" for j in range(p1)])
        for k, (pt, b) in enumerate(zip(solution.points, coefs), start=1):
            corr = pt.corrector.value if pt.corrector is not None else "none"
            w.writerow([k, fmt(pt.lam), len(pt.active_set), corr, fmt(pt.kkt_residual)] + [fmt(v) for v in b])


def write_cv_csv(path, report) -> None:
    """Columns ``lambda, mean_deviance, sd``."""
    sd = report.score_sd if report.score_sd is not None else np.full(len(report.lambdas), np.nan)
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "mean_deviance", "sd"])
        for lam, m, s in zip(report.lambdas, report.scores, sd):
            w.writerow([fmt(lam), fmt(m), fmt(s)])
