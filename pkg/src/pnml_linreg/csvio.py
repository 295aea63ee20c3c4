"""CSV readers and writers.

Datasets use a header ``x0,...,x{M-1},y`` and one sample per row.  Floats
are written with ``repr`` (shortest round-trip form), so reading back a
written file reproduces every value bit for bit; infinities appear as
``inf``.
"""

from __future__ import annotations

import csv
import io
import math
import os
from typing import Iterable

import numpy as np

from .errors import DataFormatError
from .regression import Dataset

__all__ = [
    "format_float",
    "read_dataset",
    "read_test_points",
    "write_dataset",
    "write_table",
    "write_predictions",
    "write_spectral_report",
]


def format_float(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _feature_columns(header, path):
    names = [h.strip() for h in header]
    has_y = bool(names) and names[-1] == "y"
    xcols = names[:-1] if has_y else names
    expected = [f"x{j}" for j in range(len(xcols))]
    if not xcols or xcols != expected:
        raise DataFormatError(
            f"{path}:1: header must be x0..x{{M-1}},y, got {','.join(names)!r}"
        )
    return len(xcols), has_y


def _parse(path, require_y):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return None, None, None
    M, has_y = _feature_columns(rows[0], path)
    if require_y and not has_y:
        raise DataFormatError(f"{path}:1: missing label column 'y'")
    width = M + int(has_y)
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise DataFormatError(
                f"{path}:{lineno}: expected {width} columns, found {len(row)}"
            )
        try:
            vals = [float(c) for c in row]
        except ValueError:
            bad = next(c for c in row if not _is_float(c))
            raise DataFormatError(f"{path}:{lineno}: non-numeric cell {bad!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise DataFormatError(f"{path}:{lineno}: non-finite value")
        values.append(vals)
    arr = np.array(values, dtype=np.float64).reshape(len(values), width)
    F = arr[:, :M]
    y = arr[:, M] if has_y else None
    return F, y, M


def _is_float(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_dataset(path) -> Dataset:
    """Read a labelled dataset.

    Raises
    ------
    DataFormatError
        On a bad header, ragged row, non-numeric or non-finite cell, or an
        empty file.
    """
    F, y, M = _parse(path, require_y=True)
    if F is None:
        raise DataFormatError(f"{path}:1: empty file, expected a header row")
    return Dataset(F, y, n_features=M)


def read_test_points(path, n_features=None):
    """Read test vectors; the ``y`` column is optional.

    Returns ``(features, labels_or_None)``.  A completely empty file yields
    zero test points.
    """
    F, y, M = _parse(path, require_y=False)
    if F is None:
        return np.zeros((0, n_features or 0)), None
    if n_features is not None and M != n_features:
        raise DataFormatError(
            f"{path}:1: test file has M={M} feature columns, training has M={n_features}"
        )
    return F, y


def _cell(c) -> str:
    if isinstance(c, str):
        return c
    if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
        return str(c)
    return format_float(c)


def write_table(path_or_buf, header: list[str], rows: Iterable[Iterable]):
    """Write rows of floats / strings / ``None`` with fixed formatting."""
    own = isinstance(path_or_buf, (str, os.PathLike))
    fh = open(path_or_buf, "w", newline="", encoding="utf-8") if own else path_or_buf
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(_cell(c) for c in row)
    finally:
        if own:
            fh.close()


def write_dataset(path, data: Dataset):
    header = [f"x{j}" for j in range(data.n_features)] + ["y"]
    write_table(path, header, (list(f) + [y] for f, y in zip(data.features, data.labels)))


def write_predictions(path, preds):
    """One row ``y_hat,h,k_factor,regret`` per :class:`PnmlPrediction`."""
    cols = ["y_hat", "h", "k_factor", "regret"]
    write_table(path, cols, ([p.as_row()[c] for c in cols] for p in preds))


def write_spectral_report(path, report):
    """Direction rows then one summary row, in a single table.

    Columns: ``kind,index,eigenvalue,projection,contribution,gamma,regret``;
    fields that do not apply to a row's kind are left empty.
    """
    cols = ["kind", "index", "eigenvalue", "projection", "contribution", "gamma", "regret"]
    write_table(path, cols, ([r[c] for c in cols] for r in report.rows()))


def to_string(writer, *args) -> str:
    buf = io.StringIO()
    writer(buf, *args)
    return buf.getvalue()
