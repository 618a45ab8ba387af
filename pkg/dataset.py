# dataset.py
"""
Tabular point data for the outlier toolkit.

Public API:
- Dataset / GroundTruth               immutable containers
- load_csv(path, label_column=None, has_header=True, drop_columns=())
    -> (Dataset, GroundTruth | None)
- min_max_scale(data) -> Dataset

Label encoding: 1 = outlier, 0 = inlier. Any other value in the label column is rejected.
Row and column positions in error messages are zero-based data positions
(row 0 is the first data row after the header, if any).
"""

import io
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from colors import print_colored, Colors
from file_utils import read_text_file

OUTLIER_VALUE = 1
INLIER_VALUE = 0

@dataclass(frozen=True)
class Dataset:
    points: np.ndarray
    feature_names: Tuple[str, ...] = ()
    ids: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-D matrix, got shape {pts.shape}")
        n, d = pts.shape
        if n < 2:
            raise ValueError(f"Dataset needs at least 2 points, got {n}")
        if d < 1:
            raise ValueError("Dataset needs at least 1 feature")
        if not np.all(np.isfinite(pts)):
            bad_row, bad_col = np.argwhere(~np.isfinite(pts))[0]
            raise ValueError(f"Non-finite feature value at row {bad_row}, column {bad_col}")
        pts.setflags(write=False)
        ids = np.arange(n, dtype=np.int64)
        ids.setflags(write=False)
        names = tuple(self.feature_names) if self.feature_names else tuple(f"x{j}" for j in range(d))
        if len(names) != d:
            raise ValueError(f"{len(names)} feature names given for {d} features")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

@dataclass(frozen=True)
class GroundTruth:
    labels: np.ndarray   # bool, True = outlier

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=bool).copy()
        if labels.ndim != 1:
            raise ValueError("labels must be one-dimensional")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def outlier_count(self) -> int:
        return int(np.count_nonzero(self.labels))

    def __len__(self):
        return self.labels.shape[0]

def _resolve_column(spec: Union[str, int], columns: Sequence, has_header: bool) -> int:
    """Map a label/drop column given by name or zero-based index to a position."""
    if isinstance(spec, (int, np.integer)) and not isinstance(spec, bool):
        idx = int(spec)
    elif isinstance(spec, str) and has_header and spec in columns:
        return list(columns).index(spec)
    elif isinstance(spec, str) and spec.strip().lstrip("-").isdigit():
        idx = int(spec)
    else:
        raise ValueError(f"Column {spec!r} not found (columns: {list(columns)})")
    if not 0 <= idx < len(columns):
        raise ValueError(f"Column index {idx} out of range for {len(columns)} columns")
    return idx

def _parse_label(value: str, row: int, col: int) -> bool:
    try:
        num = float(value)
    except ValueError:
        raise ValueError(f"Non-binary label {value!r} at row {row}, column {col}")
    if num == OUTLIER_VALUE:
        return True
    if num == INLIER_VALUE:
        return False
    raise ValueError(f"Non-binary label {value!r} at row {row}, column {col} (expected 0 or 1)")

def load_csv(path: str, label_column: Optional[Union[str, int]] = None, has_header: bool = True,
             drop_columns: Sequence[Union[str, int]] = ()) -> Tuple[Dataset, Optional[GroundTruth]]:
    """
    Load comma-separated point data.

    label_column: name (needs a header) or zero-based index of the 0/1 label column.
    drop_columns: extra non-feature columns to ignore (e.g. a `kind` column).
    Returns (Dataset, GroundTruth) with GroundTruth None when no label column is given.
    """
    frame = read_table(path, has_header)
    columns = list(frame.columns)
    label_idx = _resolve_column(label_column, columns, has_header) if label_column is not None else None
    dropped = {_resolve_column(c, columns, has_header) for c in drop_columns}
    if label_idx is not None:
        dropped.discard(label_idx)
    feature_idx = [j for j in range(len(columns)) if j != label_idx and j not in dropped]
    if not feature_idx:
        raise ValueError(f"No feature columns left in {path}")

    raw = frame.to_numpy(dtype=object)
    points = np.empty((raw.shape[0], len(feature_idx)), dtype=np.float64)
    for out_j, j in enumerate(feature_idx):
        converted = pd.to_numeric(frame.iloc[:, j], errors="coerce").to_numpy(dtype=np.float64)
        bad = np.flatnonzero(np.isnan(converted) & (frame.iloc[:, j].str.lower() != "nan"))
        if bad.size:
            row = int(bad[0])
            raise ValueError(f"Non-numeric value {raw[row, j]!r} at row {row}, column {j} ({columns[j]})")
        points[:, out_j] = converted

    truth = None
    if label_idx is not None:
        labels = np.array([_parse_label(str(v), i, label_idx) for i, v in enumerate(raw[:, label_idx])])
        truth = GroundTruth(labels)

    names = tuple(columns[j] for j in feature_idx) if has_header else ()
    data = Dataset(points, feature_names=names)
    print_colored(f"Loaded {data.n} points x {data.d} features from {path}", Colors.INFO)
    if truth is not None:
        print_colored(f"Ground truth: {truth.outlier_count} outliers", Colors.INFO)
    return data, truth

def min_max_scale(data: Dataset) -> Dataset:
    """Map every feature affinely onto [0, 1]; constant features become 0."""
    pts = data.points
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    scaled = np.zeros_like(pts)
    varying = span > 0
    scaled[:, varying] = (pts[:, varying] - lo[varying]) / span[varying]
    return Dataset(scaled, feature_names=data.feature_names)

def read_table(path: str, has_header: bool = True) -> pd.DataFrame:
    """Read a CSV as strings, rejecting empty and ragged files."""
    text = read_text_file(path)
    if not text.strip():
        raise ValueError(f"no rows in {path}")
    try:
        frame = pd.read_csv(io.StringIO(text), header=0 if has_header else None, dtype=str,
                            keep_default_na=False, skip_blank_lines=True, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ValueError(f"no rows in {path}")
    except pd.errors.ParserError as e:
        raise ValueError(f"Ragged rows in {path}: {e}")
    if frame.shape[0] == 0:
        raise ValueError(f"no rows in {path}")
    # short rows come back as NaN or empty cells
    missing = (frame.isna() | (frame == "")).to_numpy()
    if missing.any():
        row, col = np.argwhere(missing)[0]
        raise ValueError(f"Missing value at row {row}, column {col} in {path} (ragged row or empty cell)")
    frame.columns = [str(c) for c in frame.columns]
    return frame

def load_labels(path: str, column: Union[str, int] = "label", has_header: bool = True) -> GroundTruth:
    """Read a single 0/1 column (1 = outlier) as GroundTruth."""
    frame = read_table(path, has_header)
    idx = _resolve_column(column, list(frame.columns), has_header)
    values = frame.iloc[:, idx].to_numpy(dtype=object)
    return GroundTruth(np.array([_parse_label(str(v), i, idx) for i, v in enumerate(values)], dtype=bool))
