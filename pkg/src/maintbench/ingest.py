"""Dataset loading, target resolution, preprocessing, and fold planning.

Two on-disk formats are supported: the ARFF subset used by the PROMISE
metric tables (@relation / @attribute numeric-or-nominal / @data, '%'
comments, '?' missing markers) and plain comma-separated CSV with a header
row. Every destructive preprocessing action is recorded in the dataset's
provenance log, one line per action:

    DROP_ROW <index> <reason>
    DROP_COL <name> <reason>
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._rng import substream
from .mi import MiInputs, compute_mi

NUMERIC = "numeric"
NOMINAL = "nominal"

TARGET_CHANGE = "CHANGE"
TARGET_MI = "MI"

# Default column names for deriving an MI target; case-insensitive match,
# overridable per dataset (NASA mirrors disagree on naming).
DEFAULT_MI_COLUMN_MAP = {
    "volume": "HALSTEAD_VOLUME",
    "cyclomatic": "CYCLOMATIC_COMPLEXITY",
    "loc": "LOC_TOTAL",
}


class TableFormatError(ValueError):
    """The file does not conform to the supported ARFF/CSV subset."""


class MissingColumnError(ValueError):
    """A column required by the target scheme is absent."""


class EmptyDatasetError(ValueError):
    """Preprocessing removed every row or every column."""


@dataclass
class RawTable:
    """A parsed table, values untouched: floats, nominal strings, or None."""

    name: str
    columns: list[tuple[str, str]]  # (name, NUMERIC | NOMINAL)
    rows: list[tuple]

    @property
    def column_names(self) -> list[str]:
        return [name for name, _ in self.columns]

    def n_rows(self) -> int:
        return len(self.rows)


@dataclass
class Dataset:
    """Numeric feature matrix plus a resolved prediction target.

    ``features`` may contain NaN for missing cells until ``preprocess``
    runs; afterwards everything is finite.
    """

    name: str
    features: np.ndarray
    feature_names: list[str]
    target: np.ndarray
    target_kind: str  # TARGET_CHANGE | TARGET_MI
    provenance: list[str] = field(default_factory=list)

    @property
    def n_instances(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each instance to one of k folds; sizes differ by <= 1."""

    k: int
    assignments: np.ndarray

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)


@dataclass(frozen=True)
class PreprocessOptions:
    drop_missing: bool = True
    minmax_normalize: bool = True
    drop_zero_variance: bool = True


def _parse_numeric(cell: str, line_no: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise TableFormatError(
            f"line {line_no}: cell {cell!r} in numeric column {column!r} is not a number"
        ) from None
    if not math.isfinite(value):
        raise TableFormatError(
            f"line {line_no}: cell {cell!r} in numeric column {column!r} is not finite"
        )
    return value


def _load_arff(path: Path) -> RawTable:
    relation = path.stem
    columns: list[tuple[str, str]] = []
    rows: list[tuple] = []
    in_data = False
    with path.open("r", encoding="utf-8") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            line = raw_line.strip()
            if not line or line.startswith("%"):
                continue
            if not in_data and line.lower().startswith("@relation"):
                parts = line.split(None, 1)
                if len(parts) == 2:
                    relation = parts[1].strip().strip("'\"")
                continue
            if not in_data and line.lower().startswith("@attribute"):
                parts = line.split(None, 2)
                if len(parts) != 3:
                    raise TableFormatError(f"line {line_no}: malformed @attribute declaration")
                name = parts[1].strip().strip("'\"")
                type_spec = parts[2].strip()
                if type_spec.startswith("{"):
                    kind = NOMINAL
                elif type_spec.lower() in ("numeric", "real", "integer"):
                    kind = NUMERIC
                else:
                    raise TableFormatError(
                        f"line {line_no}: unsupported attribute type {type_spec!r} "
                        "(only numeric and nominal attributes are handled)"
                    )
                columns.append((name, kind))
                continue
            if line.lower().startswith("@data"):
                if not columns:
                    raise TableFormatError(f"line {line_no}: @data before any @attribute")
                in_data = True
                continue
            if not in_data:
                raise TableFormatError(f"line {line_no}: unexpected content before @data: {line!r}")
            cells = [cell.strip().strip("'\"") for cell in line.split(",")]
            if len(cells) != len(columns):
                raise TableFormatError(
                    f"line {line_no}: row has {len(cells)} cells, header declares {len(columns)}"
                )
            row = []
            for cell, (col_name, kind) in zip(cells, columns):
                if cell == "?":
                    row.append(None)
                elif kind == NUMERIC:
                    row.append(_parse_numeric(cell, line_no, col_name))
                else:
                    row.append(cell)
            rows.append(tuple(row))
    if not columns:
        raise TableFormatError(f"{path}: no @attribute declarations found")
    return RawTable(name=relation, columns=columns, rows=rows)


def _load_csv(path: Path) -> RawTable:
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise TableFormatError(f"{path}: empty file; a header row is required") from None
        header = [name.strip() for name in header]
        if any(not name for name in header):
            raise TableFormatError(f"{path}: header contains an empty column name")
        raw_rows: list[list[str | None]] = []
        for cells in reader:
            if not cells:
                continue
            if len(cells) != len(header):
                raise TableFormatError(
                    f"line {reader.line_num}: row has {len(cells)} cells, "
                    f"header declares {len(header)}"
                )
            raw_rows.append(
                [None if cell.strip() in ("", "?") else cell.strip() for cell in cells]
            )

    # A column is numeric when every present cell parses as a finite float.
    kinds = []
    for j, name in enumerate(header):
        numeric = True
        for cells in raw_rows:
            cell = cells[j]
            if cell is None:
                continue
            try:
                if not math.isfinite(float(cell)):
                    numeric = False
                    break
            except ValueError:
                numeric = False
                break
        kinds.append(NUMERIC if numeric else NOMINAL)

    rows = []
    for cells in raw_rows:
        row = []
        for cell, kind in zip(cells, kinds):
            if cell is None:
                row.append(None)
            elif kind == NUMERIC:
                row.append(float(cell))
            else:
                row.append(cell)
        rows.append(tuple(row))
    return RawTable(name=path.stem, columns=list(zip(header, kinds)), rows=rows)


def load_table(path: str | Path, format: str | None = None) -> RawTable:
    """Parse an ARFF or CSV file into a RawTable.

    ``format`` is "arff" or "csv"; when None it is inferred from the file
    extension.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    if format is None:
        format = path.suffix.lower().lstrip(".")
    if format == "arff":
        return _load_arff(path)
    if format == "csv":
        return _load_csv(path)
    raise ValueError(f"unknown table format {format!r}; expected 'arff' or 'csv'")


def _find_column(raw: RawTable, wanted: str) -> int:
    for i, (name, _) in enumerate(raw.columns):
        if name.lower() == wanted.lower():
            return i
    raise MissingColumnError(
        f"dataset {raw.name!r} has no column named {wanted!r} "
        f"(available: {', '.join(raw.column_names)})"
    )


def _numeric_matrix(raw: RawTable, column_indices: list[int]) -> np.ndarray:
    out = np.empty((raw.n_rows(), len(column_indices)))
    for r, row in enumerate(raw.rows):
        for c, j in enumerate(column_indices):
            cell = row[j]
            out[r, c] = np.nan if cell is None else float(cell)
    return out


def resolve_target(
    raw: RawTable,
    scheme: str,
    mi_variant: str = "visual_studio",
    column_map: dict[str, str] | None = None,
) -> Dataset:
    """Build a Dataset by designating (or deriving) the prediction target.

    ``change_column`` uses the CHANGE column directly. ``mi_from_columns``
    computes a maintainability index per row from the Halstead-volume,
    cyclomatic-complexity, and LOC columns named in ``column_map`` (the
    source columns define the target and are excluded from the features).
    Nominal columns cannot enter a numeric feature matrix and are dropped
    with a provenance entry.
    """
    provenance: list[str] = []
    nominal = [name for name, kind in raw.columns if kind == NOMINAL]

    if scheme == "change_column":
        target_idx = _find_column(raw, TARGET_CHANGE)
        if raw.columns[target_idx][1] != NUMERIC:
            raise TableFormatError(f"CHANGE column in {raw.name!r} is not numeric")
        excluded = {target_idx}
        target = _numeric_matrix(raw, [target_idx])[:, 0]
        target_kind = TARGET_CHANGE
    elif scheme == "mi_from_columns":
        mapping = dict(DEFAULT_MI_COLUMN_MAP)
        if column_map:
            mapping.update(column_map)
        idx = {key: _find_column(raw, name) for key, name in mapping.items() if name}
        for key in ("volume", "cyclomatic", "loc"):
            if key not in idx:
                raise MissingColumnError(f"MI column map is missing the {key!r} column name")
        source = _numeric_matrix(raw, [idx["volume"], idx["cyclomatic"], idx["loc"]])
        comments = None
        if "comment_fraction" in idx:
            comments = _numeric_matrix(raw, [idx["comment_fraction"]])[:, 0]
        target = np.empty(raw.n_rows())
        for r in range(raw.n_rows()):
            v, g, loc = source[r]
            c = None if comments is None else comments[r]
            if np.isnan(v) or np.isnan(g) or np.isnan(loc) or (c is not None and np.isnan(c)):
                target[r] = np.nan
                continue
            try:
                target[r] = compute_mi(
                    MiInputs(volume=v, cyclomatic=g, loc=loc, comment_fraction=c),
                    mi_variant,
                ).value
            except ValueError as exc:
                raise type(exc)(f"row {r} of {raw.name!r}: {exc}") from exc
        excluded = set(idx.values())
        target_kind = TARGET_MI
    else:
        raise ValueError(
            f"unknown target scheme {scheme!r}; expected 'change_column' or 'mi_from_columns'"
        )

    feature_indices = [
        i
        for i, (name, kind) in enumerate(raw.columns)
        if i not in excluded and kind == NUMERIC
    ]
    for name in nominal:
        if _find_column(raw, name) not in excluded:
            provenance.append(f"DROP_COL {name} nominal_column")
    features = _numeric_matrix(raw, feature_indices)
    return Dataset(
        name=raw.name,
        features=features,
        feature_names=[raw.columns[i][0] for i in feature_indices],
        target=target,
        target_kind=target_kind,
        provenance=provenance,
    )


def preprocess(data: Dataset, options: PreprocessOptions = PreprocessOptions()) -> Dataset:
    """Clean a Dataset: drop incomplete rows, drop constant columns, rescale.

    Idempotent for fixed options. Constant columns are removed whenever
    min-max normalization is requested even if ``drop_zero_variance`` is
    off, because normalizing a constant column is undefined.
    """
    features = data.features.copy()
    target = data.target.copy()
    names = list(data.feature_names)
    provenance = list(data.provenance)

    if options.drop_missing:
        missing = np.isnan(features).any(axis=1) | np.isnan(target)
        for i in np.flatnonzero(missing):
            provenance.append(f"DROP_ROW {int(i)} missing_value")
        features = features[~missing]
        target = target[~missing]
        if features.shape[0] == 0:
            raise EmptyDatasetError(f"{data.name}: every row was dropped (all had missing values)")
    elif np.isnan(features).any() or np.isnan(target).any():
        raise ValueError(
            f"{data.name}: missing values present but drop_missing is disabled; "
            "no imputation is provided"
        )

    if options.drop_zero_variance or options.minmax_normalize:
        spans = features.max(axis=0) - features.min(axis=0) if features.size else np.array([])
        constant = spans == 0.0
        for j in np.flatnonzero(constant):
            provenance.append(f"DROP_COL {names[int(j)]} zero_variance")
        keep = ~constant
        features = features[:, keep]
        names = [n for n, k in zip(names, keep) if k]
        if features.shape[1] == 0:
            raise EmptyDatasetError(f"{data.name}: every feature column was dropped")

    if options.minmax_normalize and features.shape[0] > 0:
        lo = features.min(axis=0)
        span = features.max(axis=0) - lo
        features = (features - lo) / span

    if features.shape[0] < 2:
        raise EmptyDatasetError(
            f"{data.name}: fewer than 2 rows remain after preprocessing"
        )
    return replace(
        data,
        features=features,
        feature_names=names,
        target=target,
        provenance=provenance,
    )


def default_fold_count(n_instances: int) -> int:
    """10-fold for comfortably sized data, 5-fold for small tables."""
    return 10 if n_instances >= 100 else 5


def kfold_split(n: int, k: int, seed: int) -> FoldPlan:
    """Shuffle instances and deal them round-robin into k folds."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got k={k}")
    if k > n:
        raise ValueError(f"cannot split {n} instances into {k} folds")
    rng = substream(seed, "kfold", n, k)
    assignments = np.empty(n, dtype=np.int64)
    assignments[rng.permutation(n)] = np.arange(n) % k
    return FoldPlan(k=k, assignments=assignments)
