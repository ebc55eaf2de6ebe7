"""Tabular parsing and column type inference.

A parsed column carries the raw text cells, the typed values, a missing
mask, and a (general, specific) type pair. The general type is implied by
the specific type: string/boolean are categorical, integer/decimal are
quantitative, datetime is temporal.

Type inference is deterministic: a specific type wins if at least 80% of
the non-missing cells parse as it, tested in the fixed precedence
boolean -> integer -> decimal -> datetime -> string. This precedence is a
documented stand-in; the upstream ecosystem's exact rules are unpublished.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable

from ..errors import EmptyInputError, ParseError

GENERAL_TYPES = ("categorical", "quantitative", "temporal")
SPECIFIC_TYPES = ("string", "boolean", "integer", "decimal", "datetime")

GENERAL_OF_SPECIFIC = {
    "string": "categorical",
    "boolean": "categorical",
    "integer": "quantitative",
    "decimal": "quantitative",
    "datetime": "temporal",
}

TYPE_THRESHOLD = 0.8

# Closed list; matched case-insensitively after stripping whitespace.
MISSING_TOKENS = frozenset({"", "na", "nan", "null"})

_TRUE_TOKENS = frozenset({"true", "yes"})
_FALSE_TOKENS = frozenset({"false", "no"})
_INT_RE = re.compile(r"[+-]?\d+\Z")
_NONFINITE = frozenset({"inf", "-inf", "+inf", "infinity", "-infinity", "+infinity"})

# ISO-8601 first, then the fixed list of common formats. No locale guessing.
_DATETIME_FORMATS = (
    "%Y-%m-%d",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M:%S.%f",
    "%Y-%m-%d %H:%M:%S.%f",
    "%Y-%m-%dT%H:%M:%SZ",
    "%Y/%m/%d",
    "%m/%d/%Y",
    "%m/%d/%y",
    "%d %b %Y",
    "%d %B %Y",
    "%b %d, %Y",
    "%B %d, %Y",
)


def is_missing_token(cell: str) -> bool:
    return cell.strip().lower() in MISSING_TOKENS


def parse_boolean(cell: str) -> bool | None:
    token = cell.strip().lower()
    if token in _TRUE_TOKENS:
        return True
    if token in _FALSE_TOKENS:
        return False
    return None


def parse_integer(cell: str) -> int | None:
    token = cell.strip()
    if _INT_RE.match(token):
        return int(token)
    return None


def parse_decimal(cell: str) -> float | None:
    token = cell.strip()
    if not token or token.lower() in _NONFINITE:
        return None
    try:
        value = float(token)
    except ValueError:
        return None
    if value != value:  # NaN literal slipped through
        return None
    return value


def parse_datetime(cell: str) -> datetime | None:
    token = cell.strip()
    if not token or token[:1] in "+-" or _INT_RE.match(token):
        return None
    for fmt in _DATETIME_FORMATS:
        try:
            parsed = datetime.strptime(token, fmt)
        except ValueError:
            continue
        return parsed
    try:
        parsed = datetime.fromisoformat(token)
    except ValueError:
        return None
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(timezone.utc).replace(tzinfo=None)
    return parsed


_PARSERS = {
    "boolean": parse_boolean,
    "integer": parse_integer,
    "decimal": parse_decimal,
    "datetime": parse_datetime,
    "string": lambda cell: cell,
}


def infer_column_type(raw_values: Iterable[str]) -> tuple[str, str]:
    """Infer the (general, specific) type of a column of text cells.

    Total and deterministic: empty or all-missing columns default to
    (categorical, string).
    """
    cells = [c for c in raw_values if not is_missing_token(c)]
    if not cells:
        return "categorical", "string"
    n = len(cells)
    for specific in ("boolean", "integer", "decimal", "datetime"):
        parser = _PARSERS[specific]
        hits = sum(1 for c in cells if parser(c) is not None)
        if specific == "boolean" and hits < n:
            # 0/1 count as booleans only when the column is exactly two-valued
            # on those tokens; otherwise binary integer data would be mislabeled.
            distinct = {c.strip() for c in cells}
            if distinct == {"0", "1"}:
                hits = n
        if hits >= TYPE_THRESHOLD * n:
            return GENERAL_OF_SPECIFIC[specific], specific
    return "categorical", "string"


@dataclass(frozen=True)
class Column:
    """One typed column: raw cells, parsed values, and a missing mask."""

    name: str
    raw_values: tuple[str, ...]
    parsed_values: tuple
    general_type: str
    specific_type: str
    missing_mask: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.raw_values) == len(self.parsed_values) == len(self.missing_mask)):
            raise ValueError("raw values, parsed values and missing mask must align")
        if GENERAL_OF_SPECIFIC.get(self.specific_type) != self.general_type:
            raise ValueError(f"specific type {self.specific_type!r} does not imply {self.general_type!r}")

    def __len__(self) -> int:
        return len(self.raw_values)

    @property
    def present_values(self) -> list:
        """Parsed values with missing cells dropped."""
        return [v for v, m in zip(self.parsed_values, self.missing_mask) if not m]

    @property
    def num_missing(self) -> int:
        return sum(self.missing_mask)


def build_column(name: str, raw_values: Iterable[str]) -> Column:
    """Type a column and parse its cells; unparseable cells become missing."""
    raw = tuple(str(c) for c in raw_values)
    general, specific = infer_column_type(raw)
    parser = _PARSERS[specific]
    parsed = []
    missing = []
    two_valued_01 = specific == "boolean" and {c.strip() for c in raw if not is_missing_token(c)} <= {"0", "1"}
    for cell in raw:
        if is_missing_token(cell):
            parsed.append(None)
            missing.append(True)
            continue
        if two_valued_01:
            value = {"0": False, "1": True}.get(cell.strip())
        else:
            value = parser(cell)
        if value is None:
            parsed.append(None)
            missing.append(True)
        else:
            parsed.append(value)
            missing.append(False)
    return Column(name, raw, tuple(parsed), general, specific, tuple(missing))


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of equal-length columns."""

    id: str
    columns: tuple[Column, ...]
    row_count: int = field(default=-1)

    def __post_init__(self):
        if self.row_count < 0:
            object.__setattr__(self, "row_count", len(self.columns[0]) if self.columns else 0)
        for col in self.columns:
            if len(col) != self.row_count:
                raise ValueError(f"column {col.name!r} has {len(col)} rows, expected {self.row_count}")

    @property
    def num_columns(self) -> int:
        return len(self.columns)

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]


def _cell_to_text(value) -> str:
    """Canonical text form of a JSON cell or a parsed value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            return ""
        return repr(value)
    if isinstance(value, datetime):
        return value.isoformat(sep="T")
    return str(value)


def dataset_from_cells(dataset_id: str, named_columns: list[tuple[str, list]]) -> Dataset:
    """Build a Dataset from (name, cell list) pairs.

    Cells may be arbitrary JSON scalars; they are canonically stringified
    before type inference. Ragged columns are padded with missing cells to
    the longest column.
    """
    if not named_columns:
        raise EmptyInputError(f"dataset {dataset_id!r} has no columns")
    length = max(len(cells) for _, cells in named_columns)
    columns = []
    for name, cells in named_columns:
        text = [_cell_to_text(c) for c in cells]
        text.extend([""] * (length - len(text)))
        columns.append(build_column(str(name), text))
    return Dataset(dataset_id, tuple(columns))


def parse_table(content: bytes | str, format: str = "csv", dataset_id: str = "dataset") -> Dataset:
    """Parse raw file content into a typed Dataset.

    Supported formats: ``csv`` (RFC-4180 with header row, UTF-8) and
    ``corpus-record`` (one JSON record document; its ``data`` object is
    parsed, its ``fid`` becomes the dataset id).
    """
    if isinstance(content, bytes):
        content = content.decode("utf-8")
    if format == "csv":
        return _parse_csv(content, dataset_id)
    if format == "corpus-record":
        from .corpus import parse_record  # local import to avoid a cycle

        return parse_record(content).data
    raise ValueError(f"unknown format {format!r}")


def _parse_csv(content: str, dataset_id: str) -> Dataset:
    reader = csv.reader(io.StringIO(content))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInputError("empty CSV: no header row") from None
    except csv.Error as exc:
        raise ParseError(str(exc), line=1) from None
    if not header or all(h == "" for h in header):
        raise EmptyInputError("CSV header declares zero columns")
    cells: list[list[str]] = [[] for _ in header]
    try:
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} cells, found {len(row)}", line=line_no)
            for i, cell in enumerate(row):
                cells[i].append(cell)
    except csv.Error as exc:
        raise ParseError(str(exc), line=reader.line_num) from None
    columns = tuple(build_column(name, col_cells) for name, col_cells in zip(header, cells))
    return Dataset(dataset_id, columns)


def serialize_table(dataset: Dataset) -> str:
    """Write a Dataset back to CSV so that ``parse_table`` round-trips it."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(dataset.column_names())
    for i in range(dataset.row_count):
        writer.writerow(
            ""
            if col.missing_mask[i]
            else _serialize_value(col.parsed_values[i])
            for col in dataset.columns
        )
    return out.getvalue()


def _serialize_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return value.isoformat(sep="T")
    if isinstance(value, float):
        return repr(value)
    return str(value)
