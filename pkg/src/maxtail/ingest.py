"""Reading one numeric column from a CSV file or standard input.

Rows are parsed with the :mod:`csv` module (RFC 4180 quoting). Lines whose
first character is ``#`` are comments; a comment of the form
``# maxtail.simulate: {json}`` records the generator config of a simulated
series and is returned with the data. A header row is optional: it is
detected when the selected field of the first data row is not a number, or
forced with ``header=True``.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import IngestionError, InsufficientDataError
from .spectrum import StreamState

__all__ = ["IngestSpec", "Column", "read_column", "stream_column", "SIMULATE_TAG"]

SIMULATE_TAG = "maxtail.simulate:"
POLICIES = ("error", "drop")


@dataclass(frozen=True)
class IngestSpec:
    path: str = "-"
    column: str | int = 0
    delimiter: str = ","
    skip_rows: int = 0
    header: bool | None = None
    positivity: str = "error"

    def __post_init__(self):
        if self.positivity not in POLICIES:
            raise IngestionError(f"positivity policy must be one of {POLICIES}")
        if len(self.delimiter) != 1:
            raise IngestionError("delimiter must be a single character")
        if self.skip_rows < 0:
            raise IngestionError("skip_rows must be >= 0")


@dataclass
class Column:
    """Values of the selected column plus bookkeeping for the report."""

    values: np.ndarray
    name: str | None
    rows_read: int = 0
    dropped: int = 0
    source_config: dict | None = None
    comments: list = field(default_factory=list)


def _selector(spec: IngestSpec):
    c = spec.column
    if isinstance(c, int):
        return c, None
    s = str(c)
    if s.lstrip("-").isdigit():
        return int(s), None
    return None, s


def _open(path):
    if path in (None, "-"):
        return sys.stdin, False
    try:
        return open(path, newline="", encoding="utf-8"), True
    except OSError as exc:
        raise IngestionError(f"cannot open {path}: {exc.strerror}") from None


def _records(handle, delimiter, comments):
    """Yield (line_number, fields) per CSV record, skipping comments and blank lines."""
    pos = [0]

    def lines():
        for lineno, line in enumerate(handle, start=1):
            pos[0] = lineno
            if line.startswith("#"):
                comments.append(line[1:].strip())
                continue
            if not line.strip():
                continue
            yield line

    for rec in csv.reader(lines(), delimiter=delimiter):
        yield pos[0], rec


def _parse_number(text):
    try:
        return float(text)
    except ValueError:
        return None


def _iter_values(spec: IngestSpec, state: dict):
    """Yield (row, value) for every data row, applying the positivity policy."""
    index, name = _selector(spec)
    handle, owned = _open(spec.path)
    try:
        recs = _records(handle, spec.delimiter, state["comments"])
        for _ in range(spec.skip_rows):
            if next(recs, None) is None:
                break
        first = next(recs, None)
        if first is None:
            return
        lineno, rec = first
        header = spec.header
        if name is not None:
            if header is False:
                raise IngestionError(f"column {name!r} given by name but the input has no header")
            header = True
            stripped = [h.strip() for h in rec]
            if name not in stripped:
                raise IngestionError(f"column {name!r} not found in header {stripped}", row=lineno)
            index = stripped.index(name)
            state["name"] = name
        elif header is None:
            header = index < len(rec) and _parse_number(rec[index]) is None
            if header:
                state["name"] = rec[index].strip()
        elif header:
            state["name"] = rec[index].strip() if index < len(rec) else None
        col_label = state["name"] if state["name"] is not None else index
        if not header:
            recs = _chain(first, recs)
        for lineno, rec in recs:
            state["rows"] += 1
            try:
                text = rec[index]
            except IndexError:
                raise IngestionError(
                    f"row {lineno}: column {col_label} missing ({len(rec)} fields)", row=lineno, column=col_label
                ) from None
            v = _parse_number(text)
            if v is None or not math.isfinite(v):
                raise IngestionError(
                    f"row {lineno}, column {col_label}: {text!r} is not a finite number", row=lineno, column=col_label
                )
            if not (v > 0):
                if spec.positivity == "drop":
                    state["dropped"] += 1
                    continue
                raise IngestionError(
                    f"row {lineno}, column {col_label}: value {text.strip()} is not positive", row=lineno, column=col_label
                )
            yield lineno, v
    finally:
        if owned:
            handle.close()


def _chain(first, rest):
    yield first
    yield from rest


def _source_config(comments):
    for c in comments:
        if c.startswith(SIMULATE_TAG):
            try:
                return json.loads(c[len(SIMULATE_TAG):])
            except json.JSONDecodeError:
                return None
    return None


def _new_state():
    return {"comments": [], "name": None, "rows": 0, "dropped": 0}


def _column(values, state, min_count=2):
    if values.shape[0] < min_count:
        raise InsufficientDataError(f"column yields {values.shape[0]} positive values, need at least {min_count}")
    return Column(values, state["name"], state["rows"], state["dropped"], _source_config(state["comments"]), state["comments"])


def read_column(spec: IngestSpec) -> Column:
    state = _new_state()
    values = np.fromiter((v for _, v in _iter_values(spec, state)), dtype=np.float64)
    return _column(values, state)


def stream_column(spec: IngestSpec, chunk: int = 65536):
    """Feed the column through a :class:`StreamState` in chunks.

    Returns ``(state, column)`` where ``column.values`` is empty: memory
    stays at one chunk plus the O(log n) state.
    """
    state = _new_state()
    st = StreamState()
    buf = []
    for _, v in _iter_values(spec, state):
        buf.append(v)
        if len(buf) == chunk:
            st.extend(buf)
            buf.clear()
    if buf:
        st.extend(buf)
    if st.total_count < 2:
        raise InsufficientDataError(f"column yields {st.total_count} positive values, need at least 2")
    return st, _column(np.empty(0), state, min_count=0)
