"""Serialization: schema-checked case-series CSV input, atomic CSV/JSON output.

Floats are written with 17 significant digits so every value round-trips
exactly; files are written to a temporary sibling and atomically renamed, so
a failing command never leaves a partial file behind.
"""

from __future__ import annotations

import csv
import datetime
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .calibrate import ObservedSeries
from .errors import DataError

CASE_SERIES_HEADER = ("date", "new_confirmed")


def format_float(value: float) -> str:
    return f"{float(value):.17g}"


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def _atomic_write(path: Path, writer) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    def writer(fh):
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")

    _atomic_write(Path(path), writer)


def write_json(path, payload: dict) -> None:
    def writer(fh):
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")

    _atomic_write(Path(path), writer)


def read_case_series(path) -> ObservedSeries:
    """Parse a ``date,new_confirmed`` CSV into an ObservedSeries.

    Dates must be valid ISO-8601 calendar dates advancing by exactly one day;
    counts must be nonnegative numbers (observed series carry integers, but
    exact decimal counts are accepted so synthetic round trips stay lossless).
    Violations raise DataError carrying the 1-based line number.
    """
    path = Path(path)
    counts: list[float] = []
    start: datetime.date | None = None
    previous: datetime.date | None = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("file is empty; expected a header row", line=1) from None
        if tuple(h.strip() for h in header) != CASE_SERIES_HEADER:
            raise DataError(
                f"header must be {','.join(CASE_SERIES_HEADER)!r}, got {','.join(header)!r}",
                line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"expected 2 fields, got {len(row)}", line=line_no)
            date_text, count_text = row[0].strip(), row[1].strip()
            try:
                date = datetime.date.fromisoformat(date_text)
            except ValueError:
                raise DataError(f"invalid ISO date {date_text!r}", line=line_no) from None
            if previous is not None and date != previous + datetime.timedelta(days=1):
                raise DataError(
                    f"dates must advance by exactly one day; {date.isoformat()} "
                    f"follows {previous.isoformat()}", line=line_no)
            try:
                count = float(count_text)
            except ValueError:
                raise DataError(f"count must be a number, got {count_text!r}",
                                line=line_no) from None
            if not 0.0 <= count < float("inf"):
                raise DataError(f"count must be finite and nonnegative, got {count_text}",
                                line=line_no)
            if start is None:
                start = date
            previous = date
            counts.append(count)
    if not counts:
        raise DataError("no data rows found")
    return ObservedSeries(counts=np.array(counts), start_date=start)


def write_case_series(path, series: ObservedSeries) -> None:
    """Inverse of :func:`read_case_series`; counts round-trip exactly."""
    start = series.start_date or datetime.date(2020, 1, 1)
    rows = [((start + datetime.timedelta(days=i)).isoformat(),
             int(c) if float(c).is_integer() else c)
            for i, c in enumerate(series.counts)]
    write_csv(path, CASE_SERIES_HEADER, rows)
