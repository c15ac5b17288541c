"""Monthly time-series container, CSV ingestion and the seasonal pivot."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import IngestError, ParseError, UnsupportedFrequencyError

MONTH_NAMES = ("January", "February", "March", "April", "May", "June", "July",
               "August", "September", "October", "November", "December")

_PERIOD_RE = re.compile(r"^\s*(\d{4})-(\d{1,2})\s*$")
MAX_YEAR = 9999


@dataclass(frozen=True, order=True)
class Period:
    """A calendar year-month."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ParseError(f"month out of range in {self.year}-{self.month}")

    @classmethod
    def parse(cls, text: str) -> "Period":
        m = _PERIOD_RE.match(text)
        if m is None:
            raise ParseError(f"cannot parse period {text!r}; expected YYYY-MM")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def ordinal(self) -> int:
        return self.year * 12 + (self.month - 1)

    @classmethod
    def from_ordinal(cls, n: int) -> "Period":
        return cls(n // 12, n % 12 + 1)

    def __add__(self, months: int) -> "Period":
        return Period.from_ordinal(self.ordinal + int(months))

    def __sub__(self, other: "Period") -> int:
        return self.ordinal - other.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


class TimeSeries:
    """Immutable sequence of observations indexed by consecutive periods.

    Observation ``i`` belongs to period ``start + i`` (months).  ``frequency``
    is the number of observations per seasonal cycle.
    """

    __slots__ = ("_start", "_values", "_frequency")

    def __init__(self, start, values: Iterable[float], frequency: int = 12):
        if isinstance(start, str):
            start = Period.parse(start)
        arr = np.array(values, dtype=float).ravel()
        if arr.size == 0:
            raise IngestError("time series must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise IngestError("time series contains missing or non-finite values")
        if int(frequency) < 1:
            raise UnsupportedFrequencyError(f"frequency must be >= 1, got {frequency}")
        arr.flags.writeable = False
        self._start = start
        self._values = arr
        self._frequency = int(frequency)

    @property
    def start(self) -> Period:
        return self._start

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def frequency(self) -> int:
        return self._frequency

    @property
    def end(self) -> Period:
        return self._start + (len(self) - 1)

    def __len__(self) -> int:
        return self._values.size

    def period(self, i: int) -> Period:
        return self._start + i

    def periods(self) -> list[Period]:
        return [self._start + i for i in range(len(self))]

    def head(self, n: int) -> "TimeSeries":
        return TimeSeries(self._start, self._values[:n], self._frequency)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (self._start == other._start and self._frequency == other._frequency
                and np.array_equal(self._values, other._values))

    def __hash__(self):
        return hash((self._start, self._frequency, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"TimeSeries(start={self._start}, n={len(self)}, frequency={self._frequency})"


def _parse_value(text: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"line {lineno}: non-numeric value {text!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"line {lineno}: missing or non-finite value {text!r}")
    return value


def ingest_csv(text) -> TimeSeries:
    """Parse ``period,value`` CSV text (or an open text stream).

    One header line is required.  Periods must be strictly consecutive
    months; a gap or repeated period raises :class:`IngestError` naming the
    offending row.
    """
    if not isinstance(text, str):
        text = text.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise IngestError("CSV must have a header line and at least one data row")
    start = None
    prev = None
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"line {lineno}: expected 2 fields, got {len(row)}")
        period = Period.parse(row[0])
        if prev is not None:
            step = period - prev
            if step == 0 or step < 0:
                raise IngestError(f"line {lineno}: duplicate or out-of-order period {period}")
            if step > 1:
                raise IngestError(f"line {lineno}: gap at {prev + 1}")
        else:
            start = period
        values.append(_parse_value(row[1], lineno))
        prev = period
    return TimeSeries(start, values, 12)


def read_csv(path) -> TimeSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        return ingest_csv(fh)


def format_value(v: float) -> str:
    """Shortest repr that round-trips, without a trailing ``.0`` on integers."""
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def emit_csv(ts: TimeSeries, value_header: str = "value") -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["period", value_header])
    for i, v in enumerate(ts.values):
        writer.writerow([str(ts.period(i)), format_value(v)])
    return out.getvalue()


def emit_rows(periods: Sequence[Period], values: Sequence[float], value_header: str) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["period", value_header])
    for p, v in zip(periods, values):
        writer.writerow([str(p), format_value(v)])
    return out.getvalue()


@dataclass(frozen=True)
class SeasonalPivot:
    """Calendar-year by month table of a monthly series.

    ``cells[r][m]`` is the observation for year ``years[r]`` and month
    ``m + 1``, or ``None`` where the series does not cover that month.
    """

    years: tuple
    cells: tuple

    def column_means(self) -> list[float]:
        means = []
        for m in range(12):
            col = [row[m] for row in self.cells if row[m] is not None]
            means.append(sum(col) / len(col) if col else math.nan)
        return means

    def peak_month(self) -> int:
        """1-based month with the largest column mean (earliest on ties)."""
        means = self.column_means()
        best = None
        for m, v in enumerate(means):
            if math.isnan(v):
                continue
            if best is None or v > means[best]:
                best = m
        return best + 1

    def trough_month(self) -> int:
        means = self.column_means()
        best = None
        for m, v in enumerate(means):
            if math.isnan(v):
                continue
            if best is None or v < means[best]:
                best = m
        return best + 1

    def cell(self, year: int, month: int) -> Optional[float]:
        return self.cells[self.years.index(year)][month - 1]


def seasonal_pivot(ts: TimeSeries) -> SeasonalPivot:
    if ts.frequency != 12:
        raise UnsupportedFrequencyError(
            f"seasonal pivot needs monthly data (frequency 12), got {ts.frequency}")
    first, last = ts.start.year, ts.end.year
    grid = [[None] * 12 for _ in range(last - first + 1)]
    for i, v in enumerate(ts.values):
        p = ts.period(i)
        grid[p.year - first][p.month - 1] = float(v)
    return SeasonalPivot(years=tuple(range(first, last + 1)),
                         cells=tuple(tuple(row) for row in grid))
