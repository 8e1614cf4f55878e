"""Panel ingestion: CSV loading, annual-to-quarterly interpolation, alignment.

Quarterly periods are strings ``YYYYQn`` (n in 1..4), annual periods are
``YYYY``. Internally quarters are mapped to an integer index (year*4 + q-1)
so continuity and intersection are plain integer arithmetic.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    AlignmentError,
    ContinuityError,
    InsufficientDataError,
    LabelMismatchError,
    SchemaError,
)

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")
_YEAR_RE = re.compile(r"^(\d{4})$")
_LABEL_RE = re.compile(r"^[A-Z][A-Z0-9]*$")


class VariableKind(Enum):
    GDP = "gdp"
    CPI = "cpi"


class Frequency(Enum):
    QUARTERLY = "quarterly"
    ANNUAL = "annual"


def quarter_index(period: str) -> int:
    """Map 'YYYYQn' to an integer where consecutive quarters differ by 1."""
    m = _QUARTER_RE.match(period)
    if m is None:
        raise SchemaError(f"malformed quarterly period {period!r} (expected YYYYQn)")
    year, q = int(m.group(1)), int(m.group(2))
    return year * 4 + (q - 1)


def quarter_label(index: int) -> str:
    """Inverse of :func:`quarter_index`."""
    return f"{index // 4}Q{index % 4 + 1}"


def _year_index(period: str) -> int:
    m = _YEAR_RE.match(period)
    if m is None:
        raise SchemaError(f"malformed annual period {period!r} (expected YYYY)")
    return int(m.group(1))


@dataclass(frozen=True)
class RawSeriesSet:
    """Raw per-country observations at a single frequency, pre-alignment."""

    variable_kind: VariableKind
    frequency: Frequency
    labels: tuple[str, ...]
    periods: tuple[str, ...]
    values: np.ndarray  # shape (len(periods), len(labels))

    def __post_init__(self):
        if len(self.labels) == 0:
            raise SchemaError("series set has no country columns")
        if len(set(self.labels)) != len(self.labels):
            raise SchemaError("duplicate country labels")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.periods), len(self.labels)):
            raise SchemaError(
                f"values shape {values.shape} does not match "
                f"{len(self.periods)} periods x {len(self.labels)} labels"
            )
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise SchemaError(
                f"non-finite value at period {self.periods[bad[0]]}, "
                f"country {self.labels[bad[1]]}"
            )
        _check_continuity(self.periods, self.frequency)
        object.__setattr__(self, "values", values)


def _check_continuity(periods, frequency: Frequency):
    if len(periods) == 0:
        raise SchemaError("no data rows")
    to_index = quarter_index if frequency is Frequency.QUARTERLY else _year_index
    idx = [to_index(p) for p in periods]
    for prev, cur, label in zip(idx, idx[1:], periods[1:]):
        if cur == prev:
            raise ContinuityError(f"duplicate period {label}")
        if cur != prev + 1:
            missing = (
                quarter_label(prev + 1)
                if frequency is Frequency.QUARTERLY
                else str(prev + 1)
            )
            raise ContinuityError(f"period gap: missing {missing} before {label}")


@dataclass(frozen=True)
class Panel:
    """Aligned quarterly GDP/CPI matrix pair over a common calendar."""

    labels: tuple[str, ...]
    quarters: tuple[str, ...]
    x: np.ndarray  # T x n, GDP
    y: np.ndarray  # T x n, CPI

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        T, n = len(self.quarters), len(self.labels)
        if x.shape != (T, n) or y.shape != (T, n):
            raise SchemaError(
                f"panel matrices must both be {T}x{n}; got {x.shape} and {y.shape}"
            )
        if T < 2 or n < 1:
            raise SchemaError(f"panel needs T >= 2 and n >= 1; got T={T}, n={n}")
        _check_continuity(self.quarters, Frequency.QUARTERLY)
        if len(set(self.labels)) != n:
            raise SchemaError("duplicate country labels")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def T(self) -> int:
        return len(self.quarters)

    @property
    def n(self) -> int:
        return len(self.labels)


def load_series_csv(path, kind: VariableKind, frequency: Frequency) -> RawSeriesSet:
    """Load one variable's CSV snapshot (header: period,<CODE1>,<CODE2>,...)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if len(header) < 2 or header[0] != "period":
            raise SchemaError(
                f"{path}: first header column must be 'period', got {header[:1]}"
            )
        labels = tuple(h.strip() for h in header[1:])
        for lab in labels:
            if not _LABEL_RE.match(lab):
                raise SchemaError(f"{path}: invalid country code column {lab!r}")
        periods = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(labels) + 1:
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(labels) + 1} cells, got {len(row)}"
                )
            periods.append(row[0].strip())
            parsed = []
            for lab, cell in zip(labels, row[1:]):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise SchemaError(
                        f"{path}:{lineno}: non-numeric value {cell!r} in column {lab}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return RawSeriesSet(
        variable_kind=kind,
        frequency=frequency,
        labels=labels,
        periods=tuple(periods),
        values=np.array(rows, dtype=float),
    )


def interpolate_annual_to_quarterly(
    annual: RawSeriesSet, anchor: int = 4
) -> RawSeriesSet:
    """Anchor each annual value at quarter `anchor` of its year and fill the
    quarters in between by linear interpolation. No extrapolation outside the
    first/last anchored quarter."""
    if annual.frequency is not Frequency.ANNUAL:
        raise SchemaError("input is not an annual series set")
    if anchor not in (1, 2, 3, 4):
        raise SchemaError(f"anchor quarter must be 1..4, got {anchor}")
    if len(annual.periods) < 2:
        raise InsufficientDataError(
            f"need at least 2 annual observations, got {len(annual.periods)}"
        )
    anchor_idx = np.array(
        [_year_index(p) * 4 + (anchor - 1) for p in annual.periods], dtype=int
    )
    out_idx = np.arange(anchor_idx[0], anchor_idx[-1] + 1)
    # np.interp is exact at the anchor points and piecewise linear between them
    out = np.column_stack(
        [np.interp(out_idx, anchor_idx, annual.values[:, j])
         for j in range(annual.values.shape[1])]
    )
    # reproduce anchored values bit-for-bit
    pos = anchor_idx - anchor_idx[0]
    out[pos, :] = annual.values
    return RawSeriesSet(
        variable_kind=annual.variable_kind,
        frequency=Frequency.QUARTERLY,
        labels=annual.labels,
        periods=tuple(quarter_label(i) for i in out_idx),
        values=out,
    )


def align_panel(gdp: RawSeriesSet, cpi: RawSeriesSet) -> Panel:
    """Align two quarterly series sets into a joint panel.

    Canonical label order is the GDP set's column order; the calendar is the
    intersection of the two period ranges.
    """
    if gdp.frequency is not Frequency.QUARTERLY or cpi.frequency is not Frequency.QUARTERLY:
        raise SchemaError("both series sets must be quarterly before alignment")
    gdp_set, cpi_set = set(gdp.labels), set(cpi.labels)
    if gdp_set != cpi_set:
        raise LabelMismatchError(gdp_set - cpi_set, cpi_set - gdp_set)

    gdp_idx = [quarter_index(p) for p in gdp.periods]
    cpi_idx = [quarter_index(p) for p in cpi.periods]
    lo = max(gdp_idx[0], cpi_idx[0])
    hi = min(gdp_idx[-1], cpi_idx[-1])
    if lo > hi:
        raise AlignmentError(
            f"no common quarters: GDP covers {gdp.periods[0]}..{gdp.periods[-1]}, "
            f"CPI covers {cpi.periods[0]}..{cpi.periods[-1]}"
        )
    labels = gdp.labels
    cpi_col = [cpi.labels.index(lab) for lab in labels]
    x = gdp.values[lo - gdp_idx[0] : hi - gdp_idx[0] + 1, :]
    y = cpi.values[lo - cpi_idx[0] : hi - cpi_idx[0] + 1, :][:, cpi_col]
    return Panel(
        labels=labels,
        quarters=tuple(quarter_label(i) for i in range(lo, hi + 1)),
        x=x,
        y=y,
    )


def panel_to_csv(panel: Panel, path) -> None:
    """Write a panel as one CSV (losslessly, via shortest round-trip decimals)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = (
            ["period"]
            + [f"GDP_{lab}" for lab in panel.labels]
            + [f"CPI_{lab}" for lab in panel.labels]
        )
        writer.writerow(header)
        for t, q in enumerate(panel.quarters):
            writer.writerow(
                [q]
                + [repr(float(v)) for v in panel.x[t]]
                + [repr(float(v)) for v in panel.y[t]]
            )


def panel_from_csv(path) -> Panel:
    """Read back a panel written by :func:`panel_to_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0] != "period":
            raise SchemaError(f"{path}: not a panel CSV (missing 'period' header)")
        ncol = len(header) - 1
        if ncol == 0 or ncol % 2 != 0:
            raise SchemaError(f"{path}: expected paired GDP_/CPI_ columns")
        n = ncol // 2
        labels = []
        for j in range(n):
            g, c = header[1 + j], header[1 + n + j]
            if not g.startswith("GDP_") or c != f"CPI_{g[4:]}":
                raise SchemaError(f"{path}: malformed panel header near column {g!r}")
            labels.append(g[4:])
        quarters, xs, ys = [], [], []
        for row in reader:
            if not row:
                continue
            quarters.append(row[0])
            vals = [float(c) for c in row[1:]]
            xs.append(vals[:n])
            ys.append(vals[n:])
    return Panel(
        labels=tuple(labels),
        quarters=tuple(quarters),
        x=np.array(xs, dtype=float),
        y=np.array(ys, dtype=float),
    )
