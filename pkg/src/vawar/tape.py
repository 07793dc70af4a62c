"""Trade-tape data model, CSV ingestion, and window/lag resolution.

A tape is a uniformly spaced, time-ordered sequence of executed trades.
Each tick carries (time, price, volume, value) with value = price * volume.
Statistics are computed over a window of N consecutive ticks (a "trading
day"); lagged price lookups p(t_i - tau) with tau = epsilon * l read from
the global tape, so a window is only valid when every tick in it has l
ticks of history available.

Windows are addressed by their first tick index (forward indexing).  A
window "k steps back with stride j" is simply the window starting at
``start - k * j``; there is no separate backward-time convention.

CSV format
----------
Header ``time,price,volume`` or ``time,price,volume,value``, decimal point
``.``, one tick per row, UTF-8.  Ingestion is strict: the first bad row
aborts with an error naming the row number (the header is row 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyTape,
    InsufficientHistory,
    MalformedRow,
    NonFinite,
    NonPositiveField,
    NonUniformSpacing,
    ValueMismatch,
    WindowOutOfRange,
)

#: Relative tolerance for a supplied value against price * volume.
VALUE_REL_TOL = 1e-9

#: Relative tolerance (in units of epsilon) for uniform tick spacing.
SPACING_REL_TOL = 1e-6

_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class TradeTick:
    """One market trade: tick position, time, price, volume, and value."""

    index: int
    time: float
    price: float
    volume: float
    value: float

    def __post_init__(self):
        for name in ("time", "price", "volume", "value"):
            if not math.isfinite(getattr(self, name)):
                raise NonFinite(f"tick {self.index}: {name} is not finite")
        if self.price <= 0 or self.volume <= 0 or self.value <= 0:
            raise NonPositiveField(
                f"tick {self.index}: price, volume and value must be > 0"
            )
        if abs(self.value - self.price * self.volume) > VALUE_REL_TOL * self.value:
            raise ValueMismatch(
                f"tick {self.index}: value {self.value!r} != price*volume "
                f"{self.price * self.volume!r} beyond relative {VALUE_REL_TOL:g}"
            )


class TradeTape:
    """Immutable uniformly spaced sequence of trades.

    Field arrays are float64 and read-only; ``tape[i]`` materializes a
    :class:`TradeTick`.  Construction validates every invariant: positive
    finite fields, value = price * volume within ``VALUE_REL_TOL``, and
    consecutive times equal to ``epsilon`` within ``SPACING_REL_TOL``.
    """

    __slots__ = ("times", "prices", "volumes", "values", "epsilon")

    def __init__(self, times, prices, volumes, values, epsilon):
        # fresh copies: the tape owns (and freezes) its arrays
        times = np.array(times, dtype=np.float64)
        prices = np.array(prices, dtype=np.float64)
        volumes = np.array(volumes, dtype=np.float64)
        values = np.array(values, dtype=np.float64)
        n = times.shape[0]
        if n == 0:
            raise EmptyTape("tape has no ticks")
        if not (prices.shape[0] == volumes.shape[0] == values.shape[0] == n):
            raise MalformedRow("field arrays have unequal lengths")
        if not (math.isfinite(epsilon) and epsilon > 0):
            raise NonUniformSpacing(f"epsilon must be a positive real, got {epsilon!r}")

        for name, arr in (
            ("time", times),
            ("price", prices),
            ("volume", volumes),
            ("value", values),
        ):
            bad = np.flatnonzero(~np.isfinite(arr))
            if bad.size:
                raise NonFinite(f"tick {bad[0]}: {name} is not finite")
        for name, arr in (("price", prices), ("volume", volumes), ("value", values)):
            bad = np.flatnonzero(arr <= 0)
            if bad.size:
                raise NonPositiveField(f"tick {bad[0]}: {name} must be > 0")

        mismatch = np.abs(values - prices * volumes) > VALUE_REL_TOL * values
        bad = np.flatnonzero(mismatch)
        if bad.size:
            i = int(bad[0])
            raise ValueMismatch(
                f"tick {i}: value {values[i]!r} != price*volume "
                f"{prices[i] * volumes[i]!r} beyond relative {VALUE_REL_TOL:g}"
            )

        if n > 1:
            gaps = np.diff(times)
            bad = np.flatnonzero(np.abs(gaps - epsilon) > SPACING_REL_TOL * epsilon)
            if bad.size:
                i = int(bad[0])
                raise NonUniformSpacing(
                    f"ticks {i}->{i + 1}: spacing {gaps[i]!r} != epsilon {epsilon!r}"
                )

        for arr in (times, prices, volumes, values):
            arr.setflags(write=False)
        self.times = times
        self.prices = prices
        self.volumes = volumes
        self.values = values
        self.epsilon = float(epsilon)

    @classmethod
    def from_arrays(cls, prices, volumes, epsilon=1.0, start_time=0.0, values=None):
        """Build a tape from price/volume arrays; times are derived from
        ``epsilon`` and values from price * volume unless supplied."""
        prices = np.asarray(prices, dtype=np.float64)
        n = prices.shape[0]
        times = start_time + epsilon * np.arange(n, dtype=np.float64)
        volumes = np.asarray(volumes, dtype=np.float64)
        if values is None:
            values = prices * volumes
        return cls(times, prices, volumes, values, epsilon)

    @classmethod
    def from_ticks(cls, ticks, epsilon):
        ticks = list(ticks)
        return cls(
            [t.time for t in ticks],
            [t.price for t in ticks],
            [t.volume for t in ticks],
            [t.value for t in ticks],
            epsilon,
        )

    def __len__(self):
        return self.times.shape[0]

    def __getitem__(self, i) -> TradeTick:
        i = int(i)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(f"tick index {i} out of range")
        return TradeTick(
            index=i,
            time=float(self.times[i]),
            price=float(self.prices[i]),
            volume=float(self.volumes[i]),
            value=float(self.values[i]),
        )

    @property
    def ticks(self):
        return tuple(self[i] for i in range(len(self)))

    def __repr__(self):
        return f"TradeTape(len={len(self)}, epsilon={self.epsilon!r})"


@dataclass(frozen=True)
class WindowSpec:
    """An averaging window of ``count`` consecutive ticks starting at
    tick index ``start`` (a "trading day" of N ticks)."""

    start: int
    count: int

    def __post_init__(self):
        if self.start < 0:
            raise WindowOutOfRange(f"window start must be >= 0, got {self.start}")
        if self.count < 2:
            raise WindowOutOfRange(f"window count must be >= 2, got {self.count}")


@dataclass(frozen=True)
class LagSpec:
    """Return lag tau = epsilon * lag_l and pair shift lambda = epsilon *
    window_shift_j, both integer multiples of the tick spacing."""

    lag_l: int = 1
    window_shift_j: int = 0

    def __post_init__(self):
        if self.lag_l < 1:
            raise ValueError(f"lag_l must be >= 1, got {self.lag_l}")
        if self.window_shift_j < 0:
            raise ValueError(
                f"window_shift_j must be >= 0, got {self.window_shift_j}"
            )


@dataclass(frozen=True)
class ResolvedWindow:
    """A window validated against a tape, with guaranteed lag history.

    Every tick index i in [start, start+count) satisfies i - lag_l >= 0,
    so lagged price lookups stay inside the tape.
    """

    tape: TradeTape
    start: int
    count: int
    lag_l: int
    window_shift_j: int = 0

    @property
    def indices(self):
        return np.arange(self.start, self.start + self.count)

    @property
    def prices(self):
        return self.tape.prices[self.start : self.start + self.count]

    @property
    def volumes(self):
        return self.tape.volumes[self.start : self.start + self.count]

    @property
    def values(self):
        return self.tape.values[self.start : self.start + self.count]

    def lagged_prices(self, lag_l=None):
        """Prices p(t_i - tau) for each i in the window, read from the
        global tape."""
        l = self.lag_l if lag_l is None else int(lag_l)
        require_history(self, l)
        lo = self.start - l
        return self.tape.prices[lo : lo + self.count]


def require_history(window: ResolvedWindow, lag_l: int):
    """Raise InsufficientHistory unless every window tick has lag_l ticks
    of history."""
    if lag_l < 1:
        raise ValueError(f"lag_l must be >= 1, got {lag_l}")
    if window.start < lag_l:
        raise InsufficientHistory(
            f"window starting at {window.start} needs {lag_l} ticks of history"
        )


def resolve(tape: TradeTape, window: WindowSpec, lags: LagSpec) -> ResolvedWindow:
    """Resolve a window against a tape and confirm lagged lookups fit.

    Raises WindowOutOfRange when the window does not fit in the tape and
    InsufficientHistory when window.start < lags.lag_l.
    """
    if window.start + window.count > len(tape):
        raise WindowOutOfRange(
            f"window [{window.start}, {window.start + window.count}) exceeds "
            f"tape of {len(tape)} ticks"
        )
    if window.start < lags.lag_l:
        raise InsufficientHistory(
            f"window starting at {window.start} needs {lags.lag_l} ticks of history"
        )
    return ResolvedWindow(
        tape=tape,
        start=window.start,
        count=window.count,
        lag_l=lags.lag_l,
        window_shift_j=lags.window_shift_j,
    )


WITH_VALUE = "with_value"
DERIVE_VALUE = "derive_value"


def _parse_float(text, row, column):
    try:
        x = float(text)
    except ValueError:
        raise NonFinite(f"row {row}: {column} {text!r} is not a number") from None
    if not math.isfinite(x):
        raise NonFinite(f"row {row}: {column} {text!r} is not finite")
    return x


def ingest(source, value_format=DERIVE_VALUE, epsilon=1.0) -> TradeTape:
    """Read a trade tape from a CSV character stream.

    ``value_format`` selects between deriving values as price * volume
    (``derive_value``) and reading a fourth ``value`` column that is
    checked against price * volume (``with_value``).  Validation is
    strict: the first bad row raises with its 1-based row number.
    """
    if value_format not in (WITH_VALUE, DERIVE_VALUE):
        raise ValueError(f"unknown value_format {value_format!r}")
    lines = iter(source if not isinstance(source, str) else source.splitlines())
    try:
        header = next(lines)
    except StopIteration:
        raise EmptyTape("empty input: missing header") from None
    columns = [c.strip().lower() for c in header.strip().lstrip("﻿").split(",")]
    if columns[:3] != ["time", "price", "volume"] or len(columns) > 4:
        raise MalformedRow("row 1: expected header time,price,volume[,value]")
    has_value = len(columns) == 4 and columns[3] == "value"
    if len(columns) == 4 and not has_value:
        raise MalformedRow(f"row 1: fourth column must be 'value', got {columns[3]!r}")
    if value_format == WITH_VALUE and not has_value:
        raise MalformedRow("row 1: with_value requires a value column")

    times, prices, volumes, values = [], [], [], []
    row = 1
    for line in lines:
        row += 1
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(columns):
            raise MalformedRow(
                f"row {row}: expected {len(columns)} columns, got {len(cells)}"
            )
        t = _parse_float(cells[0], row, "time")
        p = _parse_float(cells[1], row, "price")
        u = _parse_float(cells[2], row, "volume")
        if p <= 0:
            raise NonPositiveField(f"row {row}: price must be > 0, got {p!r}")
        if u <= 0:
            raise NonPositiveField(f"row {row}: volume must be > 0, got {u!r}")
        if value_format == WITH_VALUE:
            c = _parse_float(cells[3], row, "value")
            if c <= 0:
                raise NonPositiveField(f"row {row}: value must be > 0, got {c!r}")
            if abs(c - p * u) > VALUE_REL_TOL * c:
                raise ValueMismatch(
                    f"row {row}: value {c!r} != price*volume {p * u!r} "
                    f"beyond relative {VALUE_REL_TOL:g}"
                )
        else:
            c = p * u
        times.append(t)
        prices.append(p)
        volumes.append(u)
        values.append(c)

    if not times:
        raise EmptyTape("no data rows")
    for i in range(1, len(times)):
        if abs((times[i] - times[i - 1]) - epsilon) > SPACING_REL_TOL * epsilon:
            raise NonUniformSpacing(
                f"row {i + 2}: spacing {times[i] - times[i - 1]!r} != "
                f"epsilon {epsilon!r}"
            )
    return TradeTape(times, prices, volumes, values, epsilon)


def write_csv(tape: TradeTape, stream, include_value=True):
    """Serialize a tape in the ingest CSV format with 17-significant-digit
    floats (lossless round trip)."""
    if include_value:
        stream.write("time,price,volume,value\n")
        for i in range(len(tape)):
            stream.write(
                ",".join(
                    _FLOAT_FMT % x
                    for x in (
                        tape.times[i],
                        tape.prices[i],
                        tape.volumes[i],
                        tape.values[i],
                    )
                )
                + "\n"
            )
    else:
        stream.write("time,price,volume\n")
        for i in range(len(tape)):
            stream.write(
                ",".join(
                    _FLOAT_FMT % x
                    for x in (tape.times[i], tape.prices[i], tape.volumes[i])
                )
                + "\n"
            )


def infer_epsilon(text_head: str):
    """Guess the tick spacing from the first two data rows of CSV text."""
    lines = [ln for ln in text_head.splitlines() if ln.strip()]
    if len(lines) < 3:
        return 1.0
    try:
        t0 = float(lines[1].split(",")[0])
        t1 = float(lines[2].split(",")[0])
    except (ValueError, IndexError):
        return 1.0
    gap = t1 - t0
    return gap if math.isfinite(gap) and gap > 0 else 1.0
