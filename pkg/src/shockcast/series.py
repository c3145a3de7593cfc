"""Calendar-aware quarterly series: container, log transform, differencing.

All values are stored as plain float arrays anchored at a start quarter;
the containers are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InitialValuesError, LogDomainError, SeriesLengthError

_QUARTER_RE = re.compile(r"^\s*(\d{4})\s*[Qq]\s*([1-4])\s*$")


@dataclass(frozen=True, order=True)
class Quarter:
    """A calendar quarter, totally ordered by (year, q)."""

    year: int
    q: int

    def __post_init__(self):
        if self.q not in (1, 2, 3, 4):
            raise ValueError(f"quarter index must be 1..4, got {self.q}")

    @classmethod
    def parse(cls, label: str) -> "Quarter":
        """Parse labels like ``2019 Q4`` or ``2019Q4``."""
        m = _QUARTER_RE.match(label)
        if m is None:
            raise ValueError(f"not a quarter label: {label!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def index(self) -> int:
        """Position on the global quarter axis (4*year + q - 1)."""
        return 4 * self.year + self.q - 1

    @classmethod
    def from_index(cls, index: int) -> "Quarter":
        return cls(index // 4, index % 4 + 1)

    def advance(self, n: int) -> "Quarter":
        """The quarter n steps later (negative n steps back)."""
        return Quarter.from_index(self.index + n)

    def successor(self) -> "Quarter":
        return self.advance(1)

    def __sub__(self, other: "Quarter") -> int:
        return self.index - other.index

    def __str__(self) -> str:
        return f"{self.year} Q{self.q}"


@dataclass(frozen=True)
class QuarterlySeries:
    """A contiguous run of quarterly values anchored at ``start``.

    Values are held in a read-only float64 array; the k-th value belongs
    to ``start.advance(k)``.
    """

    start: Quarter
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise SeriesLengthError("series must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(f"non-finite value at {self.start.advance(bad)}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())

    @property
    def end(self) -> Quarter:
        return self.start.advance(len(self) - 1)

    def quarters(self) -> list[Quarter]:
        return [self.start.advance(k) for k in range(len(self))]

    def at(self, quarter: Quarter) -> float:
        k = quarter - self.start
        if not 0 <= k < len(self):
            raise KeyError(f"{quarter} outside series {self.start}..{self.end}")
        return float(self.values[k])

    def slice(self, first: Quarter, last: Quarter) -> "QuarterlySeries":
        """Inclusive sub-series from ``first`` through ``last``."""
        i, j = first - self.start, last - self.start
        if i < 0 or j >= len(self) or i > j:
            raise SeriesLengthError(
                f"window {first}..{last} not contained in {self.start}..{self.end}"
            )
        return QuarterlySeries(first, self.values[i : j + 1])


@dataclass(frozen=True)
class SeriesSummary:
    min: float
    mean: float
    max: float


def log_transform(levels: QuarterlySeries) -> QuarterlySeries:
    """Elementwise natural log of a positive level series."""
    vals = levels.values
    if np.any(vals <= 0):
        bad = int(np.flatnonzero(vals <= 0)[0])
        raise LogDomainError(
            f"non-positive level {vals[bad]} at {levels.start.advance(bad)}"
        )
    return QuarterlySeries(levels.start, np.log(vals))


def _check_diffable(n: int, d: int, D: int, season: int) -> None:
    if d < 0 or D < 0:
        raise ValueError("differencing orders must be non-negative")
    if season < 1:
        raise ValueError("season must be a positive integer")
    if n <= d + D * season:
        raise SeriesLengthError(
            f"series of length {n} too short to difference with d={d}, "
            f"D={D}, season={season}"
        )


def difference(s: QuarterlySeries, d: int, D: int, season: int = 4) -> QuarterlySeries:
    """Seasonal differencing D times at lag ``season``, then ordinary d times.

    Output length is ``len(s) - d - D*season`` and the start quarter advances
    by the number of values consumed.
    """
    _check_diffable(len(s), d, D, season)
    vals = s.values
    for _ in range(D):
        vals = vals[season:] - vals[:-season]
    for _ in range(d):
        vals = np.diff(vals)
    return QuarterlySeries(s.start.advance(d + D * season), vals)


def differencing_initials(s: QuarterlySeries, d: int, D: int, season: int = 4) -> list[float]:
    """The d + D*season values consumed by :func:`difference`, in consumption
    order: the leading ``season`` values of each seasonal stage, then the
    leading value of each ordinary stage. Feed these to :func:`integrate`.
    """
    _check_diffable(len(s), d, D, season)
    vals = s.values
    inits: list[float] = []
    for _ in range(D):
        inits.extend(vals[:season].tolist())
        vals = vals[season:] - vals[:-season]
    for _ in range(d):
        inits.append(float(vals[0]))
        vals = np.diff(vals)
    return inits


def integrate(
    diffed: QuarterlySeries,
    d: int,
    D: int,
    season: int = 4,
    initial_values: Sequence[float] = (),
) -> QuarterlySeries:
    """Inverse of :func:`difference` given the consumed initial values."""
    need = d + D * season
    if len(initial_values) != need:
        raise InitialValuesError(
            f"expected {need} initial values (d={d}, D={D}, season={season}), "
            f"got {len(initial_values)}"
        )
    seas_inits = list(initial_values[: D * season])
    ord_inits = list(initial_values[D * season :])
    vals = np.asarray(diffed.values, dtype=float)
    for j in reversed(range(d)):
        vals = np.concatenate(([ord_inits[j]], vals)).cumsum()
    for i in reversed(range(D)):
        head = seas_inits[i * season : (i + 1) * season]
        out = np.empty(vals.size + season)
        out[:season] = head
        for t in range(vals.size):
            out[season + t] = out[t] + vals[t]
        vals = out
    return QuarterlySeries(diffed.start.advance(-need), vals)


def differencing_polynomial(d: int, D: int, season: int = 4) -> np.ndarray:
    """Coefficients c of (1-L)^d (1-L^season)^D with c[0] = 1.

    Used to rebuild level forecasts recursively from differenced-scale ones.
    """
    poly = np.array([1.0])
    for _ in range(d):
        poly = np.convolve(poly, [1.0, -1.0])
    seas = np.zeros(season + 1)
    seas[0], seas[season] = 1.0, -1.0
    for _ in range(D):
        poly = np.convolve(poly, seas)
    return poly


def summarize(s: QuarterlySeries) -> SeriesSummary:
    """Exact min/mean/max of the series values."""
    vals = s.values
    return SeriesSummary(float(vals.min()), float(vals.mean()), float(vals.max()))


def make_series(start: Quarter | str, values: Iterable[float]) -> QuarterlySeries:
    """Convenience constructor accepting a quarter label for ``start``."""
    if isinstance(start, str):
        start = Quarter.parse(start)
    return QuarterlySeries(start, np.asarray(list(values), dtype=float))
