"""Shared domain objects: tail sets, empirical thresholds, exceedance
indicators and Fourier frequency grids.

All constructors validate their inputs and every object is immutable
after construction, so values can be shared freely across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np


class ParameterError(ValueError):
    """A parameter lies outside its documented domain."""


class InputError(ValueError):
    """Input data is unusable (empty, non-numeric, wrong shape)."""


class DegenerateDataError(RuntimeError):
    """The data admits no meaningful estimate (e.g. zero tail events)."""


def as_series(values) -> np.ndarray:
    """Coerce to a 1-d float array and reject NaN/inf entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InputError("series must be one-dimensional")
    if arr.size == 0:
        raise InputError("series is empty")
    if not np.all(np.isfinite(arr)):
        raise InputError("series contains NaN or infinite values")
    return arr


# ---------------------------------------------------------------------------
# Tail sets
#
# A tail set defines which scaled observations x/a count as extreme events.
# Ray endpoints are strict: UpperRay(1) is the open interval (1, inf).


@dataclass(frozen=True)
class UpperRay:
    """Upper tail (a, inf), a > 0."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("UpperRay endpoint must be positive")

    def contains(self, scaled: np.ndarray) -> np.ndarray:
        return np.asarray(scaled) > self.a

    def describe(self) -> str:
        return f"upper:{self.a:g}"


@dataclass(frozen=True)
class LowerRay:
    """Lower tail (-inf, -a), a > 0."""

    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError("LowerRay endpoint must be positive")

    def contains(self, scaled: np.ndarray) -> np.ndarray:
        return np.asarray(scaled) < -self.a

    def describe(self) -> str:
        return f"lower:{self.a:g}"


@dataclass(frozen=True)
class Interval:
    """Half-open interval (a, b] with 0 < a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not (0 < self.a < self.b):
            raise ParameterError("Interval requires 0 < a < b")

    def contains(self, scaled: np.ndarray) -> np.ndarray:
        x = np.asarray(scaled)
        return (x > self.a) & (x <= self.b)

    def describe(self) -> str:
        return f"interval:{self.a:g}:{self.b:g}"


@dataclass(frozen=True)
class PredicateSet:
    """Opaque membership test on scaled observations.

    The callable receives the scaled array and must return a boolean
    array of the same shape.  The caller is responsible for keeping the
    set bounded away from zero.
    """

    test: Callable[[np.ndarray], np.ndarray]
    label: str = "predicate"

    def contains(self, scaled: np.ndarray) -> np.ndarray:
        return np.asarray(self.test(np.asarray(scaled)), dtype=bool)

    def describe(self) -> str:
        return self.label


TailSet = Union[UpperRay, LowerRay, Interval, PredicateSet]


# ---------------------------------------------------------------------------
# Threshold and indicators


@dataclass(frozen=True)
class Threshold:
    """Empirical threshold: the ceil(q*n)-th ascending order statistic."""

    a_m: float
    q: float
    exceed_count: int


def threshold_from_quantile(series, q: float) -> Threshold:
    """Empirical quantile threshold of a series.

    The threshold is the ceil(q*n)-th ascending order statistic (no
    interpolation), so exceedance counts stay integral.

    Parameters
    ----------
    series : array_like
        Observations, finite, length n with n*(1-q) >= 1.
    q : float
        Quantile level in (0, 1).
    """
    x = as_series(series)
    if not 0.0 < q < 1.0:
        raise ParameterError("quantile q must lie in (0, 1)")
    n = x.size
    if n * (1.0 - q) < 1.0 - 1e-9:
        raise InputError(
            f"series of length {n} is too short for quantile {q}: "
            "fewer than one exceedance expected"
        )
    k = max(1, math.ceil(q * n - 1e-9))  # 1-based order statistic index
    a_m = float(np.partition(x, k - 1)[k - 1])
    exceed = int(np.count_nonzero(x > a_m))
    return Threshold(a_m=a_m, q=q, exceed_count=exceed)


@dataclass(frozen=True)
class IndicatorSeries:
    """0/1 marks of scaled observations falling in a tail set."""

    bits: np.ndarray
    p0_hat: float
    threshold: Threshold
    tail_set: TailSet

    def __post_init__(self):
        object.__setattr__(self, "bits", np.asarray(self.bits, dtype=bool))
        if not 0.0 <= self.p0_hat <= 1.0:
            raise ParameterError("p0_hat must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.bits.size

    @property
    def n_events(self) -> int:
        return int(np.count_nonzero(self.bits))

    def centered(self) -> np.ndarray:
        """Indicator values with the empirical event rate removed."""
        return self.bits.astype(float) - self.p0_hat


def exceedance_indicators(series, tail_set: TailSet, threshold: Threshold) -> IndicatorSeries:
    """Mark the observations whose scaled value x/a_m falls in the tail set."""
    x = as_series(series)
    if not threshold.a_m > 0:
        raise ParameterError("threshold must be positive: scaling is undefined otherwise")
    bits = np.asarray(tail_set.contains(x / threshold.a_m), dtype=bool)
    if bits.shape != x.shape:
        raise InputError("tail set membership must preserve the series shape")
    return IndicatorSeries(
        bits=bits, p0_hat=float(bits.mean()), threshold=threshold, tail_set=tail_set
    )


# ---------------------------------------------------------------------------
# Frequency grids


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing frequencies inside the open interval (0, pi).

    When ``fourier`` is set, every frequency equals 2*pi*j/n_ref for the
    integer j stored in ``indices``.
    """

    freqs: np.ndarray
    fourier: bool = False
    n_ref: int | None = None
    indices: np.ndarray | None = None

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        object.__setattr__(self, "freqs", freqs)
        if freqs.ndim != 1:
            raise ParameterError("frequency grid must be one-dimensional")
        if freqs.size:
            if not (np.all(freqs > 0.0) and np.all(freqs < math.pi)):
                raise ParameterError("frequencies must lie strictly inside (0, pi)")
            if np.any(np.diff(freqs) <= 0):
                raise ParameterError("frequencies must be strictly increasing")
        if self.fourier:
            if self.n_ref is None or self.indices is None:
                raise ParameterError("fourier grids carry n_ref and integer indices")
            object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))

    def __len__(self) -> int:
        return self.freqs.size

    @classmethod
    def from_frequencies(cls, freqs) -> "FrequencyGrid":
        return cls(freqs=np.asarray(freqs, dtype=float), fourier=False)


def fourier_grid(n: int) -> FrequencyGrid:
    """All Fourier frequencies 2*pi*j/n strictly inside (0, pi).

    There are exactly ceil(n/2) - 1 of them (j = 1, ..., ceil(n/2) - 1).
    """
    if n < 2:
        raise InputError("need at least two observations for a Fourier grid")
    jmax = math.ceil(n / 2) - 1
    j = np.arange(1, jmax + 1, dtype=np.int64)
    return FrequencyGrid(freqs=2.0 * np.pi * j / n, fourier=True, n_ref=n, indices=j)


def _first_fourier_index_at_or_above(lam: float, n: int) -> int:
    # smallest j with 2*pi*j/n >= lam; guard against float round-off when
    # lam is itself a Fourier frequency
    return math.ceil(lam * n / (2.0 * math.pi) - 1e-12)


def smoothing_grid(lam: float, n: int, s: int) -> FrequencyGrid:
    """The 2s+1 Fourier frequencies of n centered at the first Fourier
    frequency at or above ``lam``.

    Rejects windows that would leave the open interval (0, pi); the error
    message reports the largest admissible half-width for this frequency.
    """
    if not 0.0 < lam < math.pi:
        raise ParameterError("target frequency must lie in (0, pi)")
    if s < 0:
        raise ParameterError("smoothing half-width must be nonnegative")
    if n < 2:
        raise InputError("need at least two observations")
    j0 = _first_fourier_index_at_or_above(lam, n)
    j_hi_max = (n - 1) // 2  # largest j with 2*pi*j/n < pi
    s_max = min(j0 - 1, j_hi_max - j0)
    if s > s_max:
        raise ParameterError(
            f"smoothing window of half-width {s} around frequency {lam:g} "
            f"leaves (0, pi); the maximum half-width here is {max(s_max, 0)}"
        )
    j = np.arange(j0 - s, j0 + s + 1, dtype=np.int64)
    return FrequencyGrid(freqs=2.0 * np.pi * j / n, fourier=True, n_ref=n, indices=j)


# ---------------------------------------------------------------------------
# Estimator configuration


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs shared by the spectral estimators.

    ``m`` is the normalization constant; ``None`` selects the canonical
    choice n / (number of events), under which the scaled event rate is
    exactly one and all standardized outputs are free of m.  ``r`` is the
    lag-window truncation, ``s`` the smoothing half-width and ``q`` the
    threshold quantile.
    """

    q: float = 0.98
    m: float | None = None
    r: int = 0
    s: int = 50

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ParameterError("quantile q must lie in (0, 1)")
        if self.m is not None and not self.m > 0:
            raise ParameterError("normalization m must be positive")
        if self.r < 0:
            raise ParameterError("lag-window truncation r must be nonnegative")
        if self.s < 0:
            raise ParameterError("smoothing half-width s must be nonnegative")

    def validate_for_length(self, n: int) -> None:
        if self.r >= n:
            raise ParameterError(f"lag-window truncation r={self.r} must be below n={n}")
        if self.s >= n / 2:
            raise ParameterError(f"smoothing half-width s={self.s} must be below n/2")
