"""Empirical frequency-domain machinery for tail events.

Everything here works on an :class:`~extspec.core.IndicatorSeries`: the
lag-indexed sample extremogram, centered sine/cosine transforms, the
tail-event periodogram and its standardized, lag-window and smoothed
variants.

Normalization
-------------
The raw periodogram carries a scale factor ``m``; the canonical choice
``m = n / (number of events)`` makes the scaled event rate exactly one,
and every standardized output is algebraically free of ``m``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    DegenerateDataError,
    FrequencyGrid,
    IndicatorSeries,
    ParameterError,
    fourier_grid,
    smoothing_grid,
)

SPECTRAL_KINDS = ("raw_periodogram", "standardized_periodogram", "lag_window", "smoothed")


@dataclass(frozen=True)
class Extremogram:
    """Lag-indexed serial tail dependence, rho(0) = 1.

    ``n_events`` is the denominator count behind the ratios; it feeds the
    binomial surrogate standard errors.
    """

    rho: np.ndarray
    n_events: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        object.__setattr__(self, "rho", rho)
        if rho.ndim != 1 or rho.size == 0:
            raise ParameterError("extremogram needs at least the lag-0 value")
        if np.any(rho < -1e-12) or np.any(rho > 1.0 + 1e-12):
            raise ParameterError("extremogram values must lie in [0, 1]")

    @property
    def max_lag(self) -> int:
        return self.rho.size - 1

    def stderr(self) -> np.ndarray:
        """Binomial surrogate standard errors sqrt(rho*(1-rho)/n_events)."""
        if self.n_events <= 0:
            return np.full_like(self.rho, np.nan)
        se = np.sqrt(np.clip(self.rho * (1.0 - self.rho), 0.0, None) / self.n_events)
        se[0] = 0.0
        return se


@dataclass(frozen=True)
class SineCosinePair:
    """Normalized centered cosine and sine transforms at one frequency."""

    alpha: float
    beta: float
    freq: float

    def power(self) -> float:
        """Periodogram ordinate (alpha^2 + beta^2) / 2 at matching m."""
        return 0.5 * (self.alpha**2 + self.beta**2)


@dataclass(frozen=True)
class SpectralEstimate:
    """Frequency-indexed spectral values of one estimator kind."""

    grid: FrequencyGrid
    values: np.ndarray
    kind: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.kind not in SPECTRAL_KINDS:
            raise ParameterError(f"unknown spectral kind {self.kind!r}")
        if values.shape != (len(self.grid),):
            raise ParameterError("values must align with the frequency grid")
        # truncated cosine series may legitimately dip below zero
        if self.kind != "lag_window" and np.any(values < 0):
            raise ParameterError(f"{self.kind} values must be nonnegative")


@dataclass(frozen=True)
class WeightWindow:
    """Nonnegative smoothing weights over offsets -s..s, normalized to sum 1."""

    weights: np.ndarray
    half_width: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != 2 * self.half_width + 1:
            raise ParameterError("need 2s+1 weights for half-width s")
        if np.any(w < 0):
            raise ParameterError("weights must be nonnegative")
        total = w.sum()
        if not total > 0:
            raise ParameterError("weights must not all vanish")
        object.__setattr__(self, "weights", w / total)

    @property
    def sum_sq(self) -> float:
        return float(np.dot(self.weights, self.weights))


def daniell_window(s: int) -> WeightWindow:
    """Equal weights 1/(2s+1) over offsets -s..s."""
    if s < 0:
        raise ParameterError("half-width must be nonnegative")
    return WeightWindow(weights=np.full(2 * s + 1, 1.0 / (2 * s + 1)), half_width=s)


def canonical_m(ind: IndicatorSeries) -> float:
    """The normalization n / (event count), under which the event rate is 1."""
    if ind.n_events == 0:
        raise DegenerateDataError("no tail events: canonical normalization undefined")
    return ind.n / ind.n_events


def _resolve_m(ind: IndicatorSeries, m: float | None) -> float:
    if m is None:
        return canonical_m(ind)
    if not m > 0:
        raise ParameterError("normalization m must be positive")
    return float(m)


def tail_event_rate(ind: IndicatorSeries, m: float | None = None) -> float:
    """Scaled event rate (m/n) * sum(I_t); exactly 1 under canonical m."""
    m = _resolve_m(ind, m)
    return m * ind.n_events / ind.n


def sample_extremogram(ind: IndicatorSeries, max_lag: int) -> Extremogram:
    """Ratio-of-counts sample extremogram.

    rho(h) is the fraction of events that are followed by another event
    h steps later: sum_t I_t I_{t+h} / sum_t I_t, with rho(0) = 1.  This
    is the plug-in conditional probability; it stays in [0, 1].
    """
    if ind.n_events < 1:
        raise DegenerateDataError("no tail events: extremogram undefined")
    if not 0 <= max_lag < ind.n:
        raise ParameterError("need 0 <= max_lag < n")
    bits = ind.bits.astype(float)
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for h in range(1, max_lag + 1):
        rho[h] = float(np.dot(bits[:-h], bits[h:])) / ind.n_events
    return Extremogram(rho=rho, n_events=ind.n_events)


# ---------------------------------------------------------------------------
# Transforms and periodograms
#
# Two evaluation paths are provided: a direct O(n)-per-frequency loop
# and an FFT pass over the full Fourier grid.  They agree to ~1e-10 and
# the test suite enforces that.


def _direct_sums(centered: np.ndarray, grid: FrequencyGrid) -> tuple[np.ndarray, np.ndarray]:
    """Cosine and sine sums of the centered indicators, t = 1..n."""
    n = centered.size
    t = np.arange(1, n + 1, dtype=np.int64)
    cos_sums = np.empty(len(grid))
    sin_sums = np.empty(len(grid))
    if grid.fourier and grid.n_ref == n:
        # exact angle reduction: j*t mod n keeps arguments small, which
        # matters for cancellation checks at the 1e-10 level
        for i, j in enumerate(grid.indices):
            ang = (2.0 * np.pi / n) * ((j * t) % n)
            cos_sums[i] = np.dot(centered, np.cos(ang))
            sin_sums[i] = np.dot(centered, np.sin(ang))
    else:
        for i, lam in enumerate(grid.freqs):
            ang = lam * t
            cos_sums[i] = np.dot(centered, np.cos(ang))
            sin_sums[i] = np.dot(centered, np.sin(ang))
    return cos_sums, sin_sums


def _fft_power(centered: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """|sum_t c_t e^(-i t lam_j)|^2 at Fourier indices j via one real FFT."""
    spec = np.fft.rfft(centered)
    return np.abs(spec[indices]) ** 2


def _squared_modulus(ind: IndicatorSeries, grid: FrequencyGrid, method: str) -> np.ndarray:
    centered = ind.centered()
    fft_ok = grid.fourier and grid.n_ref == ind.n
    if method == "auto":
        method = "fft" if fft_ok else "direct"
    if method == "fft":
        if not fft_ok:
            raise ParameterError("fft path needs Fourier frequencies of this series length")
        return _fft_power(centered, grid.indices)
    if method == "direct":
        cos_sums, sin_sums = _direct_sums(centered, grid)
        return cos_sums**2 + sin_sums**2
    raise ParameterError(f"unknown method {method!r}")


def sine_cosine_transforms(ind: IndicatorSeries, lam: float, m: float | None = None) -> SineCosinePair:
    """Centered cosine/sine transforms scaled by sqrt(2m/n).

    The indicators are centered at their empirical rate; at Fourier
    frequencies of n the centering provably has no effect because the
    complex exponentials sum to zero over a full period.
    """
    if not 0.0 < lam < math.pi:
        raise ParameterError("frequency must lie in (0, pi)")
    m = _resolve_m(ind, m)
    centered = ind.centered()
    t = np.arange(1, ind.n + 1)
    scale = math.sqrt(2.0 * m / ind.n)
    ang = lam * t
    return SineCosinePair(
        alpha=scale * float(np.dot(centered, np.cos(ang))),
        beta=scale * float(np.dot(centered, np.sin(ang))),
        freq=lam,
    )


def periodogram(
    ind: IndicatorSeries,
    grid: FrequencyGrid,
    m: float | None = None,
    method: str = "auto",
) -> SpectralEstimate:
    """Tail-event periodogram (m/n) |sum_t (I_t - p0) e^(-i t lam)|^2."""
    if len(grid) == 0:
        raise ParameterError("frequency grid is empty")
    m = _resolve_m(ind, m)
    values = (m / ind.n) * _squared_modulus(ind, grid, method)
    return SpectralEstimate(grid=grid, values=values, kind="raw_periodogram")


def standardized_periodogram(
    ind: IndicatorSeries, grid: FrequencyGrid, method: str = "auto"
) -> SpectralEstimate:
    """Periodogram divided by the scaled event rate; free of m.

    Equals |sum_t (I_t - p0) e^(-i t lam)|^2 / sum_t I_t, the ratio in
    which the normalization cancels exactly.
    """
    if len(grid) == 0:
        raise ParameterError("frequency grid is empty")
    if ind.n_events < 1:
        raise DegenerateDataError("no tail events: standardized periodogram undefined")
    values = _squared_modulus(ind, grid, method) / ind.n_events
    return SpectralEstimate(grid=grid, values=values, kind="standardized_periodogram")


def _warn_if_truncation_outruns(ind: IndicatorSeries, r: int, m: float) -> None:
    # consistency heuristic: the truncation should satisfy r^2 <= n/m
    if r > 0 and r * r > ind.n / m:
        warnings.warn(
            f"lag-window truncation r={r} is large for this event count "
            f"(r^2 exceeds n/m = {ind.n / m:.1f}); the estimate may be unstable",
            stacklevel=3,
        )


def lag_window_estimate(
    ind: IndicatorSeries,
    lam: float,
    r: int,
    m: float | None = None,
    standardized: bool = False,
) -> float:
    """Truncated cosine series over sample tail autocovariances.

    Returns gamma(0) + 2 * sum_{h<=r} cos(lam*h) * gamma(h) with
    gamma(0) = (m/n) sum I_t and gamma(h) = (m/n) sum (I_t-p0)(I_{t+h}-p0).
    The truncation may produce negative values; they are reported as-is.
    With ``standardized`` the result is divided by the scaled event rate.
    """
    if not 0 <= r < ind.n:
        raise ParameterError("need 0 <= r < n")
    m = _resolve_m(ind, m)
    _warn_if_truncation_outruns(ind, r, m)
    centered = ind.centered()
    acc = m / ind.n * ind.n_events
    for h in range(1, r + 1):
        acc += 2.0 * math.cos(lam * h) * (m / ind.n) * float(np.dot(centered[:-h], centered[h:]))
    if standardized:
        acc /= tail_event_rate(ind, m)
    return float(acc)


def lag_window_curve(
    ind: IndicatorSeries,
    grid: FrequencyGrid,
    r: int,
    m: float | None = None,
    standardized: bool = False,
) -> SpectralEstimate:
    """Lag-window estimate over a whole grid (one autocovariance pass).

    Unlike the squared-modulus estimators the truncated cosine series is
    not nonnegative by construction; values are reported as computed.
    """
    if not 0 <= r < ind.n:
        raise ParameterError("need 0 <= r < n")
    if len(grid) == 0:
        raise ParameterError("frequency grid is empty")
    m = _resolve_m(ind, m)
    _warn_if_truncation_outruns(ind, r, m)
    centered = ind.centered()
    gammas = np.empty(r + 1)
    gammas[0] = m / ind.n * ind.n_events
    for h in range(1, r + 1):
        gammas[h] = (m / ind.n) * float(np.dot(centered[:-h], centered[h:]))
    h = np.arange(1, r + 1)
    values = gammas[0] + 2.0 * (np.cos(np.outer(grid.freqs, h)) @ gammas[1:])
    if standardized:
        values = values / tail_event_rate(ind, m)
    return SpectralEstimate(grid=grid, values=values, kind="lag_window")


def smoothed_periodogram(ind: IndicatorSeries, lam: float, window: WeightWindow) -> float:
    """Weighted average of standardized ordinates around ``lam``.

    The ordinates live on the 2s+1 Fourier frequencies centered at the
    first Fourier frequency at or above ``lam``; the result is a convex
    combination, so it lies between the smallest and largest ordinate.
    """
    grid = smoothing_grid(lam, ind.n, window.half_width)
    ords = standardized_periodogram(ind, grid).values
    return float(np.dot(window.weights, ords))


def smoothed_curve(ind: IndicatorSeries, window: WeightWindow) -> SpectralEstimate:
    """Smoothed standardized periodogram at every admissible Fourier frequency.

    Admissible centers are those whose full smoothing window stays
    inside (0, pi).  One FFT pass supplies all ordinates.
    """
    full = fourier_grid(ind.n)
    s = window.half_width
    if len(full) < 2 * s + 1:
        raise ParameterError("series too short for this smoothing half-width")
    std = standardized_periodogram(ind, full, method="fft").values
    vals = np.correlate(std, window.weights, mode="valid")
    grid = FrequencyGrid(
        freqs=full.freqs[s : len(full) - s],
        fourier=True,
        n_ref=ind.n,
        indices=full.indices[s : len(full) - s],
    )
    return SpectralEstimate(grid=grid, values=vals, kind="smoothed")


def smoothed_at_frequencies(
    ind: IndicatorSeries, freqs, window: WeightWindow
) -> SpectralEstimate:
    """Smoothed standardized periodogram at arbitrary target frequencies.

    Shares one FFT pass across all targets; each value averages the
    window of Fourier ordinates around its target.
    """
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    full = fourier_grid(ind.n)
    std = standardized_periodogram(ind, full, method="fft").values
    s = window.half_width
    vals = np.empty(freqs.size)
    for i, lam in enumerate(freqs):
        grid = smoothing_grid(lam, ind.n, s)
        lo = int(grid.indices[0]) - 1  # Fourier index j maps to array slot j-1
        vals[i] = float(np.dot(window.weights, std[lo : lo + 2 * s + 1]))
    return SpectralEstimate(
        grid=FrequencyGrid.from_frequencies(freqs), values=vals, kind="smoothed"
    )
