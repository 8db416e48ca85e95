"""Closed-form theoretical tail dependence and spectral densities.

Two independent routes to the same quantities are provided and tested
against each other:

* a brute-force route: the tail-weighted minimum formula for the serial
  tail dependence of a linear (or max-moving-average) filter, summed to
  negligible truncation error, followed by a truncated cosine series for
  the spectral density;
* exact piecewise closed forms for the ARMA(1,1) filter, split into four
  sign cases of (phi, phi+theta), built on the trigonometric kernels.

The filter coefficients determine both routes: a linear process and a
max-moving average with the same coefficients and noise share the same
tail dependence, hence the same spectral density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DegenerateDataError, ParameterError
from .estimators import Extremogram
from .trigsums import cos_arith_sum, geometric_trig_sum


class UnsupportedCaseError(ParameterError):
    """The parameter combination has no closed form here."""


@dataclass(frozen=True)
class TailIndexSpec:
    """Tail index alpha plus the upper/lower balance of the noise tails."""

    alpha: float
    upper_share: float = 0.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError("tail index alpha must be positive")
        if not 0.0 <= self.upper_share <= 1.0:
            raise ParameterError("upper tail share must lie in [0, 1]")

    @property
    def lower_share(self) -> float:
        return 1.0 - self.upper_share


@dataclass(frozen=True)
class LinearFilter:
    """Filter coefficients, either complete or with a geometric tail.

    ``coeffs`` holds the leading coefficients; if ``tail_ratio`` is not
    None, the sequence continues past the last stored coefficient with
    that constant ratio per step.
    """

    coeffs: np.ndarray
    tail_ratio: float | None = None

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        object.__setattr__(self, "coeffs", coeffs)
        if coeffs.size == 0:
            raise ParameterError("filter needs at least one coefficient")
        if self.tail_ratio is not None and not abs(self.tail_ratio) < 1.0:
            raise ParameterError("geometric tail ratio must satisfy |ratio| < 1")

    def materialize(self, tail: TailIndexSpec, rel_eps: float = 1e-12) -> np.ndarray:
        """Explicit coefficients whose ignored tail has relative alpha-mass < rel_eps.

        The alpha-mass of a coefficient c is at most |c|**alpha; for a
        geometric tail the ignored mass is bounded by a geometric series,
        which fixes how far the expansion must go.
        """
        if not rel_eps > 0:
            raise ParameterError("relative tolerance must be positive")
        base = self.coeffs.copy()
        if self.tail_ratio is None or base[-1] == 0.0:
            return base
        ratio = self.tail_ratio
        if ratio == 0.0:
            return base
        total = float(np.sum(np.abs(base) ** tail.alpha))
        if total <= 0:
            raise DegenerateDataError("filter has zero tail mass")
        rr = abs(ratio) ** tail.alpha
        # smallest L with |c_last|^alpha * rr^... geometric bound below rel_eps*total
        head = abs(base[-1]) ** tail.alpha * rr / (1.0 - rr)
        if head <= rel_eps * total:
            return base
        extra = math.ceil(math.log(rel_eps * total / head) / math.log(rr)) + 2
        ext = base[-1] * ratio ** np.arange(1, extra + 1)
        return np.concatenate([base, ext])


def arma11_filter(phi: float, theta: float, jmax: int = 64) -> LinearFilter:
    """Causal ARMA(1,1) filter: psi_0 = 1, psi_j = phi**(j-1) * (phi+theta).

    Stores jmax+1 explicit coefficients; the analytic geometric tail
    ratio phi lets consumers extend the list to any accuracy.
    """
    if not 0.0 < abs(phi) < 1.0:
        raise ParameterError("need 0 < |phi| < 1 for a stationary causal filter")
    if jmax < 1:
        raise ParameterError("need jmax >= 1")
    j = np.arange(1, jmax + 1)
    coeffs = np.concatenate([[1.0], (phi + theta) * phi ** (j - 1.0)])
    return LinearFilter(coeffs=coeffs, tail_ratio=phi)


def extremogram_linear(
    filt: LinearFilter, tail: TailIndexSpec, max_lag: int, rel_eps: float = 1e-12
) -> Extremogram:
    """Serial tail dependence of a linear filter for the upper tail set (1, inf).

    rho(h) is the ratio of the tail-balanced alpha-mass of coefficient
    pair minima min(psi_i, psi_{i+h}) (positive and negative parts taken
    separately) to the alpha-mass of the coefficients themselves.  The
    same formula is the oracle for max-moving averages with the same
    coefficients and noise.
    """
    if max_lag < 0:
        raise ParameterError("need max_lag >= 0")
    alpha, p, q = tail.alpha, tail.upper_share, tail.lower_share
    psi = filt.materialize(tail, rel_eps)
    pos = np.maximum(psi, 0.0) ** alpha
    neg = np.maximum(-psi, 0.0) ** alpha
    denom = p * pos.sum() + q * neg.sum()
    if denom <= 0:
        raise DegenerateDataError("filter carries no tail mass for this balance")
    pos_pad = np.concatenate([pos, np.zeros(max_lag)])
    neg_pad = np.concatenate([neg, np.zeros(max_lag)])
    m = psi.size
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for h in range(1, max_lag + 1):
        num = p * np.minimum(pos_pad[:m], pos_pad[h : m + h]).sum()
        num += q * np.minimum(neg_pad[:m], neg_pad[h : m + h]).sum()
        rho[h] = num / denom
    return Extremogram(rho=rho, n_events=0)


@dataclass(frozen=True)
class SpectralDensityOracle:
    """Closed-form or series-based spectral density on (0, pi)."""

    fn: Callable[[np.ndarray], np.ndarray]
    provenance: str

    def evaluate(self, freqs) -> np.ndarray:
        freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
        if freqs.size and not (np.all(freqs > 0) and np.all(freqs < math.pi)):
            raise ParameterError("oracle frequencies must lie in (0, pi)")
        return np.asarray(self.fn(freqs), dtype=float)

    def __call__(self, lam):
        out = self.evaluate(lam)
        return float(out[0]) if np.isscalar(lam) else out


def spectral_from_extremogram(rho, max_lag: int | None = None) -> SpectralDensityOracle:
    """Spectral density as the truncated cosine series of a tail dependence sequence.

    f(lam) = 1 + 2 * sum_{h=1..H} rho(h) cos(h*lam), the even extension
    of rho; the caller guarantees the ignored tail is negligible.
    """
    values = rho.rho if isinstance(rho, Extremogram) else np.asarray(rho, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ParameterError("need rho values for lags 0..H")
    if abs(values[0] - 1.0) > 1e-9:
        raise ParameterError("lag-0 tail dependence must be 1")
    if max_lag is not None:
        if max_lag + 1 > values.size:
            raise ParameterError("max_lag exceeds the available lags")
        values = values[: max_lag + 1]
    h = np.arange(1, values.size)
    coef = values[1:]

    def fn(freqs: np.ndarray) -> np.ndarray:
        if freqs.size == 0:
            return np.empty(0)
        return 1.0 + 2.0 * (np.cos(np.outer(freqs, h)) @ coef)

    return SpectralDensityOracle(fn=fn, provenance=f"series_truncation({values.size - 1})")


# ---------------------------------------------------------------------------
# ARMA(1,1) closed forms
#
# Four sign cases of (phi, phi+theta); the piecewise constants below are
# transcribed without algebraic simplification, and the cross-oracle test
# (closed form vs truncated series over the brute-force route) guards the
# transcription.


def _arma11_case(phi: float, total: float, tail: TailIndexSpec) -> str:
    if phi > 0 and total > 0:
        if tail.upper_share == 0:
            raise UnsupportedCaseError("phi > 0, phi+theta > 0 requires upper tail mass p > 0")
        return "pos_pos"
    if phi > 0 and total < 0:
        if tail.lower_share == 0:
            raise UnsupportedCaseError("phi > 0, phi+theta < 0 requires lower tail mass q > 0")
        return "pos_neg"
    if phi < 0 and total > 0:
        if tail.upper_share == 0:
            raise UnsupportedCaseError("phi < 0, phi+theta > 0 requires upper tail mass p > 0")
        return "neg_pos"
    if tail.upper_share == 0:
        raise UnsupportedCaseError("phi < 0, phi+theta < 0 requires upper tail mass p > 0")
    return "neg_neg"


def _first_index_below_one(step: float, start: float) -> int:
    """min k >= 0 with start * step**k < 1 (0 < step < 1, start > 0)."""
    if start < 1.0:
        return 0
    # log-based guess, then settle the strict float inequality exactly
    k = max(0, int(math.log(start) / -math.log(step)) - 2)
    while start * step**k >= 1.0:
        k += 1
    return k


def arma11_extremogram_closed(phi: float, theta: float, tail: TailIndexSpec, h: int) -> float:
    """Exact serial tail dependence of an ARMA(1,1) at lag h, set (1, inf).

    Piecewise geometric in h, with a case split on the signs of phi and
    phi+theta; phi+theta = 0 degenerates to independence (rho = 0).
    """
    if not 0.0 < abs(phi) < 1.0:
        raise ParameterError("need 0 < |phi| < 1")
    if h < 0:
        raise ParameterError("lag must be nonnegative")
    if h == 0:
        return 1.0
    total = phi + theta
    if total == 0.0:
        return 0.0
    alpha, p, q = tail.alpha, tail.upper_share, tail.lower_share
    case = _arma11_case(phi, total, tail)
    aphi = abs(phi)

    if case == "pos_pos":
        sa = total**alpha
        fa = phi**alpha
        denom = 1.0 - fa + sa
        c1 = (1.0 - fa) / denom
        c2 = sa / denom
        h0 = _first_index_below_one(fa, sa)
        if h <= h0:
            return c1 + fa**h * c2
        return fa ** (h - 1) * c2

    if case == "pos_neg":
        sa = abs(total) ** alpha
        fa = phi**alpha
        c3 = q * sa / (p * (1.0 - fa) + q * sa)
        return fa**h * c3

    if case == "neg_pos":
        sa = total**alpha
        f2 = aphi ** (2.0 * alpha)
        fa = aphi**alpha
        denom = p * (1.0 - f2 + sa) + q * fa * sa
        k1 = _first_index_below_one(aphi**2, total)
        if h % 2 == 1:
            k = (h + 1) // 2
            if k <= k1:
                return p * (1.0 - f2) / denom
            return aphi ** (alpha * (h - 1)) * (p * sa * (1.0 - f2) / denom)
        return aphi ** (alpha * h) * ((p * sa + q * fa * sa) / denom)

    # neg_neg
    if h % 2 == 1:
        return 0.0
    sa = abs(total) ** alpha
    f2 = aphi ** (2.0 * alpha)
    fa = aphi**alpha
    denom = p * (1.0 - f2) + p * fa * sa + q * sa
    c7 = p * (1.0 - f2) / denom
    c8 = (p * fa * sa + q * sa) / denom
    c9 = (p * sa / fa + q * sa) / denom
    k2 = _first_index_below_one(aphi**2, aphi * abs(total))
    k = h // 2
    if k <= k2:
        return c7 + f2**k * c8
    return f2**k * c9


def _cos_sum_from_one(count: int, x: float, step: float) -> float:
    """sum_{h=1..count} cos(x + h*step)."""
    return cos_arith_sum(count, x + step, step)


def _damped_cos_sum_from_one(count: int | None, x: float, ratio: float, step: float) -> float:
    """sum_{h=1..count} ratio**h * cos(x + h*step); count=None sums to infinity."""
    n = None if count is None else count + 1
    cos_part = geometric_trig_sum(n, ratio, step, "cos") - 1.0  # drop the h = 0 term
    sin_part = geometric_trig_sum(n, ratio, step, "sin")
    return math.cos(x) * cos_part - math.sin(x) * sin_part


def arma11_spectral_closed(phi: float, theta: float, tail: TailIndexSpec, lam: float) -> float:
    """Exact spectral density of the ARMA(1,1) tail dependence at one frequency.

    Assembled from finite and geometrically damped cosine sums; the
    negative-phi cases step in even lags, so they use doubled frequency
    and squared geometric ratio.
    """
    if not 0.0 < lam < math.pi:
        raise ParameterError("frequency must lie in (0, pi)")
    if not 0.0 < abs(phi) < 1.0:
        raise ParameterError("need 0 < |phi| < 1")
    total = phi + theta
    if total == 0.0:
        return 1.0
    alpha, p, q = tail.alpha, tail.upper_share, tail.lower_share
    case = _arma11_case(phi, total, tail)
    aphi = abs(phi)

    if case == "pos_pos":
        sa = total**alpha
        fa = phi**alpha
        denom = 1.0 - fa + sa
        c1 = (1.0 - fa) / denom
        c2 = sa / denom
        h0 = _first_index_below_one(fa, sa)
        return (
            1.0
            + 2.0 * c1 * _cos_sum_from_one(h0, 0.0, lam)
            + 2.0 * (1.0 - fa**-1) * c2 * _damped_cos_sum_from_one(h0, 0.0, fa, lam)
            + 2.0 * fa**-1 * c2 * _damped_cos_sum_from_one(None, 0.0, fa, lam)
        )

    if case == "pos_neg":
        sa = abs(total) ** alpha
        fa = phi**alpha
        c3 = q * sa / (p * (1.0 - fa) + q * sa)
        return 1.0 + 2.0 * c3 * _damped_cos_sum_from_one(None, 0.0, fa, lam)

    if case == "neg_pos":
        sa = total**alpha
        f2 = aphi ** (2.0 * alpha)
        fa = aphi**alpha
        denom = p * (1.0 - f2 + sa) + q * fa * sa
        c4 = p * (1.0 - f2) / denom
        c5 = p * sa * (1.0 - f2) / denom
        c6 = (p * sa + q * fa * sa) / denom
        k1 = _first_index_below_one(aphi**2, total)
        return (
            1.0
            + 2.0 * c4 * _cos_sum_from_one(k1, -lam, 2.0 * lam)
            + 2.0
            * f2**-1
            * c5
            * (
                _damped_cos_sum_from_one(None, -lam, f2, 2.0 * lam)
                - _damped_cos_sum_from_one(k1, -lam, f2, 2.0 * lam)
            )
            + 2.0 * c6 * _damped_cos_sum_from_one(None, 0.0, f2, 2.0 * lam)
        )

    # neg_neg
    sa = abs(total) ** alpha
    f2 = aphi ** (2.0 * alpha)
    fa = aphi**alpha
    denom = p * (1.0 - f2) + p * fa * sa + q * sa
    c7 = p * (1.0 - f2) / denom
    c8 = (p * fa * sa + q * sa) / denom
    c9 = (p * sa / fa + q * sa) / denom
    k2 = _first_index_below_one(aphi**2, aphi * abs(total))
    return (
        1.0
        + 2.0 * c7 * _cos_sum_from_one(k2, 0.0, 2.0 * lam)
        + 2.0 * (c8 - c9) * _damped_cos_sum_from_one(k2, 0.0, f2, 2.0 * lam)
        + 2.0 * c9 * _damped_cos_sum_from_one(None, 0.0, f2, 2.0 * lam)
    )


def arma11_extremogram_curve(
    phi: float, theta: float, tail: TailIndexSpec, max_lag: int
) -> Extremogram:
    """Closed-form tail dependence at lags 0..max_lag."""
    rho = np.array([arma11_extremogram_closed(phi, theta, tail, h) for h in range(max_lag + 1)])
    return Extremogram(rho=rho, n_events=0)


def arma11_spectral_oracle(phi: float, theta: float, tail: TailIndexSpec) -> SpectralDensityOracle:
    """Callable closed-form spectral density for the ARMA(1,1) tail model."""
    total = phi + theta
    if total == 0.0:
        case = "independent"
    else:
        case = _arma11_case(phi, total, tail)

    def fn(freqs: np.ndarray) -> np.ndarray:
        return np.array([arma11_spectral_closed(phi, theta, tail, lam) for lam in freqs])

    return SpectralDensityOracle(fn=fn, provenance=f"arma11_closed({case})")


def series_lag_for_accuracy(phi: float, alpha: float, eps: float = 1e-12) -> int:
    """Smallest H with |phi|**(alpha*H) < eps: truncation depth for the series route."""
    if not 0.0 < abs(phi) < 1.0:
        raise ParameterError("need 0 < |phi| < 1")
    if not (0 < eps < 1):
        raise ParameterError("eps must lie in (0, 1)")
    return max(1, math.ceil(math.log(eps) / (alpha * math.log(abs(phi)))))
