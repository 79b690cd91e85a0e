"""Empirical CDFs in SignedLog order, grid Kolmogorov distances, DKW slack."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .signedlog import SignedLog

DKW_DELTA = 0.001
DEFAULT_GRID = 512
MIN_SAMPLES = 1000


class InsufficientSamplesError(ValueError):
    pass


def _as_signedlog(samples) -> SignedLog:
    if isinstance(samples, SignedLog):
        return samples
    return SignedLog.from_real(np.asarray(samples, dtype=float))


class EmpiricalCdf:
    """Right-continuous empirical CDF over SignedLog samples.

    Negative samples are kept as sorted log-magnitudes, non-negative ones
    (zero included, as log-magnitude -inf) likewise, so no sample is ever
    exponentiated.
    """

    def __init__(self, samples):
        s = _as_signedlog(samples)
        sign = np.atleast_1d(s.sign)
        lm = np.atleast_1d(s.log_mag)
        self.n = lm.size
        if self.n == 0:
            raise InsufficientSamplesError("empirical CDF needs at least one sample")
        self._neg = np.sort(lm[sign < 0])
        self._pos = np.sort(lm[sign > 0])

    def __call__(self, t) -> np.ndarray:
        t = _as_signedlog(t)
        sign = np.atleast_1d(t.sign)
        lm = np.atleast_1d(t.log_mag)
        n_neg = self._neg.size
        below_pos = n_neg + np.searchsorted(self._pos, lm, side="right")
        # negatives v <= t < 0  <=>  log|v| >= log|t|
        below_neg = n_neg - np.searchsorted(self._neg, lm, side="left")
        out = np.where(sign > 0, below_pos, below_neg) / self.n
        return out if np.ndim(t.log_mag) else float(out[0])


@dataclass(frozen=True)
class KsReport:
    distance: float
    bound: float
    slack: float
    n_a: int
    n_b: int
    grid_points: int
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return asdict(self)


def dkw_epsilon(n: int, delta: float = DKW_DELTA) -> float:
    """sup |F_n - F| <= eps with probability >= 1 - delta."""
    return math.sqrt(math.log(2.0 / delta) / (2.0 * n))


def quantile_grid(samples: list, points: int = DEFAULT_GRID) -> SignedLog:
    """``points`` order statistics of the pooled samples, evenly spread in rank."""
    pooled = SignedLog.concat([_as_signedlog(s) for s in samples]).sorted()
    m = len(pooled)
    idx = np.unique(np.round(np.linspace(0, m - 1, points)).astype(np.int64))
    return pooled[idx]


def _check_n(n: int, what: str) -> None:
    if n < MIN_SAMPLES:
        raise InsufficientSamplesError(f"{what} has {n} samples, need at least {MIN_SAMPLES}")


def ks_two_sample(a, b, grid: int = DEFAULT_GRID, bound: float = 0.0,
                  delta: float = DKW_DELTA) -> KsReport:
    """Grid sup |F_a - F_b| against ``bound`` plus two-sample DKW slack."""
    a = _as_signedlog(a)
    b = _as_signedlog(b)
    n_a, n_b = a.log_mag.size, b.log_mag.size
    _check_n(n_a, "sample a")
    _check_n(n_b, "sample b")
    pts = quantile_grid([a, b], grid)
    dist = float(np.max(np.abs(EmpiricalCdf(a)(pts) - EmpiricalCdf(b)(pts))))
    slack = dkw_epsilon(n_a, delta) + dkw_epsilon(n_b, delta)
    verdict = "pass" if dist <= bound + slack else "fail"
    return KsReport(dist, float(bound), slack, n_a, n_b, len(pts), verdict)


def ks_one_sample(samples, cdf: Callable[[SignedLog], np.ndarray], grid: int = DEFAULT_GRID,
                  bound: float = 0.0, delta: float = DKW_DELTA) -> KsReport:
    """Grid sup |F_n - cdf| with one-sample DKW slack; ``cdf`` takes SignedLog points."""
    s = _as_signedlog(samples)
    n = s.log_mag.size
    _check_n(n, "sample")
    pts = quantile_grid([s], grid)
    ecdf = EmpiricalCdf(s)
    f = np.asarray(cdf(pts))
    upper = ecdf(pts)
    # left limit of the step at each grid sample
    dist = float(max(np.max(np.abs(upper - f)), np.max(np.abs(upper - 1.0 / n - f))))
    slack = dkw_epsilon(n, delta)
    verdict = "pass" if dist <= bound + slack else "fail"
    return KsReport(dist, float(bound), slack, n, 0, len(pts), verdict)


def prob_estimate(samples, event: Callable[[SignedLog], np.ndarray]) -> tuple[float, float]:
    """Fraction of samples where ``event`` holds and its binomial standard error."""
    s = _as_signedlog(samples)
    n = s.log_mag.size
    _check_n(n, "sample")
    p = float(np.count_nonzero(event(s))) / n
    return p, math.sqrt(p * (1.0 - p) / n)


def abs_at_most(t: float) -> Callable[[SignedLog], np.ndarray]:
    lt = math.log(t)
    return lambda s: np.asarray(s.log_mag) <= lt


def abs_above(t: float) -> Callable[[SignedLog], np.ndarray]:
    lt = math.log(t)
    return lambda s: np.asarray(s.log_mag) > lt


def at_most(t: float) -> Callable[[SignedLog], np.ndarray]:
    return lambda s: _le(s, t)


def _le(s: SignedLog, t: float) -> np.ndarray:
    sign = np.asarray(s.sign)
    lm = np.asarray(s.log_mag)
    if t > 0:
        return (sign < 0) | (lm <= math.log(t))
    if t == 0:
        return (sign < 0) | np.isneginf(lm)
    return (sign < 0) & (lm >= math.log(-t))
