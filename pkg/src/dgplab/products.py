"""Products of iid centred Gaussians and their log-normal surrogate.

A product prod X_i^alpha is handled as its sign times exp(alpha * sum log|X_i|);
the sign is a product of independent fair signs and is independent of the
magnitude, so it never has to be formed from the raw product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .logmoments import SIGMA_LOG, VAR_LOG_ABS, abs_third_moment, mean_log_abs
from .rng import map_chunks
from .signedlog import SignedLog
from .specfun import DEFAULT_TRUNCATION, DomainError, SeriesTruncation

# iid Berry-Esseen constants
BE_IID_C = 0.336
BE_IID_SHIFT = 0.415


@dataclass(frozen=True)
class ProductConfig:
    layers: int
    sigma: float
    alpha: int = 1

    def __post_init__(self):
        if int(self.layers) != self.layers or self.layers < 1:
            raise DomainError(f"layers must be a positive integer, got {self.layers!r}")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise DomainError(f"alpha must be a positive integer, got {self.alpha!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be a finite positive real, got {self.sigma!r}")


@dataclass(frozen=True)
class GaussianLaw:
    mu: float
    var: float

    def __post_init__(self):
        if not self.var >= 0:
            raise DomainError(f"variance must be >= 0, got {self.var!r}")

    @property
    def sd(self) -> float:
        return math.sqrt(self.var)


def _product_block(cfg: ProductConfig, rng: np.random.Generator, size: int) -> SignedLog:
    x = rng.normal(0.0, cfg.sigma, size=(size, cfg.layers))
    with np.errstate(divide="ignore"):
        log_mag = cfg.alpha * np.log(np.abs(x)).sum(axis=1)
    if cfg.alpha % 2:
        negatives = np.count_nonzero(x < 0, axis=1)
        sign = np.where(negatives % 2, -1, 1)
    else:
        sign = np.ones(size, dtype=np.int8)
    return SignedLog(sign, log_mag)


def sample_product(cfg: ProductConfig, rng: np.random.Generator) -> SignedLog:
    """One draw of prod_{i<=layers} X_i^alpha with X_i ~ N(0, sigma^2)."""
    return _product_block(cfg, rng, 1)[0]


def sample_products(cfg: ProductConfig, n: int, seed: int = 0, threads: int = 1) -> SignedLog:
    blocks = map_chunks(lambda rng, m: _product_block(cfg, rng, m), n, seed, salt=1, threads=threads)
    return SignedLog.concat(blocks)


def surrogate_product_law(cfg: ProductConfig) -> GaussianLaw:
    """Law of Z_alpha with prod |X_i|^alpha ~ exp(Z_alpha)."""
    return GaussianLaw(
        mu=cfg.layers * cfg.alpha * mean_log_abs(cfg.sigma),
        var=cfg.layers * cfg.alpha**2 * VAR_LOG_ABS,
    )


def sample_surrogate_products(
    cfg: ProductConfig, n: int, seed: int = 0, threads: int = 1
) -> SignedLog:
    """Draws of S * exp(Z_alpha); S is a fair sign for odd alpha and +1 for even alpha."""
    law = surrogate_product_law(cfg)

    def block(rng, m):
        log_mag = rng.normal(law.mu, law.sd, size=m)
        if cfg.alpha % 2:
            sign = np.where(rng.integers(0, 2, size=m) == 1, 1, -1)
        else:
            sign = np.ones(m, dtype=np.int8)
        return SignedLog(sign, log_mag)

    return SignedLog.concat(map_chunks(block, n, seed, salt=2, threads=threads))


def be_bound_iid(cfg: ProductConfig, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Kolmogorov-distance bound between prod |X_i|^alpha and exp(Z_alpha).

    The alpha^3 in the third moment cancels against (alpha sigma_log)^3, so the
    value only depends on layers and sigma. It also bounds the signed
    comparison: both sides carry the same independent fair sign, and
    F_signed(t) = 1/2 + F(t)/2 for t > 0, 1/2 - F(|t|^-)/2 for t < 0, so the
    signed distance is at most half the unsigned one.
    """
    rho, _ = abs_third_moment(cfg.sigma, trunc)
    s3 = SIGMA_LOG**3
    return BE_IID_C * (rho + BE_IID_SHIFT * s3) / (s3 * math.sqrt(cfg.layers))


def _norm_cdf(z):
    return special.ndtr(z)


def surrogate_cdf(law: GaussianLaw, signed: bool, t):
    """CDF of exp(Z) (``signed=False``) or S*exp(Z) with fair S (``signed=True``).

    ``t`` may be a real, an array of reals, or a :class:`SignedLog`.
    """
    if law.var <= 0:
        raise DomainError("surrogate CDF needs a positive variance")
    if isinstance(t, SignedLog):
        sign = np.asarray(t.sign)
        log_t = np.asarray(t.log_mag, dtype=float)
    else:
        tv = np.asarray(t, dtype=float)
        sign = np.where(tv < 0, -1, 1)
        with np.errstate(divide="ignore"):
            log_t = np.log(np.abs(tv))
    phi = _norm_cdf((log_t - law.mu) / law.sd)
    positive = (sign > 0) & ~np.isneginf(log_t)
    zero = np.isneginf(log_t)
    if signed:
        upper = 0.5 + 0.5 * phi
        # written as 1 - F(|t|) so the reflection identity holds bit for bit
        out = np.where(positive, upper, np.where(zero, 0.5, 1.0 - upper))
    else:
        out = np.where(positive, phi, 0.0)
    return float(out) if out.ndim == 0 else out


def median_surrogate(cfg: ProductConfig) -> float:
    """Median exp(layers * alpha * E log|X|) of exp(Z_alpha); inf on overflow."""
    try:
        return math.exp(cfg.layers * cfg.alpha * mean_log_abs(cfg.sigma))
    except OverflowError:
        return math.inf
