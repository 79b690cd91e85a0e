"""Moments of log|X| for a centred Gaussian X ~ N(0, sigma^2)."""

from __future__ import annotations

import math
import numbers
from dataclasses import asdict, dataclass

from scipy import integrate

from .specfun import (
    CONSTANTS,
    DEFAULT_TRUNCATION,
    PSI_HALF_NEG,
    DomainError,
    SeriesTruncation,
    erf,
    gamma_half_derivative,
    incomplete_gamma_s_derivative_at,
)

VAR_LOG_ABS = math.pi**2 / 8.0
SIGMA_LOG = math.sqrt(VAR_LOG_ABS)

QUAD_EPSABS = 1e-10


def _check(sigma: float) -> None:
    if not (isinstance(sigma, numbers.Real) and sigma > 0 and math.isfinite(sigma)):
        raise DomainError(f"sigma must be a finite positive real, got {sigma!r}")


@dataclass(frozen=True)
class LogAbsMoments:
    sigma: float
    mean: float
    second: float
    variance: float
    abs_third: float
    fourth: float
    abs_third_exact: bool

    def to_dict(self) -> dict:
        return asdict(self)


def quadrature_moment(sigma: float, power: int, absolute: bool = False) -> float:
    """E[log^p |X|] (or E|log|X||^p) by adaptive quadrature.

    Integrates over u = |X|/sigma so the split point u = 1/sigma, where
    log|X| changes sign, is explicit; the u = 0 endpoint carries the
    integrable log singularity.
    """
    _check(sigma)
    ls = math.log(sigma)
    norm = math.sqrt(2.0 / math.pi)

    def f(u):
        v = ls + math.log(u)
        if absolute:
            v = abs(v)
        return v**power * math.exp(-0.5 * u * u)

    split = 1.0 / sigma
    pts = sorted({split, 1.0})
    edges = [0.0, *pts, math.inf]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200)
        total += val
    return norm * total


def mean_log_abs(sigma: float) -> float:
    _check(sigma)
    return math.log(sigma) - (CONSTANTS.euler_gamma + math.log(2.0)) / 2.0


def second_moment_log_abs(sigma: float) -> float:
    _check(sigma)
    lr = math.log(math.sqrt(2.0) * sigma)
    k = PSI_HALF_NEG
    return lr**2 - lr * k + (k**2 + math.pi**2 / 2.0) / 4.0


def variance_log_abs(sigma: float) -> float:
    """Var log|X|; pi^2/8 whatever sigma is."""
    _check(sigma)
    return VAR_LOG_ABS


def fourth_moment_log_abs(sigma: float) -> float:
    _check(sigma)
    lr = math.log(math.sqrt(2.0) * sigma)
    k = PSI_HALF_NEG
    z3 = CONSTANTS.zeta3
    pi2 = math.pi**2
    return (
        lr**4
        - 2.0 * lr**3 * k
        + 1.5 * lr**2 * (k**2 + pi2 / 2.0)
        - 0.5 * lr * (k**3 + 1.5 * pi2 * k + 14.0 * z3)
        + (k**4 + 3.0 * pi2 * k**2 + 56.0 * k * z3 + 7.0 * math.pi**4 / 4.0) / 16.0
    )


def holder_bound(sigma: float) -> float:
    """Upper bound (E log^4|X|)^{3/4} on E|log|X||^3, valid for every sigma > 0."""
    return fourth_moment_log_abs(sigma) ** 0.75


def abs_third_closed_form(sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """E|log|X||^3 via incomplete-gamma derivatives; needs sigma^2 > 1/2.

    The split |X| = 1 corresponds to b = 1/(sqrt(2) sigma) after rescaling by
    sqrt(2) sigma, and int_b^inf log^j(y) e^{-y^2} dy = 2^-(j+1) d^j/ds^j Gamma(s, b^2),
    so the incomplete gamma is evaluated at b^2 = 1/(2 sigma^2).
    """
    _check(sigma)
    if not sigma * sigma > 0.5:
        raise DomainError(f"closed form requires sigma**2 > 1/2, got sigma={sigma!r}")
    b = 1.0 / (math.sqrt(2.0) * sigma)
    lr = math.log(math.sqrt(2.0) * sigma)
    a = b * b
    sp = CONSTANTS.sqrt_pi
    diff = [
        2.0 * incomplete_gamma_s_derivative_at(j, a, trunc) - gamma_half_derivative(j)
        for j in (1, 2, 3)
    ]
    return (
        lr**3 * (1.0 - 2.0 * erf(b))
        + 3.0 / (2.0 * sp) * lr**2 * diff[0]
        + 3.0 / (4.0 * sp) * lr * diff[1]
        + 1.0 / (8.0 * sp) * diff[2]
    )


def abs_third_moment(
    sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION
) -> tuple[float, bool]:
    """Return ``(rho, exact)``; quadrature stands in where the closed form is not valid."""
    _check(sigma)
    if sigma * sigma > 0.5:
        return abs_third_closed_form(sigma, trunc), True
    return quadrature_moment(sigma, 3, absolute=True), False


def moments(sigma: float, method: str = "closed") -> LogAbsMoments:
    """All log|X| moments for one sigma.

    ``method="quadrature"`` computes every field by quadrature instead.
    """
    _check(sigma)
    if method == "closed":
        rho, exact = abs_third_moment(sigma)
        mean = mean_log_abs(sigma)
        second = second_moment_log_abs(sigma)
        return LogAbsMoments(
            sigma=float(sigma),
            mean=mean,
            second=second,
            variance=variance_log_abs(sigma),
            abs_third=rho,
            fourth=fourth_moment_log_abs(sigma),
            abs_third_exact=exact,
        )
    if method == "quadrature":
        mean = quadrature_moment(sigma, 1)
        second = quadrature_moment(sigma, 2)
        return LogAbsMoments(
            sigma=float(sigma),
            mean=mean,
            second=second,
            variance=second - mean**2,
            abs_third=quadrature_moment(sigma, 3, absolute=True),
            fourth=quadrature_moment(sigma, 4),
            abs_third_exact=False,
        )
    raise ValueError(f"unknown method {method!r}")
