"""Gamma-function derivatives at 1/2 and s-derivatives of the upper incomplete gamma.

Everything here is evaluated at ``s = 1/2``. The upper incomplete gamma
derivatives are expressed through the auxiliary function

    T(n, 1/2, x) = G^{n,0}_{n-1,n}(x | 0,...,0; -1/2, -1,...,-1),

expanded as the residue at the order-(n-2) pole ``u = -1`` plus the residues
at ``u = k - 1/2`` (k = 0, 1, ...). The expansion is entire in ``x``; callers
that take ``sigma`` restrict themselves to ``sigma**2 > 1/2`` (``x < 1``),
where the alternating series has monotonically shrinking terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Argument outside the domain of a closed-form expression."""


@dataclass(frozen=True)
class SpecfunConstants:
    euler_gamma: float
    zeta2: float
    zeta3: float
    zeta4: float
    sqrt_pi: float


CONSTANTS = SpecfunConstants(
    euler_gamma=float(np.euler_gamma),
    zeta2=math.pi**2 / 6.0,
    # Apery's constant; no closed form.
    zeta3=1.2020569031595942853997381615114,
    zeta4=math.pi**4 / 90.0,
    sqrt_pi=math.sqrt(math.pi),
)

# 2 log 2 + gamma = -psi(1/2)
PSI_HALF_NEG = 2.0 * math.log(2.0) + CONSTANTS.euler_gamma


@dataclass(frozen=True)
class SeriesTruncation:
    """Number of series terms kept: the sum runs over k = 0..k_max."""

    k_max: int = 10

    def __post_init__(self):
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise DomainError(f"k_max must be an integer >= 1, got {self.k_max!r}")


DEFAULT_TRUNCATION = SeriesTruncation()


def _log_gamma_half_moments() -> tuple[float, ...]:
    # Gamma^{(n)}(1/2) / sqrt(pi) for n = 0..4, i.e. E[log^n G], G ~ Gamma(1/2, 1).
    k = PSI_HALF_NEG
    z2, z3, z4 = CONSTANTS.zeta2, CONSTANTS.zeta3, CONSTANTS.zeta4
    return (
        1.0,
        -k,
        k**2 + 3.0 * z2,
        -(k**3 + 9.0 * k * z2 + 14.0 * z3),
        k**4 + 18.0 * k**2 * z2 + 56.0 * k * z3 + 27.0 * z2**2 + 90.0 * z4,
    )


_GAMMA_HALF_MOMENTS = _log_gamma_half_moments()


def gamma_half_derivative(order: int) -> float:
    """n-th derivative of Gamma(s) at s = 1/2, for n in 0..4.

    >>> round(gamma_half_derivative(0) ** 2, 12) == round(math.pi, 12)
    True
    """
    if order not in (0, 1, 2, 3, 4):
        raise DomainError(f"order must be in 0..4, got {order!r}")
    return CONSTANTS.sqrt_pi * _GAMMA_HALF_MOMENTS[order]


def _shifted_moment(j: int, shift: float) -> float:
    # sum_i C(j, i) Gamma^{(i)}(1/2)/sqrt(pi) * shift^(j-i)
    return sum(
        math.comb(j, i) * _GAMMA_HALF_MOMENTS[i] * shift ** (j - i) for i in range(j + 1)
    )


def _check_n(n: int) -> None:
    if n not in (3, 4, 5):
        raise DomainError(f"n must be in 3..5, got {n!r}")


def _check_x(x: float) -> None:
    if not x > 0:
        raise DomainError(f"incomplete gamma argument must be > 0, got {x!r}")


def _check_sigma(sigma: float) -> None:
    if not sigma > 0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")
    if not sigma * sigma > 0.5:
        raise DomainError(f"closed form requires sigma**2 > 1/2, got sigma={sigma!r}")


def _x_of_sigma(sigma: float) -> float:
    return 1.0 / (math.sqrt(2.0) * sigma)


def t_residue_at(n: int, x: float) -> float:
    """Contribution of the pole at u = -1 to T(n, 1/2, x)."""
    _check_n(n)
    _check_x(x)
    j = n - 2
    return CONSTANTS.sqrt_pi * _shifted_moment(j, -math.log(x)) / (math.factorial(j) * x)


def t_series_at(n: int, x: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """Sum of the residues at u = k - 1/2, k = 0..k_max."""
    _check_n(n)
    _check_x(x)
    outer = (-1.0) ** (n - 1)
    total = 0.0
    for k in range(trunc.k_max + 1):
        total += (-1.0) ** k * x ** (k - 0.5) / (math.factorial(k) * (k + 0.5) ** (n - 1))
    return outer * total


def t_function_at(n: int, x: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    return t_residue_at(n, x) + t_series_at(n, x, trunc)


def t_residue(n: int, sigma: float) -> float:
    """Pole contribution of T(n, 1/2, 1/(sqrt(2) sigma)); requires sigma**2 > 1/2."""
    _check_n(n)
    _check_sigma(sigma)
    return t_residue_at(n, _x_of_sigma(sigma))


def t_function(n: int, sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    """T(n, 1/2, 1/(sqrt(2) sigma)) by residue plus truncated alternating series.

    Parameters
    ----------
    n : int
        Order, one of 3, 4, 5.
    sigma : float
        Standard deviation; must satisfy ``sigma**2 > 1/2``.
    trunc : SeriesTruncation
        Series terms k = 0..k_max are summed.
    """
    _check_n(n)
    _check_sigma(sigma)
    return t_function_at(n, _x_of_sigma(sigma), trunc)


def upper_gamma_half(x: float) -> float:
    """Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))."""
    _check_x(x)
    return CONSTANTS.sqrt_pi * math.erfc(math.sqrt(x))


def incomplete_gamma_s_derivative_at(
    order: int, x: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION
) -> float:
    """d^m/ds^m Gamma(s, x) at s = 1/2 for m in 1..3.

    Uses  D^m Gamma(s,x) = log^m(x) Gamma(s,x)
                           + m x sum_{i<m} (m-1)!/(m-1-i)! log^{m-1-i}(x) T(3+i, s, x).
    """
    if order not in (1, 2, 3):
        raise DomainError(f"order must be in 1..3, got {order!r}")
    _check_x(x)
    lx = math.log(x)
    acc = 0.0
    for i in range(order):
        perm = math.factorial(order - 1) // math.factorial(order - 1 - i)
        acc += perm * lx ** (order - 1 - i) * t_function_at(3 + i, x, trunc)
    return lx**order * upper_gamma_half(x) + order * x * acc


def incomplete_gamma_s_derivative(
    order: int, sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION
) -> float:
    """d^m/ds^m Gamma(s, 1/(sqrt(2) sigma)) at s = 1/2; requires sigma**2 > 1/2."""
    if order not in (1, 2, 3):
        raise DomainError(f"order must be in 1..3, got {order!r}")
    _check_sigma(sigma)
    return incomplete_gamma_s_derivative_at(order, _x_of_sigma(sigma), trunc)


def lower_incomplete_gamma_s_derivative(
    order: int, sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION
) -> float:
    return gamma_half_derivative(order) - incomplete_gamma_s_derivative(order, sigma, trunc)


def erf(x):
    """Error function; scalar in, float out, arrays broadcast."""
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return special.erf(np.asarray(x, dtype=float))


# Expansion with every pole moved one unit to the right (u = 1/2 + k, order n-1
# at u = -1). It is kept only to tabulate its coefficients; it does not
# reproduce the incomplete gamma derivatives and nothing numeric depends on it.


def shifted_t_series_coefficients(n: int, k_max: int = 10) -> list[float]:
    """Coefficients a_k of sigma**-(k + 1/2) in the shifted series, k = 0..k_max."""
    _check_n(n)
    sign = -1.0 if n == 4 else 1.0
    return [
        sign * (-1.0) ** k / (math.factorial(k) * (1.5 + k) ** (n - 1) * 2.0 ** ((k + 0.5) / 2))
        for k in range(k_max + 1)
    ]


def shifted_t_residue(n: int, sigma: float) -> float:
    _check_n(n)
    _check_sigma(sigma)
    b = PSI_HALF_NEG + math.log(math.sqrt(2.0) * sigma)
    z2, z3, z4 = CONSTANTS.zeta2, CONSTANTS.zeta3, CONSTANTS.zeta4
    root2pi = math.sqrt(2.0 * math.pi)
    if n == 3:
        return sigma * math.sqrt(math.pi / 2.0) * (b**2 + 3.0 * z2)
    if n == 4:
        return sigma * root2pi / 6.0 * (b**3 + 9.0 * z2 * b + 14.0 * z3)
    return sigma * root2pi / 24.0 * (
        b**4 + 18.0 * z2 * b**2 + 56.0 * z3 * b + 27.0 * z2**2 + 90.0 * z4
    )


def shifted_t_function(n: int, sigma: float, trunc: SeriesTruncation = DEFAULT_TRUNCATION) -> float:
    coeffs = shifted_t_series_coefficients(n, trunc.k_max)
    return shifted_t_residue(n, sigma) + sum(
        a * sigma ** -(k + 0.5) for k, a in enumerate(coeffs)
    )
