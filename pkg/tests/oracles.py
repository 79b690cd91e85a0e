"""Independent reference values: mpmath quadrature and numerical differentiation.

Nothing here imports the closed forms under test.
"""

import mpmath as mp

mp.mp.dps = 30


def log_abs_moment(sigma, power, absolute=False):
    """E[log^p |X|] (or E|log|X||^p) for X ~ N(0, sigma^2), by quadrature in |X|."""
    s = mp.mpf(sigma)

    def f(u):
        lg = mp.log(u)
        v = abs(lg) ** power if absolute else lg**power
        return v * mp.exp(-u * u / (2 * s * s))

    pts = [0, min(s, 1), max(s, 1), mp.inf]
    return float(mp.sqrt(2 / (mp.pi * s * s)) * mp.quad(f, pts))


def gamma_log_moment(n):
    """int_0^inf x^{-1/2} e^{-x} log^n x dx = Gamma^{(n)}(1/2)."""
    return float(mp.quad(lambda x: x ** mp.mpf(-0.5) * mp.exp(-x) * mp.log(x) ** n, [0, 1, mp.inf]))


def incgamma_s_derivative(order, x):
    """d^m/ds^m Gamma(s, x) at s = 1/2 by high-precision numerical differentiation."""
    return float(mp.diff(lambda s: mp.gammainc(s, mp.mpf(x), mp.inf), mp.mpf(0.5), order))


def t_oracle(n, x):
    """T(n, 1/2, x) recovered from incomplete-gamma s-derivatives.

    D1 = L G + x T3, D2 = L^2 G + 2x(L T3 + T4), D3 = L^3 G + 3x(L^2 T3 + 2 L T4 + 2 T5),
    with G = Gamma(1/2, x) and L = log x.
    """
    x = mp.mpf(x)
    L = mp.log(x)
    G = mp.gammainc(mp.mpf(0.5), x, mp.inf)
    d = [mp.diff(lambda s: mp.gammainc(s, x, mp.inf), mp.mpf(0.5), k) for k in (1, 2, 3)]
    t3 = (d[0] - L * G) / x
    if n == 3:
        return float(t3)
    t4 = ((d[1] - L**2 * G) / (2 * x)) - L * t3
    if n == 4:
        return float(t4)
    t5 = ((d[2] - L**3 * G) / (3 * x) - L**2 * t3 - 2 * L * t4) / 2
    return float(t5)


def erf_quad(x):
    return float(2 / mp.sqrt(mp.pi) * mp.quad(lambda t: mp.exp(-t * t), [0, x]))
