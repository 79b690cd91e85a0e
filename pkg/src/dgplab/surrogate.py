"""Log-normal surrogate S * exp(Y) * g1(x)^{c_1} for polynomial-kernel DGPs."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dgp import (
    DgpSpec,
    FirstLayerKernel,
    LayerKernel,
    composition_exponents,
    eval_first_layer,
)
from .logmoments import SIGMA_LOG, VAR_LOG_ABS, abs_third_moment, holder_bound, mean_log_abs
from .rng import map_chunks
from .signedlog import SignedLog
from .specfun import CONSTANTS, DomainError

# non-identically distributed Berry-Esseen constant
BE_NONIID_C = 0.56

D2_POLICIES = ("multiplicative", "paper_additive", "linear")
D2_RTOL = 1e-9


@dataclass(frozen=True)
class SurrogateLaw:
    mu_y: float
    var_y: float
    c1: int
    first: FirstLayerKernel
    exponents: tuple[int, ...]  # c_2..c_l

    @property
    def sd_y(self) -> float:
        return math.sqrt(self.var_y)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exponents"] = list(self.exponents)
        return d


@dataclass(frozen=True)
class BeBound:
    value: float
    sum_var: float
    sum_rho: float
    rho_exact: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _need_layers(spec: DgpSpec) -> None:
    if spec.depth < 2:
        raise DomainError("surrogate needs depth >= 2 (at least one layer after the first)")


def surrogate_params(spec: DgpSpec) -> SurrogateLaw:
    _need_layers(spec)
    c = composition_exponents(spec)
    later = c[1:]
    mu = math.fsum(ci * mean_log_abs(layer.sigma) for ci, layer in zip(later, spec.layers))
    var = VAR_LOG_ABS * math.fsum(ci * ci for ci in later)
    return SurrogateLaw(mu_y=mu, var_y=var, c1=c[0], first=spec.first, exponents=tuple(later))


def be_bound_noniid(spec: DgpSpec, rho: str = "auto") -> BeBound:
    """0.56 (sum c_i^2 Var log|Y_i|)^{-3/2} sum c_i^3 E|log|Y_i||^3 over layers 2..l.

    ``rho="auto"`` uses the exact absolute third moment (quadrature where the
    closed form does not apply); ``rho="holder"`` uses the fourth-moment bound.
    """
    _need_layers(spec)
    if rho not in ("auto", "holder"):
        raise ValueError(f"rho must be 'auto' or 'holder', got {rho!r}")
    c = composition_exponents(spec)[1:]
    exact = True
    rhos = []
    for layer in spec.layers:
        if rho == "holder":
            rhos.append(holder_bound(layer.sigma))
            exact = False
        else:
            r, ok = abs_third_moment(layer.sigma)
            rhos.append(r)
            exact = exact and ok
    sum_var = VAR_LOG_ABS * math.fsum(ci**2 for ci in c)
    sum_rho = math.fsum(ci**3 * r for ci, r in zip(c, rhos))
    return BeBound(BE_NONIID_C * sum_rho / sum_var**1.5, sum_var, sum_rho, exact)


def _surrogate_block(law: SurrogateLaw, x: float, rng: np.random.Generator, m: int) -> SignedLog:
    sign = np.where(rng.integers(0, 2, size=m) == 1, 1, -1)
    y = rng.normal(law.mu_y, law.sd_y, size=m)
    z = rng.standard_normal((m, law.first.degree + 1))
    g1 = SignedLog.from_real(eval_first_layer(law.first, z, x)) ** law.c1
    return SignedLog(sign, y) * g1


def sample_surrogate(spec: DgpSpec, x: float, rng: np.random.Generator) -> SignedLog:
    return _surrogate_block(surrogate_params(spec), x, rng, 1)[0]


def sample_surrogates(spec: DgpSpec, x: float, n: int, seed: int = 0, threads: int = 1) -> SignedLog:
    law = surrogate_params(spec)
    parts = map_chunks(lambda rng, m: _surrogate_block(law, x, rng, m), n, seed, salt=4, threads=threads)
    return SignedLog.concat(parts)


def median_dgp_surrogate(spec: DgpSpec) -> float:
    """Median exp(mu_y) of exp(Y); inf on overflow."""
    mu = surrogate_params(spec).mu_y
    try:
        return math.exp(mu)
    except OverflowError:
        return math.inf


def threshold_sigma() -> float:
    """sigma at which E log|X| = 0, separating collapse from divergence."""
    return math.exp((CONSTANTS.euler_gamma + math.log(2.0)) / 2.0)


def d2_exponents(ell: int, policy: str) -> tuple[int, ...]:
    """Layer exponents (c_2..c_l) when d_2 = ... = d_l = 2.

    ``linear`` is the vector c_j = 2(l - j) for j < l, c_l = 1.
    """
    if policy == "linear":
        return tuple(2 * (ell - j) for j in range(2, ell)) + (1,)
    spec = DgpSpec.uniform(ell, 1.0, 2, exponent_policy=policy)
    return composition_exponents(spec)[1:]


@dataclass(frozen=True)
class D2Report:
    ell: int
    sigma: float
    policy: str
    exponents: tuple[int, ...]
    direct: dict
    paper_closed_form: dict
    flags: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "sigma": self.sigma,
            "policy": self.policy,
            "exponents": list(self.exponents),
            "direct": dict(self.direct),
            "paper_closed_form": dict(self.paper_closed_form),
            "flags": list(self.flags),
        }


def _rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def d2_report(ell: int, sigma: float, policy: str = "multiplicative") -> D2Report:
    """Direct coefficient sums for the d_i = 2 case next to the quadratic/cubic closed forms.

    Sums run over the later layers 2..l only. Any closed-form quantity that
    differs from its direct counterpart by more than 1e-9 (relative) is flagged.
    """
    if int(ell) != ell or ell < 3:
        raise DomainError(f"ell must be an integer >= 3, got {ell!r}")
    if not sigma > 0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")
    if policy not in D2_POLICIES:
        raise DomainError(f"policy must be one of {D2_POLICIES}, got {policy!r}")
    ell = int(ell)
    c = d2_exponents(ell, policy)
    m = mean_log_abs(sigma)
    rho, _ = abs_third_moment(sigma)
    s1 = float(sum(c))
    s2 = float(sum(ci * ci for ci in c))
    s3 = float(sum(ci**3 for ci in c))
    ratio = rho / SIGMA_LOG**3
    direct = {
        "sum_c": s1,
        "sum_c2": s2,
        "sum_c3": s3,
        "mu_y": s1 * m,
        "var_y": s2 * VAR_LOG_ABS,
        "be_bound": BE_NONIID_C * ratio * s3 / s2**1.5,
    }
    cf_s1 = float(ell * (ell - 1) - 1)
    cf_s2 = 2.0 * ell * (ell - 1) * (2 * ell - 1) / 3.0 - 3.0
    cf_s3 = float(2 * ell**2 * (ell - 1) ** 2 - 7)
    closed = {
        "sum_c": cf_s1,
        "sum_c_alt": float((ell - 1) ** 2 + ell),
        "sum_c2": cf_s2,
        "sum_c3": cf_s3,
        "mu_y": cf_s1 * m,
        "var_y": cf_s2 * VAR_LOG_ABS,
        "be_bound": BE_NONIID_C
        * ratio
        * cf_s3
        * 3.0**1.5
        / (2.0 * ell * (ell - 1) * (2 * ell - 1) - 9.0) ** 1.5,
        "be_bound_upper": 3.0 * ratio / math.sqrt(ell),
    }
    flags = []
    for key in ("sum_c", "sum_c2", "sum_c3", "mu_y", "var_y", "be_bound"):
        if _rel_diff(direct[key], closed[key]) > D2_RTOL:
            flags.append(f"{key}: direct {direct[key]:.12g} != closed form {closed[key]:.12g}")
    if _rel_diff(direct["sum_c"], closed["sum_c_alt"]) > D2_RTOL:
        flags.append(
            f"sum_c_alt: direct {direct['sum_c']:.12g} != closed form {closed['sum_c_alt']:.12g}"
        )
    if direct["be_bound"] > closed["be_bound_upper"] * (1 + D2_RTOL):
        flags.append(
            f"be_bound_upper: direct bound {direct['be_bound']:.12g} exceeds {closed['be_bound_upper']:.12g}"
        )
    return D2Report(ell, float(sigma), policy, c, direct, closed, tuple(flags))


def d2_spec(ell: int, sigma: float, policy: str = "multiplicative",
            first: FirstLayerKernel | None = None) -> DgpSpec:
    return DgpSpec(
        first=first or FirstLayerKernel(),
        layers=tuple(LayerKernel(sigma, 2) for _ in range(ell - 1)),
        exponent_policy=policy,
    )
