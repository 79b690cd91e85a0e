"""Berry-Esseen log-normal approximation of deep GP priors with polynomial kernels."""

from .dgp import DgpPath, DgpSpec, FirstLayerKernel, LayerKernel, composition_exponents
from .logmoments import LogAbsMoments, abs_third_moment, mean_log_abs, moments, variance_log_abs
from .montecarlo import EmpiricalCdf, KsReport, ks_one_sample, ks_two_sample, prob_estimate
from .products import GaussianLaw, ProductConfig, be_bound_iid, surrogate_product_law
from .signedlog import SignedLog
from .specfun import DomainError
from .surrogate import BeBound, SurrogateLaw, be_bound_noniid, d2_report, surrogate_params, threshold_sigma

__all__ = [
    "BeBound", "DgpPath", "DgpSpec", "DomainError", "EmpiricalCdf", "FirstLayerKernel",
    "GaussianLaw", "KsReport", "LayerKernel", "LogAbsMoments", "ProductConfig", "SignedLog",
    "SurrogateLaw", "abs_third_moment", "be_bound_iid", "be_bound_noniid", "composition_exponents",
    "d2_report", "ks_one_sample", "ks_two_sample", "mean_log_abs", "moments", "prob_estimate",
    "surrogate_params", "surrogate_product_law", "threshold_sigma", "variance_log_abs",
]
