"""Command-line front end: ``dgplab <command> [flags]``.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import figures
from .dgp import DgpSpec, sample_dgp
from .logmoments import moments
from .montecarlo import MIN_SAMPLES, InsufficientSamplesError, ks_two_sample
from .products import (
    ProductConfig,
    be_bound_iid,
    median_surrogate,
    sample_products,
    sample_surrogate_products,
    surrogate_product_law,
)
from .signedlog import SignedLog
from .specfun import DomainError
from .surrogate import (
    D2_POLICIES,
    be_bound_noniid,
    d2_report,
    median_dgp_surrogate,
    sample_surrogates,
    surrogate_params,
    threshold_sigma,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4
SEED_MAX = 2**64 - 1
MAX_SAMPLES = 10**9
MAX_LAYERS = 10**4
GRID_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- flag types

def _int_in(lo: int, hi: int, name: str):
    def parse(text: str) -> int:
        try:
            v = int(text, 10)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{name} must be in [{lo}, {hi}], got {v}")
        return v

    return parse


def _positive_real(name: str):
    def parse(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a real number, got {text!r}")
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be a finite real > 0, got {text}")
        return v

    return parse


def _finite_real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"x must be a real number, got {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"x must be finite, got {text}")
    return v


def parse_x_grid(text: str) -> np.ndarray:
    """``A:B:STEP``, inclusive of B when (B - A)/STEP is integral within 1e-9."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"--x-grid must be A:B:STEP, got {text!r}")
    a, b, step = (_finite_real(p) for p in parts)
    if not step > 0:
        raise argparse.ArgumentTypeError("--x-grid STEP must be > 0")
    if b < a:
        raise argparse.ArgumentTypeError("--x-grid needs A <= B")
    q = (b - a) / step
    k = round(q)
    count = k + 1 if abs(q - k) <= GRID_TOL else math.floor(q) + 1
    if count > 10**5:
        raise argparse.ArgumentTypeError("--x-grid has more than 100000 points")
    return a + step * np.arange(count)


_seed = _int_in(0, SEED_MAX, "seed")
_samples = _int_in(MIN_SAMPLES, MAX_SAMPLES, "samples")
_layers = _int_in(1, MAX_LAYERS, "layers")
_alpha = _int_in(1, 1000, "alpha")
_threads = _int_in(1, 1024, "threads")


def _default_seed() -> int:
    env = os.environ.get("DGPLAB_SEED")
    if env is None or env == "":
        return 0
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"DGPLAB_SEED: {exc}")


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="64-bit unsigned seed (default $DGPLAB_SEED or 0)")
    common.add_argument("--threads", type=_threads, default=1, help="worker cap; results do not depend on it")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")

    p = _Parser(prog="dgplab", description="Log-normal approximation of deep GP priors with polynomial kernels.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("moments", parents=[common], help="moments of log|X|, X ~ N(0, sigma^2)")
    m.add_argument("--sigma", type=_positive_real("sigma"), required=True)
    m.add_argument("--method", choices=("closed", "quadrature"), default="closed")

    b = sub.add_parser("be-bound", parents=[common], help="iid Berry-Esseen bound for a Gaussian product")
    b.add_argument("--layers", type=_layers, required=True)
    b.add_argument("--sigma", type=_positive_real("sigma"), required=True)
    b.add_argument("--alpha", type=_alpha, default=1)

    pr = sub.add_parser("product", parents=[common], help="sample or check products of Gaussians")
    pr.add_argument("action", choices=("sample", "compare"))
    pr.add_argument("--layers", type=_layers, required=True)
    pr.add_argument("--sigma", type=_positive_real("sigma"), required=True)
    pr.add_argument("--alpha", type=_alpha, default=1)
    pr.add_argument("--samples", type=_samples, default=100_000)

    d = sub.add_parser("dgp", parents=[common], help="sample or check a DGP against its surrogate")
    d.add_argument("action", choices=("sample", "compare"))
    d.add_argument("--spec", required=True, help="DgpSpec JSON file")
    xs = d.add_mutually_exclusive_group(required=True)
    xs.add_argument("--x", type=_finite_real)
    xs.add_argument("--x-grid", type=parse_x_grid, dest="x_grid")
    d.add_argument("--samples", type=_samples, default=100_000)

    s = sub.add_parser("surrogate", parents=[common], help="surrogate law parameters or median")
    s.add_argument("action", choices=("params", "median"))
    s.add_argument("--spec", required=True)

    r = sub.add_parser("d2-report", parents=[common], help="d_i = 2 coefficient sums vs closed forms")
    r.add_argument("--layers", type=_int_in(3, MAX_LAYERS, "layers"), required=True)
    r.add_argument("--sigma", type=_positive_real("sigma"), required=True)
    r.add_argument("--policy", choices=D2_POLICIES, default="multiplicative")

    sub.add_parser("threshold", parents=[common], help="collapse/divergence threshold sigma")

    f = sub.add_parser("figure", parents=[common], help="write CSV and JSON data for one figure panel")
    f.add_argument("--id", choices=figures.FIGURE_IDS, required=True, dest="figure_id")
    f.add_argument("--samples", type=_samples, default=figures.DEFAULT_N)
    return p


# ---------------------------------------------------------------- output

def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _scalar_report(obj: dict, fmt: str | None) -> str:
    if fmt == "csv":
        keys = list(obj)
        return ",".join(keys) + "\n" + ",".join(_csv_cell(obj[k]) for k in keys) + "\n"
    return _json(obj)


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, float, np.integer, np.floating)):
        return figures.format_number(v)
    return json.dumps(v).replace(",", ";")


def _samples_table(columns: dict, fmt: str | None) -> str:
    data = figures.FigureData("samples", columns)
    if fmt == "json":
        return _json({k: [figures._json_value(v) for v in col] for k, col in columns.items()})
    return data.to_csv()


def _signed_cols(v: SignedLog, prefix: str = "value") -> dict:
    return {f"{prefix}_sign": np.asarray(v.sign, dtype=np.int64),
            f"{prefix}_logmag": np.asarray(v.log_mag, dtype=float)}


# ---------------------------------------------------------------- commands

def _cmd_moments(a):
    return _scalar_report({"sigma": a.sigma, "method": a.method, **moments(a.sigma, a.method).to_dict()}, a.format), EXIT_OK


def _cmd_be_bound(a):
    cfg = ProductConfig(a.layers, a.sigma, a.alpha)
    law = surrogate_product_law(cfg)
    rep = {"layers": a.layers, "sigma": a.sigma, "alpha": a.alpha, "be_bound_iid": be_bound_iid(cfg),
           "surrogate_mu": law.mu, "surrogate_var": law.var, "median_surrogate": median_surrogate(cfg)}
    return _scalar_report(rep, a.format), EXIT_OK


def _cmd_product(a):
    cfg = ProductConfig(a.layers, a.sigma, a.alpha)
    if a.action == "sample":
        s = sample_products(cfg, a.samples, a.seed, a.threads)
        return _samples_table(_signed_cols(s), a.format), EXIT_OK
    prod = sample_products(cfg, a.samples, a.seed, a.threads)
    sur = sample_surrogate_products(cfg, a.samples, a.seed, a.threads)
    rep = ks_two_sample(prod, sur, bound=be_bound_iid(cfg))
    body = {"layers": a.layers, "sigma": a.sigma, "alpha": a.alpha, "seed": a.seed, **rep.to_dict()}
    return _scalar_report(body, a.format), EXIT_OK if rep.passed else EXIT_VERIFY


def _xs(a) -> np.ndarray:
    return np.array([a.x]) if a.x is not None else a.x_grid


def _cmd_dgp(a):
    spec = DgpSpec.load(a.spec)
    xs = _xs(a)
    if a.action == "sample":
        cols = {"x": [], "value_sign": [], "value_logmag": []}
        for x in xs:
            v = sample_dgp(spec, float(x), a.samples, a.seed, a.threads)
            cols["x"].append(np.full(a.samples, x))
            cols["value_sign"].append(np.asarray(v.sign, dtype=np.int64))
            cols["value_logmag"].append(np.asarray(v.log_mag))
        return _samples_table({k: np.concatenate(v) for k, v in cols.items()}, a.format), EXIT_OK
    bound = be_bound_noniid(spec)
    reports, ok = [], True
    for x in xs:
        dg = sample_dgp(spec, float(x), a.samples, a.seed, a.threads)
        sg = sample_surrogates(spec, float(x), a.samples, a.seed, a.threads)
        rep = ks_two_sample(dg, sg, bound=bound.value)
        ok = ok and rep.passed
        reports.append({"x": float(x), **rep.to_dict()})
    if a.format == "csv":
        keys = list(reports[0])
        text = ",".join(keys) + "\n" + "".join(
            ",".join(_csv_cell(r[k]) for k in keys) + "\n" for r in reports)
    else:
        text = _json({"seed": a.seed, "bound": bound.to_dict(), "reports": reports,
                      "verdict": "pass" if ok else "fail"})
    return text, EXIT_OK if ok else EXIT_VERIFY


def _cmd_surrogate(a):
    spec = DgpSpec.load(a.spec)
    if a.action == "params":
        law = surrogate_params(spec)
        rep = law.to_dict()
        rep["be_bound"] = be_bound_noniid(spec).to_dict()
        return _scalar_report(rep, a.format), EXIT_OK
    return _scalar_report({"median_dgp_surrogate": median_dgp_surrogate(spec)}, a.format), EXIT_OK


def _cmd_d2(a):
    rep = d2_report(a.layers, a.sigma, a.policy).to_dict()
    if a.format == "csv":
        rows = ["quantity,direct,paper_closed_form"]
        for key in sorted(set(rep["direct"]) | set(rep["paper_closed_form"])):
            d, c = rep["direct"].get(key), rep["paper_closed_form"].get(key)
            rows.append(f"{key},{'' if d is None else figures.format_number(d)},"
                        f"{'' if c is None else figures.format_number(c)}")
        return "\n".join(rows) + "\n", EXIT_OK
    return _json(rep), EXIT_OK


def _cmd_threshold(a):
    v = threshold_sigma()
    if a.format == "csv":
        return f"threshold_sigma\n{v!r}\n", EXIT_OK
    return _json({"threshold_sigma": v}), EXIT_OK


def _cmd_figure(a):
    if a.out is None:
        raise UsageError("figure needs --out DIR")
    data = figures.figure_data(a.figure_id, n=a.samples, seed=a.seed, threads=a.threads)
    csv_path, json_path = data.write(a.out)
    return f"{csv_path}\n{json_path}\n", EXIT_OK


COMMANDS = {
    "moments": _cmd_moments,
    "be-bound": _cmd_be_bound,
    "product": _cmd_product,
    "dgp": _cmd_dgp,
    "surrogate": _cmd_surrogate,
    "d2-report": _cmd_d2,
    "threshold": _cmd_threshold,
    "figure": _cmd_figure,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dgplab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InsufficientSamplesError) as exc:
        print(f"dgplab: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"dgplab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    # figure writes its own files; --out elsewhere redirects the report
    _emit(text, None if args.command == "figure" else args.out)
    return code


def main() -> None:
    sys.exit(run())
