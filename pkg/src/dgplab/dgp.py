"""Polynomial-kernel deep GPs on the real line.

The first layer has kernel scale^2 (xy + c)^d1 and is the finite sum
g1(x) = <z, phi(x)> with z ~ N(0, I). Every later layer has kernel
sigma_i^2 (xy)^di, whose draws are exactly g_i(x) = y_i x^di with
y_i ~ N(0, sigma_i^2). Composing gives the flat product

    g_l o ... o g_1(x) = prod_{i>=2} y_i^{c_i} * g1(x)^{c_1}

for the composition exponents c_i.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rng import map_chunks
from .signedlog import SignedLog
from .specfun import DomainError

POLICIES = ("multiplicative", "paper_additive")


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)


@dataclass(frozen=True)
class FirstLayerKernel:
    c: float = 0.0
    degree: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if not _is_int(self.degree) or self.degree < 1:
            raise DomainError(f"first-layer degree must be an integer >= 1, got {self.degree!r}")
        if not _is_real(self.c) or not (self.c >= 0 and math.isfinite(self.c)):
            raise DomainError(f"c must be a finite real >= 0, got {self.c!r}")
        if not _is_real(self.scale) or not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be a finite real > 0, got {self.scale!r}")

    def kernel(self, x, y):
        return self.scale**2 * (np.multiply(x, y) + self.c) ** self.degree


@dataclass(frozen=True)
class LayerKernel:
    sigma: float
    degree: int = 1

    def __post_init__(self):
        if not _is_int(self.degree) or self.degree < 1:
            raise DomainError(f"layer degree must be an integer >= 1, got {self.degree!r}")
        if not _is_real(self.sigma) or not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"layer sigma must be a finite real > 0, got {self.sigma!r}")


@dataclass(frozen=True)
class DgpSpec:
    first: FirstLayerKernel = field(default_factory=FirstLayerKernel)
    layers: tuple[LayerKernel, ...] = ()
    exponent_policy: str = "multiplicative"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.exponent_policy not in POLICIES:
            raise DomainError(f"exponent_policy must be one of {POLICIES}, got {self.exponent_policy!r}")

    @property
    def depth(self) -> int:
        return 1 + len(self.layers)

    @classmethod
    def uniform(
        cls,
        depth: int,
        sigma: float,
        degree: int = 1,
        first: FirstLayerKernel | None = None,
        exponent_policy: str = "multiplicative",
    ) -> "DgpSpec":
        """All later layers share (sigma, degree)."""
        if depth < 1:
            raise DomainError("depth must be >= 1")
        return cls(
            first=first or FirstLayerKernel(),
            layers=tuple(LayerKernel(sigma, degree) for _ in range(depth - 1)),
            exponent_policy=exponent_policy,
        )

    @classmethod
    def linear(cls, depth: int, sigma: float) -> "DgpSpec":
        """Every layer with kernel sigma^2 xy."""
        return cls.uniform(depth, sigma, 1, FirstLayerKernel(0.0, 1, sigma))

    def to_dict(self) -> dict:
        return {
            "first": {"c": self.first.c, "degree": self.first.degree, "scale": self.first.scale},
            "layers": [{"sigma": l.sigma, "degree": l.degree} for l in self.layers],
            "exponent_policy": self.exponent_policy,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "DgpSpec":
        _reject_unknown(data, {"first", "layers", "exponent_policy"}, "spec")
        first = data.get("first", {})
        if not isinstance(first, dict):
            raise DomainError("'first' must be an object")
        _reject_unknown(first, {"c", "degree", "scale"}, "first")
        layers = data.get("layers", [])
        if not isinstance(layers, list):
            raise DomainError("'layers' must be a list")
        parsed = []
        for i, layer in enumerate(layers):
            if not isinstance(layer, dict):
                raise DomainError(f"layers[{i}] must be an object")
            _reject_unknown(layer, {"sigma", "degree"}, f"layers[{i}]")
            if "sigma" not in layer:
                raise DomainError(f"layers[{i}] is missing 'sigma'")
            parsed.append(LayerKernel(layer["sigma"], layer.get("degree", 1)))
        return cls(
            first=FirstLayerKernel(first.get("c", 0.0), first.get("degree", 1), first.get("scale", 1.0)),
            layers=tuple(parsed),
            exponent_policy=data.get("exponent_policy", "multiplicative"),
        )

    @classmethod
    def from_json(cls, text: str) -> "DgpSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"spec is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("spec must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "DgpSpec":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise DomainError(f"unknown field(s) in {where}: {sorted(extra)}")


@dataclass(frozen=True)
class DgpPath:
    """Raw draws of one DGP sample path (or a batch, with a leading axis)."""

    z: np.ndarray
    y: np.ndarray

    def check(self, spec: DgpSpec) -> None:
        if np.shape(self.z)[-1] != spec.first.degree + 1:
            raise DomainError(
                f"expected {spec.first.degree + 1} first-layer draws, got {np.shape(self.z)[-1]}"
            )
        if np.shape(self.y)[-1] != len(spec.layers):
            raise DomainError(f"expected {len(spec.layers)} layer draws, got {np.shape(self.y)[-1]}")


def feature_map(first: FirstLayerKernel, x):
    """scale * (C(d,i)^{1/2} x^{d-i} c^{i/2})_{i=0..d}; trailing axis is the feature."""
    d = first.degree
    x = np.asarray(x, dtype=float)[..., None]
    i = np.arange(d + 1)
    coef = np.sqrt([math.comb(d, k) for k in i]) * first.c ** (i / 2.0)
    return first.scale * coef * x ** (d - i)


def eval_first_layer(first: FirstLayerKernel, z, x):
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != first.degree + 1:
        raise DomainError(f"expected {first.degree + 1} draws, got {z.shape[-1]}")
    phi = feature_map(first, x)
    if z.ndim == 1:
        return phi @ z
    # batch of paths against one x (or matching batch of x)
    return np.sum(z * phi, axis=-1)


def composition_exponents(spec: DgpSpec) -> tuple[int, ...]:
    """Exponents (c_1, ..., c_l) of g1 and the layer draws in the flat product."""
    d = [layer.degree for layer in spec.layers]  # d_2..d_l
    n = len(d)
    if spec.exponent_policy == "multiplicative":
        out = [1] * (n + 1)
        for i in range(n - 1, -1, -1):
            out[i] = out[i + 1] * d[i]
        return tuple(out)
    # c_l = 1, c_i = sum_{j>i} d_j
    out = [sum(d[i:]) for i in range(n)] + [1]
    return tuple(out)


def sample_path(spec: DgpSpec, rng: np.random.Generator) -> DgpPath:
    z = rng.standard_normal(spec.first.degree + 1)
    sig = np.array([l.sigma for l in spec.layers], dtype=float)
    y = rng.standard_normal(len(sig)) * sig
    return DgpPath(z, y)


def sample_paths(spec: DgpSpec, n: int, seed: int = 0, threads: int = 1) -> DgpPath:
    """Batch of ``n`` paths; ``z`` is (n, d1+1), ``y`` is (n, l-1)."""
    sig = np.array([l.sigma for l in spec.layers], dtype=float)

    def block(rng, m):
        z = rng.standard_normal((m, spec.first.degree + 1))
        y = rng.standard_normal((m, len(sig))) * sig
        return z, y

    parts = map_chunks(block, n, seed, salt=3, threads=threads)
    if not parts:
        return DgpPath(np.empty((0, spec.first.degree + 1)), np.empty((0, len(sig))))
    return DgpPath(np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts]))


def eval_path_product(spec: DgpSpec, path: DgpPath, x) -> SignedLog:
    """Flat-product evaluation with the spec's composition exponents."""
    path.check(spec)
    c = composition_exponents(spec)
    out = SignedLog.from_real(eval_first_layer(spec.first, path.z, x)) ** c[0]
    y = np.asarray(path.y, dtype=float)
    for i in range(len(spec.layers)):
        out = out * SignedLog.from_real(y[..., i]) ** c[i + 1]
    return out


def eval_path_recursive(spec: DgpSpec, path: DgpPath, x) -> SignedLog:
    """Layer-by-layer composition v <- y_i * v^{d_i}, starting from v = g1(x)."""
    path.check(spec)
    v = SignedLog.from_real(eval_first_layer(spec.first, path.z, x))
    y = np.asarray(path.y, dtype=float)
    for i, layer in enumerate(spec.layers):
        v = SignedLog.from_real(y[..., i]) * v**layer.degree
    return v


def sample_dgp(spec: DgpSpec, x: float, n: int, seed: int = 0, threads: int = 1) -> SignedLog:
    """``n`` independent draws of the DGP value at a single input ``x``."""
    return eval_path_recursive(spec, sample_paths(spec, n, seed, threads), x)
