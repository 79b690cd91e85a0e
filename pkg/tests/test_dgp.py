import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgplab.dgp import (
    DgpPath,
    DgpSpec,
    FirstLayerKernel,
    LayerKernel,
    composition_exponents,
    eval_first_layer,
    eval_path_product,
    eval_path_recursive,
    feature_map,
    sample_dgp,
    sample_path,
    sample_paths,
)
from dgplab.rng import substream
from dgplab.specfun import DomainError


def test_feature_map_examples():
    assert np.allclose(feature_map(FirstLayerKernel(0, 1), 1.7), [1.7, 0.0])
    phi = feature_map(FirstLayerKernel(1.0, 2), 1.0)
    assert np.allclose(phi, [1, math.sqrt(2), 1])
    assert phi @ phi == pytest.approx(4.0)


@settings(max_examples=100)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 4), st.integers(1, 5), st.floats(0.1, 3))
def test_kernel_reproduction(x, y, c, d, scale):
    k = FirstLayerKernel(c, d, scale)
    lhs = feature_map(k, x) @ feature_map(k, y)
    rhs = k.kernel(x, y)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * scale**2 * (abs(x * y) + c + 1) ** d)


def test_eval_first_layer_basis_and_c0():
    k = FirstLayerKernel(2.0, 3, 1.5)
    assert eval_first_layer(k, [1, 0, 0, 0], 0.7) == pytest.approx(1.5 * 0.7**3)
    k0 = FirstLayerKernel(0.0, 3)
    assert eval_first_layer(k0, [0.4, 9, 9, 9], 2.0) == pytest.approx(0.4 * 8)
    with pytest.raises(DomainError):
        eval_first_layer(k, [1, 2], 0.1)


def test_first_layer_covariance():
    k = FirstLayerKernel(0.5, 2)
    n = 100_000
    z = substream(11).standard_normal((n, 3))
    grid = np.linspace(-1.5, 1.5, 5)
    g = np.stack([eval_first_layer(k, z, x) for x in grid])
    for i, x in enumerate(grid):
        for j, y in enumerate(grid):
            prod = g[i] * g[j]
            se = prod.std() / math.sqrt(n)
            assert abs(prod.mean() - k.kernel(x, y)) <= 3 * se + 1e-12


def test_composition_exponents_examples():
    three = DgpSpec.uniform(3, 1.0, 2)
    assert composition_exponents(three) == (4, 2, 1)
    assert composition_exponents(DgpSpec.uniform(4, 1.0, 2)) == (8, 4, 2, 1)
    assert composition_exponents(DgpSpec.uniform(4, 1.0, 2, exponent_policy="paper_additive")) == (6, 4, 2, 1)
    assert composition_exponents(DgpSpec.uniform(1, 1.0)) == (1,)
    assert composition_exponents(DgpSpec.uniform(5, 1.0, 1)) == (1,) * 5
    assert composition_exponents(DgpSpec.uniform(5, 1.0, 1, exponent_policy="paper_additive")) == (4, 3, 2, 1, 1)


def test_recursive_oracle_picks_multiplicative():
    spec_m = DgpSpec.uniform(4, 1.3, 2)
    spec_a = DgpSpec.uniform(4, 1.3, 2, exponent_policy="paper_additive")
    path = sample_path(spec_m, substream(3))
    rec = eval_path_recursive(spec_m, path, 0.9)
    mult = eval_path_product(spec_m, path, 0.9)
    add = eval_path_product(spec_a, path, 0.9)
    assert rec.log_mag == pytest.approx(mult.log_mag, rel=1e-12)
    assert abs(rec.log_mag - add.log_mag) > 1e-6


def _random_spec(rng):
    ell = int(rng.integers(1, 6))
    first = FirstLayerKernel(float(rng.uniform(0, 2)), int(rng.integers(1, 4)), float(rng.uniform(0.5, 2)))
    layers = [LayerKernel(float(rng.uniform(0.3, 3)), int(rng.integers(1, 4))) for _ in range(ell - 1)]
    return DgpSpec(first, tuple(layers))


def test_pathwise_identity_randomized():
    rng = substream(2024)
    for _ in range(1000):
        spec = _random_spec(rng)
        path = sample_path(spec, rng)
        x = float(rng.uniform(-2, 2))
        a = eval_path_product(spec, path, x)
        b = eval_path_recursive(spec, path, x)
        assert a.sign == b.sign
        assert abs(a.log_mag - b.log_mag) <= 1e-9 * max(1.0, abs(b.log_mag))


def test_linear_special_case():
    spec = DgpSpec.linear(6, 2.0)
    path = sample_path(spec, substream(5))
    v = eval_path_recursive(spec, path, 1.5)
    u = np.concatenate([[2.0 * path.z[0]], path.y])
    assert v.to_real() == pytest.approx(1.5 * np.prod(u), rel=1e-12)
    assert eval_path_recursive(spec, path, 0.0).is_zero()


def test_sample_path_properties():
    spec = DgpSpec.uniform(3, 2.0, 2)
    a = sample_path(spec, substream(1))
    b = sample_path(spec, substream(1))
    assert np.array_equal(a.y, b.y) and np.array_equal(a.z, b.z)
    assert sample_path(DgpSpec.uniform(1, 1.0), substream(1)).y.size == 0
    paths = sample_paths(spec, 100_000, seed=2)
    var = paths.y[:, 0].var()
    se = 4.0 * math.sqrt(2 / 100_000)
    assert abs(var - 4.0) < 3 * se
    with pytest.raises(DomainError):
        DgpPath(np.zeros(3), np.zeros(1)).check(spec)


def test_sign_symmetry():
    n = 200_000
    spec = DgpSpec.uniform(3, 1.0, 2, FirstLayerKernel(1.0, 2))
    v = sample_dgp(spec, 0.7, n, seed=4)
    p = np.mean(v.sign < 0)
    assert abs(p - 0.5) <= 3 / (2 * math.sqrt(n))


def test_spec_json_round_trip(tmp_path):
    spec = DgpSpec(FirstLayerKernel(0.5, 2, 1.2), (LayerKernel(1.0, 2), LayerKernel(3.0, 1)), "paper_additive")
    assert DgpSpec.from_json(spec.to_json()) == spec
    f = tmp_path / "spec.json"
    f.write_text(spec.to_json())
    assert DgpSpec.load(f) == spec


@pytest.mark.parametrize("payload", [
    {"first": {"c": 0}, "layers": [], "extra": 1},
    {"first": {"c": 0, "deg": 1}},
    {"layers": [{"sigma": 1.0, "degree": 1, "foo": 2}]},
    {"layers": [{"degree": 2}]},
    {"layers": [{"sigma": -1.0}]},
    {"first": {"degree": 0}},
    {"first": {"c": -1}},
    {"exponent_policy": "other"},
    {"layers": {"sigma": 1}},
])
def test_spec_rejects_invalid(payload):
    with pytest.raises(DomainError):
        DgpSpec.from_json(json.dumps(payload))


def test_spec_rejects_bad_json():
    with pytest.raises(DomainError):
        DgpSpec.from_json("{not json")
    with pytest.raises(DomainError):
        DgpSpec.from_json("[1, 2]")
