import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pqwf.dwt import ShapeError, wavedec
from pqwf.features import (
    FEATURE_NAMES,
    DegenerateInputError,
    entropy,
    extract_features,
    features_of,
    kurtosis,
    mean,
    skewness,
    std_dev,
)
from pqwf.signal_gen import DisturbanceClass as DC, SignalParams, generate_signal


# --- direct-summation oracle (plain Python, exactly rounded sums) ---------

def o_mean(d):
    return math.fsum(d) / len(d)


def o_std(d):
    m = o_mean(d)
    return math.sqrt(math.fsum((x - m) ** 2 for x in d) / len(d))


def o_moment(d, order):
    m, s = o_mean(d), o_std(d)
    if s == 0:
        return 0.0
    return math.fsum(((x - m) / s) ** order for x in d) / len(d)


def o_entropy(d):
    total = math.fsum(x * x for x in d)
    return -math.fsum((x * x / total) * math.log2(x * x / total) for x in d if x != 0)


ORACLES = {
    "mean": (mean, o_mean),
    "std_dev": (std_dev, o_std),
    "skewness": (skewness, lambda d: o_moment(d, 3)),
    "kurtosis": (kurtosis, lambda d: o_moment(d, 4)),
    "entropy": (entropy, o_entropy),
}


def rel_close(a, b, rtol=1e-12, floor=1e-12):
    return abs(a - b) <= rtol * max(abs(b), floor)


def random_arrays(count, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, 1001))
        kind = rng.integers(3)
        if kind == 0:
            yield rng.normal(rng.normal(0, 3), rng.uniform(0.01, 10), n)
        elif kind == 1:
            yield rng.uniform(-5, 5, n)
        else:
            yield rng.exponential(rng.uniform(0.1, 3), n) - rng.uniform(0, 1)


@pytest.mark.parametrize("name", list(ORACLES))
def test_oracle_equivalence(name):
    impl, oracle = ORACLES[name]
    for d in random_arrays(200):
        # mean of centred data can sit near zero: measure error against the data scale
        floor = float(np.max(np.abs(d))) if name == "mean" else 1e-12
        assert rel_close(impl(d), oracle(list(d)), floor=floor), name


# --- closed-form cases -----------------------------------------------------

def test_mean_cases():
    assert mean([1, 1, 1, 1]) == 1.0
    assert mean([-2, 2]) == 0.0
    assert mean([1, 2, 3, 4]) == 2.5


def test_std_cases():
    assert std_dev([3.3] * 7) == 0.0
    assert std_dev([-1, 1]) == 1.0
    assert std_dev([1, 2, 3, 4]) == pytest.approx(math.sqrt(1.25), rel=1e-15)


def test_kurtosis_cases():
    assert kurtosis([-1, 1, -1, 1]) == 1.0
    assert kurtosis([2.0] * 5) == 0.0


def test_kurtosis_of_normal_sample():
    x = np.random.default_rng(1159).standard_normal(100_000)
    assert abs(kurtosis(x) - 3.0) < 0.1


def test_skewness_cases():
    assert skewness([-3, -1, 1, 3]) == 0.0
    assert skewness([4.0] * 3) == 0.0
    # direct evaluation: mean 1/4, variance 3/16, third central moment 3/32
    assert skewness([0, 0, 0, 1]) == pytest.approx(o_moment([0, 0, 0, 1], 3), rel=1e-12)
    assert skewness([0, 0, 0, 1]) == pytest.approx(2 / math.sqrt(3), rel=1e-12)


def test_entropy_cases():
    assert entropy([0.5] * 16) == pytest.approx(4.0, abs=1e-12)
    assert entropy([-2.0, 2.0, 2.0, -2.0, 2.0]) == pytest.approx(math.log2(5), abs=1e-12)
    assert entropy([0.0, 3.0, 0.0]) == 0.0
    assert entropy([1, 1, math.sqrt(2)]) == pytest.approx(1.5, abs=1e-12)


def test_entropy_all_zero_is_degenerate():
    with pytest.raises(DegenerateInputError):
        entropy(np.zeros(8))


@pytest.mark.parametrize("fn", [mean, std_dev, skewness, kurtosis, entropy])
def test_empty_input_rejected(fn):
    with pytest.raises(ShapeError):
        fn([])


def test_extract_uses_level_three():
    x = generate_signal(DC.SWELL, SignalParams(depth=0.5)).samples
    decomp = wavedec(x, 3)
    fv = extract_features(decomp, DC.SWELL)
    assert fv == features_of(decomp.details[2], DC.SWELL)
    assert len(decomp.details[2]) == 80
    assert list(FEATURE_NAMES) == ["entropy", "std_dev", "mean", "skewness", "kurtosis"]
    assert fv.as_array().shape == (5,)


def test_extract_rejects_constant_signal():
    with pytest.raises(DegenerateInputError):
        extract_features(wavedec(np.full(640, 1.0), 3))


def test_extract_needs_three_levels():
    with pytest.raises(ShapeError):
        extract_features(wavedec(np.random.default_rng(0).normal(size=640), 2))


def test_sine_and_swell_differ():
    sine = generate_signal(DC.SWELL, SignalParams(depth=0.0)).samples
    swell = generate_signal(DC.SWELL, SignalParams(depth=0.5)).samples
    a = extract_features(wavedec(sine, 3))
    b = extract_features(wavedec(swell, 3))
    assert a.std_dev != b.std_dev and a.entropy != b.entropy


def test_feature_vector_invariants_on_generated_data():
    from pqwf.signal_gen import DatasetSpec, generate_dataset

    for rec in generate_dataset(DatasetSpec(signals_per_class=5)):
        fv = extract_features(wavedec(rec.samples, 3))
        arr = fv.as_array()
        assert np.all(np.isfinite(arr))
        assert fv.entropy >= 0
        assert fv.std_dev > 0 and fv.kurtosis >= 1 - 1e-12


# --- properties ------------------------------------------------------------

coeffs = arrays(
    np.float64, st.integers(2, 200), elements=st.floats(-100, 100, allow_nan=False)
).filter(lambda d: np.ptp(d) > 1e-3 * max(1.0, float(np.max(np.abs(d)))))


@given(d=coeffs, c=st.floats(0.01, 100))
@settings(max_examples=80, deadline=None)
def test_scale_behaviour(d, c):
    assert mean(c * d) == pytest.approx(c * mean(d), rel=1e-9, abs=1e-9 * c * np.max(np.abs(d)))
    assert std_dev(c * d) == pytest.approx(c * std_dev(d), rel=1e-9)
    assert skewness(c * d) == pytest.approx(skewness(d), rel=1e-7, abs=1e-9)
    assert kurtosis(c * d) == pytest.approx(kurtosis(d), rel=1e-9)
    assert entropy(c * d) == pytest.approx(entropy(d), rel=1e-9, abs=1e-12)


@given(d=coeffs, c=st.floats(-50, 50))
@settings(max_examples=80, deadline=None)
def test_shift_behaviour(d, c):
    scale = float(np.max(np.abs(d))) + abs(c)
    assert mean(d + c) == pytest.approx(mean(d) + c, abs=1e-12 * scale * 10)
    assert std_dev(d + c) == pytest.approx(std_dev(d), rel=1e-7)
    assert skewness(d + c) == pytest.approx(skewness(d), rel=1e-5, abs=1e-6)
    assert kurtosis(d + c) == pytest.approx(kurtosis(d), rel=1e-5)


@given(d=coeffs, seed=st.integers(0, 1000))
@settings(max_examples=80, deadline=None)
def test_permutation_invariance(d, seed):
    p = np.random.default_rng(seed).permutation(d)
    a, b = features_of(d).as_array(), features_of(p).as_array()
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * float(np.max(np.abs(d))))
