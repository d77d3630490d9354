import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phase_ranger import _rng


def test_mix64_reference_vector():
    # first output of SplitMix64 seeded with 0 (reference C implementation)
    assert _rng.mix64(0 + _rng.GOLDEN) == 0xE220A8397B1DCDAF


def test_raw_draws_match_scalar_mixer():
    keys = np.array([0, 1, 2**63 + 5], dtype=np.uint64)
    raw = _rng.raw_draws(keys[:, None], np.arange(3)[None, :])
    for i, k in enumerate(keys.tolist()):
        for c in range(3):
            assert int(raw[i, c]) == _rng.mix64(k + (c + 1) * _rng.GOLDEN)


@given(st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=4))
def test_derive_seed_array_matches_scalar(parts):
    assert int(_rng.derive_seed_array(*parts)) == _rng.derive_seed(*parts)


def test_uniform_range_and_mean():
    u = _rng.uniform(_rng.derive_seed_array(7, np.arange(200000)), 0)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 4 * (1 / 12 / u.size) ** 0.5


def test_normal_moments():
    z = _rng.normal(_rng.derive_seed_array(3, np.arange(200000)))
    assert abs(z.mean()) < 4 / z.size**0.5
    assert abs(z.var() - 1) < 4 * (2 / z.size) ** 0.5


@given(st.integers(0, 2**64 - 1), st.integers(1, 30), st.integers(0, 40))
def test_sample_indices_distinct_in_range(key, m, extra):
    n = m + extra
    row = _rng.sample_indices([key], m, n)[0]
    assert len(set(row.tolist())) == m
    assert row.min() >= 0 and row.max() < n
    assert np.all(np.diff(row) > 0)


def test_sample_indices_rows_independent_of_batch():
    keys = _rng.derive_seed_array(11, np.arange(50))
    batch = _rng.sample_indices(keys, 5, 1000)
    for i in (0, 17, 49):
        assert np.array_equal(batch[i], _rng.sample_indices(keys[i : i + 1], 5, 1000)[0])


def test_sample_indices_uniform_subsets():
    # all 10 subsets of size 2 from 5 items, equally likely
    rows = _rng.sample_indices(_rng.derive_seed_array(5, np.arange(100000)), 2, 5)
    codes = rows[:, 0] * 5 + rows[:, 1]
    counts = np.unique(codes, return_counts=True)[1]
    assert counts.size == 10
    expected = 10000
    assert np.all(np.abs(counts - expected) < 4 * (expected * 0.9) ** 0.5)


def test_sample_indices_too_many():
    with pytest.raises(ValueError):
        _rng.sample_indices([1], 6, 5)
