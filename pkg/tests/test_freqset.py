import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phase_ranger.freqset import (
    SPEED_OF_LIGHT,
    FrequencyPlan,
    FrequencySet,
    PlanViolation,
    SpectrumSegment,
    build_lsf,
    lsf_equal_bandwidth,
    max_frequency_gap,
    random_layout,
    sample_rsf,
    sample_rsf_batch,
    unambiguous_range,
)


@pytest.fixture
def segmented_plan():
    return FrequencyPlan(1e3, ((10, 19), (40, 44), (100, 100), (500, 520)))


class TestTypes:
    def test_segment_invariants(self):
        assert len(SpectrumSegment(5, 9)) == 5
        with pytest.raises(ValueError):
            SpectrumSegment(9, 5)
        with pytest.raises(ValueError):
            SpectrumSegment(0, 5)

    def test_plan_rejects_overlap_and_disorder(self):
        with pytest.raises(ValueError):
            FrequencyPlan(1.0, ((1, 10), (10, 20)))
        with pytest.raises(ValueError):
            FrequencyPlan(1.0, ((30, 40), (1, 10)))
        with pytest.raises(ValueError):
            FrequencyPlan(0.0, ((1, 10),))

    def test_plan_summary(self, segmented_plan):
        p = segmented_plan
        assert p.n_total == 10 + 5 + 1 + 21
        assert (p.k_min, p.k_max) == (10, 520)
        assert p.bandwidth == (520 - 10) * 1e3
        assert p.range_upper_bound == SPEED_OF_LIGHT / 1e3

    def test_register_at_enumerates_plan(self, segmented_plan):
        regs = segmented_plan.register_at(np.arange(segmented_plan.n_total))
        assert regs.tolist() == segmented_plan.registers().tolist()

    def test_set_invariants(self):
        s = FrequencySet(1e6, (18, 6, 12))
        assert s.registers == (6, 12, 18)
        assert s.m == 3
        assert np.allclose(s.frequencies, [6e6, 12e6, 18e6])
        assert np.allclose(s.wavelengths, [50.0, 25.0, 50 / 3])
        with pytest.raises(ValueError):
            FrequencySet(1e6, (5, 5))
        with pytest.raises(ValueError):
            FrequencySet(1e6, ())

    def test_json_round_trip(self, segmented_plan):
        assert FrequencyPlan.from_json(segmented_plan.to_json()) == segmented_plan
        s = FrequencySet(1e6, (133, 139, 145))
        assert json.loads(s.to_json()) == {"f0_hz": 1e6, "registers": [133, 139, 145]}
        assert FrequencySet.from_json(s.to_json()) == s
        custom = FrequencySet(1.0, (3, 4), c=299792458.0)
        assert FrequencySet.from_json(custom.to_json()).c == 299792458.0


class TestUnambiguousRange:
    def test_coprime_reaches_bound(self):
        s = FrequencySet(1e6, (133, 139, 200))
        assert unambiguous_range(s) == 300.0

    def test_common_factor(self):
        assert unambiguous_range(FrequencySet(1e6, (6, 12, 18))) == 50.0

    def test_ten_megahertz_step(self):
        s = FrequencySet(1e6, tuple(range(100, 200, 10)))
        assert unambiguous_range(s) == 30.0

    @given(st.sets(st.integers(1, 10**6), min_size=1, max_size=10),
           st.sampled_from([1.0, 1e3, 1e6, 12.5e3]))
    def test_gcd_law(self, regs, f0):
        s = FrequencySet(f0, tuple(regs))
        lam = unambiguous_range(s)
        assert lam * s.kappa * f0 == pytest.approx(SPEED_OF_LIGHT, rel=2.3e-16)

    @given(st.sets(st.integers(1, 10**4), min_size=1, max_size=8), st.integers(1, 50))
    def test_scaling(self, regs, t):
        s = FrequencySet(1e3, tuple(regs))
        scaled = FrequencySet(1e3, tuple(t * k for k in regs))
        assert unambiguous_range(scaled) == pytest.approx(unambiguous_range(s) / t, rel=1e-15)


class TestBuildLsf:
    def test_simple(self):
        plan = FrequencyPlan.contiguous(1, 100, 1e6)
        assert build_lsf(plan, 5, 1, 3).registers == (5, 6, 7)

    def test_kilohertz_resolution_scenario(self):
        plan = FrequencyPlan.contiguous(1, 10**9, 1e3)
        s = build_lsf(plan, 131900001, 6000, 100)
        assert s.registers[:2] == (131900001, 131906001)
        assert s.m == 100
        assert s.registers[-1] == 131900001 + 99 * 6000

    def test_outside_plan(self):
        plan = FrequencyPlan.contiguous(10, 20, 1e6)
        with pytest.raises(PlanViolation) as err:
            build_lsf(plan, 5, 1, 3)
        assert err.value.register == 5

    def test_crosses_a_hole(self, segmented_plan):
        with pytest.raises(PlanViolation) as err:
            build_lsf(segmented_plan, 10, 5, 4)
        assert err.value.register == 20

    @pytest.mark.parametrize("m", [2, 5, 10, 30, 200])
    def test_equal_bandwidth_policy(self, m):
        plan = FrequencyPlan.contiguous(1000, 1599, 1e6)
        s = lsf_equal_bandwidth(plan, m)
        step = s.k[1] - s.k[0]
        assert step == 599 // (m - 1)
        assert s.kappa == 1
        assert s.k[0] >= 1000 and s.k[-1] <= 1599


class TestSampleRsf:
    def test_exhaustion(self, segmented_plan):
        s = sample_rsf(segmented_plan, segmented_plan.n_total, seed=123)
        assert list(s.registers) == segmented_plan.registers().tolist()

    def test_single(self):
        plan = FrequencyPlan.contiguous(10, 10, 1e6)
        assert sample_rsf(plan, 1, 99).registers == (10,)

    def test_deterministic(self, segmented_plan):
        assert sample_rsf(segmented_plan, 7, 42) == sample_rsf(segmented_plan, 7, 42)
        assert sample_rsf(segmented_plan, 7, 42) != sample_rsf(segmented_plan, 7, 43)

    def test_too_many(self, segmented_plan):
        with pytest.raises(ValueError):
            sample_rsf(segmented_plan, segmented_plan.n_total + 1, 0)

    @settings(max_examples=60)
    @given(st.integers(1, 37), st.integers(0, 2**64 - 1))
    def test_output_valid(self, m, seed):
        plan = FrequencyPlan(1e3, ((10, 19), (40, 44), (100, 100), (500, 520)))
        s = sample_rsf(plan, m, seed)
        assert s.m == m
        assert all(plan.contains(k) for k in s.registers)

    def test_batch_matches_single(self, segmented_plan):
        seeds = [3, 99, 2**63 + 1]
        batch = sample_rsf_batch(segmented_plan, 6, seeds)
        for row, seed in zip(batch, seeds):
            assert tuple(row.tolist()) == sample_rsf(segmented_plan, 6, seed).registers

    def test_inclusion_uniform(self, segmented_plan):
        trials, m = 40000, 5
        regs = sample_rsf_batch(segmented_plan, m, np.arange(trials, dtype=np.uint64))
        counts = np.unique(regs, return_counts=True)[1]
        p = m / segmented_plan.n_total
        sd = math.sqrt(trials * p * (1 - p))
        assert counts.size == segmented_plan.n_total
        assert np.all(np.abs(counts - trials * p) <= 4 * sd)


class TestRandomLayout:
    @pytest.mark.parametrize("L", [1, 7, 12])
    def test_layout_shape(self, L):
        segs = random_layout(132000, 862000, 2**15, L, seed=5)
        plan = FrequencyPlan(1e3, segs)
        assert plan.n_segments == L
        assert plan.n_total == 2**15
        assert plan.k_min >= 132000 and plan.k_max <= 862000

    def test_deterministic(self):
        assert random_layout(1, 1000, 100, 4, 9) == random_layout(1, 1000, 100, 4, 9)
        assert random_layout(1, 1000, 100, 4, 9) != random_layout(1, 1000, 100, 4, 10)

    def test_tight_window(self):
        segs = random_layout(1, 13, 10, 4, 0)
        assert sum(len(s) for s in segs) == 10
        with pytest.raises(ValueError):
            random_layout(1, 12, 10, 4, 0)


def test_max_gap():
    assert max_frequency_gap(FrequencySet(1e6, (1, 4, 10))) == 6e6
    assert max_frequency_gap(FrequencySet(1e6, (7,))) == 0.0
