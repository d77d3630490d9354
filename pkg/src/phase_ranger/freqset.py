"""Spectrum plans, LSF/RSF carrier sets and the GCD law for unambiguous range.

A carrier is described by its synthesizer register ``k``: ``f = k * f0``.
The unambiguous range of a set is ``C / (gcd(k) * f0)``, maximal (``C / f0``)
exactly when the registers are relatively prime.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .numtheory import gcd_set

__all__ = [
    "SPEED_OF_LIGHT",
    "PlanViolation",
    "SpectrumSegment",
    "FrequencyPlan",
    "FrequencySet",
    "build_lsf",
    "lsf_equal_bandwidth",
    "sample_rsf",
    "sample_rsf_batch",
    "random_layout",
    "unambiguous_range",
    "max_frequency_gap",
]

# Rounded on purpose: 1 MHz resolution maps to a 300 m range bound.
SPEED_OF_LIGHT = 3.0e8


class PlanViolation(ValueError):
    """A register falls outside every segment of a frequency plan."""

    def __init__(self, register, plan=None):
        self.register = register
        where = f" {plan.segments_as_pairs()}" if plan is not None else ""
        super().__init__(f"register {register} lies outside plan segments{where}")


@dataclass(frozen=True)
class SpectrumSegment:
    k_lo: int
    k_hi: int

    def __post_init__(self):
        if int(self.k_lo) != self.k_lo or int(self.k_hi) != self.k_hi:
            raise ValueError("segment bounds must be integers")
        object.__setattr__(self, "k_lo", int(self.k_lo))
        object.__setattr__(self, "k_hi", int(self.k_hi))
        if self.k_lo < 1:
            raise ValueError(f"segment start {self.k_lo} must be >= 1")
        if self.k_lo > self.k_hi:
            raise ValueError(f"empty segment [{self.k_lo}, {self.k_hi}]")

    def __len__(self):
        return self.k_hi - self.k_lo + 1

    def __contains__(self, k):
        return self.k_lo <= k <= self.k_hi


@dataclass(frozen=True)
class FrequencyPlan:
    """Candidate register set: disjoint ascending segments at resolution ``f0``."""

    f0: float
    segments: tuple
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        segs = tuple(
            s if isinstance(s, SpectrumSegment) else SpectrumSegment(*s)
            for s in self.segments
        )
        if not segs:
            raise ValueError("a plan needs at least one segment")
        for a, b in zip(segs, segs[1:]):
            if b.k_lo <= a.k_hi:
                raise ValueError("plan segments must be ascending and disjoint")
        if not self.f0 > 0:
            raise ValueError("f0 must be positive")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "f0", float(self.f0))
        object.__setattr__(self, "c", float(self.c))
        lengths = np.array([len(s) for s in segs], dtype=np.int64)
        object.__setattr__(self, "_offsets", np.concatenate(([0], np.cumsum(lengths))))

    @classmethod
    def contiguous(cls, k_lo, k_hi, f0, c=SPEED_OF_LIGHT):
        return cls(f0, (SpectrumSegment(k_lo, k_hi),), c)

    @property
    def n_total(self):
        """Number of available registers ``N``."""
        return int(self._offsets[-1])

    @property
    def n_segments(self):
        return len(self.segments)

    @property
    def k_min(self):
        return self.segments[0].k_lo

    @property
    def k_max(self):
        return self.segments[-1].k_hi

    @property
    def bandwidth(self):
        return (self.k_max - self.k_min) * self.f0

    @property
    def range_upper_bound(self):
        """``C / f0``, the largest unambiguous range any subset can reach."""
        return self.c / self.f0

    def segments_as_pairs(self):
        return [(s.k_lo, s.k_hi) for s in self.segments]

    def register_at(self, index):
        """Map positions in ``[0, N)`` of the sorted candidate set to registers."""
        index = np.asarray(index, dtype=np.int64)
        seg = np.searchsorted(self._offsets, index, side="right") - 1
        lo = np.array([s.k_lo for s in self.segments], dtype=np.int64)
        return lo[seg] + (index - self._offsets[seg])

    def contains(self, k):
        return any(k in s for s in self.segments)

    def registers(self):
        return np.concatenate(
            [np.arange(s.k_lo, s.k_hi + 1, dtype=np.int64) for s in self.segments]
        )

    def to_dict(self):
        d = {
            "f0_hz": self.f0,
            "segments": [{"k_lo": s.k_lo, "k_hi": s.k_hi} for s in self.segments],
        }
        if self.c != SPEED_OF_LIGHT:
            d["c_mps"] = self.c
        return d

    @classmethod
    def from_dict(cls, d):
        segs = tuple(SpectrumSegment(s["k_lo"], s["k_hi"]) for s in d["segments"])
        return cls(d["f0_hz"], segs, d.get("c_mps", SPEED_OF_LIGHT))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FrequencySet:
    """A measurement set: ``M`` distinct registers at resolution ``f0``."""

    f0: float
    registers: tuple
    c: float = SPEED_OF_LIGHT
    _k: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        regs = tuple(sorted(int(k) for k in self.registers))
        if not regs:
            raise ValueError("a frequency set needs at least one register")
        if regs[0] < 1:
            raise ValueError("registers must be positive")
        if len(set(regs)) != len(regs):
            raise ValueError("registers must be distinct")
        if not self.f0 > 0:
            raise ValueError("f0 must be positive")
        object.__setattr__(self, "registers", regs)
        object.__setattr__(self, "f0", float(self.f0))
        object.__setattr__(self, "c", float(self.c))
        k = np.array(regs, dtype=np.int64)
        k.flags.writeable = False
        object.__setattr__(self, "_k", k)

    @property
    def m(self):
        return len(self.registers)

    @property
    def k(self):
        """Registers as a read-only int64 array."""
        return self._k

    @property
    def frequencies(self):
        return self._k * self.f0

    @property
    def wavelengths(self):
        return self.c / self.frequencies

    @property
    def kappa(self):
        return gcd_set(self.registers)

    @property
    def range_upper_bound(self):
        return self.c / self.f0

    def to_dict(self):
        d = {"f0_hz": self.f0, "registers": list(self.registers)}
        if self.c != SPEED_OF_LIGHT:
            d["c_mps"] = self.c
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["f0_hz"], tuple(d["registers"]), d.get("c_mps", SPEED_OF_LIGHT))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def unambiguous_range(fset):
    """``C / (kappa * f0)`` in meters, ``kappa`` the GCD of the registers."""
    return fset.c / (fset.kappa * fset.f0)


def max_frequency_gap(fset):
    """Largest spacing between consecutive carriers, in Hz (0 for one carrier)."""
    if fset.m < 2:
        return 0.0
    return float(np.diff(fset.k).max()) * fset.f0


def build_lsf(plan, start_register, step, count):
    """Arithmetic register sequence ``start + i * step`` for ``i < count``."""
    if step < 1 or count < 1 or start_register < 1:
        raise ValueError("start_register, step and count must be positive")
    regs = [int(start_register) + i * int(step) for i in range(int(count))]
    for k in regs:
        if not plan.contains(k):
            raise PlanViolation(k, plan)
    return FrequencySet(plan.f0, tuple(regs), plan.c)


def lsf_equal_bandwidth(plan, m):
    """LSF set of ``m`` carriers spread over the plan's full register span.

    The step is ``floor((K_max - K_min) / (m - 1))``. The first register is
    the lowest one at or above ``K_min`` that is coprime with the step and
    keeps the whole sequence inside the span, so the set reaches the full
    ``C / f0`` range; if none fits, the step shrinks by one and the search
    repeats.
    """
    m = int(m)
    if m < 2:
        raise ValueError("an LSF set needs m >= 2")
    span = plan.k_max - plan.k_min
    step = span // (m - 1)
    while step >= 1:
        last_start = plan.k_max - (m - 1) * step
        for start in range(plan.k_min, last_start + 1):
            if math.gcd(start, step) == 1:
                return build_lsf(plan, start, step, m)
        step -= 1
    raise ValueError(f"plan span {span} cannot hold {m} LSF carriers")


def sample_rsf(plan, m, seed):
    """Draw ``m`` distinct registers uniformly from the plan.

    Deterministic for fixed ``(plan, m, seed)``; equals the matching row of
    :func:`sample_rsf_batch`.
    """
    regs = sample_rsf_batch(plan, m, [seed])[0]
    return FrequencySet(plan.f0, tuple(regs.tolist()), plan.c)


def sample_rsf_batch(plan, m, seeds):
    """Registers for many independent RSF draws, one sorted row per seed."""
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > plan.n_total:
        raise ValueError(f"cannot draw {m} registers from a plan with N={plan.n_total}")
    if isinstance(seeds, np.ndarray) and seeds.dtype == np.uint64:
        keys = seeds
    else:
        keys = np.asarray([int(s) & _rng.MASK64 for s in seeds], dtype=np.uint64)
    idx = _rng.sample_indices(keys, m, plan.n_total)
    return plan.register_at(idx)


def random_layout(k_min, k_max, n_total, n_segments, seed):
    """Scatter ``n_segments`` disjoint segments holding ``n_total`` registers
    over ``[k_min, k_max]``.

    Segment lengths and the free gaps between them are random compositions
    drawn from the seed; every segment is non-empty and separated from its
    neighbors by at least one unavailable register.
    """
    width = k_max - k_min + 1
    L = int(n_segments)
    if L < 1 or n_total < L:
        raise ValueError("need 1 <= n_segments <= n_total")
    free = width - n_total
    if free < L - 1:
        raise ValueError("window too narrow for the requested layout")
    key = _rng.derive_seed(seed, 0x1A)
    lengths = 1 + _composition(_rng.derive_seed(key, 1), n_total - L, L)
    # interior gaps need one blocked register each; the rest is spread freely
    gaps = _composition(_rng.derive_seed(key, 2), free - (L - 1), L + 1)
    gaps[1:L] += 1
    segs = []
    k = k_min + int(gaps[0])
    for i in range(L):
        segs.append(SpectrumSegment(k, k + int(lengths[i]) - 1))
        k += int(lengths[i]) + int(gaps[i + 1])
    return tuple(segs)


def _composition(key, total, parts):
    # uniform weak composition of total into parts via stars and bars
    if parts == 1:
        return np.array([total], dtype=np.int64)
    bars = _rng.sample_indices([key], parts - 1, total + parts - 1)[0]
    edges = np.concatenate(([-1], bars, [total + parts - 1]))
    return np.diff(edges) - 1
