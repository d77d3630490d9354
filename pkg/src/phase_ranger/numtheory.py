"""Integer kernels: set GCD, Moebius sieve, coprime-tuple counting, 1/zeta(m).

The exact counter works on a candidate set given as disjoint contiguous
register segments. For every divisor ``j`` the number of multiples inside a
segment ``[lo, hi]`` is ``hi // j - (lo - 1) // j``, so the count of coprime
``m``-tuples is obtained by inclusion-exclusion without scanning the set.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "MobiusTable",
    "CoprimeCountResult",
    "gcd_set",
    "mobius_sieve",
    "zeta_inverse",
    "zeta_inverse_tail_bound",
    "multiples_in_segment",
    "segments_from_candidates",
    "coprime_count_exact",
    "coprime_count_segments",
]

DEFAULT_ZETA_LIMIT = 10**6


def gcd_set(registers):
    """Greatest common divisor of a non-empty collection of positive integers."""
    values = [int(k) for k in registers]
    if not values:
        raise ValueError("gcd_set needs at least one register")
    if min(values) < 1:
        raise ValueError("registers must be positive integers")
    return math.gcd(*values)


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """Moebius values for ``1 <= j <= limit``.

    ``values[j]`` holds mu(j); ``values[0]`` is a zero pad so indices line
    up with ``j``. The array is read-only.
    """

    limit: int
    values: np.ndarray

    def __getitem__(self, j):
        if not 1 <= j <= self.limit:
            raise IndexError(f"mu({j}) outside table [1, {self.limit}]")
        return int(self.values[j])

    def __len__(self):
        return self.limit

    def tolist(self):
        return self.values[1:].tolist()


def _primes_upto(n):
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime)


@functools.lru_cache(maxsize=8)
def _mobius_cached(limit):
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in _primes_upto(limit):
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    mu.flags.writeable = False
    return mu


def mobius_sieve(limit):
    """Tabulate the Moebius function on ``[1, limit]`` with a prime sieve."""
    limit = int(limit)
    if limit < 1:
        raise ValueError("mobius_sieve limit must be >= 1")
    return MobiusTable(limit, _mobius_cached(limit))


def zeta_inverse_tail_bound(m, limit):
    """Upper bound ``limit**(1-m) / (m-1)`` on the truncation error of
    :func:`zeta_inverse`."""
    return float(limit) ** (1 - m) / (m - 1)


def zeta_inverse(m, limit=DEFAULT_ZETA_LIMIT):
    """Truncated Dirichlet series ``sum_{j<=limit} mu(j) / j**m``.

    Approximates ``1/zeta(m)``; the error is at most
    :func:`zeta_inverse_tail_bound`.
    """
    m = int(m)
    if m < 2:
        raise ValueError("zeta_inverse needs m >= 2")
    mu = mobius_sieve(limit).values
    j = np.flatnonzero(mu)
    with np.errstate(under="ignore"):
        terms = mu[j] * np.power(j.astype(np.float64), -m)
    # smallest terms first keeps fsum's work trivial
    return math.fsum(terms[::-1])


def multiples_in_segment(k_lo, k_hi, j):
    """Number of multiples of ``j`` in ``[k_lo, k_hi]``; broadcasts over ``j``."""
    j = np.asarray(j, dtype=np.int64)
    return k_hi // j - (k_lo - 1) // j


def segments_from_candidates(candidates):
    """Split a collection of distinct positive integers into maximal runs.

    Returns a list of ``(lo, hi)`` pairs, ascending.
    """
    arr = np.asarray(sorted(int(k) for k in candidates), dtype=np.int64)
    if arr.size == 0:
        raise ValueError("candidate set is empty")
    if arr[0] < 1:
        raise ValueError("candidates must be positive integers")
    if np.any(np.diff(arr) == 0):
        raise ValueError("candidates must be distinct")
    breaks = np.flatnonzero(np.diff(arr) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [arr.size - 1]))
    return [(int(arr[s]), int(arr[e])) for s, e in zip(starts, ends)]


@dataclass(frozen=True)
class CoprimeCountResult:
    """Count ``z`` of coprime ordered m-tuples out of ``total = N**m``."""

    z: int
    total: int

    @property
    def fraction(self):
        return Fraction(self.z, self.total)

    @property
    def probability(self):
        # int / int true division is correctly rounded
        return self.z / self.total


def coprime_count_segments(segments, m):
    """Exact coprime-tuple count over a union of disjoint segments.

    Parameters
    ----------
    segments : iterable of (lo, hi)
        Disjoint inclusive integer ranges with ``1 <= lo <= hi``.
    m : int
        Tuple length. Tuples are ordered and drawn with repetition.

    Returns
    -------
    CoprimeCountResult
    """
    m = int(m)
    if m < 1:
        raise ValueError("tuple length m must be >= 1")
    segs = sorted((int(lo), int(hi)) for lo, hi in segments)
    if not segs:
        raise ValueError("candidate set is empty")
    for i, (lo, hi) in enumerate(segs):
        if not 1 <= lo <= hi:
            raise ValueError(f"invalid segment [{lo}, {hi}]")
        if i and lo <= segs[i - 1][1]:
            raise ValueError("segments overlap")
    n = sum(hi - lo + 1 for lo, hi in segs)
    k_max = max(hi for _, hi in segs)

    mu = mobius_sieve(k_max).values
    j = np.arange(1, k_max + 1, dtype=np.int64)
    x = np.zeros(k_max, dtype=np.int64)
    for lo, hi in segs:
        x += multiples_in_segment(lo, hi, j)
    # group divisors by their multiple count: z = sum_x x**m * sum_{x_j = x} mu(j)
    coef = np.bincount(x, weights=mu[1:].astype(np.float64), minlength=n + 1)
    coef = np.rint(coef).astype(np.int64)
    z = 0
    for xv in np.flatnonzero(coef):
        if xv:
            z += int(coef[xv]) * int(xv) ** m
    return CoprimeCountResult(z=z, total=n**m)


def coprime_count_exact(candidates, m):
    """Exact count of ordered coprime m-tuples drawn from ``candidates``."""
    return coprime_count_segments(segments_from_candidates(candidates), m)
