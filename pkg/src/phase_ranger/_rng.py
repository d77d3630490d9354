"""Counter-based random streams built on SplitMix64.

Every random quantity in the package is a pure function of a 64-bit key and
a draw counter, so batches of trials can be generated in one vectorized pass
and still match the draws of a single-trial call bit for bit.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(GOLDEN)
_U_MUL1 = np.uint64(_MUL1)
_U_MUL2 = np.uint64(_MUL2)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))
_INV53 = 2.0 ** -53


def mix64(z):
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _MUL2) & MASK64
    return z ^ (z >> 31)


def derive_seed(*parts):
    """Hash a sequence of non-negative integers into a 64-bit key.

    ``derive_seed(master, scenario, trial)`` gives every trial its own
    stream; the result never depends on how many other trials exist.
    """
    h = mix64(0x5EED)
    for p in parts:
        h = mix64(h ^ mix64((int(p) & MASK64) + GOLDEN))
    return h


def _mix64_array(z):
    z = z ^ (z >> _S30)
    z = z * _U_MUL1
    z = z ^ (z >> _S27)
    z = z * _U_MUL2
    return z ^ (z >> _S31)


def raw_draws(keys, counters):
    """Raw 64-bit outputs ``mix(key + (counter + 1) * GOLDEN)``, broadcast."""
    keys = np.asarray(keys, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_array(keys + (counters + np.uint64(1)) * _U_GOLDEN)


def uniform(keys, counters):
    """Uniform doubles in [0, 1) with 53 random bits."""
    return (raw_draws(keys, counters) >> _S11).astype(np.float64) * _INV53


def randbelow(keys, counters, bound):
    """Integers uniform on ``[0, bound)``; bias below ``bound / 2**53``."""
    bound = np.asarray(bound)
    out = np.floor(uniform(keys, counters) * bound).astype(np.int64)
    return np.minimum(out, bound - 1)


def normal(keys):
    """One standard normal per key, by Box-Muller on draws 0 and 1."""
    keys = np.asarray(keys, dtype=np.uint64)
    u1 = 1.0 - uniform(keys, 0)  # (0, 1], keeps log finite
    u2 = uniform(keys, 1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def sample_indices(keys, m, n):
    """Draw ``m`` distinct indices from ``range(n)`` per key (Floyd's method).

    Parameters
    ----------
    keys : array_like of uint64, shape (T,)
        One key per independent draw.
    m, n : int
        Subset size and population size, ``m <= n``.

    Returns
    -------
    ndarray of int64, shape (T, m)
        Each row sorted ascending. Row ``t`` depends only on ``keys[t]``.
    """
    keys = np.atleast_1d(np.asarray(keys, dtype=np.uint64))
    if not 0 <= m <= n:
        raise ValueError(f"cannot draw {m} distinct items from {n}")
    out = np.empty((keys.size, m), dtype=np.int64)
    for s in range(m):
        j = n - m + s
        t = randbelow(keys, s, j + 1)
        if s:
            dup = (out[:, :s] == t[:, None]).any(axis=1)
            t = np.where(dup, j, t)
        out[:, s] = t
    out.sort(axis=1)
    return out


_U_H0 = np.uint64(mix64(0x5EED))


def derive_seed_array(*parts):
    """Vectorized :func:`derive_seed`; broadcasts over array arguments."""
    with np.errstate(over="ignore"):
        h = _U_H0
        for p in parts:
            p = np.asarray(p).astype(np.uint64)
            h = _mix64_array(h ^ _mix64_array(p + _U_GOLDEN))
    return h
