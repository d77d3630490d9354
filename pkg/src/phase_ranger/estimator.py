"""Phase synthesis, the least-squares discrepancy function and grid search.

The discrepancy of a candidate distance ``d`` is

    F(d) = sqrt(sum_i w(phi_i - 2*pi*d/lambda_i)**2)

with every residual wrapped into ``[-pi, pi)`` by ``w``. Wrapping is what
makes ``F`` periodic in ``d`` with the set's unambiguous range; unwrapped
residuals would grow without bound. Stored phases live in ``[0, 2*pi)``.

Between two wrap points ``F**2`` is an exact quadratic in ``d``, so each
grid minimum is refined by one parabolic fit through ``F**2`` at the three
bracketing grid points.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .freqset import max_frequency_gap, unambiguous_range

__all__ = [
    "PhaseVector",
    "Lobe",
    "EstimateResult",
    "synth_phases",
    "discrepancy",
    "default_grid_step",
    "estimate_range",
    "estimate_batch",
    "find_lobes",
    "classify_unambiguous",
    "rsf_window",
    "discrepancy_curve",
    "write_curve_csv",
]

TWO_PI = 2.0 * math.pi
DEFAULT_OVERSAMPLE = 100
# elements per temporary (trials x grid x carriers) block
_BLOCK = 1 << 21


@dataclass(frozen=True, eq=False)
class PhaseVector:
    """Wrapped phase shifts, one per carrier of ``fset``, in ``[0, 2*pi)``."""

    fset: object
    phases: np.ndarray
    meta: dict = field(default=None)

    def __post_init__(self):
        ph = np.array(self.phases, dtype=np.float64)
        if ph.shape != (self.fset.m,):
            raise ValueError(f"expected {self.fset.m} phases, got shape {ph.shape}")
        if np.any(ph < 0) or np.any(ph >= TWO_PI):
            raise ValueError("phases must lie in [0, 2*pi)")
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)


@dataclass(frozen=True)
class Lobe:
    d: float
    f: float


@dataclass(frozen=True)
class EstimateResult:
    d_hat: float
    f_min: float
    lobes: tuple
    grid_step: float
    span: float
    start: float = 0.0

    def to_dict(self):
        return {
            "d_hat_m": self.d_hat,
            "f_min": self.f_min,
            "lobes": [{"d_m": lb.d, "f": lb.f} for lb in self.lobes],
            "search": {"grid_step_m": self.grid_step, "span_m": self.span, "start_m": self.start},
        }


def _model_phase(fset, d):
    """Noise-free phases ``2*pi*frac(f_i*d/C)``, shape ``d.shape + (M,)``."""
    cycles = np.multiply.outer(np.asarray(d, dtype=np.float64), fset.frequencies) / fset.c
    return TWO_PI * (cycles - np.floor(cycles))


def _wrap_abs(r):
    # |w(r)| for r in (-2*pi, 2*pi), w wrapping into [-pi, pi)
    a = np.abs(r)
    return np.minimum(a, TWO_PI - a)


def _sq_residual_sum(phases, model):
    a = _wrap_abs(phases - model)
    return np.einsum("...m,...m->...", a, a)


def synth_phases(fset, d, noise_sigma=0.0, seed=0):
    """Phases measured at distance ``d`` with i.i.d. Gaussian phase noise.

    The noise on carrier ``i`` is a Box-Muller draw keyed by
    ``(seed, i)``, so adding carriers never changes earlier carriers' noise.
    """
    if d < 0:
        raise ValueError("distance must be non-negative")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    ph = _noisy_phases(fset, np.array([float(d)]), float(noise_sigma), np.array([seed]))[0]
    meta = {"d_true": float(d), "noise_sigma": float(noise_sigma), "seed": int(seed)}
    return PhaseVector(fset, ph, meta)


def _noisy_phases(fset, d, sigma, seeds):
    """Batch of phase vectors, shape (T, M), for distances ``d`` and noise seeds."""
    model = _model_phase(fset, d)
    if sigma > 0:
        if not (isinstance(seeds, np.ndarray) and seeds.dtype == np.uint64):
            seeds = np.asarray([int(s) & _rng.MASK64 for s in seeds], dtype=np.uint64)
        keys = _rng.derive_seed_array(seeds[:, None], np.arange(fset.m)[None, :])
        model = model + sigma * _rng.normal(keys)
    ph = np.mod(model, TWO_PI)
    ph[ph >= TWO_PI] = 0.0
    return ph


def discrepancy(fset, phases, d):
    """Discrepancy ``F(d)``; ``d`` may be a scalar or an array of distances."""
    ph = phases.phases if isinstance(phases, PhaseVector) else np.asarray(phases, dtype=np.float64)
    out = np.sqrt(_sq_residual_sum(ph, _model_phase(fset, d)))
    return float(out) if np.ndim(out) == 0 else out


def default_grid_step(fset, oversample=DEFAULT_OVERSAMPLE):
    """Shortest wavelength divided by ``oversample``."""
    return float(fset.wavelengths.min()) / oversample


def _grid(step, span, start):
    if not step > 0 or not span > 0:
        raise ValueError("grid_step and span must be positive")
    if step >= span:
        raise ValueError(f"grid_step {step} must be smaller than span {span}")
    n = int(math.ceil(span / step))
    if start + (n - 1) * step >= start + span:
        n -= 1
    return n


def _span_is_period(fset, span):
    ratio = span / unambiguous_range(fset)
    return abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1


def _local_minima(y):
    """Indices ``i`` in ``1..n-2`` of grid minima of each row of ``y``.

    A minimum is strictly below its left neighbor and not above its right
    one; a flat run counts once, at its leftmost point, when it ends in a
    rise.
    """
    left = y[:, 1:-1] < y[:, :-2]
    right_le = y[:, 1:-1] <= y[:, 2:]
    rows, cols = np.nonzero(left & right_le)
    cols = cols + 1
    flat = y[rows, cols] == y[rows, cols + 1]
    if flat.any():
        keep = np.ones(rows.size, dtype=bool)
        n = y.shape[1]
        for q in np.flatnonzero(flat):
            r, i = rows[q], cols[q]
            j = i + 1
            while j < n - 1 and y[r, j] == y[r, i]:
                j += 1
            keep[q] = j < n - 1 and y[r, j] > y[r, i] or j == n - 1 and y[r, j] >= y[r, i]
        rows, cols = rows[keep], cols[keep]
    return rows, cols


def _search(fset, phases, step, span, start):
    """Grid scan plus refinement for a (T, M) batch of phase vectors.

    Returns ``(rows, d, f)`` listing every refined local minimum with its
    trial index.
    """
    n = _grid(step, span, start)
    # one extra point on each side so the grid ends can be minima
    d_grid = start + (np.arange(n + 2) - 1.0) * step
    model = _model_phase(fset, d_grid)
    T, M = phases.shape
    G = n + 2
    y = np.empty((T, G))
    per_trial = G * M
    if per_trial <= _BLOCK:
        tb = max(1, _BLOCK // per_trial)
        for t0 in range(0, T, tb):
            y[t0 : t0 + tb] = _sq_residual_sum(phases[t0 : t0 + tb, None, :], model[None])
    else:
        gb = max(1, _BLOCK // M)
        for t in range(T):
            for g0 in range(0, G, gb):
                y[t, g0 : g0 + gb] = _sq_residual_sum(phases[t], model[g0 : g0 + gb])

    rows, cols = _local_minima(y)
    inner = y[:, 1:-1]
    # monotone rows: fall back to the lowest grid point
    missing = np.setdiff1d(np.arange(T), rows)
    if missing.size:
        rows = np.concatenate((rows, missing))
        cols = np.concatenate((cols, np.argmin(inner[missing], axis=1) + 1))

    y0, y1, y2 = y[rows, cols - 1], y[rows, cols], y[rows, cols + 1]
    curv = y0 - 2.0 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.where(curv > 0, 0.5 * (y0 - y2) / curv, 0.0)
    off = np.clip(off, -0.5, 0.5)
    d_at = d_grid[cols]
    d_ref = d_at + off * step
    end = start + span
    if _span_is_period(fset, span):
        d_ref = start + np.mod(d_ref - start, span)
        d_ref[d_ref >= end] = start
    else:
        d_ref = np.clip(d_ref, start, d_grid[n])

    f_grid = np.sqrt(y1)
    f_ref = np.empty_like(f_grid)
    cb = max(1, _BLOCK // M)
    for q0 in range(0, rows.size, cb):
        sl = slice(q0, q0 + cb)
        f_ref[sl] = np.sqrt(_sq_residual_sum(phases[rows[sl]], _model_phase(fset, d_ref[sl])))
    better = f_ref <= f_grid
    d = np.where(better, d_ref, d_at)
    f = np.where(better, f_ref, f_grid)
    return rows, d, f


def _best_per_row(rows, d, f, T):
    order = np.lexsort((d, f, rows))
    first = order[np.r_[True, rows[order][1:] != rows[order][:-1]]]
    assert first.size == T
    return d[first], f[first]


def _resolve_grid(fset, grid_step, span):
    if span is None:
        span = fset.range_upper_bound
    if grid_step is None:
        grid_step = default_grid_step(fset)
    return float(grid_step), float(span)


def estimate_batch(fset, phases, grid_step=None, span=None, start=0.0):
    """Least-squares range estimates for a (T, M) array of phase vectors.

    Returns ``(d_hat, f_min)`` arrays of length T. Row ``t`` of the output
    depends only on row ``t`` of the input.
    """
    grid_step, span = _resolve_grid(fset, grid_step, span)
    phases = np.atleast_2d(np.asarray(phases, dtype=np.float64))
    rows, d, f = _search(fset, phases, grid_step, span, start)
    return _best_per_row(rows, d, f, phases.shape[0])


def find_lobes(fset, phases, grid_step=None, span=None, max_lobes=None, start=0.0):
    """All refined local minima of ``F`` on the grid, best first.

    Parameters
    ----------
    fset : FrequencySet
    phases : PhaseVector
    grid_step, span : float, optional
        Grid spacing and extent in meters; default to a hundredth of the
        shortest wavelength and to ``C / f0``.
    max_lobes : int, optional
        Truncate the list.

    Returns
    -------
    list of Lobe
        Sorted ascending by ``f`` (ties by distance).
    """
    grid_step, span = _resolve_grid(fset, grid_step, span)
    ph = phases.phases[None, :]
    _, d, f = _search(fset, ph, grid_step, span, start)
    order = np.lexsort((d, f))
    if max_lobes is not None:
        order = order[: int(max_lobes)]
    return [Lobe(float(d[i]), float(f[i])) for i in order]


def estimate_range(fset, phases, grid_step=None, span=None, max_lobes=16, start=0.0):
    """Grid-search minimizer of the discrepancy function."""
    grid_step, span = _resolve_grid(fset, grid_step, span)
    lobes = find_lobes(fset, phases, grid_step, span, max_lobes, start)
    best = lobes[0]
    return EstimateResult(
        d_hat=best.d,
        f_min=discrepancy(fset, phases, best.d),
        lobes=tuple(lobes),
        grid_step=grid_step,
        span=span,
        start=float(start),
    )


def classify_unambiguous(result, d_true, window, period=None):
    """True when the estimate is within half a window of the truth.

    With ``period`` the distance is measured around a circle of that
    circumference, which is how a search over one full ``C / f0`` cycle
    should be scored near its ends.
    """
    if not window > 0:
        raise ValueError("window must be positive")
    d_hat = result.d_hat if isinstance(result, EstimateResult) else result
    err = np.abs(np.asarray(d_hat, dtype=np.float64) - d_true)
    if period is not None:
        err = np.mod(err, period)
        err = np.minimum(err, period - err)
    ok = err <= window / 2.0
    return bool(ok) if np.ndim(ok) == 0 else ok


def rsf_window(fset):
    """``C / max_gap``, the scoring window for randomly spaced sets."""
    gap = max_frequency_gap(fset)
    return fset.c / gap if gap > 0 else fset.range_upper_bound


def discrepancy_curve(fset, phases, grid_step=None, span=None, start=0.0):
    """Grid distances and ``F`` values, as two arrays."""
    grid_step, span = _resolve_grid(fset, grid_step, span)
    n = _grid(grid_step, span, start)
    d = start + np.arange(n) * grid_step
    f = np.empty(n)
    gb = max(1, _BLOCK // fset.m)
    for g0 in range(0, n, gb):
        f[g0 : g0 + gb] = discrepancy(fset, phases, d[g0 : g0 + gb])
    return d, f


def write_curve_csv(path, d, f):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["d_m", "f"])
        for di, fi in zip(d.tolist(), f.tolist()):
            w.writerow([repr(di), repr(fi)])
