"""Seeded Monte-Carlo campaigns and their CSV/JSON reports.

Every trial draws its randomness from ``derive_seed(master_seed, scenario,
trial)``, so a report depends only on the configuration. Trials are cut
into fixed-size chunks before they are handed to worker threads; the thread
count changes the schedule, never the arithmetic.
"""

import csv
import datetime
import hashlib
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _rng, __version__
from .estimator import (
    DEFAULT_OVERSAMPLE,
    _noisy_phases,
    classify_unambiguous,
    default_grid_step,
    discrepancy_curve,
    estimate_batch,
    find_lobes,
    rsf_window,
    synth_phases,
    write_curve_csv,
)
from .freqset import (
    FrequencyPlan,
    FrequencySet,
    SpectrumSegment,
    build_lsf,
    lsf_equal_bandwidth,
    random_layout,
    sample_rsf,
    sample_rsf_batch,
)
from .numtheory import zeta_inverse

__all__ = [
    "ConfigError",
    "CampaignIOError",
    "CampaignConfig",
    "DiscrepancyConfig",
    "MonteCarloReport",
    "wilson_interval",
    "normalized_entropy",
    "resolve_threads",
    "mc_coprime",
    "mc_unambiguous",
    "mc_lobe_histogram",
    "dump_discrepancy",
    "load_config",
]

REPORT_COLUMNS = ["scenario", "m", "l", "sigma", "probability", "trials", "ci_low", "ci_high"]
THREADS_ENV = "PHASE_RANGER_THREADS"
Z95 = 1.959963984540054

# stream tags under a trial key
_TAG_DTRUE = 0
_TAG_NOISE = 1
# realizations get a seed path of different length from trials
_TAG_REALIZATION = 0xA11


class ConfigError(ValueError):
    """Invalid campaign configuration; ``errors`` lists every problem found."""

    def __init__(self, errors):
        self.errors = list(errors) if not isinstance(errors, str) else [errors]
        super().__init__("; ".join(self.errors))


class CampaignIOError(OSError):
    pass


def wilson_interval(successes, n, z=Z95):
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        return 0.0, 1.0
    p = successes / n
    den = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, min(centre - half, p)), min(1.0, max(centre + half, p))


def normalized_entropy(probabilities):
    """Shannon entropy of a histogram divided by ``log(number of bins)``."""
    p = np.asarray(probabilities, dtype=np.float64)
    if p.size < 2:
        return 0.0
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum() / math.log(p.size))


def resolve_threads(threads=None):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else (os.cpu_count() or 1)
    if int(threads) < 1:
        raise ConfigError("threads must be >= 1")
    return int(threads)


def _run_jobs(jobs, threads):
    threads = resolve_threads(threads)
    if threads == 1 or len(jobs) < 2:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job(), jobs))


# ---------------------------------------------------------------- config


@dataclass(frozen=True)
class CampaignConfig:
    """One Monte-Carlo campaign; see ``from_dict`` for the JSON keys."""

    plan: FrequencyPlan
    m_values: tuple
    trials: int
    master_seed: int
    sigma_values: tuple = (0.0,)
    l_scenarios: tuple = None
    d_true: object = "uniform"
    grid_step: float = None
    oversample: float = DEFAULT_OVERSAMPLE
    span: float = None
    rsf_realizations: int = 1000
    modes: tuple = ("rsf",)
    chunk_trials: int = 1000
    raw: dict = field(default=None, compare=False, repr=False)

    @classmethod
    def from_dict(cls, d):
        errors = []
        known = {
            "plan", "m_values", "trials", "master_seed", "sigma_values", "l_scenarios",
            "d_true", "estimator", "rsf_realizations", "modes", "chunk_trials", "kind",
            "description",
        }
        for key in sorted(set(d) - known):
            errors.append(f"unknown key {key!r}")
        for key in ("plan", "m_values", "trials", "master_seed"):
            if key not in d:
                errors.append(f"missing required key {key!r}")

        plan = None
        if "plan" in d:
            try:
                plan = FrequencyPlan.from_dict(d["plan"])
            except (KeyError, TypeError, ValueError) as exc:
                errors.append(f"plan: {exc}")

        m_values = _int_list(d.get("m_values", []), "m_values", errors, minimum=1)
        if "m_values" in d and not m_values:
            errors.append("m_values must be non-empty")
        trials = _int(d.get("trials", 1), "trials", errors, minimum=1)
        seed = _int(d.get("master_seed", 0), "master_seed", errors, minimum=0)
        if seed is not None and seed >= 1 << 64:
            errors.append("master_seed must fit in 64 bits")
        sigmas = d.get("sigma_values", [0.0])
        if not isinstance(sigmas, list) or not sigmas or not all(
            isinstance(s, (int, float)) and s >= 0 for s in sigmas
        ):
            errors.append("sigma_values must be a non-empty list of non-negative numbers")
            sigmas = [0.0]

        d_true = d.get("d_true", "uniform")
        if isinstance(d_true, dict):
            policy = d_true.get("policy")
            if policy == "uniform":
                d_true = "uniform"
            elif policy == "fixed" and isinstance(d_true.get("value_m"), (int, float)):
                d_true = float(d_true["value_m"])
            else:
                errors.append("d_true must be {'policy': 'uniform'} or {'policy': 'fixed', 'value_m': x}")
        elif d_true != "uniform" and not isinstance(d_true, (int, float)):
            errors.append("d_true must be 'uniform' or a distance in meters")
        if isinstance(d_true, (int, float)) and d_true < 0:
            errors.append("fixed d_true must be non-negative")

        est = d.get("estimator", {}) or {}
        if not isinstance(est, dict):
            errors.append("estimator must be an object")
            est = {}
        for key in sorted(set(est) - {"grid_step_m", "oversample", "span_m"}):
            errors.append(f"unknown estimator key {key!r}")
        grid_step = est.get("grid_step_m")
        span = est.get("span_m")
        oversample = est.get("oversample", DEFAULT_OVERSAMPLE)
        for name, val in (("grid_step_m", grid_step), ("span_m", span), ("oversample", oversample)):
            if val is not None and (not isinstance(val, (int, float)) or val <= 0):
                errors.append(f"estimator.{name} must be a positive number")
        if grid_step is not None and span is not None and grid_step >= span:
            errors.append("estimator.grid_step_m must be smaller than span_m")

        realizations = _int(d.get("rsf_realizations", 1000), "rsf_realizations", errors, minimum=1)
        chunk = _int(d.get("chunk_trials", 1000), "chunk_trials", errors, minimum=1)
        modes = d.get("modes", ["rsf"])
        if not isinstance(modes, list) or not modes or not set(modes) <= {"lsf", "rsf"}:
            errors.append("modes must be a non-empty list drawn from 'lsf', 'rsf'")
            modes = ["rsf"]

        layouts = None
        if d.get("l_scenarios") is not None:
            layouts = _parse_layouts(d["l_scenarios"], plan, errors)

        if plan is not None and m_values:
            plans = [plan] if layouts is None else [p for p in layouts if p is not None]
            for i, p in enumerate(plans):
                big = [m for m in m_values if m > p.n_total]
                if big:
                    errors.append(f"layout {i}: m values {big} exceed available registers N={p.n_total}")

        if errors:
            raise ConfigError(errors)
        return cls(
            plan=plan,
            m_values=tuple(m_values),
            trials=trials,
            master_seed=seed,
            sigma_values=tuple(float(s) for s in sigmas),
            l_scenarios=None if layouts is None else tuple(layouts),
            d_true=d_true,
            grid_step=None if grid_step is None else float(grid_step),
            oversample=float(oversample),
            span=None if span is None else float(span),
            rsf_realizations=realizations,
            modes=tuple(modes),
            chunk_trials=chunk,
            raw=d,
        )

    def plans(self):
        """``(l, plan)`` for every layout scenario."""
        layouts = self.l_scenarios or (self.plan,)
        return [(p.n_segments, p) for p in layouts]

    def digest(self):
        text = json.dumps(self.raw if self.raw is not None else repr(self), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()

    def grid_for(self, fset):
        step = self.grid_step if self.grid_step is not None else default_grid_step(fset, self.oversample)
        span = self.span if self.span is not None else fset.range_upper_bound
        return step, span


def _int(value, name, errors, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{name} must be an integer")
        return None
    if minimum is not None and value < minimum:
        errors.append(f"{name} must be >= {minimum}")
        return None
    return value


def _int_list(values, name, errors, minimum=None):
    if not isinstance(values, list):
        errors.append(f"{name} must be a list")
        return []
    out = []
    for v in values:
        iv = _int(v, f"{name} entry {v!r}", errors, minimum)
        if iv is not None:
            out.append(iv)
    return out


def _parse_layouts(items, plan, errors):
    if not isinstance(items, list) or not items:
        errors.append("l_scenarios must be a non-empty list")
        return None
    out = []
    for i, item in enumerate(items):
        try:
            if "segments" in item:
                segs = [SpectrumSegment(*s) if isinstance(s, list) else SpectrumSegment(s["k_lo"], s["k_hi"])
                        for s in item["segments"]]
                out.append(FrequencyPlan(plan.f0, tuple(segs), plan.c))
            elif "random_segments" in item:
                if plan is None:
                    raise ValueError("random layouts need a valid plan")
                k_lo = item.get("k_min", plan.k_min)
                k_hi = item.get("k_max", plan.k_max)
                segs = random_layout(k_lo, k_hi, item["n_total"], item["random_segments"], item.get("seed", i))
                out.append(FrequencyPlan(plan.f0, segs, plan.c))
            else:
                raise ValueError("expected 'segments' or 'random_segments'")
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            errors.append(f"l_scenarios[{i}]: {exc}")
            out.append(None)
    return out


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CampaignIOError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


# ---------------------------------------------------------------- report


@dataclass
class MonteCarloReport:
    """Rows of a campaign plus provenance.

    Each row holds the fixed columns in ``REPORT_COLUMNS`` and may carry
    kind-specific trailing columns listed in ``extra_columns``.
    """

    kind: str
    rows: list
    provenance: dict
    extra_columns: tuple = ()

    @property
    def columns(self):
        return REPORT_COLUMNS + list(self.extra_columns)

    def csv_text(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row.get(c, "")) for c in self.columns])
        return buf.getvalue()

    def write(self, out_dir, stem=None):
        """Write ``<stem>.csv`` and ``<stem>.json``; returns both paths."""
        out_dir = Path(out_dir)
        stem = stem or self.kind
        csv_path = out_dir / f"{stem}.csv"
        json_path = out_dir / f"{stem}.json"
        sidecar = dict(self.provenance)
        sidecar["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
        sidecar["columns"] = self.columns
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            csv_path.write_text(self.csv_text())
            json_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        except OSError as exc:
            raise CampaignIOError(f"{exc.filename or out_dir}: {exc.strerror or exc}") from exc
        return csv_path, json_path


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _row(scenario, m, l, sigma, successes, trials, **extra):
    lo, hi = wilson_interval(successes, trials)
    row = {
        "scenario": scenario,
        "m": m,
        "l": l,
        "sigma": "" if sigma is None else float(sigma),
        "probability": successes / trials,
        "trials": trials,
        "ci_low": lo,
        "ci_high": hi,
    }
    row.update(extra)
    return row


def _provenance(config, kind):
    return {
        "kind": kind,
        "master_seed": config.master_seed,
        "config_digest": config.digest(),
        "package_version": __version__,
    }


def _chunks(n, size):
    return [(a, min(n, a + size)) for a in range(0, n, size)]


# ---------------------------------------------------------------- campaigns


def mc_coprime(config, threads=None):
    """Fraction of RSF draws whose registers are relatively prime."""
    scenarios = []
    for li, (l, plan) in enumerate(config.plans()):
        for m in config.m_values:
            if m > plan.n_total:
                raise ConfigError(f"m={m} exceeds N={plan.n_total} in layout {li}")
            scenarios.append((li, l, plan, m))

    def job(sidx, plan, m, a, b):
        def run():
            keys = _rng.derive_seed_array(config.master_seed, sidx, np.arange(a, b))
            regs = sample_rsf_batch(plan, m, keys)
            return int(np.count_nonzero(np.gcd.reduce(regs, axis=1) == 1))
        return run

    jobs, owners = [], []
    for sidx, (_, _, plan, m) in enumerate(scenarios):
        for a, b in _chunks(config.trials, config.chunk_trials):
            jobs.append(job(sidx, plan, m, a, b))
            owners.append(sidx)
    counts = _run_jobs(jobs, threads)
    hits = np.zeros(len(scenarios), dtype=np.int64)
    np.add.at(hits, owners, counts)

    rows = []
    theory = {m: zeta_inverse(m) if m >= 2 else 1.0 for m in config.m_values}
    for sidx, (li, l, plan, m) in enumerate(scenarios):
        rows.append(_row(f"coprime-{li}", m, l, None, int(hits[sidx]), config.trials,
                         theory=theory[m], n_available=plan.n_total))
    return MonteCarloReport("coprime", rows, _provenance(config, "coprime"),
                            ("theory", "n_available"))


def _trial_inputs(config, fset, trial_keys):
    """d_true values and noise keys for a block of trial keys."""
    if config.d_true == "uniform":
        d = _rng.uniform(_rng.derive_seed_array(trial_keys, _TAG_DTRUE), 0) * fset.range_upper_bound
    else:
        d = np.full(trial_keys.shape, float(config.d_true))
    return d, _rng.derive_seed_array(trial_keys, _TAG_NOISE)


def _estimate_block(config, fset, sigma, trial_keys):
    d_true, noise_keys = _trial_inputs(config, fset, trial_keys)
    phases = _noisy_phases(fset, d_true, sigma, noise_keys)
    step, span = config.grid_for(fset)
    d_hat, _ = estimate_batch(fset, phases, step, span)
    return d_true, d_hat, span


def _period(fset, span):
    return span if abs(span - fset.range_upper_bound) <= 1e-12 * span else None


def mc_unambiguous(config, modes=None, threads=None):
    """Probability that the LS estimate lands inside the scoring window.

    LSF sets use the equal-bandwidth layout of :func:`lsf_equal_bandwidth`
    scored against ``C / step``. RSF runs ``rsf_realizations`` independent
    register draws, splitting ``trials`` evenly between them, and scores
    each against ``C / max_gap``; the rows add the median and 2.5/97.5
    percentiles of the per-realization probabilities.
    """
    modes = tuple(modes) if modes is not None else config.modes
    scenarios = []
    for mode in modes:
        for li, (l, plan) in enumerate(config.plans()):
            for m in config.m_values:
                for sigma in config.sigma_values:
                    scenarios.append((mode, li, l, plan, m, sigma))

    lsf_sets = {}
    errors = []
    for mode, li, l, plan, m, sigma in scenarios:
        if mode == "lsf" and (li, m) not in lsf_sets:
            try:
                lsf_sets[(li, m)] = lsf_equal_bandwidth(plan, m)
            except ValueError as exc:
                errors.append(f"lsf layout {li}, m={m}: {exc}")
        if m > plan.n_total:
            errors.append(f"m={m} exceeds N={plan.n_total} in layout {li}")
    if errors:
        raise ConfigError(errors)

    jobs, owners = [], []
    meta = []
    for sidx, (mode, li, l, plan, m, sigma) in enumerate(scenarios):
        if mode == "lsf":
            fset = lsf_sets[(li, m)]
            step_hz = (fset.k[1] - fset.k[0]) * fset.f0
            window = fset.c / step_hz
            meta.append({"realizations": 0, "per": config.trials})
            for a, b in _chunks(config.trials, config.chunk_trials):
                jobs.append(_lsf_job(config, fset, sigma, window, sidx, a, b))
                owners.append(sidx)
        else:
            n_real = min(config.rsf_realizations, config.trials)
            per = config.trials // n_real
            meta.append({"realizations": n_real, "per": per})
            for r in range(n_real):
                jobs.append(_rsf_job(config, plan, m, sigma, sidx, r, per))
                owners.append(sidx)
    results = _run_jobs(jobs, threads)

    per_scenario = [[] for _ in scenarios]
    for owner, res in zip(owners, results):
        per_scenario[owner].append(res)

    rows = []
    for sidx, (mode, li, l, plan, m, sigma) in enumerate(scenarios):
        hits = per_scenario[sidx]
        n = meta[sidx]["per"] * max(1, meta[sidx]["realizations"]) if mode == "rsf" else config.trials
        extra = {"theory": zeta_inverse(m) if m >= 2 else 1.0}
        if mode == "rsf":
            probs = np.array(hits, dtype=np.float64) / meta[sidx]["per"]
            extra.update(
                rsf_median=float(np.median(probs)),
                rsf_p2_5=float(np.percentile(probs, 2.5)),
                rsf_p97_5=float(np.percentile(probs, 97.5)),
            )
        rows.append(_row(f"{mode}-{li}", m, l, sigma, int(sum(hits)), n, **extra))
    return MonteCarloReport("unambiguous", rows, _provenance(config, "unambiguous"),
                            ("theory", "rsf_median", "rsf_p2_5", "rsf_p97_5"))


def _lsf_job(config, fset, sigma, window, sidx, a, b):
    def run():
        keys = _rng.derive_seed_array(config.master_seed, sidx, np.arange(a, b))
        d_true, d_hat, span = _estimate_block(config, fset, sigma, keys)
        ok = classify_unambiguous(d_hat, d_true, window, period=_period(fset, span))
        return int(np.count_nonzero(ok))
    return run


def _rsf_job(config, plan, m, sigma, sidx, r, per):
    def run():
        fset = sample_rsf(plan, m, _rng.derive_seed(config.master_seed, sidx, _TAG_REALIZATION, r))
        keys = _rng.derive_seed_array(config.master_seed, sidx, _TAG_REALIZATION, r, np.arange(per))
        d_true, d_hat, span = _estimate_block(config, fset, sigma, keys)
        ok = classify_unambiguous(d_hat, d_true, rsf_window(fset), period=_period(fset, span))
        return int(np.count_nonzero(ok))
    return run


def mc_lobe_histogram(config, threads=None):
    """Distribution of LSF estimates over pseudo-range lobes.

    The lobe index of an estimate is
    ``floor(((d_hat - d_true + P/2) mod span) / P)`` with ``P = C / step``
    the pseudo range, so bin 0 holds the correct lobe and the bins cover
    one search span. Rows are long format: one per (m, sigma, bin).
    """
    scenarios = []
    errors = []
    for li, (l, plan) in enumerate(config.plans()):
        for m in config.m_values:
            try:
                fset = lsf_equal_bandwidth(plan, m)
            except ValueError as exc:
                errors.append(f"lsf layout {li}, m={m}: {exc}")
                continue
            for sigma in config.sigma_values:
                scenarios.append((li, l, fset, m, sigma))
    if errors:
        raise ConfigError(errors)

    def job(sidx, fset, sigma, a, b):
        def run():
            keys = _rng.derive_seed_array(config.master_seed, sidx, np.arange(a, b))
            d_true, d_hat, span = _estimate_block(config, fset, sigma, keys)
            pseudo = fset.c / ((fset.k[1] - fset.k[0]) * fset.f0) if fset.m > 1 else span
            n_bins = max(1, int(math.ceil(span / pseudo - 1e-9)))
            idx = np.floor(np.mod(d_hat - d_true + pseudo / 2, span) / pseudo).astype(np.int64)
            return np.bincount(np.minimum(idx, n_bins - 1), minlength=n_bins)
        return run

    jobs, owners = [], []
    for sidx, (li, l, fset, m, sigma) in enumerate(scenarios):
        for a, b in _chunks(config.trials, config.chunk_trials):
            jobs.append(job(sidx, fset, sigma, a, b))
            owners.append(sidx)
    results = _run_jobs(jobs, threads)
    totals = {}
    for owner, counts in zip(owners, results):
        totals[owner] = counts if owner not in totals else totals[owner] + counts

    rows = []
    for sidx, (li, l, fset, m, sigma) in enumerate(scenarios):
        counts = totals[sidx]
        n = config.trials
        for b, c in enumerate(counts.tolist()):
            rows.append(_row(f"lobes-{li}", m, l, sigma, int(counts[0]), n,
                             bin_index=b, bin_probability=c / n))
    return MonteCarloReport("lobes", rows, _provenance(config, "lobes"),
                            ("bin_index", "bin_probability"))


def lobe_histograms(report):
    """Group a lobe report into ``{(scenario, m, sigma): bin probabilities}``."""
    out = {}
    for row in report.rows:
        out.setdefault((row["scenario"], row["m"], row["sigma"]), []).append(row["bin_probability"])
    return {k: np.array(v) for k, v in out.items()}


# ---------------------------------------------------------------- discrepancy dumps


@dataclass(frozen=True)
class DiscrepancyConfig:
    """Inputs of a single discrepancy-curve dump."""

    fset: FrequencySet
    d_true: float
    sigma: float = 0.0
    seed: int = 0
    grid_step: float = None
    span: float = None
    start: float = 0.0
    max_lobes: int = 32
    raw: dict = field(default=None, compare=False, repr=False)

    @classmethod
    def from_dict(cls, d):
        errors = []
        known = {"set", "plan", "lsf", "rsf", "d_true_m", "sigma_rad", "seed", "estimator",
                 "max_lobes", "kind", "description"}
        for key in sorted(set(d) - known):
            errors.append(f"unknown key {key!r}")
        fset = None
        try:
            if "set" in d:
                fset = FrequencySet.from_dict(d["set"])
            elif "plan" in d:
                plan = FrequencyPlan.from_dict(d["plan"])
                if "lsf" in d:
                    p = d["lsf"]
                    fset = build_lsf(plan, p["start"], p["step"], p["count"])
                elif "rsf" in d:
                    fset = sample_rsf(plan, d["rsf"]["m"], d["rsf"]["seed"])
                else:
                    errors.append("a plan needs an 'lsf' or 'rsf' block")
            else:
                errors.append("need 'set' or 'plan'")
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"frequency set: {exc}")
        d_true = d.get("d_true_m")
        if not isinstance(d_true, (int, float)) or d_true < 0:
            errors.append("d_true_m must be a non-negative number")
        sigma = d.get("sigma_rad", 0.0)
        if not isinstance(sigma, (int, float)) or sigma < 0:
            errors.append("sigma_rad must be a non-negative number")
        seed = _int(d.get("seed", 0), "seed", errors, minimum=0)
        est = d.get("estimator", {}) or {}
        step, span, start = est.get("grid_step_m"), est.get("span_m"), est.get("start_m", 0.0)
        for name, val in (("grid_step_m", step), ("span_m", span)):
            if val is not None and (not isinstance(val, (int, float)) or val <= 0):
                errors.append(f"estimator.{name} must be a positive number")
        if step is not None and span is not None and step >= span:
            errors.append("estimator.grid_step_m must be smaller than span_m")
        max_lobes = _int(d.get("max_lobes", 32), "max_lobes", errors, minimum=1)
        if errors:
            raise ConfigError(errors)
        return cls(fset, float(d_true), float(sigma), seed, step, span, float(start), max_lobes, d)


def dump_discrepancy(fset, d_true, sigma, seed, grid_step=None, span=None, path="discrepancy.csv",
                     start=0.0, max_lobes=32):
    """Write the discrepancy curve as CSV and its lobes as a JSON sidecar.

    Returns ``(csv_path, json_path, lobes)``.
    """
    phases = synth_phases(fset, d_true, sigma, seed)
    d, f = discrepancy_curve(fset, phases, grid_step, span, start)
    lobes = find_lobes(fset, phases, grid_step, span, max_lobes, start)
    path = Path(path)
    side = path.with_suffix(".lobes.json")
    payload = {
        "set": fset.to_dict(),
        "d_true_m": d_true,
        "sigma_rad": sigma,
        "seed": seed,
        "grid_step_m": float(grid_step) if grid_step is not None else default_grid_step(fset),
        "lobes": [{"d_m": lb.d, "f": lb.f} for lb in lobes],
    }
    try:
        write_curve_csv(path, d, f)
        side.write_text(json.dumps(payload, indent=2) + "\n")
    except OSError as exc:
        raise CampaignIOError(f"{exc.filename or path}: {exc.strerror or exc}") from exc
    return path, side, lobes
