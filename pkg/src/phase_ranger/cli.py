"""Command-line front end: ``phase-ranger {ur,coprime-prob,estimate,campaign}``.

Exit status 0 on success, 2 for invalid input or configuration (nothing is
run), 3 for runtime and I/O failures.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .estimator import estimate_range, synth_phases
from .experiments import (
    THREADS_ENV,
    CampaignConfig,
    CampaignIOError,
    ConfigError,
    DiscrepancyConfig,
    dump_discrepancy,
    load_config,
    mc_coprime,
    mc_lobe_histogram,
    mc_unambiguous,
)
from .freqset import FrequencyPlan, FrequencySet, unambiguous_range
from .numtheory import coprime_count_segments, zeta_inverse

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

DEFAULT_EXACT_KMAX = 10**7


class InputError(Exception):
    pass


def _parse_registers(text):
    try:
        regs = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"registers must be integers: {text!r}")
    if not regs:
        raise InputError("register list is empty")
    return regs


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CampaignIOError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load_set(args):
    if args.set_file:
        data = _read_json(args.set_file)
        try:
            return FrequencySet.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.set_file}: {exc}")
    if args.registers is None:
        raise InputError("give --registers or --set-file")
    if args.f0_hz is None:
        raise InputError("--f0-hz is required with --registers")
    try:
        return FrequencySet(args.f0_hz, tuple(_parse_registers(args.registers)))
    except ValueError as exc:
        raise InputError(str(exc))


def cmd_ur(args):
    fset = _load_set(args)
    lam = unambiguous_range(fset)
    rec = {"kappa": fset.kappa, "lambda_m": lam, "lambda_up_m": fset.range_upper_bound}
    if args.json:
        print(json.dumps(rec))
    else:
        print(f"kappa={rec['kappa']}  UR={lam:.6g} m  UR upper bound={rec['lambda_up_m']:.6g} m")
    return EXIT_OK


def cmd_coprime_prob(args):
    m = args.m
    if args.mode == "asymptotic":
        if m < 2:
            raise InputError("asymptotic mode needs m >= 2")
        p = zeta_inverse(m, args.zeta_limit)
        rec = {"mode": "asymptotic", "m": m, "probability": p}
    else:
        plan = _coprime_plan(args)
        if args.mode == "exact":
            if plan.k_max > args.max_kmax:
                raise InputError(
                    f"K_max={plan.k_max} exceeds the exact-mode bound {args.max_kmax}; "
                    "raise --max-kmax or use --mode asymptotic/montecarlo"
                )
            res = coprime_count_segments(plan.segments_as_pairs(), m)
            rec = {"mode": "exact", "m": m, "probability": res.probability,
                   "z": str(res.z), "total": str(res.total)}
        else:
            cfg = _config(
                {"plan": plan.to_dict(), "m_values": [m], "trials": args.trials, "master_seed": args.seed}
            )
            row = mc_coprime(cfg, threads=args.threads).rows[0]
            rec = {"mode": "montecarlo", "m": m, "probability": row["probability"],
                   "trials": row["trials"], "ci_low": row["ci_low"], "ci_high": row["ci_high"]}
    if args.json:
        print(json.dumps(rec))
    else:
        print(f"{rec['probability']:.9g}")
    return EXIT_OK


def _coprime_plan(args):
    if args.plan_file:
        try:
            return FrequencyPlan.from_dict(_read_json(args.plan_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.plan_file}: {exc}")
    if args.contiguous is None:
        raise InputError(f"--mode {args.mode} needs --plan-file or --contiguous N")
    if args.contiguous < 1:
        raise InputError("--contiguous N must be >= 1")
    return FrequencyPlan.contiguous(1, args.contiguous, 1.0)


def _config(data):
    try:
        return CampaignConfig.from_dict(data)
    except ConfigError:
        raise
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"malformed configuration: {exc}")


def cmd_estimate(args):
    fset = _load_set(args)
    for name in ("d_true_m", "sigma_rad"):
        if getattr(args, name) < 0:
            raise InputError(f"--{name.replace('_', '-')} must be non-negative")
    phases = synth_phases(fset, args.d_true_m, args.sigma_rad, args.seed)
    try:
        res = estimate_range(fset, phases, args.grid_step_m, args.span_m, args.max_lobes)
    except ValueError as exc:
        raise InputError(str(exc))
    out = res.to_dict()
    out["d_true_m"] = args.d_true_m
    print(json.dumps(out))
    return EXIT_OK


def cmd_campaign(args):
    data = load_config(args.config)
    out_dir = Path(args.out_dir)
    kind = args.kind or data.get("kind")
    if kind not in ("coprime", "unambiguous", "lobes", "discrepancy"):
        raise InputError("--kind must be one of coprime, unambiguous, lobes, discrepancy")
    if kind == "discrepancy":
        dc = DiscrepancyConfig.from_dict(data)
        _ensure_dir(out_dir)
        csv_path, side, lobes = dump_discrepancy(
            dc.fset, dc.d_true, dc.sigma, dc.seed, dc.grid_step, dc.span,
            out_dir / f"{args.stem or 'discrepancy'}.csv", dc.start, dc.max_lobes,
        )
        print(f"wrote {csv_path} and {side}")
        for lb in lobes[:8]:
            print(f"  d={lb.d:12.6f} m  F={lb.f:.6g}")
        return EXIT_OK

    cfg = _config(data)
    _ensure_dir(out_dir)
    if kind == "coprime":
        report = mc_coprime(cfg, threads=args.threads)
    elif kind == "unambiguous":
        report = mc_unambiguous(cfg, threads=args.threads)
    else:
        report = mc_lobe_histogram(cfg, threads=args.threads)
    csv_path, json_path = report.write(out_dir, args.stem)
    _print_summary(report)
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def _ensure_dir(path):
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise CampaignIOError(f"{path}: {exc.strerror or exc}") from exc


def _print_summary(report):
    seen = set()
    print(f"{'scenario':>14} {'m':>5} {'l':>3} {'sigma':>6} {'prob':>9} {'trials':>7}  95% CI")
    for r in report.rows:
        key = (r["scenario"], r["m"], r["sigma"])
        if key in seen:
            continue
        seen.add(key)
        sigma = "" if r["sigma"] == "" else f"{r['sigma']:.3g}"
        print(f"{r['scenario']:>14} {r['m']:>5} {r['l']:>3} {sigma:>6} {r['probability']:9.5f} "
              f"{r['trials']:>7}  [{r['ci_low']:.5f}, {r['ci_high']:.5f}]")


def _add_set_args(p):
    p.add_argument("--set-file", help="FrequencySet JSON {f0_hz, registers}")
    p.add_argument("--registers", help="comma or space separated register list")
    p.add_argument("--f0-hz", type=float, help="synthesizer resolution f0 in Hz")


def _threads_default():
    import os

    env = os.environ.get(THREADS_ENV)
    return int(env) if env else None


def build_parser():
    parser = argparse.ArgumentParser(prog="phase-ranger", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ur", help="unambiguous range of a frequency set")
    _add_set_args(p)
    p.add_argument("--json", action="store_true", help="print a JSON record")
    p.set_defaults(func=cmd_ur)

    p = sub.add_parser("coprime-prob", help="probability that m random registers are coprime")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "asymptotic", "montecarlo"), default="asymptotic")
    p.add_argument("--plan-file", help="FrequencyPlan JSON {f0_hz, segments}")
    p.add_argument("--contiguous", type=int, metavar="N", help="candidate set [1, N]")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zeta-limit", type=int, default=10**6)
    p.add_argument("--max-kmax", type=int, default=DEFAULT_EXACT_KMAX,
                   help="largest register the exact counter will accept")
    p.add_argument("--threads", type=int, default=_threads_default())
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_coprime_prob)

    p = sub.add_parser("estimate", help="synthesize phases and run the LS range estimator")
    _add_set_args(p)
    p.add_argument("--d-true-m", type=float, required=True)
    p.add_argument("--sigma-rad", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-step-m", type=float)
    p.add_argument("--span-m", type=float)
    p.add_argument("--max-lobes", type=int, default=8)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("campaign", help="run a Monte-Carlo campaign from a JSON config")
    p.add_argument("config")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--kind", choices=("coprime", "unambiguous", "lobes", "discrepancy"))
    p.add_argument("--stem", help="output file stem (default: the kind)")
    p.add_argument("--threads", type=int, default=_threads_default())
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise InputError("--threads must be >= 1")
        return args.func(args)
    except (InputError, ConfigError) as exc:
        errors = getattr(exc, "errors", None) or [str(exc)]
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # a failed scenario must not look like success
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
