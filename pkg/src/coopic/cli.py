"""Command-line entry point: ``coopic <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import gdof, ldc, sweep
from .bounds import sym_one_round, sym_upper
from .channel import ChannelParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATIONS = 2


def _load_scenario(path: str) -> ChannelParams:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return ChannelParams.from_scenario(json.loads(text))


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _floats(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or comma-separated numbers, got {text!r}") from None


def _linspace(lo: float, hi: float, steps: int) -> List[float]:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def cmd_region(args: argparse.Namespace) -> int:
    params = _load_scenario(args.scenario)
    _write(sweep.to_json(sweep.emit_region(params, args.which)), args.out)
    return EXIT_OK


def cmd_gap(args: argparse.Namespace) -> int:
    gap = sweep.default_gap(args.regime) if args.gap_bits is None else args.gap_bits
    cfg = sweep.SweepConfig(count=args.count, seed=args.seed, target=args.regime, gap_bits=gap, tol_bits=args.tol)
    report = sweep.gap_sweep(cfg)
    _write(sweep.to_json(report.to_dict()), args.out)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATIONS


def cmd_gdof(args: argparse.Namespace) -> int:
    alphas = _linspace(args.alpha_min, args.alpha_max, args.alpha_steps)
    sys.stdout.write(gdof.curve_csv(alphas, args.kappa))
    return EXIT_OK


def cmd_gdof_converge(args: argparse.Namespace) -> int:
    lo = args.snr_db_max / args.steps
    grid = _linspace(lo, args.snr_db_max, args.steps)
    report = gdof.verify_limit(gdof.GdofQuery(args.alpha, args.kappa), grid, args.theta)
    sys.stdout.write(gdof.convergence_csv(report))
    return EXIT_OK


def cmd_sym(args: argparse.Namespace) -> int:
    params = _load_scenario(args.scenario)
    upper, achieved = sym_upper(params), sym_one_round(params)
    print(f"csym_upper {upper:.9f}")
    print(f"rsym_one_round {achieved:.9f}")
    print(f"gap {upper - achieved:.9f}")
    return EXIT_OK


def cmd_ldc_check(args: argparse.Namespace) -> int:
    ch = ldc.parse_channel(args.channel)
    scheme = ldc.parse_scheme(Path(args.scheme).read_text())
    result = ldc.check_scheme(ch, scheme)
    if result.ok:
        print(f"ok R1={result.rates[0]} R2={result.rates[1]} sum={result.sum_rate}")
        return EXIT_OK
    print(f"fail receiver {result.failed_receiver} cannot decode {' '.join(result.undecoded)}")
    return EXIT_VIOLATIONS


def cmd_ldc_search(args: argparse.Namespace) -> int:
    ch = ldc.parse_channel(args.channel)
    result = ldc.search_raw(ch, args.max_bits)
    print(f"R1={result.rates[0]} R2={result.rates[1]} sum={result.sum_rate} cut_set={result.upper_bound}")
    sys.stdout.write(ldc.format_scheme(result.witness))
    return EXIT_OK


def cmd_fm_crosscheck(args: argparse.Namespace) -> int:
    result = sweep.fm_crosscheck(args.regime, args.count, args.seed, args.tol)
    for r in result["results"]:
        status = "pass" if r["pass"] else "FAIL"
        excess = max(r["projected_in_direct_excess"], r["direct_in_projected_excess"])
        print(f"{r['index']:6d} {r['order']:>5} {r['regime']:<8} {status} excess={excess:.3g}")
    if args.out:
        Path(args.out).write_text(sweep.to_json(result))
    print(f"{result['checks']} checks, {result['failures']} failures", file=sys.stderr)
    return EXIT_OK if result["failures"] == 0 else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coopic", description="Rate regions of the two-user interference channel with conferencing receivers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("region", help="emit a rate region as JSON")
    s.add_argument("--scenario", required=True, help="scenario JSON file, or - for stdin")
    s.add_argument("--which", required=True, choices=("inner", "outer", "cmac-inner", "cmac-outer"))
    s.add_argument("--out")
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("gap", help="randomized gap check")
    s.add_argument("--regime", required=True, choices=("weak", "mixed", "strong", "cmac"))
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gap-bits", type=float, default=None, help="defaults to the stated gap of the regime")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gap)

    s = sub.add_parser("gdof", help="degrees-of-freedom curve as CSV")
    s.add_argument("--alpha-min", type=float, default=0.0)
    s.add_argument("--alpha-max", type=float, default=2.0)
    s.add_argument("--alpha-steps", type=int, default=81)
    s.add_argument("--kappa", type=_floats, default=[0.0], help="one value or a comma-separated list")
    s.set_defaults(func=cmd_gdof)

    s = sub.add_parser("gdof-converge", help="normalized symmetric bound against the limit formula")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--kappa", type=float, required=True)
    s.add_argument("--theta", type=float, default=math.pi / 2)
    s.add_argument("--snr-db-max", type=float, default=200.0)
    s.add_argument("--steps", type=int, default=20)
    s.set_defaults(func=cmd_gdof_converge)

    s = sub.add_parser("sym", help="symmetric upper bound and one-round symmetric rate")
    s.add_argument("--scenario", required=True)
    s.set_defaults(func=cmd_sym)

    s = sub.add_parser("ldc", help="linear deterministic channel tools")
    lsub = s.add_subparsers(dest="ldc_command", required=True)
    c = lsub.add_parser("check", help="verify a bit-level scheme")
    c.add_argument("--channel", required=True, help="e.g. q=3,n11=3,n12=2,n21=2,n22=3,k12=1,k21=1")
    c.add_argument("--scheme", required=True, help="scheme file")
    c.set_defaults(func=cmd_ldc_check)
    c = lsub.add_parser("search", help="exhaustive one-round search over raw forwarding")
    c.add_argument("--channel", required=True)
    c.add_argument("--max-bits", type=int, default=None)
    c.set_defaults(func=cmd_ldc_search)

    s = sub.add_parser("fm-crosscheck", help="projected rate-splitting system against the direct region")
    s.add_argument("--regime", required=True, choices=("weak", "mixed"))
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fm_crosscheck)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"coopic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
