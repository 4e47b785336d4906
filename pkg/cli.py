from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from algebra import FORM_KINDS, run_trials
from errors import EXIT_INTERNAL, EXIT_OK, ConfigError, GelfandError, VerificationFailure
from models import SCHEMA_VERSION, RunConfig
from report import _safe_write_json, iter_reports, write_reports
from suite import format_table, run_suite
from sympair import catalog

log = logging.getLogger("gelfand")

# config-file keys and the RunConfig fields they set
CONFIG_KEYS = ("pairs", "q", "out", "format", "seed", "cap_group", "cap_cosets", "workers", "timings")


def _q_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--q expects a comma list of integers, got {text!r}")


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Measure how far classical symmetric pairs over F_q are from being Gelfand pairs."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("pairs", help="List the built-in symmetric pairs")

    run = sub.add_parser("run", help="Run the full pipeline per (pair, q)")
    run.add_argument("--config", default=None, help="JSON config file (flags override its keys)")
    run.add_argument("--pair", dest="pairs", action="append", default=None,
                     help="Pair id, repeatable (e.g. 'gl-torus(1,1)')")
    run.add_argument("--q", type=_q_list, default=None, help="Comma list of odd prime powers, e.g. 3,5,7")
    run.add_argument("--out", default=None, help="Output path (stdout when omitted)")
    run.add_argument("--format", choices=["json", "csv"], default=None, help="Report format")
    run.add_argument("--seed", type=int, default=None, help="Seed for sampled checks")
    run.add_argument("--cap-group", dest="cap_group", type=int, default=None, help="Max |G|")
    run.add_argument("--cap-cosets", dest="cap_cosets", type=int, default=None, help="Max |Z|")
    run.add_argument("--workers", type=int, default=None, help="Parallel (pair, q) runs")
    run.add_argument("--timings", action="store_true", default=None, help="Record per-stage seconds")

    verify = sub.add_parser("verify", help="Run the reproduction suite")
    verify.add_argument("--out", default=None, help="Write check results as JSON")
    verify.add_argument("--workers", type=int, default=1, help="Parallel (pair, q) runs")
    verify.add_argument("--seed", type=int, default=0, help="Seed for random matrix trials")

    alg = sub.add_parser("algebra", help="Fixed-space dimensions of g A^T g^-1 on M_n(Q)")
    alg.add_argument("--n", type=int, default=3, help="Matrix size")
    alg.add_argument("--trials", type=int, default=10, help="Number of random g")
    alg.add_argument("--seed", type=int, default=0, help="Random seed")
    alg.add_argument("--kind", choices=list(FORM_KINDS), default="general", help="Kind of g")
    alg.add_argument("--out", default=None, help="Write trials as JSON")

    return parser.parse_args(argv)


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="[%(levelname)s] %(message)s", stream=sys.stderr, force=True)


def load_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the --config file, then explicit flags."""
    cfg = RunConfig()
    if args.config:
        path = Path(args.config)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read config {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Config {path} must hold a JSON object")
        unknown = sorted(set(data) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
        for key, value in data.items():
            setattr(cfg, key, value)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg.validate()


def cmd_pairs_list() -> int:
    for entry in catalog():
        flag = "trusted" if entry.trusted else "untrusted"
        print(f"{entry.pair_id:<16} {flag:<10} {entry.description}")
    return EXIT_OK


def cmd_run(cfg: RunConfig) -> int:
    log.info("pairs: %s / q: %s", ", ".join(cfg.pairs), ", ".join(map(str, cfg.q)))
    reports = []
    try:
        for report in iter_reports(cfg):
            reports.append(report)
    finally:
        # flush whatever finished before an abort
        if reports or cfg.out:
            write_reports(cfg, reports)
    if cfg.out:
        log.info("%d report(s) written to %s", len(reports), cfg.out)
    return EXIT_OK


def cmd_verify_suite(out: str | None = None, workers: int = 1, seed: int = 0) -> int:
    results, reports = run_suite(workers=workers, seed=seed)
    print(format_table(results))
    if out:
        _safe_write_json(Path(out), {
            "schema_version": SCHEMA_VERSION,
            "seed": seed,
            "checks": [r.to_dict() for r in results],
            "reports": [r.to_dict() for r in reports],
        })
    failed = [r for r in results if not r.passed]
    if failed:
        raise VerificationFailure(f"{len(failed)} of {len(results)} checks failed")
    print(f"[DONE] all {len(results)} checks passed")
    return EXIT_OK


def cmd_algebra(n: int, trials: int, seed: int, kind: str = "general", out: str | None = None) -> int:
    if n < 2:
        raise ConfigError(f"--n must be at least 2, got {n}")
    results = run_trials(n, trials, seed, kind)
    for t in results:
        print(f"  trial {t.index:>3}: {t.classification:<15} dim {t.fixed_dim} (<= {t.bound})")
    dims = [t.fixed_dim for t in results]
    if dims:
        print(f"[DONE] n={n} kind={kind}: min {min(dims)}, max {max(dims)}, bound {n * (n + 1) // 2}")
    if out:
        _safe_write_json(Path(out), {
            "schema_version": SCHEMA_VERSION,
            "n": n, "kind": kind, "seed": seed,
            "trials": [t.to_dict() for t in results],
        })
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        if args.command == "pairs":
            return cmd_pairs_list()
        if args.command == "run":
            return cmd_run(load_config(args))
        if args.command == "verify":
            return cmd_verify_suite(args.out, args.workers, args.seed)
        return cmd_algebra(args.n, args.trials, args.seed, args.kind, args.out)
    except GelfandError as e:
        log.error("%s", e)
        return e.exit_code
    except Exception:
        log.exception("Unexpected failure")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
