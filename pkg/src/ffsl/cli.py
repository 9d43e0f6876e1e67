"""Command-line entry point: ``ffsl run``, ``ffsl table`` and ``ffsl selftest``."""
from __future__ import annotations

import argparse
import ast
import sys
from pathlib import Path

from .experiments import (
    EXPERIMENTS,
    TABLES,
    ConfigError,
    ExperimentConfig,
    RunError,
    format_table,
    run_experiment,
    run_table,
    write_run,
)
from .selftest import run_selftest


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment, values are Python literals."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _literal(value)
    return out


def _literal(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _build_parser():
    ap = argparse.ArgumentParser(prog="ffsl", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and compare with its oracle")
    run.add_argument("--experiment", choices=EXPERIMENTS)
    run.add_argument("--scheme", choices=("SL", "FFSL"))
    run.add_argument("--order", type=int)
    run.add_argument("--N", type=int)
    run.add_argument("--M", type=int)
    run.add_argument("--out", type=Path)
    run.add_argument("--config", type=Path, help="key=value file; flags take precedence")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a preset parameter, e.g. --set sigma=0.7")
    run.add_argument("--no-timing", action="store_true",
                     help="leave runtime_s empty so outputs are byte-reproducible")

    tab = sub.add_parser("table", help="reproduce one of the error tables")
    tab.add_argument("--id", type=int, required=True, choices=sorted(TABLES))
    tab.add_argument("--out", type=Path, default=Path("results"))
    tab.add_argument("--no-timing", action="store_true")

    sub.add_parser("selftest", help="run the built-in invariant checks")
    return ap


def _run_config(args) -> ExperimentConfig:
    settings = parse_config_file(args.config) if args.config else {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        settings[k.strip()] = _literal(v.strip())
    for key in ("experiment", "scheme", "order", "N", "M", "out"):
        flag = getattr(args, key)
        if flag is not None:
            settings[key] = flag
    if "experiment" not in settings:
        raise ConfigError("an experiment is required (--experiment or config file)")
    top = {k: settings.pop(k) for k in ("experiment", "scheme", "order", "N", "M", "out")
           if k in settings}
    if "out" in top:
        top["out"] = Path(top["out"])
    return ExperimentConfig(params=settings, **top)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return 0 if run_selftest() else 1
        if args.command == "table":
            reports = run_table(args.id, args.out, timing=not args.no_timing)
            sys.stdout.write(format_table(args.id, reports))
            return 0
        cfg = _run_config(args)
        out = cfg.out
        cfg.out = None
        result = run_experiment(cfg)
        if out is not None:
            write_run(result, out, timing=not args.no_timing)
        r = result.report
        print(f"{r.experiment} {r.scheme}{r.order} N={r.N} M={r.M} mu={r.mu:.3g} C={r.C:.3g}  "
              f"l2_rel={r.l2_rel:.3e} linf_rel={r.linf_rel:.3e} "
              f"mass_drift_rel={r.mass_drift_rel:.2e} ({r.runtime_s:.2f}s)")
        return 0
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except RunError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
