"""Command-line entry point: ``python -m ioi_fusion <subcommand>``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .core import FusionConfig, load_config
from .doa import compute_covariance, music_pseudospectrum, read_wav
from .evaluation import EvalReport, evaluate, format_table
from .scenario import ScenarioError, load_scenario_file, parse_event_log, run_scenario

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ioi-fusion", description="Initiation-of-interaction detection from audio and vision.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its event log")
    run.add_argument("scenario")
    run.add_argument("--config")
    run.add_argument("--seed", type=int)
    run.add_argument("--events", help="write the event log here instead of stdout")
    run.add_argument("--trace", help="also write the per-frame state trace to this file")
    run.add_argument("--no-vision", action="store_true", help="disable the vision-only path")

    ev = sub.add_parser("eval", help="score an event log against a scenario's ground truth")
    ev.add_argument("eventlog")
    ev.add_argument("scenario")
    ev.add_argument("--window", type=float, default=1.0)
    ev.add_argument("--csv", action="store_true")

    dump = sub.add_parser("doa-dump", help="print the MUSIC pseudospectrum of a WAV file as CSV")
    dump.add_argument("wav")
    dump.add_argument("--config")

    suite = sub.add_parser("suite", help="compare AV-IoI and Full-IoI over a scenario directory")
    suite.add_argument("directory")
    suite.add_argument("--config")
    suite.add_argument("--window", type=float, default=1.0)
    suite.add_argument("--csv", action="store_true")
    suite.add_argument("--per-scenario", action="store_true")
    return p


def _config(path: Optional[str]) -> FusionConfig:
    return load_config(path) if path else FusionConfig()


def run_suite(directory: str | Path, config: FusionConfig,
              window: float = 1.0) -> List[Tuple[str, EvalReport, EvalReport]]:
    """Score every ``*.scn`` in ``directory`` with the vision path off and on."""
    files = sorted(Path(directory).glob("*.scn"))
    if not files:
        raise FileNotFoundError(f"no .scn files in {directory}")
    av_cfg = config.replace(enable_vision_path=False)
    full_cfg = config.replace(enable_vision_path=True)
    out = []
    for f in files:
        sc = load_scenario_file(f)
        av = evaluate(run_scenario(sc, av_cfg).events, sc.ground_truth_ioi, window)
        full = evaluate(run_scenario(sc, full_cfg).events, sc.ground_truth_ioi, window)
        out.append((sc.name, av, full))
    return out


def _cmd_run(args) -> int:
    cfg = _config(args.config)
    if args.no_vision:
        cfg = cfg.replace(enable_vision_path=False)
    sc = load_scenario_file(args.scenario)
    result = run_scenario(sc, cfg, seed=args.seed)
    if args.events:
        Path(args.events).write_text(result.event_log())
    else:
        sys.stdout.write(result.event_log())
    if args.trace:
        Path(args.trace).write_text(result.state_trace())
    return EXIT_OK


def _cmd_eval(args) -> int:
    events = parse_event_log(Path(args.eventlog).read_text())
    sc = load_scenario_file(args.scenario)
    report = evaluate(events, sc.ground_truth_ioi, args.window)
    sys.stdout.write(format_table([(sc.name or "report", report)], csv=args.csv))
    return EXIT_OK


def _cmd_doa_dump(args) -> int:
    cfg = _config(args.config)
    samples, rate = read_wav(args.wav)
    if rate != cfg.doa.sample_rate:
        raise ValueError(f"{args.wav}: sample rate {rate} Hz, config expects {cfg.doa.sample_rate} Hz")
    cov = compute_covariance(samples, cfg.doa, cfg.array.n_mics)
    sys.stdout.write(music_pseudospectrum(cov, cfg.array, cfg.doa).to_csv())
    return EXIT_OK


def _cmd_suite(args) -> int:
    results = run_suite(args.directory, _config(args.config), args.window)
    av_total = sum((av for _, av, _ in results), EvalReport(0, 0, 0))
    full_total = sum((full for _, _, full in results), EvalReport(0, 0, 0))
    rows = []
    if args.per_scenario:
        for name, av, full in results:
            rows += [(f"{name} AV-IoI", av), (f"{name} Full-IoI", full)]
    rows += [("AV-IoI", av_total), ("Full-IoI", full_total)]
    sys.stdout.write(format_table(rows, csv=args.csv))
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "eval": _cmd_eval, "doa-dump": _cmd_doa_dump, "suite": _cmd_suite}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
