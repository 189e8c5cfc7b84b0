"""Command line entry point.

Usage::

    subnodal <scenario> [--config FILE] [--out DIR] [--seed N]
             [--threads N] [--deterministic]

Exit codes: 0 all verdicts pass, 2 any verdict failed, 1 error.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from .config import SCENARIOS, default_config, load_config
from .report import emit_report
from .scenarios import run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="subnodal",
        description="Sub-Riemannian spectral and nodal-set experiments",
    )
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", help="key = value config file (defaults applied per scenario)")
    p.add_argument("--out", help="output directory for CSV/JSON reports")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--threads", type=int, help="worker pool size for independent items")
    p.add_argument(
        "--deterministic",
        action="store_true",
        help="force sequential, bit-reproducible execution (default)",
    )
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.scenario) if args.config else default_config(args.scenario)
        if args.seed is not None:
            cfg.params["seed"] = int(args.seed)
        if args.threads is not None:
            cfg.params["threads"] = int(args.threads)
        if args.deterministic:
            cfg.params["deterministic"] = 1
        report = run_scenario(cfg)
        out_dir = args.out or cfg.params.get("out") or "subnodal-out"
        files = emit_report(report, out_dir)
        print(report.summary_text())
        print("wrote: " + ", ".join(str(f) for f in files))
        return 0 if report.all_pass else 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
