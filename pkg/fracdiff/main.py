#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口
==========

    fracdiff solve --config run.cfg [--output-dir DIR] [--seed N] [--log-level L]
    fracdiff probe --config run.cfg ...
    fracdiff bench --config run.cfg ...

退出码: 0 成功, 1 内部错误, 2 配置错误, 3 数值拒绝, 4 探针失败
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__, __version_date__
from .core.config import ensure_directories, setup_logging
from .handlers.error_handlers import EXIT_OK, ProbeFailure
from .middlewares.logging import LoggingMiddleware
from .schemas.schemas import RunConfig
from .services.analysis import run_probes
from .services.bench import fitted_slopes, run_bench
from .services.problem import build_problem
from .services.solver import solve
from .utils.utils import read_config_file, write_bench_csv, write_meta_json, write_solution_csv

logger = logging.getLogger(__name__)


# ==================== 命令 ====================
def _prepare(args: argparse.Namespace) -> RunConfig:
    overrides = {"output_dir": args.output_dir, "seed": args.seed}
    config = read_config_file(args.config, overrides)
    ensure_directories(config.output_dir)
    return config


def cmd_solve(args: argparse.Namespace) -> int:
    """求解并写出 solution.csv 与 meta.json"""
    config = _prepare(args)
    spec = build_problem(config.problem)
    record = solve(spec, spec.grid(config.n_cells), config.dt_safety, apply_mode=config.apply_mode)
    write_solution_csv(record, config.output_dir / "solution.csv")
    meta = dict(record.meta)
    meta.update({"problem": spec.name, "seed": config.seed, "version": __version__})
    write_meta_json(meta, config.output_dir / "meta.json")
    logger.info(f"已写出 {config.output_dir / 'solution.csv'}")
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    """运行探针，任一判定型探针失败时退出码为 4"""
    config = _prepare(args)
    spec = build_problem(config.problem)
    reports = run_probes(config, spec, config.output_dir)
    failed = [report.name for report in reports if not report.skipped and not report.passed]
    if failed:
        raise ProbeFailure(f"探针未通过: {', '.join(failed)}", failed=failed)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """朴素/快速算子作用基准，写出 bench.csv"""
    config = _prepare(args)
    rng = np.random.default_rng(config.seed)
    rows = run_bench(config.bench_sizes, config.bench_repeats, rng, alpha=config.problem.alpha,
                     length_l=config.problem.length)
    write_bench_csv(rows, config.output_dir)
    for mode, slope in fitted_slopes(rows).items():
        logger.info(f"{mode} 耗时的 log-log 斜率: {slope:.3f}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "probe": cmd_probe, "bench": cmd_bench}
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


# ==================== 参数解析 ====================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracdiff", description="一维空间分数阶扩散求解器")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({__version_date__})")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in COMMANDS.items():
        cmd = sub.add_parser(name, help=func.__doc__)
        cmd.add_argument("--config", type=Path, required=True, help="配置文件路径")
        cmd.add_argument("--output-dir", type=Path, default=None, help="输出目录（覆盖配置）")
        cmd.add_argument("--seed", type=int, default=None, help="随机种子（覆盖配置）")
        cmd.add_argument("--log-level", default=None, type=str.upper, choices=LOG_LEVELS, help="日志级别")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    return LoggingMiddleware(COMMANDS[args.command], args.command)(args)


if __name__ == "__main__":
    sys.exit(main())
