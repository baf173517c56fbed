#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具函数模块
============

配置文件读取与 CSV / JSON 输出。所有浮点数按 17 位有效数字写出，
相同输入得到逐字节相同的文件。
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from ..core.config import ensure_directories, settings
from ..handlers.error_handlers import ConfigError
from ..schemas.schemas import CONFIG_KEYS, LIST_KEYS, BenchRow, ProbeReport, RunConfig

logger = logging.getLogger(__name__)


# ==================== 配置文件 ====================
def _strip_value(raw: str) -> str:
    value = raw.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        value = value[1:-1]
    return value


def parse_config_text(text: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """
    解析 `key = value` 文本

    Returns:
        (嵌套字典, 点号键 -> 行号)
    """
    data: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("缺少 '='", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"未知的配置键 {key}", line=number, field=key)
        if key in lines:
            raise ConfigError(f"重复的配置键（首次出现在第{lines[key]}行）", line=number, field=key)
        value = _strip_value(value)
        if key in LIST_KEYS:
            parsed: Any = [item.strip() for item in value.split(",") if item.strip()]
        else:
            parsed = value
        target = data
        path = CONFIG_KEYS[key]
        for part in path[:-1]:
            target = target.setdefault(part, {})
        target[path[-1]] = parsed
        lines[key] = number
    return data, lines


def _field_to_key(location: Sequence[Any]) -> Optional[str]:
    location = tuple(str(part) for part in location if not isinstance(part, int))
    for key, path in CONFIG_KEYS.items():
        if path == location[: len(path)]:
            return key
    return None


def read_config_file(path: Path, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    读取并校验运行配置

    Args:
        path: 配置文件路径
        overrides: 命令行覆盖项（字段名 -> 值），优先级高于文件

    Returns:
        RunConfig: 校验后的配置
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}")
    data, lines = parse_config_text(text)
    for name, value in (overrides or {}).items():
        if value is not None:
            data[name] = value
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        key = _field_to_key(error.get("loc", ()))
        raise ConfigError(error.get("msg", str(e)), line=lines.get(key), field=key or ".".join(map(str, error.get("loc", ()))))
    logger.debug(f"配置读取完成: {path}")
    return config


# ==================== 输出 ====================
def format_float(value: float) -> str:
    """17 位有效数字的十进制表示"""
    return format(float(value), f".{settings.float_digits}g")


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """写出带表头的 CSV，换行符固定为 \\n"""
    path = Path(path)
    ensure_directories(path.parent)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])
    return path


def write_solution_csv(record, path: Path) -> Path:
    """solution.csv: 每个时间层、每个节点一行 (t, x, u)"""
    x = record.grid.nodes

    def rows():
        for m, t in enumerate(record.times):
            frame = record.frames[m]
            for j in range(len(x)):
                yield (float(t), float(x[j]), float(frame[j]))

    return write_csv(path, ("t", "x", "u"), rows())


def write_probe_csv(report: ProbeReport, output_dir: Path) -> Path:
    """<probe>.csv: quantity, value, bound, passed；参考行 passed 写为 info"""
    rows = []
    for row in report.rows:
        passed = "info" if row.passed is None else row.passed
        rows.append((row.quantity, row.value, row.bound, passed))
    return write_csv(Path(output_dir) / f"{report.name}.csv", ("quantity", "value", "bound", "passed"), rows)


def write_summary_csv(reports: List[ProbeReport], output_dir: Path) -> Path:
    """summary.csv: probe, passed, n_quantities；跳过的探针 passed 写为 skipped"""
    rows = [
        (report.name, "skipped" if report.skipped else report.passed, len(report.rows))
        for report in reports
    ]
    return write_csv(Path(output_dir) / "summary.csv", ("probe", "passed", "n_quantities"), rows)


def write_bench_csv(rows: List[BenchRow], output_dir: Path) -> Path:
    """bench.csv: N, mode, median_ns, checksum"""
    return write_csv(
        Path(output_dir) / "bench.csv",
        ("N", "mode", "median_ns", "checksum"),
        [(row.n, row.mode, row.median_ns, row.checksum) for row in rows],
    )


def write_meta_json(meta: Dict[str, Any], path: Path) -> Path:
    """meta.json，键排序、缩进 2"""
    path = Path(path)
    ensure_directories(path.parent)

    def default(value):
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, Path):
            return str(value)
        raise TypeError(f"无法序列化 {type(value).__name__}")

    path.write_text(json.dumps(meta, sort_keys=True, indent=2, default=default) + "\n", encoding="utf-8")
    return path
