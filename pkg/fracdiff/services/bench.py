#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基准测试服务
============

朴素与 FFT 两种算子作用的计时，输出中位耗时与校验和。
"""

import logging
import time
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.fractional import Field, Grid1D
from ..handlers.error_handlers import ApplyMismatch
from ..schemas.schemas import BenchRow
from .solver import apply_fast, apply_naive, build_weights

logger = logging.getLogger(__name__)

BENCH_ALPHA = 0.5


def _time_apply(func, w, u: Field, repeats: int) -> Tuple[int, np.ndarray]:
    samples = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter_ns()
        result = func(w, u)
        samples.append(time.perf_counter_ns() - start)
    return int(np.median(samples)), result.values


def run_bench(sizes: Sequence[int], repeats: int, rng: np.random.Generator,
              alpha: float = BENCH_ALPHA, length_l: float = 1.0) -> List[BenchRow]:
    """
    对每个 N 计时 naive 与 fast，同一随机场

    两者校验和之差须不超过 tol_fast_apply·Σ|W·u|，否则抛出 ApplyMismatch。
    """
    rows = []
    for n in sorted(sizes):
        grid = Grid1D(length_l, n)
        w = build_weights(grid, alpha)
        u = Field(grid, rng.standard_normal(grid.node_count))
        naive_ns, naive = _time_apply(apply_naive, w, u, repeats)
        fast_ns, fast = _time_apply(apply_fast, w, u, repeats)
        naive_sum, fast_sum = float(np.sum(naive)), float(np.sum(fast))
        scale = max(float(np.sum(np.abs(naive))), np.finfo(float).tiny)
        if abs(naive_sum - fast_sum) > settings.tol_fast_apply * scale:
            raise ApplyMismatch(f"N={n} 时快速作用与朴素作用的校验和不一致: {naive_sum} vs {fast_sum}", n_cells=n)
        logger.info(f"bench N={n}: naive {naive_ns} ns, fast {fast_ns} ns")
        rows.append(BenchRow(n=n, mode="naive", median_ns=naive_ns, checksum=naive_sum))
        rows.append(BenchRow(n=n, mode="fast", median_ns=fast_ns, checksum=fast_sum))
    return rows


def fitted_slopes(rows: List[BenchRow]) -> Dict[str, float]:
    """各模式 log(median_ns) 对 log(N) 的拟合斜率"""
    slopes = {}
    for mode in ("naive", "fast"):
        picked = [(row.n, row.median_ns) for row in rows if row.mode == mode and row.median_ns > 0]
        if len(picked) >= 2:
            n, ns = np.array(picked, dtype=float).T
            slopes[mode] = float(np.polyfit(np.log(n), np.log(ns), 1)[0])
    return slopes
