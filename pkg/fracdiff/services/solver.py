#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
求解器服务
==========

u_t = (D^α u)_x + f 的单调显式格式:
    - build_weights: 把 J + K 求积组装成下三角权重（Toeplitz 尾部 + 首列 + 三对角带）
    - stable_dt / step / solve: 显式欧拉推进，步长保证更新映射单调
    - apply_naive / apply_fast: 朴素 O(N²) 与 FFT O(N log N) 的算子作用
    - solve_reference: α→0 的迎风输运与 α→1 的显式热方程参考解
"""

import logging
import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Literal, Optional, Union

import numpy as np
from scipy import linalg

from ..core.config import settings
from ..core.fractional import (
    Field,
    FracOrder,
    Grid1D,
    SLOPE_MODES,
    as_order,
    last_cell_weights,
    unit_cell_moments,
)
from ..handlers.error_handlers import DomainError, MonotonicityError, StabilityError
from ..utils.cache import global_cache
from .problem import ProblemSpec

logger = logging.getLogger(__name__)

ApplyMode = Literal["naive", "fast", "auto"]


# ==================== 权重 ====================
@dataclass(frozen=True, eq=False)
class OperatorWeights:
    """
    离散通量散度的下三角权重 W

    第 i 行（1 ≤ i ≤ N-1）:
        W[i, j] = toeplitz_tail[i-j]   (1 ≤ j ≤ i-2)
        W[i, 0] = first_column[i]
        W[i, i-1], W[i, i], W[i, i+1] = lower[i], diag[i], upper[i]
        W[i, 1] += column_corrections[i, 0]   (i ≥ 3)
        W[i, 2] += column_corrections[i, 1]   (i ≥ 4)
    边界行恒为 0；toeplitz_tail[0] = toeplitz_tail[1] = 0。
    column_corrections 来自与 x=0 相邻单元的 s^α 重构，只作用于列 1、2。
    """

    grid: Grid1D
    alpha: FracOrder
    slope_mode: str
    toeplitz_tail: np.ndarray
    first_column: np.ndarray
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    column_corrections: np.ndarray
    build_seconds: float = 0.0
    certified: bool = field(default=False)

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    @property
    def diag_max(self) -> float:
        return float(np.max(np.abs(self.diag)))

    @cached_property
    def _offdiag_matrix(self) -> np.ndarray:
        n = self.n_cells
        matrix = linalg.toeplitz(self.toeplitz_tail, np.zeros(n + 1))
        matrix[:, 0] = self.first_column
        rows = np.arange(1, n)
        matrix[rows, rows - 1] = self.lower[1:n]
        matrix[rows, rows + 1] = self.upper[1:n]
        matrix[:, 1:3] += self.column_corrections
        matrix[0, :] = 0.0
        matrix[n, :] = 0.0
        matrix.setflags(write=False)
        return matrix

    def dense(self) -> np.ndarray:
        """物化完整的 (N+1)×(N+1) 稠密矩阵"""
        matrix = np.array(self._offdiag_matrix)
        matrix[np.diag_indices_from(matrix)] = self.diag
        return matrix

    def row(self, i: int) -> np.ndarray:
        """第 i 行的前 i+2 个权重（列 0..i+1）"""
        n = self.n_cells
        weights = np.zeros(min(i + 2, n + 1))
        if 1 <= i < n:
            weights[1 : i - 1] = self.toeplitz_tail[i - 1 : 1 : -1]
            weights[0] += self.first_column[i]
            weights[i - 1] += self.lower[i]
            weights[i] = self.diag[i]
            weights[i + 1] = self.upper[i]
            weights[1:3] += self.column_corrections[i]
        return weights

    @cached_property
    def _tail_spectrum(self):
        size = 1 << (2 * (self.n_cells + 1) - 1).bit_length()
        return size, np.fft.rfft(self.toeplitz_tail, size)


def _assemble(grid: Grid1D, order: FracOrder, slope: str) -> OperatorWeights:
    n = grid.n_cells
    a = order.alpha
    c = order.c_alpha
    inv_g = order.inv_gamma_1ma
    scale = grid.spacing_h ** (-a - 1.0)

    A, B, Q = unit_cell_moments(-a - 2.0, max(n - 2, 1))
    rows = np.arange(1, n)
    idx = rows.astype(float)

    # 斜率 p·h 的总系数: J 部分 + 第一单元 + 尾部 ∫z^{-α-1}
    slope_coeff = inv_g * (a + 1.0) * np.power(idx, -a) + c / (1.0 - a) + c * (1.0 - np.power(idx, -a)) / a
    half_curv = 0.5 * c * np.concatenate(([0.0], np.cumsum(Q)))[: n - 1]
    j_left = inv_g * a * np.power(idx, -a - 1.0)

    if slope == "centered":
        slope_lower, slope_upper = -0.5 * slope_coeff, 0.5 * slope_coeff
    else:
        slope_lower, slope_upper = np.zeros(n - 1), slope_coeff

    tail = np.zeros(n + 1)
    if n > 3:
        tail[2 : n - 1] = c * (A[1 : n - 2] + B[0 : n - 3])

    first = np.zeros(n + 1)
    lower = np.zeros(n + 1)
    upper = np.zeros(n + 1)
    diag = np.zeros(n + 1)

    lower[1:n] = c / (1.0 - a) + half_curv + slope_lower
    lower[2:n] += c * A[0]
    lower[1] += j_left[0]
    first[2:n] = j_left[1:] + c * B[: n - 2]
    upper[1:n] = half_curv + slope_upper

    # 与 x=0 相邻单元的 s^α 重构，第 i 行（i ≥ 2）改动列 0、1、2 与曲率带
    corrections = np.zeros((n + 1, 2))
    if n > 2:
        d0, d1, d2, dq = last_cell_weights(a, n - 2)
        first[2:n] += c * d0
        lower[2:n] += 0.5 * c * dq
        upper[2:n] += 0.5 * c * dq
        # 第 2 行的列 1 在下带，列 2 是对角（由行和吸收）；第 3 行的列 2 在下带
        lower[2] += c * d1[0]
        corrections[3:n, 0] = c * d1[1:]
        if n > 3:
            lower[3] += c * d2[1]
        corrections[4:n, 1] = c * d2[2:]

    tail_row_sums = np.concatenate(([0.0], np.cumsum(tail)))[: n + 1]
    # 行 i 的 Toeplitz 部分覆盖偏移 2..i-1
    toeplitz_sums = np.zeros(n + 1)
    toeplitz_sums[1:n] = tail_row_sums[rows]
    diag[1:n] = -(
        first[1:n] + lower[1:n] + upper[1:n] + toeplitz_sums[1:n] + corrections[1:n].sum(axis=1)
    )

    return OperatorWeights(
        grid=grid,
        alpha=order,
        slope_mode=slope,
        toeplitz_tail=tail * scale,
        first_column=first * scale,
        lower=lower * scale,
        diag=diag * scale,
        upper=upper * scale,
        column_corrections=corrections * scale,
    )


def certify(w: OperatorWeights) -> Optional[tuple]:
    """
    检查单调性: 非对角权重 ≥ 0，对角权重 ≤ 0

    Returns:
        None 表示通过；否则返回第一个违例的 (行, 列, 权重)
    """
    n = w.n_cells
    negative_tail = np.nonzero(w.toeplitz_tail < 0.0)[0]
    if negative_tail.size:
        m = int(negative_tail[0])
        return (m + 1, 1, float(w.toeplitz_tail[m]))
    # 列 1（i ≥ 3）、列 2（i ≥ 4）的实际权重 = Toeplitz 项 + 修正
    for col, start in ((1, 3), (2, 4)):
        rows = np.arange(start, n)
        effective = w.toeplitz_tail[rows - col] + w.column_corrections[rows, col - 1]
        bad = np.nonzero(effective < 0.0)[0]
        if bad.size:
            i = int(rows[bad[0]])
            return (i, col, float(effective[bad[0]]))
    for name, values, offset in (("first", w.first_column, None), ("lower", w.lower, -1), ("upper", w.upper, 1)):
        bad = np.nonzero(values[1:n] < 0.0)[0]
        if bad.size:
            i = int(bad[0]) + 1
            col = 0 if offset is None else i + offset
            return (i, col, float(values[i]))
    bad = np.nonzero(w.diag[1:n] > 0.0)[0]
    if bad.size:
        i = int(bad[0]) + 1
        return (i, i, float(w.diag[i]))
    return None


def build_weights(grid: Grid1D, alpha: Union[float, FracOrder], slope: str = "auto") -> OperatorWeights:
    """
    组装并认证权重

    Args:
        grid: 至少 3 个节点的网格
        alpha: 分数阶
        slope: "centered"、"upwind" 或 "auto"（先中心差分，失败时退回迎风）

    Returns:
        OperatorWeights: 已通过单调性认证的权重
    """
    order = as_order(alpha)
    if grid.node_count < 3:
        raise DomainError("build_weights 至少需要 3 个节点")
    if slope not in SLOPE_MODES + ("auto",):
        raise DomainError(f"未知的斜率格式 {slope}")

    candidates = SLOPE_MODES if slope == "auto" else (slope,)
    start = time.perf_counter()
    violation = None
    for mode in candidates:
        weights = _assemble(grid, order, mode)
        violation = certify(weights)
        if violation is None:
            elapsed = time.perf_counter() - start
            object.__setattr__(weights, "build_seconds", elapsed)
            object.__setattr__(weights, "certified", True)
            logger.info(
                f"权重组装完成: N={grid.n_cells}, alpha={order.alpha}, 斜率={mode}, 耗时 {elapsed:.3f}s"
            )
            return weights
        logger.warning(
            f"斜率格式 {mode} 单调性认证失败 (行 {violation[0]}, 列 {violation[1]}, 权重 {violation[2]:.3e})"
        )
    row, col, value = violation
    raise MonotonicityError(
        f"权重单调性认证失败: 行 {row}, 列 {col}, 权重 {value:.6e} (N={grid.n_cells}, alpha={order.alpha})",
        row=row,
        col=col,
    )


def get_weights(grid: Grid1D, alpha: Union[float, FracOrder], slope: str = "auto") -> OperatorWeights:
    """带缓存的 build_weights"""
    order = as_order(alpha)
    key = global_cache.weights_key(grid.n_cells, grid.length_l, order.alpha, slope)
    return global_cache.get_or_build("weights", key, lambda: build_weights(grid, order, slope))


# ==================== 算子作用 ====================
def _offdiag_naive(w: OperatorWeights, v: np.ndarray) -> np.ndarray:
    n = w.n_cells
    if n <= settings.dense_max_cells:
        return w._offdiag_matrix @ v
    out = np.zeros(n + 1)
    tail = w.toeplitz_tail
    for i in range(1, n):
        acc = float(np.dot(tail[i - 1 : 1 : -1], v[1 : i - 1])) if i > 2 else 0.0
        out[i] = acc + w.first_column[i] * v[0] + w.lower[i] * v[i - 1] + w.upper[i] * v[i + 1]
    out += w.column_corrections @ v[1:3]
    return out


def _offdiag_fast(w: OperatorWeights, v: np.ndarray) -> np.ndarray:
    n = w.n_cells
    size, spectrum = w._tail_spectrum
    masked = np.array(v)
    masked[0] = 0.0
    conv = np.fft.irfft(spectrum * np.fft.rfft(masked, size), size)[: n + 1]
    out = np.zeros(n + 1)
    out[1:n] = (
        conv[1:n]
        + w.first_column[1:n] * v[0]
        + w.lower[1:n] * v[0 : n - 1]
        + w.upper[1:n] * v[2 : n + 1]
    )
    out += w.column_corrections @ v[1:3]
    return out


def _resolve_mode(w: OperatorWeights, mode: ApplyMode) -> str:
    if mode == "auto":
        return "naive" if w.n_cells <= settings.dense_max_cells else "fast"
    if mode not in ("naive", "fast"):
        raise DomainError(f"未知的作用模式 {mode}")
    return mode


def offdiagonal_apply(w: OperatorWeights, values: np.ndarray, mode: ApplyMode = "auto") -> np.ndarray:
    """Σ_{j≠i} W_ij v_j（不含对角项）"""
    if _resolve_mode(w, mode) == "fast":
        return _offdiag_fast(w, values)
    return _offdiag_naive(w, values)


def _apply(w: OperatorWeights, u: Field, mode: str) -> Field:
    # 行和为零，先减去 u(0)，常数场因此精确映射为 0
    v = u.values - u.values[0]
    out = offdiagonal_apply(w, v, mode) + w.diag * v
    return Field(w.grid, out)


def apply_naive(w: OperatorWeights, u: Field) -> Field:
    """朴素 O(N²) 的 W·u"""
    return _apply(w, u, "naive")


def apply_fast(w: OperatorWeights, u: Field) -> Field:
    """Toeplitz 尾部的 FFT 卷积 + O(N) 局部修正"""
    return _apply(w, u, "fast")


def apply(w: OperatorWeights, u: Field, mode: ApplyMode = "auto") -> Field:
    return _apply(w, u, _resolve_mode(w, mode))


# ==================== 时间推进 ====================
def stable_dt(w: OperatorWeights, safety: float = None) -> float:
    """Δt = safety / max|W_ii|，此时显式欧拉的所有系数非负"""
    safety = settings.dt_safety if safety is None else safety
    if not 0.0 < safety <= 1.0:
        raise DomainError(f"安全系数必须位于 (0,1]，当前为 {safety}")
    diag_max = w.diag_max
    if diag_max == 0.0:
        raise StabilityError("算子退化: 对角权重全为 0")
    return safety / diag_max


def _check_dt(w: OperatorWeights, dt: float) -> None:
    bound = stable_dt(w, 1.0)
    if not 0.0 < dt <= bound * (1.0 + 1e-12):
        raise StabilityError(f"时间步长 {dt:.6e} 超过稳定界 {bound:.6e}", bound=bound)


def _advance(w: OperatorWeights, values: np.ndarray, t: float, dt: float, spec: ProblemSpec,
             mode: str) -> np.ndarray:
    grid = w.grid
    n = grid.n_cells
    x = grid.nodes
    nxt = np.empty(n + 1)
    # (1 + dt·W_ii) ≥ 0 与非负非对角权重使浮点更新也保序
    offdiag = offdiagonal_apply(w, values, mode)
    forcing = spec.source(x[1:n], np.full(n - 1, t))
    nxt[1:n] = (1.0 + dt * w.diag[1:n]) * values[1:n] + dt * offdiag[1:n] + dt * forcing
    t_next = np.array([t + dt, t + dt])
    nxt[[0, n]] = spec.boundary(np.array([0.0, grid.length_l]), t_next)
    return nxt


def step(u: Field, t: float, dt: float, w: OperatorWeights, spec: ProblemSpec,
         mode: ApplyMode = "auto") -> Field:
    """
    显式欧拉一步: 内部 u + dt·(W·u + f(·,t))，两端取 g(0,t+dt), g(l,t+dt)
    """
    _check_dt(w, dt)
    return Field(u.grid, _advance(w, u.values, t, dt, spec, _resolve_mode(w, mode)))


def time_grid(horizon: float, dt: float) -> np.ndarray:
    """0 = t_0 < … < t_M = T，均匀步长，最后一步缩短以精确落在 T"""
    steps = max(1, int(math.ceil(horizon / dt - 1e-9)))
    times = np.arange(steps + 1, dtype=float) * dt
    times[-1] = horizon
    if steps > 1 and times[-2] >= horizon:
        times = np.append(times[: -2], horizon)
    return times


@dataclass(frozen=True, eq=False)
class SolutionRecord:
    """时间序列解: times[m] 与 frames[m, :] 对应"""

    grid: Grid1D
    times: np.ndarray
    frames: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        frames = np.array(self.frames, dtype=float)
        if frames.shape != (len(times), self.grid.node_count):
            raise DomainError(f"帧数组形状 {frames.shape} 与时间/网格不符")
        times.setflags(write=False)
        frames.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "frames", frames)

    def frame(self, m: int) -> Field:
        return Field(self.grid, self.frames[m])

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.frames)))


def solve(spec: ProblemSpec, grid: Grid1D, dt_safety: Optional[float] = None, dt: Optional[float] = None,
          apply_mode: ApplyMode = "auto", slope: str = "auto") -> SolutionRecord:
    """
    从 t=0 推进到 T

    Args:
        spec: 问题定义
        grid: 空间网格
        dt_safety: 步长安全系数，dt 为 None 时使用
        dt: 显式给定的步长（不得超过稳定界）
        apply_mode: 算子作用方式
        slope: 斜率格式

    Returns:
        SolutionRecord: 全部时间层
    """
    if abs(grid.length_l - spec.length_l) > 1e-12 * spec.length_l:
        raise DomainError("网格长度与问题区间长度不一致")
    w = get_weights(grid, spec.alpha, slope)
    if dt is None:
        dt = stable_dt(w, dt_safety)
    _check_dt(w, dt)
    mode = _resolve_mode(w, apply_mode)
    times = time_grid(spec.horizon_T, dt)

    frames = np.empty((len(times), grid.node_count))
    frames[0] = spec.boundary(grid.nodes, np.zeros(grid.node_count))
    logger.info(f"开始求解: {spec.name}, N={grid.n_cells}, dt={dt:.3e}, 步数={len(times) - 1}, 模式={mode}")
    for m in range(len(times) - 1):
        frames[m + 1] = _advance(w, frames[m], times[m], times[m + 1] - times[m], spec, mode)
        if logger.isEnabledFor(logging.DEBUG) and (m + 1) % 1000 == 0:
            logger.debug(f"第 {m + 1} 步, t={times[m + 1]:.4f}")
    meta = {
        "alpha": spec.alpha.alpha,
        "length_l": spec.length_l,
        "horizon_T": spec.horizon_T,
        "n_cells": grid.n_cells,
        "dt": dt,
        "steps": len(times) - 1,
        "scheme": "explicit-euler",
        "slope_mode": w.slope_mode,
        "apply_mode": mode,
        "weight_build_seconds": w.build_seconds,
    }
    logger.info(f"求解完成: {spec.name}, 步数={len(times) - 1}")
    return SolutionRecord(grid, times, frames, meta)


# ==================== 参考解 ====================
def reference_dt(grid: Grid1D, kind: str, safety: float = None) -> float:
    """参考格式的稳定步长: 输运 h，热方程 h²/2"""
    safety = settings.dt_safety if safety is None else safety
    h = grid.spacing_h
    if kind == "advection":
        return safety * h
    if kind == "heat":
        return safety * 0.5 * h * h
    raise DomainError(f"未知的参考方程 {kind}")


def solve_reference(spec: ProblemSpec, grid: Grid1D, kind: str, dt: float) -> SolutionRecord:
    """
    极限方程的参考解

    - advection: u_t = u_x + f，迎风差分 (u_{i+1}-u_i)/h
    - heat: u_t = u_xx + f，中心二阶差分
    两端仍取 g，与分数阶解使用同一时间网格。
    """
    bound = reference_dt(grid, kind, 1.0)
    if dt > bound * (1.0 + 1e-12):
        raise StabilityError(f"参考格式 {kind} 的步长 {dt:.3e} 超过稳定界 {bound:.3e}", bound=bound)
    h = grid.spacing_h
    n = grid.n_cells
    x = grid.nodes
    times = time_grid(spec.horizon_T, dt)
    frames = np.empty((len(times), grid.node_count))
    frames[0] = spec.boundary(x, np.zeros(grid.node_count))
    for m in range(len(times) - 1):
        u = frames[m]
        tau = times[m + 1] - times[m]
        if kind == "advection":
            rate = (u[2:] - u[1:-1]) / h
        else:
            rate = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
        frames[m + 1, 1:n] = u[1:n] + tau * (rate + spec.source(x[1:n], np.full(n - 1, times[m])))
        frames[m + 1, [0, n]] = spec.boundary(np.array([0.0, grid.length_l]), np.full(2, times[m + 1]))
    meta = {"scheme": f"reference-{kind}", "dt": dt, "n_cells": n, "steps": len(times) - 1}
    return SolutionRecord(grid, times, frames, meta)


def solve_advection(spec: ProblemSpec, grid: Grid1D, dt: float) -> SolutionRecord:
    """α→0 极限 u_t = u_x + f 的迎风参考解"""
    return solve_reference(spec, grid, "advection", dt)


def solve_heat(spec: ProblemSpec, grid: Grid1D, dt: float) -> SolutionRecord:
    """α→1 极限 u_t = u_xx + f 的显式热方程参考解"""
    return solve_reference(spec, grid, "heat", dt)
