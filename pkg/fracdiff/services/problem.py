#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
问题定义服务
============

ProblemSpec 把 α、区间、时间终点、源项 f 与抛物边界数据 g 绑定在一起，
并提供预设问题与从配置构建问题的入口。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np

from ..core.fractional import FracOrder, Grid1D, as_order
from ..handlers.error_handlers import ConfigError, ConstraintError
from ..schemas.schemas import ProblemParams
from ..utils.expression import compile_expression

logger = logging.getLogger(__name__)

SpaceTimeFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

# 估计上确界/Lipschitz 常数时每个方向的采样点数
SAMPLE_POINTS = 257


def _vectorize(func: SpaceTimeFunction) -> SpaceTimeFunction:
    def wrapped(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(func(x, t), dtype=float), np.broadcast(x, t).shape)

    wrapped.__name__ = getattr(func, "__name__", "wrapped")
    return wrapped


def _zero(x, t):
    return 0.0 * x + 0.0 * t


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    u_t = (D^α u)_x + f 在 (0,l)×(0,T) 上，u = g 在抛物边界上

    Args:
        alpha: 分数阶
        length_l: 区间长度 l
        horizon_T: 时间终点 T
        source: f(x, t)，需向量化
        boundary: g(x, t)，只在 t = 0 或 x ∈ {0, l} 上读取
        lipschitz_Lg: g 的 Lipschitz 常数（可选）
    """

    alpha: FracOrder
    length_l: float
    horizon_T: float
    source: SpaceTimeFunction = _zero
    boundary: SpaceTimeFunction = _zero
    lipschitz_Lg: Optional[float] = None
    name: str = "custom"
    f_sup: float = field(init=False)
    g_sup: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_order(self.alpha))
        if not self.length_l > 0.0 or not self.horizon_T > 0.0:
            raise ConstraintError("区间长度与时间终点必须为正")
        object.__setattr__(self, "source", _vectorize(self.source))
        object.__setattr__(self, "boundary", _vectorize(self.boundary))
        x, t = self._interior_samples()
        f_values = self.source(x, t)
        if not np.all(np.isfinite(f_values)):
            raise ConstraintError("源项 f 在采样点上不有限")
        object.__setattr__(self, "f_sup", float(np.max(np.abs(f_values))))
        bx, bt = self.parabolic_samples()
        g_values = self.boundary(bx, bt)
        if not np.all(np.isfinite(g_values)):
            raise ConstraintError("边界数据 g 在采样点上不有限")
        object.__setattr__(self, "g_sup", float(np.max(np.abs(g_values))))

    # ---------- 采样 ----------
    def _interior_samples(self):
        x = np.linspace(0.0, self.length_l, SAMPLE_POINTS)
        t = np.linspace(0.0, self.horizon_T, SAMPLE_POINTS)
        return np.meshgrid(x, t, indexing="ij")

    def parabolic_samples(self, count: int = SAMPLE_POINTS):
        """抛物边界上的采样点: 底边 t=0 与两条侧边 x=0, x=l"""
        x = np.linspace(0.0, self.length_l, count)
        t = np.linspace(0.0, self.horizon_T, count)
        xs = np.concatenate((x, np.zeros(count), np.full(count, self.length_l)))
        ts = np.concatenate((np.zeros(count), t, t))
        return xs, ts

    def random_parabolic_points(self, rng: np.random.Generator, count: int):
        """在抛物边界上均匀随机取点（按边长比例分配）"""
        l, T = self.length_l, self.horizon_T
        side = rng.choice(3, size=count, p=np.array([l, T, T]) / (l + 2.0 * T))
        u = rng.random(count)
        xs = np.where(side == 0, u * l, np.where(side == 1, 0.0, l))
        ts = np.where(side == 0, 0.0, u * T)
        return xs, ts

    # ---------- 常数 ----------
    def modulus(self, r):
        """g 的连续模 ω(r)；有 L_g 时为 L_g·r，否则由抛物边界采样估计"""
        r = np.asarray(r, dtype=float)
        if self.lipschitz_Lg is not None:
            return self.lipschitz_Lg * r
        return self.estimated_lipschitz() * r

    def estimated_lipschitz(self) -> float:
        """在抛物边界相邻采样点间估计 g 的 Lipschitz 常数"""
        count = SAMPLE_POINTS
        x = np.linspace(0.0, self.length_l, count)
        t = np.linspace(0.0, self.horizon_T, count)
        slopes = [np.max(np.abs(np.diff(self.boundary(x, 0.0 * x)))) / (x[1] - x[0])]
        for side in (0.0, self.length_l):
            values = self.boundary(np.full(count, side), t)
            slopes.append(np.max(np.abs(np.diff(values))) / (t[1] - t[0]))
        return float(max(slopes))

    def require_lipschitz(self) -> float:
        if self.lipschitz_Lg is None:
            raise ConstraintError(f"问题 {self.name} 未给出 g 的 Lipschitz 常数 L_g")
        return float(self.lipschitz_Lg)

    def check_lipschitz(self, rng: np.random.Generator, pairs: int = 200) -> float:
        """
        在抛物边界随机点对上检查 |g(p)-g(q)| ≤ L_g·dist(p,q)，返回最大比值
        """
        lg = self.require_lipschitz()
        xp, tp = self.random_parabolic_points(rng, pairs)
        xq, tq = self.random_parabolic_points(rng, pairs)
        dist = np.hypot(xp - xq, tp - tq)
        mask = dist > 0.0
        ratio = np.abs(self.boundary(xp, tp) - self.boundary(xq, tq))[mask] / dist[mask]
        worst = float(np.max(ratio)) if ratio.size else 0.0
        if worst > lg * (1.0 + 1e-9):
            raise ConstraintError(f"g 的采样 Lipschitz 比值 {worst:.6g} 超过 L_g={lg}")
        return worst

    def shifted(self, source_shift: float = 0.0, boundary_shift: float = 0.0,
                name: Optional[str] = None) -> "ProblemSpec":
        """返回 f + source_shift, g + boundary_shift 的新问题"""
        f, g = self.source, self.boundary
        return replace(
            self,
            source=lambda x, t: f(x, t) + source_shift,
            boundary=lambda x, t: g(x, t) + boundary_shift,
            name=name or f"{self.name}+shift",
        )

    def with_alpha(self, alpha: Union[float, FracOrder]) -> "ProblemSpec":
        return replace(self, alpha=as_order(alpha))

    def grid(self, n_cells: int) -> Grid1D:
        return Grid1D(self.length_l, n_cells)


# ==================== 预设问题 ====================
def preset(name: str, alpha: Union[float, FracOrder] = 0.5, length_l: float = 1.0,
           horizon_T: float = 0.25) -> ProblemSpec:
    """
    预设问题

    - zero: f = 0, g = 0
    - constant-force: f = 1, g = 0
    - lipschitz-hat: g(x,0) 为以 l/2 为顶点、高 l/2 的帽函数，侧边 g = 0，f = 0，L_g = 1
    - smooth-sine: g = sin(πx/l)，f = 0
    - parabola: g = -(x-l/2)²，f = 0
    """
    l = float(length_l)
    if name == "zero":
        return ProblemSpec(alpha, l, horizon_T, lipschitz_Lg=0.0, name=name)
    if name == "constant-force":
        return ProblemSpec(alpha, l, horizon_T, source=lambda x, t: 1.0 + 0.0 * x,
                           lipschitz_Lg=0.0, name=name)
    if name == "lipschitz-hat":
        def hat(x, t):
            return np.where(t > 0.0, 0.0, np.maximum(0.0, 0.5 * l - np.abs(x - 0.5 * l)))
        return ProblemSpec(alpha, l, horizon_T, boundary=hat, lipschitz_Lg=1.0, name=name)
    if name == "smooth-sine":
        return ProblemSpec(alpha, l, horizon_T,
                           boundary=lambda x, t: np.sin(math.pi * x / l) + 0.0 * t,
                           lipschitz_Lg=math.pi / l, name=name)
    if name == "parabola":
        return ProblemSpec(alpha, l, horizon_T,
                           boundary=lambda x, t: -(x - 0.5 * l) ** 2 + 0.0 * t,
                           lipschitz_Lg=l, name=name)
    raise ConfigError(f"未知的预设 {name}", field="problem.preset")


def build_problem(params: ProblemParams) -> ProblemSpec:
    """从配置参数构建 ProblemSpec；内联表达式覆盖预设中的对应部分"""
    base = preset(params.preset or "zero", params.alpha, params.length, params.horizon)
    constants = {"l": params.length, "T": params.horizon}
    changes = {}
    if params.source is not None:
        changes["source"] = compile_expression(params.source, constants)
    if params.boundary is not None:
        changes["boundary"] = compile_expression(params.boundary, constants)
        changes["lipschitz_Lg"] = params.lipschitz
    elif params.lipschitz is not None:
        changes["lipschitz_Lg"] = params.lipschitz
    if changes:
        changes["name"] = "custom" if params.preset is None else f"{params.preset}*"
        base = replace(base, **changes)
    logger.info(f"问题: {base.name}, alpha={base.alpha.alpha}, l={base.length_l}, T={base.horizon_T}")
    return base
