#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分数阶核心模块
==============

提供分数阶扩散方程所需的基础对象与算子:
    - FracOrder / Grid1D / Field / KernelSlice: 基础类型
    - gamma_fn, power_rule, power_rule_flux: 特殊函数与幂函数解析公式
    - caputo_l1: Caputo 导数的 L1 离散
    - j_operator, k_operator, flux_divergence: (D^α u)_x 的 J + K 分解
    - rl_integral: Riemann-Liouville 分数阶积分

离散约定:
    - 节点 x_j = j·h，j = 0..N；算子只在内部节点 1..N-1 取值，边界节点置 0
    - K 的第一个核单元 [0, h] 采用二次接触模型 u(x-z)-u(x)+pz ≈ κz²，精确积分
    - 其余单元采用分段线性重构 + 二阶差分曲率修正，对二次函数精确
    - 与 x=0 相邻的单元 y ∈ [0,h] 额外带 s^α 项（s = y/h），边界附近的 y^α 行为不再被线性插值抹平
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Tuple, Union

import numpy as np
from scipy import special

from ..handlers.error_handlers import DomainError, FieldError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# 单元矩的 Gauss-Legendre 节点数
GAUSS_POINTS = 16

SLOPE_MODES = ("centered", "upwind")


# ==================== 基础类型 ====================
@dataclass(frozen=True)
class FracOrder:
    """分数阶 α ∈ (0,1) 及其常用 Γ 常数"""

    alpha: float
    gamma_1ma: float = field(init=False, repr=False)
    gamma_2ma: float = field(init=False, repr=False)
    c_alpha: float = field(init=False, repr=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (0.0 < alpha < 1.0) or not math.isfinite(alpha):
            raise DomainError(f"分数阶 alpha 必须位于开区间 (0,1)，当前为 {self.alpha}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma_1ma", gamma_fn(1.0 - alpha))
        object.__setattr__(self, "gamma_2ma", gamma_fn(2.0 - alpha))
        object.__setattr__(self, "c_alpha", alpha * (alpha + 1.0) / self.gamma_1ma)

    @property
    def inv_gamma_1ma(self) -> float:
        return 1.0 / self.gamma_1ma


def as_order(alpha: Union[float, FracOrder]) -> FracOrder:
    """接受浮点数或 FracOrder，统一返回 FracOrder"""
    return alpha if isinstance(alpha, FracOrder) else FracOrder(alpha)


@dataclass(frozen=True)
class Grid1D:
    """[0, l] 上的均匀网格"""

    length_l: float
    n_cells: int

    def __post_init__(self):
        if not (self.length_l > 0.0) or not math.isfinite(self.length_l):
            raise DomainError(f"区间长度必须为正，当前为 {self.length_l}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise DomainError(f"网格单元数必须为不小于 2 的整数，当前为 {self.n_cells}")
        object.__setattr__(self, "length_l", float(self.length_l))
        object.__setattr__(self, "n_cells", int(self.n_cells))

    @property
    def spacing_h(self) -> float:
        return self.length_l / self.n_cells

    @property
    def node_count(self) -> int:
        return self.n_cells + 1

    @cached_property
    def nodes(self) -> np.ndarray:
        # j·h 而不是 linspace，保证 x_j 与 j*h 逐位一致
        x = np.arange(self.n_cells + 1, dtype=float) * self.spacing_h
        x[-1] = self.length_l
        x.setflags(write=False)
        return x

    def index_of(self, x: float) -> int:
        """返回与 x 重合的节点下标，不在节点上时抛出 DomainError"""
        position = x / self.spacing_h
        index = int(round(position))
        if abs(position - index) > 1e-9 or not 0 <= index <= self.n_cells:
            raise DomainError(f"x={x} 不是网格节点")
        return index


@dataclass(frozen=True, eq=False)
class Field:
    """网格上的函数值（只读）"""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.node_count,):
            raise FieldError(
                f"场的长度 {values.shape} 与节点数 {self.grid.node_count} 不一致"
            )
        if not np.all(np.isfinite(values)):
            raise FieldError("场包含 NaN 或 Inf")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid1D, func: Callable[[np.ndarray], ArrayLike]) -> "Field":
        values = np.broadcast_to(np.asarray(func(grid.nodes), dtype=float), grid.nodes.shape)
        return cls(grid, values)

    @classmethod
    def zeros(cls, grid: Grid1D) -> "Field":
        return cls(grid, np.zeros(grid.node_count))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class KernelSlice:
    """K_(a,b) 的积分窗口，要求 0 ≤ a < b ≤ x"""

    a: float
    b: float
    x: float

    def __post_init__(self):
        if not (0.0 <= self.a < self.b <= self.x):
            raise DomainError(
                f"积分窗口需满足 0 ≤ a < b ≤ x，当前 a={self.a}, b={self.b}, x={self.x}"
            )


# ==================== 特殊函数 ====================
def gamma_fn(x: float) -> float:
    """
    Γ 函数（正实轴）

    Args:
        x: 正实数

    Returns:
        float: Γ(x)
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn 仅定义在正实轴上，当前参数 {x}")
    return float(special.gamma(x))


def _scalar_or_array(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def power_rule(beta: float, alpha: Union[float, FracOrder], x: ArrayLike) -> ArrayLike:
    """
    D^α x^β = Γ(β+1)/Γ(β-α+1)·x^{β-α}

    x = 0 且 β < α 时结果无界，返回 +inf。
    """
    order = as_order(alpha)
    if beta <= -1.0:
        raise DomainError(f"power_rule 要求 beta > -1，当前为 {beta}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("power_rule 要求 x ≥ 0")
    coeff = special.gamma(beta + 1.0) * special.rgamma(beta - order.alpha + 1.0)
    with np.errstate(divide="ignore"):
        value = coeff * np.power(x, beta - order.alpha)
    if coeff != 0.0 and np.any(np.isinf(value)):
        logger.debug(f"power_rule 在 x=0 处无界 (beta={beta}, alpha={order.alpha})")
    return _scalar_or_array(value)


def power_rule_flux(beta: float, alpha: Union[float, FracOrder], x: ArrayLike) -> ArrayLike:
    """(D^α x^β)_x，即 power_rule 对 x 的导数，仅在 x > 0 取值"""
    order = as_order(alpha)
    if beta <= -1.0:
        raise DomainError(f"power_rule_flux 要求 beta > -1，当前为 {beta}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("power_rule_flux 要求 x > 0")
    exponent = beta - order.alpha
    coeff = exponent * special.gamma(beta + 1.0) * special.rgamma(exponent + 1.0)
    return _scalar_or_array(coeff * np.power(x, exponent - 1.0))


# ==================== 单元矩 ====================
@lru_cache(maxsize=64)
def unit_cell_moments(power: float, count: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    单位单元 [k, k+1]（k = 1..count）上的加权矩

    返回 (A, B, Q):
        A_k = ∫_0^1 (1-t)(k+t)^power dt
        B_k = ∫_0^1 t(k+t)^power dt
        Q_k = ∫_0^1 t(t-1)(k+t)^power dt
    被积函数在 [0,1] 上解析，16 点 Gauss-Legendre 已到机器精度；权重为正，A、B 恒为正。
    """
    nodes, weights = special.roots_legendre(GAUSS_POINTS)
    t = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    k = np.arange(1, count + 1, dtype=float)[:, None]
    samples = np.power(k + t, power)
    moments = (samples @ (w * (1.0 - t)), samples @ (w * t), samples @ (w * t * (t - 1.0)))
    for m in moments:
        m.setflags(write=False)
    return moments


@lru_cache(maxsize=64)
def unit_cell_singular_moments(exponent: float, power: float, count: int) -> np.ndarray:
    """S_k = ∫_0^1 (1-t)^exponent (k+t)^power dt，k = 1..count；t = 1 处的代数奇性由 Gauss-Jacobi 吸收"""
    nodes, weights = special.roots_jacobi(GAUSS_POINTS, 0.0, exponent)
    s = 0.5 * (nodes + 1.0)
    k = np.arange(1, count + 1, dtype=float)[:, None]
    moments = 0.5 ** (exponent + 1.0) * (np.power(k + 1.0 - s, power) @ weights)
    moments.setflags(write=False)
    return moments


@lru_cache(maxsize=64)
def last_cell_weights(alpha: float, count: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    与 x=0 相邻的核单元的重构修正，第 i 行（i = 2..count+1）对应单元 k = i-1

    在 y ∈ [0,h] 上（s = y/h）用 u₀ + a·s^α + b·s 代替线性插值，a、b 由节点 0,1,2 确定；
    曲率修正 κh²(s²-s) 换成 κh²ψ(s)，ψ(s) = s² + (2/D)s^α - ((4-2^α)/D)s，D = 2-2^α。
    重构对常数、一次、二次函数精确，并能表示 y^α 型边界层。

    Returns:
        (d0, d1, d2, dq): 节点 0,1,2 权重相对线性插值的增量，以及曲率矩的增量（均未乘 c_α），
        三个节点增量之和为 0
    """
    power = -alpha - 2.0
    A, B, Q = unit_cell_moments(power, count)
    singular = unit_cell_singular_moments(alpha, power, count)
    two_a = 2.0 ** alpha
    d = 2.0 - two_a
    phi1 = (2.0 * singular - two_a * A) / d
    phi2 = (A - singular) / d
    phi0 = A + B - phi1 - phi2
    psi = A + Q + (2.0 / d) * singular - ((4.0 - two_a) / d) * A
    weights = (phi0 - B, phi1 - A, phi2, psi - Q)
    for m in weights:
        m.setflags(write=False)
    return weights


# ==================== Caputo 导数 ====================
def caputo_l1(u: Field, alpha: Union[float, FracOrder]) -> Field:
    """
    L1 格式的 Caputo 导数 D^α u

    分段线性重构 u，核 (x-y)^{-α} 在每个单元上精确积分；节点 0 取 0。
    """
    order = as_order(alpha)
    grid = u.grid
    n = grid.n_cells
    k = np.arange(n, dtype=float)
    weights = np.power(k + 1.0, 1.0 - order.alpha) - np.power(k, 1.0 - order.alpha)
    increments = np.diff(u.values)
    out = np.zeros(grid.node_count)
    out[1:] = np.convolve(weights, increments)[:n]
    out *= grid.spacing_h ** (-order.alpha) / order.gamma_2ma
    return Field(grid, out)


# ==================== J / K 分解 ====================
def j_operator(u0: float, ux: float, p: float, x: float, alpha: Union[float, FracOrder]) -> float:
    """J[u,p](x) = [α(u(0)-u(x)) + (α+1)p·x] / (x^{α+1} Γ(1-α))"""
    order = as_order(alpha)
    if not x > 0.0:
        raise DomainError(f"j_operator 要求 x > 0，当前为 {x}")
    a = order.alpha
    return (a * (u0 - ux) + (a + 1.0) * p * x) / (x ** (a + 1.0) * order.gamma_1ma)


def _curvature(values: np.ndarray, i: int, h: float) -> float:
    """u''/2 的二阶差分估计；右端点用单侧差分"""
    if i + 1 < len(values):
        return (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (2.0 * h * h)
    return (values[i] - 2.0 * values[i - 1] + values[i - 2]) / (2.0 * h * h)


def _last_cell_piece(v: np.ndarray, i: int, h: float, p: float, kappa: float,
                     z0: float, z1: float, a_exp: float) -> float:
    """单元 y ∈ [0,h] 上 z ∈ [z0,z1] 段的积分（未乘 c_α），重构见 last_cell_weights"""
    d = 2.0 - 2.0 ** a_exp
    d1, d2 = v[1] - v[0], v[2] - v[0]
    curv = kappa * h * h
    lam = (2.0 * d1 - d2) / d + curv * 2.0 / d
    mu = (d2 - 2.0 ** a_exp * d1) / d - curv * (4.0 - 2.0 ** a_exp) / d
    power = -a_exp - 2.0

    nodes, weights = special.roots_legendre(GAUSS_POINTS)
    half = 0.5 * (z1 - z0)
    z = half * nodes + 0.5 * (z1 + z0)
    s = i - z / h
    smooth = v[0] - v[i] + mu * s + curv * s * s + p * z
    total = half * float(np.dot(weights, smooth * np.power(z, power)))

    # λ s^α 项按 s 积分，dz = h ds
    s_lo, s_hi = i - z1 / h, i - z0 / h
    if s_lo <= 1e-12:
        jac_nodes, jac_weights = special.roots_jacobi(GAUSS_POINTS, 0.0, a_exp)
        s = 0.5 * s_hi * (jac_nodes + 1.0)
        singular = (0.5 * s_hi) ** (a_exp + 1.0) * float(np.dot(jac_weights, np.power(h * (i - s), power)))
    else:
        s = 0.5 * (s_hi - s_lo) * nodes + 0.5 * (s_hi + s_lo)
        singular = 0.5 * (s_hi - s_lo) * float(np.dot(weights, np.power(s, a_exp) * np.power(h * (i - s), power)))
    return total + lam * h * singular


def k_operator(u: Field, p: float, window: KernelSlice, alpha: Union[float, FracOrder]) -> float:
    """
    K_(a,b)[u,p](x) = (α(α+1)/Γ(1-α)) ∫_a^b [u(x-z)-u(x)+pz] z^{-α-2} dz

    x 必须是网格节点；[0,h] 部分使用二次接触模型精确积分，
    其余部分在每个网格单元内用 Gauss-Legendre 积分线性重构 + 曲率修正。
    """
    order = as_order(alpha)
    grid = u.grid
    h = grid.spacing_h
    i = grid.index_of(window.x)
    if i < 1:
        raise DomainError("k_operator 要求 x 为内部或右端节点")
    v = u.values
    a_exp = order.alpha
    ui = v[i]
    kappa = _curvature(v, i, h)

    # 断点: a, b 以及 (a,b) 内的所有 k·h
    first = int(math.floor(window.a / h)) + 1
    last = int(math.ceil(window.b / h))
    breaks = [window.a] + [k * h for k in range(first, last) if window.a < k * h < window.b]
    breaks.append(window.b)

    nodes, weights = special.roots_legendre(GAUSS_POINTS)
    total = 0.0
    for z0, z1 in zip(breaks[:-1], breaks[1:]):
        cell = min(int(math.floor((0.5 * (z0 + z1)) / h)), i - 1)
        if cell == 0:
            contact = (v[i - 1] - ui + p * h) / (h * h)
            total += contact * (z1 ** (1.0 - a_exp) - z0 ** (1.0 - a_exp)) / (1.0 - a_exp)
            continue
        if cell == i - 1:
            total += _last_cell_piece(v, i, h, p, kappa, z0, z1, a_exp)
            continue
        z = 0.5 * (z1 - z0) * nodes + 0.5 * (z1 + z0)
        left, right = cell * h, (cell + 1) * h
        interp = v[i - cell] + (v[i - cell - 1] - v[i - cell]) * (z - left) / h
        integrand = interp - ui + p * z + kappa * (z - left) * (z - right)
        total += 0.5 * (z1 - z0) * float(np.dot(weights, integrand * np.power(z, -a_exp - 2.0)))
    return order.c_alpha * total


def slope_differences(values: np.ndarray, slope: str) -> np.ndarray:
    """内部节点处的 p·h（中心差分或迎风差分）"""
    if slope == "centered":
        return 0.5 * (values[2:] - values[:-2])
    if slope == "upwind":
        return values[2:] - values[1:-1]
    raise DomainError(f"未知的斜率格式 {slope}，可选 {SLOPE_MODES}")


def flux_divergence(u: Field, alpha: Union[float, FracOrder], slope: str = "centered") -> Field:
    """
    (D^α u)_x = J[u, p](x) + K_(0,x)[u, p](x)，在内部节点上求值

    Args:
        u: 网格函数
        alpha: 分数阶
        slope: 节点斜率 p 的差分格式，"centered" 或 "upwind"

    Returns:
        Field: 内部节点为通量散度，两端为 0
    """
    order = as_order(alpha)
    grid = u.grid
    n = grid.n_cells
    if grid.node_count < 3:
        raise DomainError("flux_divergence 至少需要 3 个节点")
    a = order.alpha
    c = order.c_alpha
    v = u.values
    p_hat = slope_differences(v, slope)

    idx = np.arange(1, n, dtype=float)
    ui = v[1:-1]
    j_part = order.inv_gamma_1ma * (
        a * (v[0] - ui) * np.power(idx, -a - 1.0) + (a + 1.0) * p_hat * np.power(idx, -a)
    )

    A, B, Q = unit_cell_moments(-a - 2.0, max(n - 2, 1))
    curvature_weight = np.concatenate(([0.0], np.cumsum(Q)))[: n - 1]
    near = (v[:-2] - ui + p_hat) / (1.0 - a) + 0.5 * curvature_weight * (v[2:] - 2.0 * ui + v[:-2])
    slope_tail = (1.0 - np.power(idx, -a)) / a * p_hat

    tail = np.zeros(n - 1)
    for k in range(1, n - 1):
        centre = v[k + 1 : n]
        tail[k:] += A[k - 1] * (v[1 : n - k] - centre) + B[k - 1] * (v[0 : n - k - 1] - centre)

    if n > 2:
        d0, d1, d2, dq = last_cell_weights(a, n - 2)
        centre = v[2:n]
        near[1:] += (
            d0 * (v[0] - centre)
            + d1 * (v[1] - centre)
            + d2 * (v[2] - centre)
            + 0.5 * dq * (v[3:] - 2.0 * centre + v[1 : n - 1])
        )

    out = np.zeros(grid.node_count)
    out[1:-1] = grid.spacing_h ** (-a - 1.0) * (j_part + c * (near + slope_tail + tail))
    return Field(grid, out)


# ==================== Riemann-Liouville 积分 ====================
def rl_integral(g: Field, order: float) -> Field:
    """
    J^s g(x) = (1/Γ(s)) ∫_0^x g(y)(x-y)^{s-1} dy，s ∈ (0,1]

    分段线性重构 g 的乘积积分；s = 1 时退化为梯形累积积分。
    """
    if not (0.0 < order <= 1.0):
        raise DomainError(f"Riemann-Liouville 积分阶数必须位于 (0,1]，当前为 {order}")
    grid = g.grid
    n = grid.n_cells
    v = g.values
    s = float(order)

    out = np.zeros(grid.node_count)
    # 含奇点的第一个单元: ∫(1-t)t^{s-1} = 1/(s(s+1))，∫t·t^{s-1} = 1/(s+1)
    out[1:] = v[1:] / (s * (s + 1.0)) + v[:-1] / (s + 1.0)
    if n > 1:
        A, B, _ = unit_cell_moments(s - 1.0, n - 1)
        for k in range(1, n):
            out[k + 1 :] += A[k - 1] * v[1 : n + 1 - k] + B[k - 1] * v[0 : n - k]
    out *= grid.spacing_h ** s / gamma_fn(s)
    return Field(grid, out)
