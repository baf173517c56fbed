#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
障碍函数服务
============

闭式障碍函数 ρ、σ，由数据确定常数的上/下解族，以及有限采样的 Perron 包络。

所有上/下解都形如
    g(锚点) ∓ (2ε + K·profile(x) + B·τ(t))
profile 为 ρʸ 或 σʸ，τ 为 |t-s| 或 t；下解取负号，上解取正号。

传入 grid 时障碍函数绑定到该网格: 侧边族的 ρ 换成离散剖面 ρ_h（W ρ_h = -1），
底边族的时间斜率按离散的 max(Wσ) 取值，离散残差因此只剩舍入误差。
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..core.config import settings
from ..core.fractional import Field, FracOrder, Grid1D, as_order, gamma_fn
from ..handlers.error_handlers import ConstraintError, DomainError
from ..utils.cache import global_cache
from .problem import ProblemSpec
from .solver import SolutionRecord, apply, get_weights

logger = logging.getLogger(__name__)

BARRIER_KINDS = (
    "lateral_xi1",
    "lateral_eta1",
    "bottom_xi2",
    "bottom_eta2",
    "regularity_lateral",
    "regularity_bottom",
)

Anchor = Tuple[float, float]

# 上确界常数的采样点数，采样间距需远小于最小的 ε
BARRIER_SAMPLES = 4097


# ==================== 闭式障碍函数 ====================
def default_c(alpha: Union[float, FracOrder], length_l: float) -> float:
    """ρ⁰ 的常数 C = 2l/(1+α)，严格大于下界 l/(1+α)"""
    return 2.0 * length_l / (1.0 + as_order(alpha).alpha)


def rho(y: str, C: float, alpha: Union[float, FracOrder], length_l: float, x):
    """
    满足 (D^α ρ)_x = -1 的障碍函数

    y = "left":  ρ⁰(x) = -x^{1+α}/Γ(2+α) + C·x^α/Γ(1+α)，要求 C > l/(1+α)
    y = "right": ρˡ(x) = (l^{1+α} - x^{1+α})/Γ(2+α)
    """
    a = as_order(alpha).alpha
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > length_l * (1.0 + 1e-12)):
        raise DomainError(f"rho 要求 0 ≤ x ≤ l={length_l}")
    if y == "left":
        if not C > length_l / (1.0 + a):
            raise ConstraintError(f"C={C} 必须大于 l/(1+α)={length_l / (1.0 + a):.6g}")
        value = -np.power(x, 1.0 + a) / gamma_fn(2.0 + a) + C * np.power(x, a) / gamma_fn(1.0 + a)
    elif y == "right":
        value = (length_l ** (1.0 + a) - np.power(x, 1.0 + a)) / gamma_fn(2.0 + a)
    else:
        raise DomainError(f"rho 的锚点必须为 left 或 right，当前为 {y}")
    return float(value) if value.ndim == 0 else value


def sigma(y: float, alpha: Union[float, FracOrder], x, length_l: Optional[float] = None):
    """
    σʸ(x) = y^{1+α}/α - ((1+α)/α)·y·x^α + x^{1+α}

    σʸ ≥ 0 且唯一零点为 y；(D^α σʸ)_x = Γ(2+α)。
    """
    a = as_order(alpha).alpha
    if not y > 0.0 or (length_l is not None and not y < length_l):
        raise DomainError(f"sigma 的锚点 y={y} 必须位于 (0, l) 内")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("sigma 要求 x ≥ 0")
    value = y ** (1.0 + a) / a - (1.0 + a) / a * y * np.power(x, a) + np.power(x, 1.0 + a)
    value = np.maximum(value, 0.0)
    return float(value) if value.ndim == 0 else value


# ==================== 离散剖面 ====================
def _side(y: float) -> str:
    return "left" if y == 0.0 else "right"


def _solve_rho(side: str, grid: Grid1D, order: FracOrder) -> np.ndarray:
    l = grid.length_l
    edge = rho(side, default_c(order, l), order, l, np.array([0.0, l]))
    dense = get_weights(grid, order).dense()
    interior = dense[1:-1, 1:-1]
    rhs = -1.0 - dense[1:-1, 0] * edge[0] - dense[1:-1, -1] * edge[1]
    factor = linalg.lu_factor(interior)
    values = linalg.lu_solve(factor, rhs)
    # 一步迭代细化
    values = values + linalg.lu_solve(factor, rhs - interior @ values)
    profile = np.concatenate(([edge[0]], values, [edge[1]]))
    profile.setflags(write=False)
    logger.debug(f"离散剖面 ρ_h({side}) 求解完成: N={grid.n_cells}, alpha={order.alpha}")
    return profile


def discrete_rho(side: str, grid: Grid1D, alpha: Union[float, FracOrder]) -> np.ndarray:
    """
    离散 ρ 剖面: 内部节点上 (W ρ_h)_i = -1，两端取闭式 ρ 的边界值

    -W 的内部块是 M 矩阵（首列权重为正），因此 ρ_h 在内部严格为正。

    Args:
        side: "left"（ρ⁰）或 "right"（ρˡ）
        grid: 网格，N 不超过 dense_max_cells
        alpha: 分数阶

    Returns:
        np.ndarray: 节点上的剖面值（只读，按网格与 α 缓存）
    """
    order = as_order(alpha)
    if side not in ("left", "right"):
        raise DomainError(f"未知的剖面一侧 {side}")
    if grid.n_cells > settings.dense_max_cells:
        raise DomainError(
            f"离散剖面需要稠密求解，N={grid.n_cells} 超过 dense_max_cells={settings.dense_max_cells}"
        )
    key = global_cache.profile_key(grid.n_cells, grid.length_l, order.alpha, side)
    return global_cache.get_or_build("profiles", key, lambda: _solve_rho(side, grid, order))


def sigma_flux_max(y: float, grid: Grid1D, alpha: Union[float, FracOrder]) -> float:
    """内部节点上 (Wσʸ)_i 的最大值，σ 的精确通量散度 Γ(2+α) 的离散对应"""
    w = get_weights(grid, alpha)
    values = apply(w, Field(grid, np.asarray(sigma(y, alpha, grid.nodes, grid.length_l)))).values
    return float(np.max(values[1:-1]))


# ==================== 上/下解族 ====================
@dataclass(frozen=True, eq=False)
class BarrierFamily:
    """
    单个锚点、单个 ε 的障碍函数

    constants 至少包含 M1, M2, N1, N2, C, c, L_g, f_sup；
    profile_coeff 与 time_coeff 为 profile(x) 与 τ(t) 的系数。
    grid 非空时族绑定到该网格，profile_values 为网格节点上的离散剖面（仅侧边族）。
    """

    kind: str
    alpha: FracOrder
    length_l: float
    constants: Dict[str, float]
    modulus: Callable
    anchor: Anchor
    eps: float
    g_anchor: float
    profile_coeff: float
    time_coeff: float
    upper: bool = False
    source: Callable = field(repr=False, default=None)
    grid: Optional[Grid1D] = None
    profile_values: Optional[np.ndarray] = field(repr=False, default=None)

    def __post_init__(self):
        if self.kind not in BARRIER_KINDS:
            raise DomainError(f"未知的障碍函数类型 {self.kind}")
        if self.profile_values is not None and (
            self.grid is None or len(self.profile_values) != self.grid.node_count
        ):
            raise DomainError("离散剖面必须与绑定网格的节点一一对应")

    @property
    def sign(self) -> float:
        """下解 -1，上解 +1"""
        return 1.0 if self.upper else -1.0

    @property
    def is_lateral(self) -> bool:
        return self.kind in ("lateral_xi1", "lateral_eta1", "regularity_lateral")

    @property
    def profile_flux(self) -> float:
        """profile 的精确通量散度: ρ 为 -1，σ 为 Γ(2+α)"""
        return -1.0 if self.is_lateral else gamma_fn(2.0 + self.alpha.alpha)

    def closed_profile(self, x):
        """闭式 ρʸ 或 σʸ"""
        y, _ = self.anchor
        if self.is_lateral:
            return rho(_side(y), self.constants["C"], self.alpha, self.length_l, x)
        return sigma(y, self.alpha, x, self.length_l)

    def profile(self, x):
        """离散剖面（节点间线性插值）或闭式剖面"""
        if self.profile_values is None:
            return self.closed_profile(x)
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > self.length_l * (1.0 + 1e-12)):
            raise DomainError(f"剖面要求 0 ≤ x ≤ l={self.length_l}")
        values = np.interp(x, self.grid.nodes, self.profile_values)
        return float(values) if values.ndim == 0 else values

    def time_part(self, t):
        t = np.asarray(t, dtype=float)
        if self.is_lateral:
            return np.abs(t - self.anchor[1])
        return t

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        offset = 2.0 * self.eps + self.profile_coeff * self.profile(x) + self.time_coeff * self.time_part(t)
        return self.g_anchor + self.sign * offset

    def on_grid(self, grid: Grid1D, times: np.ndarray) -> np.ndarray:
        """(时间, 空间) 网格上的取值"""
        x = grid.nodes
        profile = self.profile_coeff * np.asarray(self.profile(x))
        temporal = self.time_coeff * self.time_part(times)
        return self.g_anchor + self.sign * (2.0 * self.eps + profile[None, :] + temporal[:, None])

    def boundary_gap(self, spec: ProblemSpec, xs: np.ndarray, ts: np.ndarray) -> float:
        """
        抛物边界采样点上的违例量: 下解为 max(ξ - g)，上解为 max(g - η)，≤ 0 表示成立
        """
        gap = self(xs, ts) - spec.boundary(xs, ts)
        return float(np.max(gap if self.sign < 0 else -gap))

    def quadrature_defect(self, grid: Grid1D, window: Tuple[float, float] = (0.1, 0.9)) -> float:
        """窗口内 |W·闭式剖面 - 精确通量散度| 的最大值"""
        w = get_weights(grid, self.alpha)
        values = apply(w, Field(grid, np.asarray(self.closed_profile(grid.nodes))))
        mask = _window_mask(grid, window)
        return float(np.max(np.abs(values.values[mask] - self.profile_flux))) if mask.any() else 0.0

    def residual(self, grid: Grid1D, times: np.ndarray,
                 window: Tuple[float, float] = (0.0, 1.0)) -> float:
        """
        离散残差: 下解 max(Δ_t ξ - Wξ - f)，上解 max(Wη + f - Δ_t η)

        在窗口内的内部节点与全部时间步上取最大，≤ 0 表示成立。
        绑定网格的族只差舍入误差；未绑定的族还带着闭式剖面的求积误差。
        """
        if self.source is None:
            raise ConstraintError("障碍函数未绑定源项 f，无法计算残差")
        if self.grid is not None and grid != self.grid:
            raise DomainError(f"残差网格 N={grid.n_cells} 与障碍函数绑定的网格 N={self.grid.n_cells} 不一致")
        w = get_weights(grid, self.alpha)
        mask = _window_mask(grid, window)
        if not mask.any():
            return 0.0
        x = grid.nodes[mask]
        # W 作用在常数与时间部分上为 0，只剩 profile
        flux = self.sign * self.profile_coeff * apply(w, Field(grid, np.asarray(self.profile(grid.nodes)))).values[mask]
        times = np.asarray(times, dtype=float)
        tau = self.time_part(times)
        worst = -np.inf
        for m in range(len(times) - 1):
            dt = times[m + 1] - times[m]
            rate = self.sign * self.time_coeff * (tau[m + 1] - tau[m]) / dt
            res = rate - flux - self.source(x, np.full(x.shape, times[m]))
            worst = max(worst, float(np.max(-res if self.sign > 0 else res)))
        return worst


def _window_mask(grid: Grid1D, window: Tuple[float, float]) -> np.ndarray:
    x = grid.nodes
    lo, hi = window[0] * grid.length_l, window[1] * grid.length_l
    mask = (x >= lo - 1e-12) & (x <= hi + 1e-12)
    mask[0] = mask[-1] = False
    return mask


# ==================== 上确界常数 ====================
def _sup_ratio(numerator: np.ndarray, denominator: np.ndarray, keep: np.ndarray) -> float:
    keep = keep & (denominator > 0.0)
    if not keep.any():
        return 0.0
    return settings.sup_safety * float(np.max(numerator[keep] / denominator[keep]))


def _space_samples(spec: ProblemSpec) -> np.ndarray:
    return np.linspace(0.0, spec.length_l, BARRIER_SAMPLES)


def _time_samples(spec: ProblemSpec) -> np.ndarray:
    return np.linspace(0.0, spec.horizon_T, BARRIER_SAMPLES)[:-1]


def _near(values: np.ndarray, centre: float, samples: np.ndarray) -> np.ndarray:
    """锚点一个采样间距以内的邻域"""
    step = samples[1] - samples[0] if samples.size > 1 else 0.0
    return np.abs(values - centre) <= step * (1.0 + 1e-9)


def _base_constants(spec: ProblemSpec) -> Dict[str, float]:
    C = default_c(spec.alpha, spec.length_l)
    return {
        "M1": 0.0, "M2": 0.0, "N1": 0.0, "N2": 0.0,
        "C": C,
        "c": 0.0,
        "L_g": float(spec.lipschitz_Lg) if spec.lipschitz_Lg is not None else float("nan"),
        "f_sup": spec.f_sup,
    }


def _lateral_anchor(spec: ProblemSpec, anchor: Anchor) -> Anchor:
    y, s = float(anchor[0]), float(anchor[1])
    if y not in (0.0, spec.length_l) or not 0.0 <= s < spec.horizon_T:
        raise DomainError(f"锚点 ({y}, {s}) 不在侧边界 {{0, l}}×[0, T) 上")
    return y, s


def _bottom_anchor(spec: ProblemSpec, y: float) -> float:
    y = float(y)
    if not 0.0 < y < spec.length_l:
        raise DomainError(f"底边锚点 y={y} 必须位于 (0, l) 内")
    return y


def _check_eps(eps: float) -> float:
    if not eps > 0.0:
        raise DomainError(f"ε 必须为正，当前为 {eps}")
    return float(eps)


def _check_grid(spec: ProblemSpec, grid: Optional[Grid1D]) -> Optional[Grid1D]:
    if grid is not None and grid.length_l != spec.length_l:
        raise DomainError(f"网格长度 {grid.length_l} 与问题区间长度 {spec.length_l} 不一致")
    return grid


def _lateral_profile(spec: ProblemSpec, side: str, grid: Optional[Grid1D]) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """(采样点上的剖面, 节点上的离散剖面)；未绑定网格时后者为 None"""
    xs = _space_samples(spec)
    if grid is None:
        return rho(side, default_c(spec.alpha, spec.length_l), spec.alpha, spec.length_l, xs), None
    values = discrete_rho(side, grid, spec.alpha)
    return np.interp(xs, grid.nodes, values), values


def _sigma_slope(spec: ProblemSpec, y: float, grid: Optional[Grid1D]) -> float:
    """时间斜率中 N₁ 的系数: 闭式为 Γ(2+α)，绑定网格时为 max(max_i (Wσʸ)_i, 0)"""
    if grid is None:
        return gamma_fn(2.0 + spec.alpha.alpha)
    return max(sigma_flux_max(y, grid, spec.alpha), 0.0)


def _lateral_family(spec: ProblemSpec, anchor: Anchor, eps: float, upper: bool,
                    grid: Optional[Grid1D]) -> BarrierFamily:
    y, s = _lateral_anchor(spec, anchor)
    eps = _check_eps(eps)
    grid = _check_grid(spec, grid)
    constants = _base_constants(spec)
    xs = _space_samples(spec)
    ts = _time_samples(spec)
    profile, values = _lateral_profile(spec, _side(y), grid)
    constants["M1"] = _sup_ratio(
        np.maximum(spec.modulus(np.abs(xs - y)) - eps, 0.0), profile, ~_near(xs, y, xs)
    )
    gap = np.abs(ts - s)
    constants["M2"] = _sup_ratio(np.maximum(spec.modulus(gap) - eps, 0.0), gap, ~_near(ts, s, ts))
    g_anchor = float(spec.boundary(np.array(y), np.array(s)))
    return BarrierFamily(
        kind="lateral_eta1" if upper else "lateral_xi1",
        upper=upper,
        alpha=spec.alpha,
        length_l=spec.length_l,
        constants=constants,
        modulus=spec.modulus,
        anchor=(y, s),
        eps=eps,
        g_anchor=g_anchor,
        profile_coeff=constants["M1"] + constants["M2"] + spec.f_sup,
        time_coeff=constants["M2"],
        source=spec.source,
        grid=grid,
        profile_values=values,
    )


def xi1(spec: ProblemSpec, anchor: Anchor, eps: float, grid: Optional[Grid1D] = None) -> BarrierFamily:
    """侧边锚点 (y,s) 的下解 g(y,s) - 2ε - (M₁+M₂+‖f‖)ρʸ(x) - M₂|t-s|"""
    return _lateral_family(spec, anchor, eps, upper=False, grid=grid)


def eta1(spec: ProblemSpec, anchor: Anchor, eps: float, grid: Optional[Grid1D] = None) -> BarrierFamily:
    """xi1 的镜像上解"""
    return _lateral_family(spec, anchor, eps, upper=True, grid=grid)


def _bottom_family(spec: ProblemSpec, y: float, eps: float, upper: bool,
                   grid: Optional[Grid1D]) -> BarrierFamily:
    y = _bottom_anchor(spec, y)
    eps = _check_eps(eps)
    grid = _check_grid(spec, grid)
    constants = _base_constants(spec)
    xs = _space_samples(spec)
    ts = _time_samples(spec)
    profile = sigma(y, spec.alpha, xs, spec.length_l)
    constants["N1"] = _sup_ratio(
        np.maximum(spec.modulus(np.abs(xs - y)) - eps, 0.0), profile, ~_near(xs, y, xs)
    )
    constants["N2"] = _sup_ratio(np.maximum(spec.modulus(ts) - eps, 0.0), ts, ts > 0.0)
    # -N₁σ 的通量散度为 -N₁·(σ 的通量)，时间斜率必须吸收这一项
    constants["sigma_flux"] = _sigma_slope(spec, y, grid)
    slope = constants["N2"] + constants["N1"] * constants["sigma_flux"] + spec.f_sup
    return BarrierFamily(
        kind="bottom_eta2" if upper else "bottom_xi2",
        upper=upper,
        alpha=spec.alpha,
        length_l=spec.length_l,
        constants=constants,
        modulus=spec.modulus,
        anchor=(y, 0.0),
        eps=eps,
        g_anchor=float(spec.boundary(np.array(y), np.array(0.0))),
        profile_coeff=constants["N1"],
        time_coeff=slope,
        source=spec.source,
        grid=grid,
    )


def xi2(spec: ProblemSpec, y: float, eps: float, grid: Optional[Grid1D] = None) -> BarrierFamily:
    """底边锚点 y 的下解 g(y,0) - 2ε - N₁σʸ(x) - (N₂+N₁Γ(2+α)+‖f‖)t；绑定网格时 Γ(2+α) 换成 max(Wσʸ)"""
    return _bottom_family(spec, y, eps, upper=False, grid=grid)


def eta2(spec: ProblemSpec, y: float, eps: float, grid: Optional[Grid1D] = None) -> BarrierFamily:
    """xi2 的镜像上解"""
    return _bottom_family(spec, y, eps, upper=True, grid=grid)


# ==================== 正则性障碍函数 ====================
def regularity_constants(spec: ProblemSpec) -> Dict[str, float]:
    """
    侧边正则性常数

    c₀ = ρ⁰(l)/l，c_l = ρˡ(0)/l
    L₁ = ((1+1/c₀)L_g + ‖f‖)·C/Γ(1+α)
    L₂ = ((1+1/c_l)L_g + ‖f‖)·(1+α)l^α/Γ(2+α)
    """
    lg = spec.require_lipschitz()
    a = spec.alpha.alpha
    l = spec.length_l
    C = default_c(a, l)
    c_left = rho("left", C, a, l, l) / l
    c_right = rho("right", C, a, l, 0.0) / l
    k_left = (1.0 + 1.0 / c_left) * lg + spec.f_sup
    k_right = (1.0 + 1.0 / c_right) * lg + spec.f_sup
    return {
        "C": C,
        "c_left": c_left,
        "c_right": c_right,
        "K_left": k_left,
        "K_right": k_right,
        "L1": k_left * C / gamma_fn(1.0 + a),
        "L2": k_right * (1.0 + a) * l ** a / gamma_fn(2.0 + a),
    }


def discrete_slope_floor(values: np.ndarray, grid: Grid1D, y: float) -> float:
    """min_{x≠y} ρ_h(x)/|x-y|，节点间线性插值时下确界在节点上取到"""
    x = grid.nodes
    keep = np.abs(x - y) > 0.5 * grid.spacing_h
    return float(np.min(values[keep] / np.abs(x[keep] - y)))


def regularity_barrier_lateral(spec: ProblemSpec, anchor: Anchor, upper: bool = False,
                               grid: Optional[Grid1D] = None) -> BarrierFamily:
    """
    ξ^{y,s}(x,t) = g(y,s) - ((1+c⁻¹)L_g + ‖f‖)ρʸ(x) - L_g|t-s|

    upper=True 时返回镜像上解。constants 中附带 L1 与 L2。
    绑定网格时 ρʸ 换成 ρ_h，c 换成 min_{x≠y} ρ_h(x)/|x-y|。
    """
    lg = spec.require_lipschitz()
    y, s = _lateral_anchor(spec, anchor)
    grid = _check_grid(spec, grid)
    reg = regularity_constants(spec)
    constants = _base_constants(spec)
    constants.update(reg)
    left = y == 0.0
    values = None
    if grid is None:
        constants["c"] = reg["c_left"] if left else reg["c_right"]
        coeff = reg["K_left"] if left else reg["K_right"]
    else:
        values = discrete_rho(_side(y), grid, spec.alpha)
        constants["c"] = discrete_slope_floor(values, grid, y)
        coeff = (1.0 + 1.0 / constants["c"]) * lg + spec.f_sup
    return BarrierFamily(
        kind="regularity_lateral",
        upper=upper,
        alpha=spec.alpha,
        length_l=spec.length_l,
        constants=constants,
        modulus=spec.modulus,
        anchor=(y, s),
        eps=0.0,
        g_anchor=float(spec.boundary(np.array(y), np.array(s))),
        profile_coeff=coeff,
        time_coeff=constants["L_g"],
        source=spec.source,
        grid=grid,
        profile_values=values,
    )


def regularity_barrier_bottom(spec: ProblemSpec, y: float, eps: float, upper: bool = False,
                              grid: Optional[Grid1D] = None) -> BarrierFamily:
    """
    时间正则性的底边障碍函数: N₂ = L_g，ω(r) = L_g·r

    g(y,0) ∓ (2ε + N₁σʸ(x) + (L_g + N₂ + N₁Γ(2+α) + ‖f‖)t)，绑定网格时 Γ(2+α) 换成 max(Wσʸ)
    """
    lg = spec.require_lipschitz()
    y = _bottom_anchor(spec, y)
    eps = _check_eps(eps)
    grid = _check_grid(spec, grid)
    constants = _base_constants(spec)
    xs = _space_samples(spec)
    profile = sigma(y, spec.alpha, xs, spec.length_l)
    constants["N1"] = _sup_ratio(np.maximum(lg * np.abs(xs - y) - eps, 0.0), profile, ~_near(xs, y, xs))
    constants["N2"] = lg
    constants["sigma_flux"] = _sigma_slope(spec, y, grid)
    slope = lg + constants["N2"] + constants["N1"] * constants["sigma_flux"] + spec.f_sup
    return BarrierFamily(
        kind="regularity_bottom",
        upper=upper,
        alpha=spec.alpha,
        length_l=spec.length_l,
        constants=constants,
        modulus=spec.modulus,
        anchor=(y, 0.0),
        eps=eps,
        g_anchor=float(spec.boundary(np.array(y), np.array(0.0))),
        profile_coeff=constants["N1"],
        time_coeff=slope,
        source=spec.source,
        grid=grid,
    )


# ==================== 包络 ====================
def _pick(values: np.ndarray, stride: int, limit: Optional[int]) -> np.ndarray:
    picked = values[::stride]
    if limit is not None and picked.size > limit:
        picked = picked[np.unique(np.linspace(0, picked.size - 1, limit).round().astype(int))]
    return picked


def envelope_anchors(spec: ProblemSpec, grid: Grid1D, times: np.ndarray,
                     n_samples: Optional[int] = None) -> Tuple[list, np.ndarray]:
    """
    包络的锚点与 ε 序列

    侧边 s 取每隔 anchor_stride_t 个时间节点（不含 T），底边 y 取每隔 anchor_stride_x 个内部节点。
    """
    if n_samples is not None and n_samples < 1:
        raise DomainError("n_samples 至少为 1")
    s_values = _pick(np.asarray(times[:-1], dtype=float), settings.anchor_stride_t, n_samples)
    y_values = _pick(grid.nodes[1:-1], settings.anchor_stride_x, n_samples)
    lateral = [(side, float(s)) for side in (0.0, spec.length_l) for s in s_values]
    scale = spec.g_sup if spec.g_sup > 0.0 else 1.0
    eps_values = np.array(settings.eps_fractions, dtype=float) * scale
    return lateral + [float(y) for y in y_values], eps_values


def barrier_envelope(spec: ProblemSpec, grid: Grid1D, times: Sequence[float],
                     n_samples: Optional[int] = None) -> Tuple[SolutionRecord, SolutionRecord]:
    """
    有限采样的 Perron 包络

    lower = 各 ξ₁, ξ₂ 的逐点最大值，upper = 各 η₁, η₂ 的逐点最小值。
    N ≤ dense_max_cells 时各族绑定到 grid，否则退回闭式剖面。

    Returns:
        (lower, upper): 与解同一网格与时间层的 SolutionRecord
    """
    times = np.asarray(times, dtype=float)
    anchors, eps_values = envelope_anchors(spec, grid, times, n_samples)
    bound = grid if grid.n_cells <= settings.dense_max_cells else None
    if bound is None:
        logger.warning(f"N={grid.n_cells} 超过 dense_max_cells，包络使用闭式剖面")
    lower = np.full((len(times), grid.node_count), -np.inf)
    upper = np.full((len(times), grid.node_count), np.inf)
    count = 0
    # 固定的锚点顺序，max/min 归约与顺序无关
    for anchor in anchors:
        for eps in eps_values:
            if isinstance(anchor, tuple):
                sub, sup = xi1(spec, anchor, eps, grid=bound), eta1(spec, anchor, eps, grid=bound)
            else:
                sub, sup = xi2(spec, anchor, eps, grid=bound), eta2(spec, anchor, eps, grid=bound)
            np.maximum(lower, sub.on_grid(grid, times), out=lower)
            np.minimum(upper, sup.on_grid(grid, times), out=upper)
            count += 2
    logger.info(f"包络构建完成: {count} 个障碍函数, ε ∈ {list(np.round(eps_values, 6))}")
    meta = {
        "scheme": "barrier-envelope",
        "barriers": count,
        "eps_min": float(eps_values.min()),
        "discrete_profiles": bound is not None,
    }
    return SolutionRecord(grid, times, lower, dict(meta)), SolutionRecord(grid, times, upper, dict(meta))
