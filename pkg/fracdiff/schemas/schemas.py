#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Pydantic模型定义
================

定义运行配置、探针报告与基准测试结果的数据模型
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.config import settings

PRESET_NAMES = ("zero", "constant-force", "lipschitz-hat", "smooth-sine", "parabola")

PROBE_NAMES = (
    "max_principle",
    "contraction",
    "comparison",
    "weak_max_principle",
    "alpha_limit",
    "rl_limit",
    "regularity",
    "envelope",
    "data_continuity",
    "manufactured",
    "self_convergence",
)


# ==================== 问题参数模型 ====================
class ProblemParams(BaseModel):
    """问题参数（α, l, T, 源项与边界数据）"""
    alpha: float = Field(0.5, gt=0.0, lt=1.0, description="分数阶 α ∈ (0,1)")
    length: float = Field(1.0, gt=0.0, description="区间长度 l")
    horizon: float = Field(0.25, gt=0.0, description="时间终点 T")
    preset: Optional[str] = Field(None, description="预设问题名")
    source: Optional[str] = Field(None, description="源项 f(x,t) 表达式")
    boundary: Optional[str] = Field(None, description="抛物边界数据 g(x,t) 表达式")
    lipschitz: Optional[float] = Field(None, ge=0.0, description="g 的 Lipschitz 常数 L_g")

    @field_validator("preset")
    @classmethod
    def check_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in PRESET_NAMES:
            raise ValueError(f"未知的预设 {value}，可选: {', '.join(PRESET_NAMES)}")
        return value

    @model_validator(mode="after")
    def check_data(self) -> "ProblemParams":
        if self.preset is None and self.boundary is None and self.source is None:
            self.preset = "zero"
        return self


# ==================== 运行配置模型 ====================
class RunConfig(BaseModel):
    """一次 solve / probe / bench 运行的完整配置"""
    problem: ProblemParams = Field(default_factory=ProblemParams)
    n_cells: int = Field(128, ge=2, description="空间网格单元数 N")
    dt_safety: float = Field(settings.dt_safety, gt=0.0, le=1.0, description="步长安全系数")
    apply_mode: Literal["naive", "fast", "auto"] = "auto"
    probes: List[str] = Field(default_factory=lambda: ["max_principle"])
    alphas_low: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05])
    alphas_high: List[float] = Field(default_factory=lambda: [0.8, 0.9, 0.95])
    bench_sizes: List[int] = Field(default_factory=lambda: [1024, 4096, 16384])
    bench_repeats: int = Field(5, ge=1)
    output_dir: Path = settings.output_dir
    seed: int = 0

    @field_validator("probes")
    @classmethod
    def check_probes(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in PROBE_NAMES]
        if unknown:
            raise ValueError(f"未知的探针 {', '.join(unknown)}")
        return value

    @field_validator("alphas_low", "alphas_high")
    @classmethod
    def check_alphas(cls, value: List[float]) -> List[float]:
        if not value or any(not 0.0 < a < 1.0 for a in value):
            raise ValueError("α 扫描序列必须非空且位于 (0,1)")
        return value


# 配置文件中的点号键 -> RunConfig 字段路径
CONFIG_KEYS: Dict[str, tuple] = {
    "problem.alpha": ("problem", "alpha"),
    "problem.length": ("problem", "length"),
    "problem.horizon": ("problem", "horizon"),
    "problem.preset": ("problem", "preset"),
    "problem.source": ("problem", "source"),
    "problem.boundary": ("problem", "boundary"),
    "problem.lipschitz": ("problem", "lipschitz"),
    "grid.n_cells": ("n_cells",),
    "solver.dt_safety": ("dt_safety",),
    "solver.apply_mode": ("apply_mode",),
    "probes.names": ("probes",),
    "probes.alphas_low": ("alphas_low",),
    "probes.alphas_high": ("alphas_high",),
    "bench.sizes": ("bench_sizes",),
    "bench.repeats": ("bench_repeats",),
    "output.dir": ("output_dir",),
    "run.seed": ("seed",),
}

# 以逗号分隔的列表型键
LIST_KEYS = {"probes.names", "probes.alphas_low", "probes.alphas_high", "bench.sizes"}


# ==================== 探针报告模型 ====================
class ProbeRow(BaseModel):
    """探针报告中的一行: 量、数值、界、是否通过"""
    quantity: str
    value: float
    bound: Optional[float] = None
    passed: Optional[bool] = None  # None 表示仅供参考


class ProbeReport(BaseModel):
    """探针报告，passed 当且仅当所有带界的行都通过"""
    name: str
    rows: List[ProbeRow] = Field(default_factory=list)
    passed: bool = True
    tolerance: float = 0.0
    skipped: bool = False
    notes: List[str] = Field(default_factory=list)
    artifacts: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def derive_passed(self) -> "ProbeReport":
        verdicts = [row.passed for row in self.rows if row.passed is not None]
        self.passed = all(verdicts)
        return self

    @property
    def quantities(self) -> Dict[str, float]:
        return {row.quantity: row.value for row in self.rows}

    def value(self, quantity: str) -> float:
        return self.quantities[quantity]


# ==================== 基准测试模型 ====================
class BenchRow(BaseModel):
    """bench.csv 的一行"""
    n: int
    mode: Literal["naive", "fast"]
    median_ns: int
    checksum: float
