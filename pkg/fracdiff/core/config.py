#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模块
============

这个模块集中管理进程级配置参数，包括:
- 日志配置
- 数值格式与步长安全系数
- 障碍函数采样参数
- 各探针的判定容差
- 输出目录

配置优先级: 命令行参数 > 配置文件 > 环境变量(FRACDIFF_前缀) > 默认值
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """进程级配置，可由 FRACDIFF_* 环境变量覆盖"""

    model_config = SettingsConfigDict(env_prefix="FRACDIFF_", extra="ignore")

    # ==================== 日志配置 ====================
    # 日志级别
    log_level: str = Field("INFO", description="日志级别")

    # 日志格式
    log_format: str = Field(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="logging 格式串",
    )

    # ==================== 数值格式配置 ====================
    # 显式欧拉步长的安全系数
    dt_safety: float = Field(0.9, gt=0.0, le=1.0)

    # 允许物化稠密权重矩阵的最大网格数（内存上限）
    dense_max_cells: int = Field(2048, ge=2)

    # CSV 浮点数的有效位数
    float_digits: int = Field(17, ge=1, le=17)

    # ==================== 障碍函数配置 ====================
    # 网格上求上确界时的放大系数
    sup_safety: float = Field(1.05, ge=1.0)

    # 锚点在空间/时间方向上的采样步长（每隔几个节点取一个）
    anchor_stride_x: int = Field(4, ge=1)
    anchor_stride_t: int = Field(4, ge=1)

    # ε 扫描比例（乘以 ‖g‖∞）
    eps_fractions: Tuple[float, ...] = (1.0, 0.1, 0.01)

    # ==================== 判定容差配置 ====================
    tol_max_principle: float = 1e-8
    tol_contraction: float = 1e-10
    tol_envelope: float = 1e-8
    tol_regularity: float = 1e-6
    tol_fast_apply: float = 1e-10

    # ==================== 输出配置 ====================
    # 默认输出目录
    output_dir: Path = Path("./output")


@lru_cache()
def get_settings() -> Settings:
    """获取全局配置（缓存单例）"""
    return Settings()


settings = get_settings()

# 日志相关常量
LOG_LEVEL = settings.log_level
LOG_FORMAT = settings.log_format


def setup_logging(level: str = None) -> None:
    """
    为 fracdiff 根日志器安装单一的流处理器（可重复调用）

    Args:
        level: 日志级别，None 时使用配置中的 LOG_LEVEL
    """
    root = logging.getLogger("fracdiff")
    root.setLevel((level or LOG_LEVEL).upper())
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)


def ensure_directories(path: Path) -> Path:
    """确保输出目录存在并返回该路径"""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path
