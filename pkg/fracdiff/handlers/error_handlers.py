#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常处理器模块
==============

定义库内统一的异常层级，以及命令行退出码映射:
    - 0: 成功
    - 1: 未预期的内部错误
    - 2: 配置错误
    - 3: 数值拒绝（稳定性/单调性）
    - 4: 探针失败（含基准自检的快速/朴素作用不一致）
"""

import logging
import uuid
from datetime import datetime

logger = logging.getLogger(__name__)


# ==================== 退出码 ====================
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PROBE = 4


def get_error_id() -> str:
    """生成唯一的错误ID"""
    timestamp = datetime.now().strftime("%Y%m%d%H%M%S")
    return f"{timestamp}-{str(uuid.uuid4())[:4]}"


# ==================== 异常层级 ====================
class FracDiffError(Exception):
    """所有库内异常的基类"""

    exit_code = EXIT_INTERNAL

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
        self.error_id = get_error_id()


class DomainError(FracDiffError, ValueError):
    """参数超出运算定义域"""

    exit_code = EXIT_CONFIG


class FieldError(DomainError):
    """网格函数长度不符或含非有限值"""


class ConstraintError(FracDiffError, ValueError):
    """障碍函数约束不满足（C 过小、缺少 L_g 等）"""

    exit_code = EXIT_CONFIG


class ConfigError(FracDiffError):
    """配置文件或表达式解析失败"""

    exit_code = EXIT_CONFIG

    def __init__(self, message: str, line: int = None, field: str = None):
        location = []
        if line is not None:
            location.append(f"第{line}行")
        if field:
            location.append(f"字段 {field}")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class StabilityError(FracDiffError):
    """时间步长超出稳定界，或算子退化"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, bound: float = None):
        super().__init__(message)
        self.bound = bound


class MonotonicityError(FracDiffError):
    """权重矩阵单调性认证失败"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message: str, row: int = None, col: int = None):
        super().__init__(message)
        self.row = row
        self.col = col


class ProbeFailure(FracDiffError):
    """至少一个判定型探针未通过"""

    exit_code = EXIT_PROBE

    def __init__(self, message: str, failed: list = None):
        super().__init__(message)
        self.failed = list(failed or [])


class ApplyMismatch(FracDiffError):
    """快速作用与朴素作用的结果不一致（基准自检失败）"""

    exit_code = EXIT_PROBE

    def __init__(self, message: str, n_cells: int = None):
        super().__init__(message)
        self.n_cells = n_cells


# ==================== 统一处理 ====================
def handle_error(exc: BaseException) -> int:
    """
    记录异常并返回对应的退出码

    Args:
        exc: 捕获到的异常

    Returns:
        int: 进程退出码
    """
    if isinstance(exc, FracDiffError):
        logger.error(f"[ERROR] {exc.error_id} {type(exc).__name__}: {exc.message}")
        return exc.exit_code

    error_id = get_error_id()
    logger.exception(f"[ERROR] {error_id} 未预期的异常: {exc}")
    return EXIT_INTERNAL
