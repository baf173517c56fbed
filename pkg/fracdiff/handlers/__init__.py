#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常处理器模块
"""

from .error_handlers import (
    ConfigError,
    ConstraintError,
    DomainError,
    FieldError,
    FracDiffError,
    MonotonicityError,
    ProbeFailure,
    StabilityError,
    handle_error,
)

__all__ = [
    "ConfigError",
    "ConstraintError",
    "DomainError",
    "FieldError",
    "FracDiffError",
    "MonotonicityError",
    "ProbeFailure",
    "StabilityError",
    "handle_error",
]
