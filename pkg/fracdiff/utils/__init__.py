#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具模块
"""

from .cache import global_cache
from .expression import compile_expression

__all__ = ["compile_expression", "global_cache"]
