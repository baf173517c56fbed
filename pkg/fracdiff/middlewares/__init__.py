#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
中间件模块
"""

from .logging import LoggingMiddleware

__all__ = ["LoggingMiddleware"]
