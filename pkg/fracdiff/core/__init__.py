#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
核心模块包
"""

__all__ = []
