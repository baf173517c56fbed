#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
数据模型包
"""

from .schemas import BenchRow, ProbeReport, ProbeRow, ProblemParams, RunConfig

__all__ = ["BenchRow", "ProbeReport", "ProbeRow", "ProblemParams", "RunConfig"]
