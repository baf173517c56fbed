#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
fracdiff - 一维空间分数阶扩散
==============================

u_t = (D^α u)_x + f 在 (0,l)×(0,T) 上的单调显式求解器与性质探针。

模块结构:
    - core/fractional.py: Caputo 导数、通量散度、Riemann-Liouville 积分
    - core/config.py: 进程级配置与日志
    - services/problem.py: 问题定义与预设
    - services/solver.py: 权重组装、时间推进、参考解
    - services/barriers.py: 障碍函数与 Perron 包络
    - services/analysis.py: 性质探针
    - services/bench.py: 算子作用基准
    - utils/: 缓存、表达式解析、文件输出
    - main.py: 命令行入口
"""

__version__ = "1.0.1"
__version_date__ = "2026-10-19"
