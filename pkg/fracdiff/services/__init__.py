#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
服务模块
"""

from .analysis import run_probe, run_probes
from .barriers import barrier_envelope, eta1, eta2, regularity_barrier_lateral, rho, sigma, xi1, xi2
from .bench import run_bench
from .problem import ProblemSpec, build_problem, preset
from .solver import (
    OperatorWeights,
    SolutionRecord,
    apply_fast,
    apply_naive,
    build_weights,
    solve,
    stable_dt,
    step,
)

__all__ = [
    "OperatorWeights",
    "ProblemSpec",
    "SolutionRecord",
    "apply_fast",
    "apply_naive",
    "barrier_envelope",
    "build_problem",
    "build_weights",
    "eta1",
    "eta2",
    "preset",
    "regularity_barrier_lateral",
    "rho",
    "run_bench",
    "run_probe",
    "run_probes",
    "sigma",
    "solve",
    "stable_dt",
    "step",
    "xi1",
    "xi2",
]
