#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分析探针测试
"""

import numpy as np
import pytest

from fracdiff.core.fractional import Field, Grid1D
from fracdiff.handlers.error_handlers import ConstraintError, DomainError
from fracdiff.schemas.schemas import ProbeReport, ProbeRow, RunConfig
from fracdiff.services.analysis import (
    alpha_limit_probe,
    comparison_probe,
    contraction_probe,
    data_continuity_probe,
    envelope_probe,
    manufactured_problem,
    manufactured_probe,
    max_principle_probe,
    regularity_probe,
    rl_limit_probe,
    run_probe,
    run_probes,
    self_convergence_probe,
    weak_max_principle_probe,
)
from fracdiff.services.barriers import barrier_envelope, sigma
from fracdiff.services.problem import ProblemSpec, preset
from fracdiff.services.solver import SolutionRecord, solve


# ==================== 报告模型 ====================
def test_report_passed_is_derived():
    report = ProbeReport(name="x", rows=[
        ProbeRow(quantity="a", value=1.0, bound=2.0, passed=True),
        ProbeRow(quantity="b", value=3.0),
    ])
    assert report.passed
    failing = ProbeReport(name="x", passed=True, rows=[ProbeRow(quantity="a", value=1.0, passed=False)])
    assert not failing.passed
    assert failing.value("a") == 1.0


# ==================== 极大值原理 ====================
def test_max_principle_random_fields(rng, grid128):
    x = grid128.nodes
    for _ in range(100):
        centre = rng.uniform(0.3, 0.7)
        noise = 1e-3 * rng.uniform(-1.0, 1.0, grid128.node_count)
        u = Field(grid128, -(x - centre) ** 2 + noise)
        report = max_principle_probe(u, rng.choice([0.25, 0.5, 0.75]))
        assert not report.skipped
        assert report.passed
        assert report.value("flux_divergence_at_max") <= 1e-8


def test_max_principle_examples(grid128):
    parabola = Field.from_function(grid128, lambda x: -(x - 0.5) ** 2)
    assert max_principle_probe(parabola, 0.5).passed
    constant = Field(grid128, np.full(grid128.node_count, 2.0))
    report = max_principle_probe(constant, 0.5)
    assert report.passed and report.value("flux_divergence_at_max") == 0.0
    negated = Field(grid128, -sigma(0.5, 0.5, grid128.nodes, 1.0))
    assert max_principle_probe(negated, 0.5).value("argmax_x") == pytest.approx(0.5)


def test_max_principle_boundary_max_is_skipped(grid128):
    report = max_principle_probe(Field.from_function(grid128, lambda x: x), 0.5)
    assert report.skipped
    assert report.passed


# ==================== 比较与压缩 ====================
def test_contraction_random_pairs(rng):
    names = ["smooth-sine", "lipschitz-hat", "parabola", "constant-force"]
    for _ in range(10):
        spec1 = preset(str(rng.choice(names)), 0.5, 1.0, 0.25)
        spec2 = spec1.shifted(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5))
        report = contraction_probe(spec1, spec2, spec1.grid(128))
        assert report.passed, report.rows


def test_contraction_examples(sine_spec):
    grid = sine_spec.grid(64)
    same = contraction_probe(sine_spec, sine_spec, grid)
    assert same.passed and same.value("sup_positive_gap") == 0.0
    forced = contraction_probe(sine_spec.shifted(1.0, 0.0), sine_spec, grid)
    assert forced.passed
    assert forced.value("sup_positive_gap") <= sine_spec.horizon_T + 1e-10
    lifted = contraction_probe(sine_spec.shifted(0.0, 0.3), sine_spec, grid)
    assert lifted.passed
    assert lifted.value("sup_positive_gap") == pytest.approx(0.3)


def test_contraction_requires_shared_parameters(sine_spec):
    with pytest.raises(DomainError):
        contraction_probe(sine_spec, sine_spec.with_alpha(0.3), sine_spec.grid(16))


def test_comparison_ordered_data(hat_spec):
    lower = hat_spec.shifted(-0.5, -0.25)
    report = comparison_probe(hat_spec, lower, hat_spec.grid(128))
    assert report.passed
    assert report.value("min_solution_gap") >= 0.0


def test_comparison_rejects_unordered_data(hat_spec):
    with pytest.raises(ConstraintError):
        comparison_probe(hat_spec, hat_spec.shifted(0.1, 0.0), hat_spec.grid(16))


def test_weak_max_principle(sine_spec):
    grid = sine_spec.grid(64)
    cooled = weak_max_principle_probe(sine_spec.shifted(-1.0, 0.0), grid)
    assert cooled.passed
    assert cooled.value("sup_positive_part") == pytest.approx(1.0, abs=1e-10)
    heated = weak_max_principle_probe(preset("constant-force", 0.5).shifted(0.0, -0.2), grid)
    assert heated.passed
    assert heated.value("sup_negative_part") == pytest.approx(0.2, abs=1e-10)


def test_weak_max_principle_skips_sign_changing_source():
    spec = ProblemSpec(0.5, 1.0, 0.1, source=lambda x, t: x - 0.5, lipschitz_Lg=0.0)
    report = weak_max_principle_probe(spec, spec.grid(16))
    assert report.skipped


# ==================== α 极限 ====================
@pytest.mark.parametrize("reference, alphas", [("advection", (0.2, 0.1, 0.05)), ("heat", (0.8, 0.9, 0.95))])
def test_alpha_limits_smooth_sine(sine_spec, reference, alphas):
    report = alpha_limit_probe(sine_spec, alphas, reference, sine_spec.grid(256))
    assert report.passed, report.rows
    errors = [report.value(f"{reference}_error@alpha={a:g}") for a in alphas]
    assert errors == sorted(errors, reverse=True)


def test_alpha_limit_zero_problem(zero_spec):
    report = alpha_limit_probe(zero_spec, (0.2, 0.1), "advection", zero_spec.grid(32))
    assert report.passed
    assert report.value("advection_error@alpha=0.2") == 0.0


def test_alpha_limit_unknown_reference(sine_spec):
    with pytest.raises(DomainError):
        alpha_limit_probe(sine_spec, (0.5,), "wave", sine_spec.grid(16))


# ==================== Riemann-Liouville 极限 ====================
def test_rl_limits():
    report = rl_limit_probe(Grid1D(1.0, 256))
    assert report.passed
    verdicts = {row.quantity: row.passed for row in report.rows}
    assert verdicts["cubic:J1_gap_decreasing"] is True
    assert verdicts["cubic:identity_gap_decreasing"] is True
    assert verdicts["quadratic:J1_gap_decreasing"] is None


def test_rl_limits_zero_function():
    report = rl_limit_probe(Grid1D(1.0, 64), {"zero": (lambda x: 0.0 * x, False)})
    assert report.passed
    assert all(row.value == 0.0 for row in report.rows)


# ==================== 正则性与包络 ====================
def test_regularity_hat(hat_spec):
    record = solve(hat_spec, hat_spec.grid(256))
    report = regularity_probe(record, hat_spec)
    assert report.passed, report.rows
    assert "holder_slope_first_decade" in report.quantities
    assert report.value("L1") > 0.0 and report.value("L2") > 0.0


def test_regularity_time_bound_is_discrete_shift(hat_spec):
    record = solve(hat_spec, hat_spec.grid(256))
    report = regularity_probe(record, hat_spec)
    rows = {row.quantity: row for row in report.rows}
    formal = rows["time_quotient_vs_formal_L"]
    # 有折点的初值: 时间商超过形式常数 L_g + ‖f‖ + N₂，但仍在离散平移界之内
    assert formal.passed is None
    assert formal.value > formal.bound == pytest.approx(2.0)
    shift = report.value("discrete_shift_L")
    assert shift == pytest.approx(max(report.value("initial_discrete_rate"), 1.0))
    assert rows["time_lipschitz_quotient"].bound == pytest.approx(shift * (1.0 + 1e-6))
    assert rows["time_lipschitz_quotient"].passed and rows["initial_time_quotient"].passed


def test_regularity_zero_problem(zero_spec):
    report = regularity_probe(solve(zero_spec, zero_spec.grid(32)), zero_spec)
    assert report.passed
    assert report.value("lateral_left_quotient") == 0.0


def test_regularity_requires_lipschitz():
    spec = ProblemSpec(0.5, 1.0, 0.1)
    with pytest.raises(ConstraintError):
        regularity_probe(solve(spec, spec.grid(16)), spec)


def test_envelope_brackets_hat_solution(hat_spec):
    grid = hat_spec.grid(128)
    record = solve(hat_spec, grid)
    lower, upper = barrier_envelope(hat_spec, grid, record.times, n_samples=16)
    report = envelope_probe(record, lower, upper)
    assert report.passed, report.rows

    shifted = SolutionRecord(grid, record.times, record.frames + 10.0 * hat_spec.g_sup)
    assert not envelope_probe(shifted, lower, upper).passed


def test_envelope_zero_problem(zero_spec):
    grid = zero_spec.grid(16)
    record = solve(zero_spec, grid)
    lower, upper = barrier_envelope(zero_spec, grid, record.times, n_samples=4)
    assert envelope_probe(record, lower, upper).passed


def test_envelope_shape_mismatch(zero_spec):
    grid = zero_spec.grid(16)
    record = solve(zero_spec, grid)
    other = SolutionRecord(grid, record.times[:2], record.frames[:2])
    with pytest.raises(DomainError):
        envelope_probe(record, other, other)


# ==================== 数据连续性与收敛 ====================
def test_data_continuity(sine_spec):
    report = data_continuity_probe(sine_spec, sine_spec.grid(64))
    assert report.passed, report.rows


def test_manufactured_solution_data():
    spec = manufactured_problem(0.5)
    x = np.linspace(0.0, 1.0, 5)
    assert np.allclose(spec.boundary(x, 0.0 * x), x ** 3)
    assert spec.lipschitz_Lg == pytest.approx(3.0 * 1.1 + 1.0)


def test_manufactured_convergence():
    report = manufactured_probe(0.5)
    assert report.passed, report.rows
    assert report.value("error@N=128") < report.value("error@N=32")


def test_self_convergence(sine_spec):
    # x=0 附近解只有 Hölder-α 正则性，这里只要求差值逐级缩小
    report = self_convergence_probe(sine_spec, (16, 32, 64), min_order=0.1)
    assert report.passed, report.rows
    assert report.value("diff@N=32-64") < report.value("diff@N=16-32")


def test_self_convergence_needs_doubling(sine_spec):
    with pytest.raises(DomainError):
        self_convergence_probe(sine_spec, (16, 32, 48))


# ==================== 调度 ====================
def test_run_probe_unknown(sine_spec, rng):
    with pytest.raises(DomainError):
        run_probe("nonexistent", RunConfig(n_cells=16), sine_spec, rng)


def test_run_probes_writes_csv(tmp_path, hat_spec):
    config = RunConfig(n_cells=32, probes=["max_principle", "rl_limit", "comparison"], output_dir=tmp_path)
    reports = run_probes(config, hat_spec, tmp_path)
    assert [r.name for r in reports] == ["max_principle", "rl_limit", "comparison"]
    for report in reports:
        assert report.artifacts and (tmp_path / f"{report.name}.csv").exists()
    summary = (tmp_path / "summary.csv").read_text(encoding="utf-8").splitlines()
    assert summary[0] == "probe,passed,n_quantities"
    assert summary[1].startswith("max_principle,true,")


def test_run_probes_reproducible(tmp_path, hat_spec):
    config = RunConfig(n_cells=32, probes=["contraction", "regularity", "envelope"], seed=7)
    first, second = tmp_path / "a", tmp_path / "b"
    run_probes(config, hat_spec, first)
    run_probes(config, hat_spec, second)
    for name in ("contraction.csv", "regularity.csv", "envelope.csv", "summary.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
