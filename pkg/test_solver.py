#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
求解器测试: 权重认证、算子作用、时间推进与参考解
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from fracdiff.core.fractional import Field, Grid1D, flux_divergence
from fracdiff.handlers.error_handlers import (
    EXIT_PROBE,
    ApplyMismatch,
    DomainError,
    MonotonicityError,
    StabilityError,
)
from fracdiff.services import bench
from fracdiff.services.problem import preset
from fracdiff.services.solver import (
    apply,
    apply_fast,
    apply_naive,
    build_weights,
    certify,
    get_weights,
    reference_dt,
    solve,
    solve_advection,
    solve_heat,
    stable_dt,
    step,
    time_grid,
)
from fracdiff.utils.cache import global_cache


# ==================== 权重 ====================
@pytest.mark.parametrize("n_cells", [64, 128, 256, 512, 1024])
@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_weights_certified(n_cells, alpha):
    w = build_weights(Grid1D(1.0, n_cells), alpha)
    assert w.certified
    assert certify(w) is None
    assert np.all(w.toeplitz_tail >= 0.0)
    assert np.all(w.diag[1:-1] < 0.0)


@pytest.mark.parametrize("alpha", [0.25, 0.75])
def test_weights_row_sums_vanish(alpha):
    w = build_weights(Grid1D(1.0, 64), alpha)
    dense = w.dense()
    assert np.all(dense[0] == 0.0) and np.all(dense[-1] == 0.0)
    assert np.max(np.abs(dense.sum(axis=1))) <= 1e-10 * w.diag_max
    assert np.all(np.triu(dense, 2) == 0.0)


def test_weights_row_matches_dense():
    w = build_weights(Grid1D(1.0, 32), 0.5)
    dense = w.dense()
    for i in (1, 2, 5, 31):
        assert_array_equal(w.row(i), dense[i, : i + 2])


@pytest.mark.parametrize("slope", ["centered", "upwind"])
def test_weights_reproduce_flux_divergence(slope):
    grid = Grid1D(1.0, 64)
    alpha = 0.6
    try:
        w = build_weights(grid, alpha, slope)
    except MonotonicityError:
        pytest.skip(f"{slope} 在该参数下未通过认证")
    u = Field.from_function(grid, lambda x: np.sin(3.0 * x) + x * x)
    expected = flux_divergence(u, alpha, slope).values
    got = apply_naive(w, u).values
    assert np.max(np.abs(got - expected)) <= 1e-9 * max(1.0, np.max(np.abs(expected)))


def test_build_weights_rejects_unknown_slope():
    with pytest.raises(DomainError):
        build_weights(Grid1D(1.0, 16), 0.5, "downwind")


def test_get_weights_cached():
    grid = Grid1D(1.0, 48)
    first = get_weights(grid, 0.35)
    hits = global_cache.hits
    assert get_weights(grid, 0.35) is first
    assert global_cache.hits == hits + 1


# ==================== 算子作用 ====================
@pytest.mark.parametrize("mode", ["naive", "fast"])
def test_apply_constant_is_exact_zero(mode):
    grid = Grid1D(1.0, 128)
    w = get_weights(grid, 0.5)
    u = Field(grid, np.full(grid.node_count, 4.2))
    assert np.all(apply(w, u, mode).values == 0.0)


def test_apply_unknown_mode():
    w = get_weights(Grid1D(1.0, 16), 0.5)
    with pytest.raises(DomainError):
        apply(w, Field.zeros(w.grid), "gpu")


def test_fast_matches_naive_large(rng):
    grid = Grid1D(1.0, 4096)
    w = get_weights(grid, 0.5)
    for _ in range(20):
        u = Field(grid, rng.uniform(-1.0, 1.0, grid.node_count))
        naive = apply_naive(w, u).values
        fast = apply_fast(w, u).values
        assert np.max(np.abs(fast - naive)) <= 1e-10 * np.max(np.abs(naive))


def test_fast_matches_naive_small(rng):
    grid = Grid1D(2.0, 37)
    w = get_weights(grid, 0.3)
    u = Field(grid, rng.normal(size=grid.node_count))
    assert_allclose(apply_fast(w, u).values, apply_naive(w, u).values, rtol=1e-10, atol=1e-9)


# ==================== 时间推进 ====================
def test_stable_dt_bounds():
    w = get_weights(Grid1D(1.0, 64), 0.5)
    assert_allclose(stable_dt(w, 1.0) * w.diag_max, 1.0, rtol=1e-14)
    assert stable_dt(w, 0.5) < stable_dt(w, 1.0)
    for safety in (0.0, 1.5):
        with pytest.raises(DomainError):
            stable_dt(w, safety)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_stable_dt_scales_like_h_power(alpha):
    sizes = np.array([64, 128, 256, 512])
    dts = [stable_dt(get_weights(Grid1D(1.0, int(n)), alpha)) for n in sizes]
    slope = np.polyfit(np.log(1.0 / sizes), np.log(dts), 1)[0]
    assert slope == pytest.approx(1.0 + alpha, abs=0.05)


@pytest.mark.parametrize("alpha", [0.25, 0.75])
def test_step_preserves_order_of_random_pairs(rng, alpha):
    spec = preset("smooth-sine", alpha, 1.0, 0.25)
    grid = spec.grid(96)
    w = get_weights(grid, alpha)
    dt = stable_dt(w)
    for _ in range(50):
        low = rng.uniform(-1.0, 1.0, grid.node_count)
        gap = rng.uniform(0.0, 1.0, grid.node_count) * (rng.random(grid.node_count) < 0.3)
        lower = step(Field(grid, low), 0.1, dt, w, spec).values
        upper = step(Field(grid, low + gap), 0.1, dt, w, spec).values
        assert np.all(lower <= upper + 1e-12)


def test_step_constant_force_from_zero():
    spec = preset("constant-force", 0.5)
    grid = spec.grid(64)
    w = get_weights(grid, spec.alpha)
    dt = stable_dt(w, 0.9)
    nxt = step(Field.zeros(grid), 0.0, dt, w, spec).values
    assert nxt[0] == 0.0 and nxt[-1] == 0.0
    assert np.all(nxt[1:-1] == dt)


def test_step_rejects_large_dt(zero_spec):
    grid = zero_spec.grid(32)
    w = get_weights(grid, zero_spec.alpha)
    with pytest.raises(StabilityError) as info:
        step(Field.zeros(grid), 0.0, 2.0 * stable_dt(w, 1.0), w, zero_spec)
    assert info.value.bound == pytest.approx(stable_dt(w, 1.0))


@pytest.mark.parametrize("horizon, dt", [(0.25, 0.1), (0.3, 0.1), (1.0, 0.25), (0.05, 0.2)])
def test_time_grid_ends_at_horizon(horizon, dt):
    times = time_grid(horizon, dt)
    assert times[0] == 0.0
    assert times[-1] == horizon
    gaps = np.diff(times)
    assert np.all(gaps > 0.0)
    assert np.all(gaps <= dt * (1.0 + 1e-12))


def test_solve_zero_problem_stays_zero(zero_spec):
    record = solve(zero_spec, zero_spec.grid(32))
    assert record.sup_norm() == 0.0
    assert record.times[-1] == zero_spec.horizon_T
    assert record.meta["scheme"] == "explicit-euler"
    assert record.meta["steps"] == record.steps


def test_solve_hat_respects_bounds(hat_spec):
    record = solve(hat_spec, hat_spec.grid(64))
    assert record.frames.min() >= -1e-12
    assert record.frames.max() <= 0.5 + 1e-12
    assert record.frames[-1].max() < 0.5
    assert np.all(record.frames[1:, 0] == 0.0) and np.all(record.frames[1:, -1] == 0.0)


def test_solve_is_reproducible(sine_spec):
    grid = sine_spec.grid(64)
    first = solve(sine_spec, grid)
    second = solve(sine_spec, grid)
    assert_array_equal(first.frames, second.frames)
    assert_array_equal(first.times, second.times)


def test_solve_fast_and_naive_agree(sine_spec):
    grid = sine_spec.grid(64)
    naive = solve(sine_spec, grid, apply_mode="naive")
    fast = solve(sine_spec, grid, apply_mode="fast")
    assert np.max(np.abs(naive.frames - fast.frames)) <= 1e-10


def test_solve_rejects_grid_mismatch(sine_spec):
    with pytest.raises(DomainError):
        solve(sine_spec, Grid1D(2.0, 32))


def test_solve_rejects_explicit_dt_over_bound(sine_spec):
    grid = sine_spec.grid(32)
    bound = stable_dt(get_weights(grid, sine_spec.alpha), 1.0)
    with pytest.raises(StabilityError):
        solve(sine_spec, grid, dt=1.5 * bound)


# ==================== 参考解 ====================
def test_reference_dt():
    grid = Grid1D(1.0, 10)
    assert reference_dt(grid, "advection", 1.0) == pytest.approx(0.1)
    assert reference_dt(grid, "heat", 1.0) == pytest.approx(0.005)
    with pytest.raises(DomainError):
        reference_dt(grid, "wave", 1.0)


def test_advection_rejects_large_dt(hat_spec):
    grid = hat_spec.grid(16)
    with pytest.raises(StabilityError):
        solve_advection(hat_spec, grid, 2.0 * grid.spacing_h)


def test_heat_decays_sine(sine_spec):
    grid = sine_spec.grid(32)
    record = solve_heat(sine_spec, grid, reference_dt(grid, "heat", 0.9))
    assert record.frames[-1].max() < record.frames[0].max()
    assert record.frames.min() >= -1e-12
    expected = np.exp(-np.pi ** 2 * sine_spec.horizon_T) * np.sin(np.pi * grid.nodes)
    assert np.max(np.abs(record.frames[-1] - expected)) <= 1e-2


def test_advection_transports_hat(hat_spec):
    grid = hat_spec.grid(64)
    record = solve_advection(hat_spec, grid, reference_dt(grid, "advection", 0.9))
    assert record.frames.min() >= -1e-12
    assert record.frames.max() <= 0.5 + 1e-12
    # 峰值向左移动
    assert grid.nodes[np.argmax(record.frames[-1])] < 0.5


# ==================== 基准 ====================
def test_run_bench_tolerates_roundoff(rng, monkeypatch):
    def nudged(w, u):
        out = apply_fast(w, u)
        return Field(out.grid, out.values * (1.0 + 1e-13))

    monkeypatch.setattr(bench, "apply_fast", nudged)
    rows = bench.run_bench([16, 64], 1, rng)
    assert [(row.n, row.mode) for row in rows] == [(16, "naive"), (16, "fast"), (64, "naive"), (64, "fast")]


def test_run_bench_rejects_mismatch(rng, monkeypatch):
    def shifted(w, u):
        out = apply_fast(w, u)
        return Field(out.grid, out.values + 1e-6 * np.abs(out.values).max())

    monkeypatch.setattr(bench, "apply_fast", shifted)
    with pytest.raises(ApplyMismatch) as info:
        bench.run_bench([32], 1, rng)
    assert info.value.n_cells == 32
    assert info.value.exit_code == EXIT_PROBE
