#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分数阶核心测试
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from fracdiff.core.fractional import (
    Field,
    FracOrder,
    Grid1D,
    KernelSlice,
    caputo_l1,
    flux_divergence,
    gamma_fn,
    j_operator,
    k_operator,
    last_cell_weights,
    power_rule,
    power_rule_flux,
    rl_integral,
    unit_cell_moments,
    unit_cell_singular_moments,
)
from fracdiff.handlers.error_handlers import DomainError, FieldError
from fracdiff.services.barriers import default_c, rho, sigma


# ==================== 基础类型 ====================
@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_frac_order_rejects_endpoints(alpha):
    with pytest.raises(DomainError):
        FracOrder(alpha)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_frac_order_constants(alpha):
    order = FracOrder(alpha)
    assert_allclose(order.gamma_1ma, math.gamma(1.0 - alpha), rtol=1e-14)
    assert_allclose(order.gamma_2ma, math.gamma(2.0 - alpha), rtol=1e-14)
    assert_allclose(order.c_alpha, alpha * (alpha + 1.0) / math.gamma(1.0 - alpha), rtol=1e-14)
    assert order.c_alpha > 0.0


def test_grid_nodes():
    grid = Grid1D(2.5, 10)
    assert grid.nodes[0] == 0.0
    assert grid.nodes[-1] == 2.5
    assert np.all(np.diff(grid.nodes) > 0.0)
    assert_allclose(grid.spacing_h * grid.n_cells, grid.length_l, rtol=1e-14)
    assert grid.index_of(0.75) == 3
    with pytest.raises(DomainError):
        grid.index_of(0.8)


def test_grid_rejects_single_cell():
    with pytest.raises(DomainError):
        Grid1D(1.0, 1)


def test_field_validation(grid128):
    with pytest.raises(FieldError):
        Field(grid128, np.zeros(5))
    values = np.zeros(grid128.node_count)
    values[3] = np.nan
    with pytest.raises(FieldError):
        Field(grid128, values)


def test_kernel_slice_validation():
    KernelSlice(0.0, 0.5, 0.5)
    with pytest.raises(DomainError):
        KernelSlice(0.5, 0.5, 1.0)
    with pytest.raises(DomainError):
        KernelSlice(0.0, 1.5, 1.0)


# ==================== 特殊函数 ====================
@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 1.0), (0.5, 1.7724538509055159), (2.5, 1.3293403881791370)],
)
def test_gamma_fn(x, expected):
    assert_allclose(gamma_fn(x), expected, rtol=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_gamma_fn_domain(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_power_rule_examples():
    x = np.linspace(0.1, 1.0, 7)
    assert_allclose(power_rule(0.5, 0.5, x), 0.8862269254527580, rtol=1e-13)
    alpha = 0.3
    assert_allclose(power_rule(1.0 + alpha, alpha, x), gamma_fn(2.0 + alpha) * x, rtol=1e-13)
    assert power_rule(1.0, 0.5, 0.0) == 0.0
    assert math.isinf(power_rule(0.2, 0.5, 0.0))
    with pytest.raises(DomainError):
        power_rule(-1.0, 0.5, 1.0)


def test_power_rule_flux_matches_derivative():
    x = np.linspace(0.2, 0.9, 5)
    step = 1e-6
    numeric = (power_rule(2.0, 0.4, x + step) - power_rule(2.0, 0.4, x - step)) / (2.0 * step)
    assert_allclose(power_rule_flux(2.0, 0.4, x), numeric, rtol=1e-7)


# ==================== Caputo / J / K ====================
def test_caputo_constant_is_zero(grid128):
    u = Field(grid128, np.full(grid128.node_count, 3.0))
    assert np.all(caputo_l1(u, 0.5).values == 0.0)


def test_caputo_linear_exact(grid128):
    u = Field.from_function(grid128, lambda x: x)
    assert_allclose(caputo_l1(u, 0.5).values[-1], 1.1283791670955126, rtol=1e-12)


def test_caputo_quadratic():
    grid = Grid1D(1.0, 256)
    u = Field.from_function(grid, lambda x: x * x)
    value = caputo_l1(u, 0.25).values[grid.index_of(0.5)]
    assert_allclose(value, power_rule(2.0, 0.25, 0.5), rtol=1e-3)


def test_j_operator_examples():
    assert j_operator(2.0, 2.0, 0.0, 0.7, 0.5) == 0.0
    assert_allclose(j_operator(1.0, 0.0, 0.0, 1.0, 0.5), 0.2820947917738781, rtol=1e-13)
    x, alpha = 0.6, 0.35
    assert_allclose(j_operator(0.0, x, 1.0, x, alpha), x ** -alpha / math.gamma(1.0 - alpha), rtol=1e-13)
    with pytest.raises(DomainError):
        j_operator(0.0, 0.0, 0.0, 0.0, 0.5)


def test_k_operator_quadratic_closed_form():
    grid = Grid1D(1.0, 64)
    u = Field.from_function(grid, lambda x: x * x)
    value = k_operator(u, 2.0, KernelSlice(0.0, 1.0, 1.0), 0.5)
    assert_allclose(value, 0.75 / (0.5 * math.gamma(0.5)), rtol=1e-10)


def test_k_operator_shifted_quadratic():
    grid = Grid1D(1.0, 64)
    x_hat, alpha = 0.5, 0.3
    u = Field.from_function(grid, lambda x: (x - x_hat) ** 2)
    value = k_operator(u, 0.0, KernelSlice(0.0, x_hat, x_hat), alpha)
    expected = alpha * (1.0 + alpha) * x_hat ** (1.0 - alpha) / ((1.0 - alpha) * math.gamma(1.0 - alpha))
    assert_allclose(value, expected, rtol=1e-10)


def test_k_operator_affine_vanishes():
    grid = Grid1D(1.0, 32)
    u = Field.from_function(grid, lambda x: 3.0 * x + 2.0)
    assert abs(k_operator(u, 3.0, KernelSlice(0.0, 0.75, 0.75), 0.5)) < 1e-10
    assert abs(k_operator(u, 3.0, KernelSlice(0.25, 0.5, 0.75), 0.5)) < 1e-10


# ==================== 通量散度 ====================
@pytest.mark.parametrize("slope", ["centered", "upwind"])
def test_flux_divergence_constant_exact(grid128, slope):
    u = Field(grid128, np.full(grid128.node_count, -1.7))
    assert np.all(flux_divergence(u, 0.4, slope).values == 0.0)


def test_flux_divergence_quadratic_exact(grid128):
    alpha = 0.5
    u = Field.from_function(grid128, lambda x: x * x)
    x = grid128.nodes[1:-1]
    assert_allclose(flux_divergence(u, alpha).values[1:-1], power_rule_flux(2.0, alpha, x), rtol=1e-8)


def _power_error(beta, alpha, n):
    grid = Grid1D(1.0, n)
    u = Field.from_function(grid, lambda x: x ** beta)
    x = grid.nodes
    mask = (x >= 0.1) & (x < 1.0)
    exact = power_rule_flux(beta, alpha, x[mask])
    return float(np.max(np.abs(flux_divergence(u, alpha).values[mask] - exact) / np.abs(exact)))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("beta_kind", ["one", "one_plus_alpha", "two"])
def test_power_rule_oracle(alpha, beta_kind):
    beta = {"one": 1.0, "one_plus_alpha": 1.0 + alpha, "two": 2.0}[beta_kind]
    assert _power_error(beta, alpha, 256) <= 1e-2


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("beta_kind", ["one_plus_alpha", "three"])
def test_power_rule_convergence_order(alpha, beta_kind):
    beta = 1.0 + alpha if beta_kind == "one_plus_alpha" else 3.0
    errors = [_power_error(beta, alpha, n) for n in (128, 256, 512)]
    order = -np.polyfit(np.log([128.0, 256.0, 512.0]), np.log(errors), 1)[0]
    assert order >= 1.0


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_barrier_identities(alpha):
    grid = Grid1D(1.0, 512)
    x = grid.nodes
    window = (x >= 0.1) & (x <= 0.9)
    rho0 = Field(grid, rho("left", default_c(alpha, 1.0), alpha, 1.0, x))
    assert np.max(np.abs(flux_divergence(rho0, alpha).values[window] + 1.0)) <= 1e-2
    sig = Field(grid, sigma(0.5, alpha, x, 1.0))
    assert np.max(np.abs(flux_divergence(sig, alpha).values[window] - gamma_fn(2.0 + alpha))) <= 1e-2


def test_flux_divergence_smallest_grid():
    grid = Grid1D(1.0, 2)
    out = flux_divergence(Field(grid, np.array([0.0, 1.0, 0.0])), 0.5).values
    assert out.shape == (3,)
    assert out[0] == 0.0 and out[2] == 0.0
    assert np.isfinite(out[1]) and out[1] < 0.0


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_singular_moments_match_quad(alpha):
    power = -alpha - 2.0
    moments = unit_cell_singular_moments(alpha, power, 6)
    for k in (1, 3, 6):
        expected, _ = integrate.quad(lambda t: (k + t) ** power, 0.0, 1.0, weight="alg", wvar=(0.0, alpha))
        assert_allclose(moments[k - 1], expected, rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_last_cell_weights_reproduce_power_alpha(alpha):
    count = 40
    d0, d1, d2, dq = last_cell_weights(alpha, count)
    A, B, Q = unit_cell_moments(-alpha - 2.0, count)
    assert_allclose(d0 + d1 + d2, 0.0, atol=1e-14)
    # s^α 在节点 0,1,2 取 0, 1, 2^α，重构后的矩应等于 ∫ s^α
    assert_allclose(A + d1 + 2.0 ** alpha * d2, unit_cell_singular_moments(alpha, -alpha - 2.0, count),
                    rtol=1e-12)
    # 线性函数 s 不受影响
    assert_allclose(d1 + 2.0 * d2, 0.0, atol=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.75])
def test_flux_divergence_matches_j_plus_k(alpha):
    grid = Grid1D(1.0, 48)
    u = Field.from_function(grid, lambda x: np.sin(3.0 * x) + np.power(x, alpha))
    v, h = u.values, grid.spacing_h
    flux = flux_divergence(u, alpha).values
    for i in (1, 2, 3, 17, 47):
        x = grid.nodes[i]
        p = (v[i + 1] - v[i - 1]) / (2.0 * h)
        expected = j_operator(v[0], v[i], p, x, alpha) + k_operator(u, p, KernelSlice(0.0, x, x), alpha)
        assert_allclose(flux[i], expected, rtol=1e-9)


def test_flux_divergence_matches_caputo_difference():
    grid = Grid1D(1.0, 256)
    alpha = 0.5
    u = Field.from_function(grid, lambda x: x ** 3)
    caputo = caputo_l1(u, alpha).values
    difference = (caputo[2:] - caputo[:-2]) / (2.0 * grid.spacing_h)
    x = grid.nodes[1:-1]
    mask = x >= 0.1
    flux = flux_divergence(u, alpha).values[1:-1]
    assert np.max(np.abs(flux[mask] - difference[mask])) <= 1e-2


# ==================== Riemann-Liouville 积分 ====================
def test_rl_integral_constant(grid128):
    ones = Field(grid128, np.ones(grid128.node_count))
    alpha = 0.3
    x = grid128.nodes
    assert_allclose(rl_integral(ones, 1.0 - alpha).values, x ** (1.0 - alpha) / math.gamma(2.0 - alpha),
                    rtol=1e-10, atol=1e-14)
    assert_allclose(rl_integral(ones, 1.0).values, x, rtol=1e-12, atol=1e-14)
    assert np.all(rl_integral(Field.zeros(grid128), 0.5).values == 0.0)


@pytest.mark.parametrize("order", [0.0, 1.5])
def test_rl_integral_domain(grid128, order):
    with pytest.raises(DomainError):
        rl_integral(Field.zeros(grid128), order)


def test_rl_integral_semigroup():
    grid = Grid1D(1.0, 256)
    g = Field.from_function(grid, lambda x: np.sin(x))
    composed = rl_integral(rl_integral(g, 0.3), 0.4).values
    direct = rl_integral(g, 0.7).values
    assert np.max(np.abs(composed - direct)) <= 1e-2
