#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
表达式解析测试
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracdiff.handlers.error_handlers import ConfigError
from fracdiff.utils.expression import compile_expression


X = np.linspace(0.0, 1.0, 11)
T = np.full(11, 0.3)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1 + 2 * 3", 7.0),
        ("(1 + 2) * 3", 9.0),
        ("2 ^ 3 ^ 2", 512.0),
        ("-2 ^ 2", -4.0),
        ("2 ^ -1", 0.5),
        ("8 / 4 / 2", 1.0),
        ("1.5e1 - .5", 14.5),
        ("max(1, 3, 2)", 3.0),
        ("min(4, -1)", -1.0),
        ("abs(-pi)", math.pi),
        ("l * T", 0.5),
    ],
)
def test_constant_expressions(text, expected):
    expr = compile_expression(text, {"l": 2.0, "T": 0.25})
    assert_allclose(expr(0.0, 0.0), expected, rtol=1e-15)


def test_vectorized_in_x_and_t():
    expr = compile_expression("sin(pi*x/l)*exp(-t)", {"l": 1.0})
    assert_allclose(expr(X, T), np.sin(np.pi * X) * np.exp(-0.3), rtol=1e-15, atol=1e-16)
    assert expr.names == frozenset({"x", "t", "pi", "l"})


def test_result_broadcasts_to_input_shape():
    expr = compile_expression("1")
    value = expr(X, T)
    assert value.shape == X.shape
    assert np.all(value == 1.0)
    value[0] = 5.0
    assert expr(X, T)[0] == 1.0


def test_hat_expression():
    expr = compile_expression("max(0, 0.5 - abs(x - 0.5))")
    assert_allclose(expr(X, 0.0 * X), np.maximum(0.0, 0.5 - np.abs(X - 0.5)), rtol=1e-15)


@pytest.mark.parametrize(
    "text",
    ["", "   ", "1 +", "sin(x", "1 2", "foo * x", "sin(x, t)", "max(x)", "x $ 2", "()"],
)
def test_invalid_expressions(text):
    with pytest.raises(ConfigError):
        compile_expression(text)


def test_error_reports_column():
    with pytest.raises(ConfigError) as info:
        compile_expression("x + y")
    assert "第5列" in str(info.value)
