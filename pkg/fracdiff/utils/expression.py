#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
表达式解析模块
==============

源项 f(x,t) 与边界数据 g(x,t) 的内联表达式，递归下降解析为 numpy 向量化函数。

文法:
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | FUNC '(' expr (',' expr)* ')' | '(' expr ')'

变量: x, t；常量: pi, e 以及调用方传入的命名常量（如 l, T）
函数: sin, cos, exp, abs（一元），min, max（至少两元）
"""

import math
import re
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..handlers.error_handlers import ConfigError

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(.))")

UNARY_FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
}

VARIADIC_FUNCTIONS: Dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "min": np.minimum,
    "max": np.maximum,
}

BUILTIN_CONSTANTS = {"pi": math.pi, "e": math.e}


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            break
        number, name, symbol = match.groups()
        start = match.start(match.lastindex) if match.lastindex else position
        if number is not None:
            tokens.append(("num", number, start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif symbol is not None and not symbol.isspace():
            tokens.append(("op", symbol, start))
        position = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class Expression:
    """编译后的表达式，可按 (x, t) 向量化求值"""

    def __init__(self, text: str, evaluator: Evaluator, names: frozenset):
        self.text = text
        self._evaluator = evaluator
        self.names = names

    def __call__(self, x, t) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        shape = np.broadcast(x, t).shape
        with np.errstate(all="ignore"):
            value = self._evaluator(x, t)
        return np.broadcast_to(np.asarray(value, dtype=float), shape).copy()

    def __repr__(self) -> str:
        return f"Expression({self.text!r})"


class _Parser:
    def __init__(self, text: str, constants: Mapping[str, float]):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.constants = dict(BUILTIN_CONSTANTS, **constants)
        self.names = set()

    # ---------- 工具 ----------
    def _peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def _advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str) -> ConfigError:
        _, value, column = self._peek()
        return ConfigError(f"表达式 '{self.text}' 第{column + 1}列附近: {message}（读到 '{value}'）")

    def _expect(self, symbol: str) -> None:
        kind, value, _ = self._peek()
        if kind != "op" or value != symbol:
            raise self._error(f"缺少 '{symbol}'")
        self._advance()

    # ---------- 文法 ----------
    def parse(self) -> Evaluator:
        node = self._expr()
        if self._peek()[0] != "end":
            raise self._error("多余的内容")
        return node

    def _expr(self) -> Evaluator:
        node = self._term()
        while self._peek()[0] == "op" and self._peek()[1] in "+-":
            op = self._advance()[1]
            left, right = node, self._term()
            if op == "+":
                node = lambda x, t, a=left, b=right: a(x, t) + b(x, t)
            else:
                node = lambda x, t, a=left, b=right: a(x, t) - b(x, t)
        return node

    def _term(self) -> Evaluator:
        node = self._unary()
        while self._peek()[0] == "op" and self._peek()[1] in "*/":
            op = self._advance()[1]
            left, right = node, self._unary()
            if op == "*":
                node = lambda x, t, a=left, b=right: a(x, t) * b(x, t)
            else:
                node = lambda x, t, a=left, b=right: a(x, t) / b(x, t)
        return node

    def _unary(self) -> Evaluator:
        kind, value, _ = self._peek()
        if kind == "op" and value in "+-":
            self._advance()
            operand = self._unary()
            if value == "-":
                return lambda x, t, a=operand: -a(x, t)
            return operand
        return self._power()

    def _power(self) -> Evaluator:
        base = self._atom()
        if self._peek()[0] == "op" and self._peek()[1] == "^":
            self._advance()
            exponent = self._unary()
            return lambda x, t, a=base, b=exponent: np.power(a(x, t), b(x, t))
        return base

    def _atom(self) -> Evaluator:
        kind, value, _ = self._peek()
        if kind == "num":
            self._advance()
            number = float(value)
            return lambda x, t, c=number: c
        if kind == "op" and value == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        if kind == "name":
            self._advance()
            if value in UNARY_FUNCTIONS or value in VARIADIC_FUNCTIONS:
                return self._call(value)
            self.names.add(value)
            if value == "x":
                return lambda x, t: x
            if value == "t":
                return lambda x, t: t
            if value in self.constants:
                constant = float(self.constants[value])
                return lambda x, t, c=constant: c
            self.index -= 1
            raise self._error(f"未知的名称 '{value}'")
        raise self._error("期望数字、变量、函数或括号")

    def _call(self, name: str) -> Evaluator:
        self._expect("(")
        args = [self._expr()]
        while self._peek()[0] == "op" and self._peek()[1] == ",":
            self._advance()
            args.append(self._expr())
        self._expect(")")
        if name in UNARY_FUNCTIONS:
            if len(args) != 1:
                raise self._error(f"{name} 只接受一个参数")
            func, arg = UNARY_FUNCTIONS[name], args[0]
            return lambda x, t, f=func, a=arg: f(a(x, t))
        if len(args) < 2:
            raise self._error(f"{name} 至少需要两个参数")
        func = VARIADIC_FUNCTIONS[name]

        def reduce(x, t, f=func, parts=tuple(args)):
            value = parts[0](x, t)
            for part in parts[1:]:
                value = f(value, part(x, t))
            return value

        return reduce


def compile_expression(text: str, constants: Optional[Mapping[str, float]] = None) -> Expression:
    """
    编译表达式

    Args:
        text: 表达式文本，例如 "sin(pi*x/l)*exp(-t)"
        constants: 额外的命名常量

    Returns:
        Expression: 可调用对象 expr(x, t)
    """
    if not text or not text.strip():
        raise ConfigError("表达式为空")
    parser = _Parser(text, constants or {})
    evaluator = parser.parse()
    return Expression(text, evaluator, frozenset(parser.names))
