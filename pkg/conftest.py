#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试共享夹具
"""

import numpy as np
import pytest

from fracdiff.core.fractional import Grid1D
from fracdiff.services.problem import preset


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def grid128():
    return Grid1D(1.0, 128)


@pytest.fixture
def hat_spec():
    return preset("lipschitz-hat", 0.5, 1.0, 0.25)


@pytest.fixture
def sine_spec():
    return preset("smooth-sine", 0.5, 1.0, 0.25)


@pytest.fixture
def zero_spec():
    return preset("zero", 0.5, 1.0, 0.25)


@pytest.fixture
def write_config(tmp_path):
    """把若干 key = value 行写成配置文件，output.dir 默认指向 tmp_path/out"""

    def _write(lines, name="run.cfg"):
        text = "\n".join(lines)
        if not any(line.startswith("output.dir") for line in lines):
            text += f"\noutput.dir = {tmp_path / 'out'}"
        path = tmp_path / name
        path.write_text(text + "\n", encoding="utf-8")
        return path

    return _write
