#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
日志中间件
"""

import logging
import time
from datetime import datetime
from typing import Callable

from ..handlers.error_handlers import handle_error

logger = logging.getLogger(__name__)


class LoggingMiddleware:
    """命令日志中间件: 包装每个 CLI 命令，捕获异常并记录退出码与耗时"""

    def __init__(self, command: Callable[..., int], name: str):
        self.command = command
        self.name = name

    def __call__(self, *args, **kwargs) -> int:
        start_time = time.perf_counter()

        # 执行命令
        try:
            code = self.command(*args, **kwargs)
        except Exception as e:
            code = handle_error(e)

        # 计算处理时间
        process_time = time.perf_counter() - start_time

        # 记录日志
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        logger.info(f"[{timestamp}] {self.name} - exit {code} - {process_time:.3f}s")

        return code
