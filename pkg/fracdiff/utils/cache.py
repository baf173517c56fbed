#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
缓存管理模块
============

这个模块提供进程内的缓存。算子权重的组装是 O(N²) 的，离散障碍剖面要解一次稠密线性方程组，
同一个键在一次运行中只构建一次。
"""

from typing import Any, Callable, Dict, Hashable, Tuple

CACHE_STORES = ("weights", "profiles")


class CacheManager:
    """缓存管理器"""

    def __init__(self):
        # 全局缓存字典
        self._cache: Dict[str, Dict[Tuple[Hashable, ...], Any]] = {name: {} for name in CACHE_STORES}
        self.hits = 0
        self.misses = 0

    @staticmethod
    def weights_key(n_cells: int, length_l: float, alpha: float, slope: str) -> Tuple[Hashable, ...]:
        """权重缓存键"""
        return (int(n_cells), float(length_l), float(alpha), str(slope))

    @staticmethod
    def profile_key(n_cells: int, length_l: float, alpha: float, side: str) -> Tuple[Hashable, ...]:
        """离散 ρ 剖面缓存键"""
        return (int(n_cells), float(length_l), float(alpha), str(side))

    def get_or_build(self, store: str, key: Tuple[Hashable, ...], builder: Callable[[], Any]) -> Any:
        """
        获取缓存对象，未命中时调用 builder 构建

        参数:
            store: 缓存分区，"weights" 或 "profiles"
            key: 对应的 *_key 生成的键
            builder: 无参构建函数

        返回:
            缓存中的对象
        """
        if store not in self._cache:
            raise KeyError(f"未知的缓存分区 {store}")
        entries = self._cache[store]
        if key in entries:
            self.hits += 1
            return entries[key]
        self.misses += 1
        value = builder()
        entries[key] = value
        return value


# 全局缓存实例
global_cache = CacheManager()
