#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
矩陣核心模組
提供稠密矩陣容器、分組指派、範數與組內散度 (scatter) 泛函
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from core.errors import (
    DimensionMismatchError,
    EmptySelectionError,
    NonFiniteValueError,
    ShapeError,
)


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """
    d×n 稠密矩陣
    欄位為樣本 (影格)，列為特徵 (像素)；資料以 column-major 的 float64 儲存且唯讀
    """

    data: np.ndarray

    def __post_init__(self):
        array = np.array(self.data, dtype=np.float64, order='F', copy=True)
        if array.ndim != 2:
            raise ShapeError(f"矩陣必須是二維，收到 ndim={array.ndim}")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeError(f"矩陣至少需要 1×1，收到 {array.shape[0]}×{array.shape[1]}")
        if not np.isfinite(array).all():
            raise NonFiniteValueError("矩陣含有 NaN 或 Inf")
        array.setflags(write=False)
        object.__setattr__(self, 'data', array)

    @classmethod
    def from_array(cls, array) -> 'DenseMatrix':
        """由任意二維陣列建立矩陣 (會複製資料)"""
        return cls(np.asarray(array))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> 'DenseMatrix':
        """由列清單建立矩陣"""
        return cls(np.array(rows, dtype=np.float64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'DenseMatrix':
        return cls(np.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j]

    def to_array(self) -> np.ndarray:
        """回傳可寫入的副本"""
        return np.array(self.data, order='F', copy=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class GroupAssignment:
    """
    欄位分組指派
    labels[j] ∈ {0, …, c-1}，每個群組都不可為空
    """

    labels: np.ndarray
    c: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True).ravel()
        c = int(self.c)
        if c < 1:
            raise ShapeError(f"群組數必須 ≥ 1，收到 c={c}")
        if labels.size < 1:
            raise ShapeError("分組指派至少需要一個欄位")
        if labels.min() < 0 or labels.max() >= c:
            raise ShapeError(f"標籤必須介於 0 與 {c - 1} 之間")
        sizes = np.bincount(labels, minlength=c)
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            raise ShapeError(f"群組不可為空: {empty.tolist()}")
        labels.setflags(write=False)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'c', c)

    @classmethod
    def from_labels(cls, labels: Iterable[int], c: Optional[int] = None) -> 'GroupAssignment':
        labels = np.asarray(list(labels) if not isinstance(labels, np.ndarray) else labels)
        if c is None:
            c = int(labels.max()) + 1 if labels.size else 0
        return cls(labels, c)

    @classmethod
    def single(cls, n: int) -> 'GroupAssignment':
        """所有欄位屬於同一群組"""
        return cls(np.zeros(n, dtype=np.int64), 1)

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        """各群組大小 n_i"""
        return np.bincount(self.labels, minlength=self.c)

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.labels == i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAssignment):
            return NotImplemented
        return self.c == other.c and bool(np.array_equal(self.labels, other.labels))

    def __repr__(self) -> str:
        return f"GroupAssignment(n={self.n}, c={self.c}, sizes={self.sizes().tolist()})"


@dataclass(frozen=True)
class ScatterValue:
    """組內散度值 (非負)"""

    value: float

    def __post_init__(self):
        value = float(self.value)
        # 浮點抵銷可能產生極小的負值
        object.__setattr__(self, 'value', max(value, 0.0))

    def __float__(self) -> float:
        return self.value


def as_array(M) -> np.ndarray:
    """取出底層陣列 (DenseMatrix 或任意陣列)"""
    if isinstance(M, DenseMatrix):
        return M.data
    return np.asarray(M, dtype=np.float64)


def column_mean(M: DenseMatrix, columns: Iterable[int]) -> np.ndarray:
    """
    計算指定欄位的平均向量

    Args:
        M: 矩陣
        columns: 欄位索引集合

    Returns:
        np.ndarray: 長度 d 的平均向量
    """
    data = as_array(M)
    index = np.asarray(list(columns) if not isinstance(columns, np.ndarray) else columns, dtype=np.int64)
    if index.size == 0:
        raise EmptySelectionError("欄位索引集合不可為空")
    if index.min() < 0 or index.max() >= data.shape[1]:
        raise DimensionMismatchError(f"欄位索引超出範圍 (n={data.shape[1]})")
    return data[:, index].sum(axis=1) / index.size


def group_sums(M: DenseMatrix, g: GroupAssignment) -> np.ndarray:
    """
    各群組的加總向量，回傳 d×c 矩陣

    欄位依標籤穩定排序後以 np.add.reduceat 一次加總，成本 O(d·n)
    """
    data = as_array(M)
    _check_assignment(data, g)
    order = np.argsort(g.labels, kind='stable')
    starts = np.concatenate(([0], np.cumsum(g.sizes())[:-1]))
    return np.add.reduceat(data[:, order], starts, axis=1)


def group_means(M: DenseMatrix, g: GroupAssignment) -> np.ndarray:
    """各群組的平均向量，回傳 d×c 矩陣"""
    return group_sums(M, g) / g.sizes()[np.newaxis, :]


def group_scatter(M: DenseMatrix, g: GroupAssignment) -> ScatterValue:
    """
    組內散度 Σ_i Σ_{j∈group i} ‖M_j − mean(group i)‖²

    等同於 Σ_i Tr(M d(p_i)(I − 11ᵀ/n_i) d(p_i) Mᵀ)
    """
    data = as_array(M)
    _check_assignment(data, g)
    # 以每組第一個欄位為參考點平移，相同欄位的組會得到精確的 0
    first = np.array([g.members(i)[0] for i in range(g.c)])
    shifted = data - data[:, first][:, g.labels]
    deviation = shifted - group_means(shifted, g)[:, g.labels]
    return ScatterValue(float(np.sum(deviation * deviation)))


def frob_norm(M: DenseMatrix) -> float:
    """Frobenius 範數"""
    return float(np.sqrt(np.sum(np.square(as_array(M)))))


def elementwise_l1(M: DenseMatrix) -> float:
    """逐元素 ℓ1 範數 Σ|m_ij|"""
    return float(np.sum(np.abs(as_array(M))))


def column_l2_norms(M: DenseMatrix) -> np.ndarray:
    """每個欄位的 ℓ2 範數"""
    data = as_array(M)
    return np.sqrt(np.sum(data * data, axis=0))


def l21_norm(M: DenseMatrix) -> float:
    """ℓ2,1 範數：欄位 ℓ2 範數之和"""
    return float(np.sum(column_l2_norms(M)))


def _check_assignment(data: np.ndarray, g: GroupAssignment):
    if g.n != data.shape[1]:
        raise DimensionMismatchError(f"分組長度 {g.n} 與矩陣欄數 {data.shape[1]} 不一致")

