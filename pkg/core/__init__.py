"""
核心層 (Core)
矩陣容器、範數與組內散度
"""

from .matrix import (
    DenseMatrix,
    GroupAssignment,
    ScatterValue,
    column_mean,
    group_means,
    group_sums,
    group_scatter,
    frob_norm,
    elementwise_l1,
    column_l2_norms,
    l21_norm,
)

__all__ = [
    'DenseMatrix',
    'GroupAssignment',
    'ScatterValue',
    'column_mean',
    'group_means',
    'group_sums',
    'group_scatter',
    'frob_norm',
    'elementwise_l1',
    'column_l2_norms',
    'l21_norm',
]
