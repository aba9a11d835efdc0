"""
測試輔助函數
"""

import numpy as np

from core.matrix import DenseMatrix, GroupAssignment


def random_assignment(rng, n, c):
    """每組至少一個欄位的隨機分組"""
    labels = np.concatenate([np.arange(c), rng.integers(0, c, size=n - c)])
    rng.shuffle(labels)
    return GroupAssignment(labels, c)


def random_matrix(rng, d, n):
    return DenseMatrix(rng.standard_normal((d, n)))


def brute_force_scatter(data, labels):
    """逐欄迴圈計算組內散度"""
    total = 0.0
    for label in set(int(v) for v in labels):
        columns = [data[:, j] for j in range(data.shape[1]) if labels[j] == label]
        mean = sum(columns) / len(columns)
        total += sum(float(np.dot(col - mean, col - mean)) for col in columns)
    return total
