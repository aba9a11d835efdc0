"""
診斷模型
分解結果的外部診斷指標 (求解器本身不會呼叫)
"""

import numpy as np

from core.errors import ConfigError, DimensionMismatchError
from core.matrix import DenseMatrix, as_array, frob_norm


def recovered_rank(L: DenseMatrix, energy: float = 0.995) -> int:
    """
    以奇異值能量估計秩：最小的 r 使前 r 個奇異值平方和 ≥ energy × 總和

    此函數使用 SVD，只作為報告用途
    """
    if not 0 < energy <= 1:
        raise ConfigError(f"energy 必須介於 (0, 1]，收到 {energy}")
    singular = np.linalg.svd(as_array(L), compute_uv=False)
    spectrum = singular * singular
    total = spectrum.sum()
    if total == 0:
        return 0
    cumulative = np.cumsum(spectrum) / total
    return int(np.searchsorted(cumulative, energy - 1e-12) + 1)


def sparsity_ratio(S: DenseMatrix, cutoff: float = 0.0) -> float:
    """‖S‖₀ / (d·n)，計算 |S_ij| > cutoff 的元素"""
    data = as_array(S)
    return float(np.count_nonzero(np.abs(data) > cutoff)) / data.size


def support_precision_recall(S: DenseMatrix, S0: DenseMatrix, cutoff: float = 1e-6):
    """
    支撐集的 precision / recall

    Returns:
        Tuple[float, float]: (precision, recall)；分母為零時記為 1.0
    """
    recovered = np.abs(as_array(S)) > cutoff
    truth = np.abs(as_array(S0)) > cutoff
    if recovered.shape != truth.shape:
        raise DimensionMismatchError(f"形狀不一致: {recovered.shape} vs {truth.shape}")
    hits = np.count_nonzero(recovered & truth)
    precision = hits / np.count_nonzero(recovered) if recovered.any() else 1.0
    recall = hits / np.count_nonzero(truth) if truth.any() else 1.0
    return float(precision), float(recall)


def relative_error(A: DenseMatrix, B: DenseMatrix) -> float:
    """‖A − B‖_F / ‖B‖_F"""
    reference = frob_norm(B)
    if reference == 0:
        raise ConfigError("參考矩陣為零，相對誤差無定義")
    return frob_norm(as_array(A) - as_array(B)) / reference
