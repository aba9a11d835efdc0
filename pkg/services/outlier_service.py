"""
離群偵測服務
以稀疏項 S 的欄位 ℓ2 範數為離群分數
"""

import logging
from typing import Tuple

import numpy as np

from core.errors import ConfigError
from core.matrix import DenseMatrix, column_l2_norms

logger = logging.getLogger(__name__)


def outlier_scores(S: DenseMatrix, threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    計算離群分數並標記分數 ≥ threshold 的欄位

    Returns:
        Tuple[np.ndarray, np.ndarray]: (每欄分數, 被標記的欄位索引)
    """
    if threshold < 0:
        raise ConfigError(f"閾值必須 ≥ 0，收到 {threshold}")
    scores = column_l2_norms(S)
    flagged = np.flatnonzero(scores >= threshold)
    logger.info(f"離群分數: threshold={threshold:g}, 標記 {flagged.size}/{scores.size} 個欄位")
    return scores, flagged


def gap_threshold(scores: np.ndarray) -> float:
    """排序後相鄰分數差距最大處的中點"""
    ordered = np.sort(np.asarray(scores, dtype=np.float64))
    if ordered.size < 2:
        return float(ordered[0]) if ordered.size else 0.0
    gaps = np.diff(ordered)
    k = int(np.argmax(gaps))
    return float(0.5 * (ordered[k] + ordered[k + 1]))
