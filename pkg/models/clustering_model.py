"""
分群模型
以 K-means 求解分組指示向量 p_i 的子問題 (k-means++ 初始化、Lloyd 迭代)
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.errors import ConfigError, DimensionMismatchError
from core.matrix import DenseMatrix, GroupAssignment, as_array, group_means, group_scatter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KMeansConfig:
    """
    K-means 參數

    min_cluster_size > 1 時，成員不足的群組會被解散並由最分散的群組切出一半補上
    """

    c: int
    max_iters: int = 100
    n_restarts: int = 5
    seed: int = 0
    tol: float = 1e-6
    min_cluster_size: int = 1

    def __post_init__(self):
        if int(self.c) < 1:
            raise ConfigError(f"群組數 c 必須 ≥ 1，收到 {self.c}")
        if int(self.max_iters) < 1:
            raise ConfigError(f"max_iters 必須 ≥ 1，收到 {self.max_iters}")
        if int(self.n_restarts) < 1:
            raise ConfigError(f"n_restarts 必須 ≥ 1，收到 {self.n_restarts}")
        if not self.tol > 0:
            raise ConfigError(f"tol 必須 > 0，收到 {self.tol}")
        if int(self.min_cluster_size) < 1:
            raise ConfigError(f"min_cluster_size 必須 ≥ 1，收到 {self.min_cluster_size}")


@dataclass(frozen=True)
class KMeansResult:
    """K-means 結果"""

    assignment: GroupAssignment
    centroids: np.ndarray
    inertia: float
    iters_run: int


def squared_distances(data: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """
    每個欄位到每個中心的平方距離

    Returns:
        np.ndarray: n×k 距離矩陣
    """
    column_sq = np.sum(data * data, axis=0)
    centroid_sq = np.sum(centroids * centroids, axis=0)
    dist = column_sq[:, np.newaxis] - 2.0 * (data.T @ centroids) + centroid_sq[np.newaxis, :]
    np.maximum(dist, 0.0, out=dist)
    return dist


def inertia(M: DenseMatrix, centroids: np.ndarray) -> float:
    """Σ_j min_k ‖M_j − C_k‖²，即 Lloyd 步驟前的目標值"""
    data = as_array(M)
    centroids = np.asarray(centroids, dtype=np.float64)
    best = np.full(data.shape[1], np.inf)
    for k in range(centroids.shape[1]):
        diff = data - centroids[:, [k]]
        np.minimum(best, np.sum(diff * diff, axis=0), out=best)
    return float(np.sum(best))


def kmeans_pp_init(M: DenseMatrix, cfg: KMeansConfig, rng: np.random.Generator) -> np.ndarray:
    """
    k-means++ 初始化：依距離平方加權抽樣選出 c 個不同的欄位作為中心

    Args:
        M: d×n 資料矩陣
        cfg: K-means 參數
        rng: numpy 亂數產生器

    Returns:
        np.ndarray: d×c 的初始中心
    """
    data = as_array(M)
    n = data.shape[1]
    if cfg.c > n:
        raise DimensionMismatchError(f"群組數 c={cfg.c} 大於欄數 n={n}")

    chosen = [int(rng.integers(n))]
    closest = squared_distances(data, data[:, chosen])[:, 0]
    available = np.ones(n, dtype=bool)
    available[chosen[0]] = False

    for _ in range(1, cfg.c):
        weights = np.where(available, closest, 0.0)
        total = weights.sum()
        if total > 0:
            pick = int(rng.choice(n, p=weights / total))
        else:
            # 剩餘欄位都與已選中心重合
            pick = int(rng.choice(np.flatnonzero(available)))
        chosen.append(pick)
        available[pick] = False
        np.minimum(closest, squared_distances(data, data[:, [pick]])[:, 0], out=closest)

    return np.array(data[:, chosen], order='F')


def _repair_empty(dist: np.ndarray, labels: np.ndarray, c: int) -> np.ndarray:
    """把離自身中心最遠的欄位移到空群組"""
    labels = labels.copy()
    sizes = np.bincount(labels, minlength=c)
    own = dist[np.arange(labels.size), labels]
    for empty in np.flatnonzero(sizes == 0):
        candidates = np.flatnonzero(sizes[labels] > 1)
        far = candidates[np.argmax(own[candidates])]
        logger.debug(f"群組 {empty} 為空，移入欄位 {far}")
        sizes[labels[far]] -= 1
        sizes[empty] += 1
        labels[far] = empty
        own[far] = 0.0
    return labels


def lloyd_step(M: DenseMatrix, centroids: np.ndarray) -> Tuple[GroupAssignment, np.ndarray]:
    """
    一次 Lloyd 迭代：指派到最近中心 (同距離取最小索引)，再以組平均更新中心

    Returns:
        Tuple[GroupAssignment, np.ndarray]: 新指派與 d×c 新中心
    """
    data = as_array(M)
    centroids = np.asarray(centroids, dtype=np.float64)
    c = centroids.shape[1]
    if c < 1:
        raise ConfigError("至少需要一個中心")
    if c > data.shape[1]:
        raise DimensionMismatchError(f"中心數 {c} 大於欄數 {data.shape[1]}")
    dist = squared_distances(data, centroids)
    labels = np.argmin(dist, axis=1)
    if np.bincount(labels, minlength=c).min() == 0:
        labels = _repair_empty(dist, labels, c)
    assignment = GroupAssignment(labels, c)
    return assignment, group_means(data, assignment)


def _occupied_means(data: np.ndarray, labels: np.ndarray, c: int):
    """非空群組的平均，回傳 (平均矩陣, 非空群組編號, 壓縮後的標籤)"""
    occupied = np.flatnonzero(np.bincount(labels, minlength=c))
    compact = np.searchsorted(occupied, labels)
    return group_means(data, GroupAssignment(compact, occupied.size)), occupied, compact


def _split_small_clusters(data: np.ndarray, labels: np.ndarray, c: int,
                          min_size: int) -> Tuple[np.ndarray, bool]:
    """
    修補成員少於 min_size 的群組

    該群組的成員先改派到最近的其他中心，再把組內散度最大的群組沿
    「最遠欄位 − 組平均」方向，依投影排序切成兩半，上半部補給該群組。
    沒有群組大到可以切成兩個合格群組時停止。

    Returns:
        Tuple[np.ndarray, bool]: (新標籤, 是否有變更)
    """
    labels = np.array(labels, dtype=np.int64, copy=True)
    changed = False
    for _ in range(c):
        sizes = np.bincount(labels, minlength=c)
        small = np.flatnonzero(sizes < min_size)
        if small.size == 0:
            break
        k = int(small[0])
        if np.count_nonzero(sizes[np.arange(c) != k] >= 2 * min_size) == 0:
            break

        means, occupied, _ = _occupied_means(data, labels, c)
        members = np.flatnonzero(labels == k)
        if members.size:
            keep = occupied != k
            nearest = np.argmin(squared_distances(data[:, members], means[:, keep]), axis=1)
            labels[members] = occupied[keep][nearest]

        means, occupied, compact = _occupied_means(data, labels, c)
        own = np.sum(np.square(data - means[:, compact]), axis=0)
        spread = np.bincount(labels, weights=own, minlength=c)
        spread[np.bincount(labels, minlength=c) < 2 * min_size] = -np.inf
        target = int(np.argmax(spread))

        group = np.flatnonzero(labels == target)
        offsets = data[:, group] - data[:, group].mean(axis=1, keepdims=True)
        direction = offsets[:, np.argmax(np.sum(offsets * offsets, axis=0))]
        order = np.argsort(-(direction @ offsets), kind='stable')
        labels[group[order[:group.size // 2]]] = k
        changed = True
        logger.debug(f"群組 {k} 少於 {min_size} 個欄位，改由群組 {target} 切出 {group.size // 2} 個欄位")
    return labels, changed


def _run_lloyd(data: np.ndarray, centroids: np.ndarray, cfg: KMeansConfig) -> KMeansResult:
    assignment = None
    iters = 0
    repairs = 0
    for iters in range(1, cfg.max_iters + 1):
        assignment, updated = lloyd_step(data, centroids)
        if repairs < cfg.c and assignment.sizes().min() < cfg.min_cluster_size:
            labels, changed = _split_small_clusters(data, assignment.labels, cfg.c, cfg.min_cluster_size)
            if changed:
                repairs += 1
                assignment = GroupAssignment(labels, cfg.c)
                centroids = group_means(data, assignment)
                continue
        movement = np.linalg.norm(updated - centroids)
        scale = max(np.linalg.norm(centroids), np.finfo(float).tiny)
        centroids = updated
        if movement / scale < cfg.tol:
            break

    # Lloyd 收斂回小群組時，最後再修補一次 (結果不一定是 Lloyd 的固定點)
    if assignment.sizes().min() < cfg.min_cluster_size:
        labels, changed = _split_small_clusters(data, assignment.labels, cfg.c, cfg.min_cluster_size)
        if changed:
            assignment = GroupAssignment(labels, cfg.c)
            centroids = group_means(data, assignment)
    return KMeansResult(
        assignment=assignment,
        centroids=centroids,
        inertia=group_scatter(data, assignment).value,
        iters_run=iters,
    )


def kmeans(M: DenseMatrix, cfg: KMeansConfig,
           init_assignment: Optional[GroupAssignment] = None) -> KMeansResult:
    """
    K-means 分群

    Args:
        M: d×n 資料矩陣 (對欄位分群)
        cfg: K-means 參數
        init_assignment: 給定時由該分組的平均作為暖啟動中心，只跑一次

    Returns:
        KMeansResult: 所有重啟中 inertia 最小者
    """
    data = as_array(M)
    n = data.shape[1]
    if cfg.c > n:
        raise DimensionMismatchError(f"群組數 c={cfg.c} 大於欄數 n={n}")

    if init_assignment is not None:
        if init_assignment.c != cfg.c:
            raise DimensionMismatchError(f"暖啟動分組 c={init_assignment.c} 與設定 c={cfg.c} 不一致")
        return _run_lloyd(data, group_means(data, init_assignment), cfg)

    best = None
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_restarts)
    for restart, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        result = _run_lloyd(data, kmeans_pp_init(data, cfg, rng), cfg)
        logger.debug(f"K-means 重啟 {restart}: inertia={result.inertia:.6g}, iters={result.iters_run}")
        if best is None or result.inertia < best.inertia:
            best = result
    return best
