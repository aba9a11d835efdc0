"""
合成資料服務
產生保留真值的低秩 + 稀疏矩陣、離群欄位資料集與合成影片場景
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from core.errors import ConfigError
from core.matrix import DenseMatrix, GroupAssignment
from services.pgm_service import FrameStackMeta

logger = logging.getLogger(__name__)

SCENE_KINDS = ('static', 'moving_square', 'two_backgrounds')


@dataclass(frozen=True)
class SynthSpec:
    """
    合成資料規格

    outlier_columns > 0 時，另外在隨機欄位加入整欄的離群值
    (數值均勻分布於 ±outlier_magnitude)
    """

    d: int
    n: int
    c: int = 3
    sparsity: float = 0.05
    magnitude: float = 1.0
    noise_sigma: float = 0.0
    seed: int = 0
    outlier_columns: int = 0
    outlier_magnitude: float = 10.0

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ConfigError(f"維度必須 ≥ 1，收到 d={self.d}, n={self.n}")
        if not 1 <= self.c <= self.n:
            raise ConfigError(f"群組數必須介於 1 與 n={self.n}，收到 c={self.c}")
        if not 0 <= self.sparsity < 1:
            raise ConfigError(f"sparsity 必須介於 [0, 1)，收到 {self.sparsity}")
        if self.magnitude < 0 or self.noise_sigma < 0 or self.outlier_magnitude < 0:
            raise ConfigError("magnitude、noise_sigma 與 outlier_magnitude 不可為負")
        if not 0 <= self.outlier_columns <= self.n:
            raise ConfigError(f"outlier_columns 必須介於 0 與 n={self.n}，收到 {self.outlier_columns}")


@dataclass(frozen=True)
class SynthResult:
    """合成結果與真值"""

    X: DenseMatrix
    L0: DenseMatrix
    S0: DenseMatrix
    assignment: GroupAssignment
    outlier_indices: np.ndarray


def group_sizes(n: int, c: int) -> np.ndarray:
    """大小相差不超過 1 的 c 個群組"""
    sizes = np.full(c, n // c, dtype=np.int64)
    sizes[:n % c] += 1
    return sizes


def synth_generate(spec: SynthSpec) -> SynthResult:
    """
    產生 X = L0 + S0 + noise

    L0 中同一群組的欄位完全相同 (基底向量 u_i ~ U[0,1]^d)；
    S0 恰有 round(sparsity·d·n) 個非零元素，數值為 ±U[magnitude/2, magnitude]
    """
    rng = np.random.default_rng(spec.seed)
    d, n = spec.d, spec.n

    bases = rng.uniform(0.0, 1.0, size=(d, spec.c))
    labels = np.repeat(np.arange(spec.c), group_sizes(n, spec.c))
    L0 = bases[:, labels]

    S0 = np.zeros((d, n))
    count = int(round(spec.sparsity * d * n))
    if count:
        positions = rng.choice(d * n, size=count, replace=False)
        values = rng.uniform(spec.magnitude / 2.0, spec.magnitude, size=count)
        signs = rng.choice(np.array([-1.0, 1.0]), size=count)
        rows, cols = np.unravel_index(positions, (d, n), order='F')
        S0[rows, cols] = signs * values

    outliers = np.sort(rng.choice(n, size=spec.outlier_columns, replace=False)) \
        if spec.outlier_columns else np.zeros(0, dtype=np.int64)
    if outliers.size:
        S0[:, outliers] = rng.uniform(-spec.outlier_magnitude, spec.outlier_magnitude,
                                      size=(d, outliers.size))

    X = L0 + S0
    if spec.noise_sigma > 0:
        X = X + spec.noise_sigma * rng.standard_normal((d, n))

    logger.info(f"產生合成資料: d={d}, n={n}, c={spec.c}, nnz(S0)={np.count_nonzero(S0)}, "
                f"outliers={outliers.size}")
    return SynthResult(
        X=DenseMatrix(X),
        L0=DenseMatrix(L0),
        S0=DenseMatrix(S0),
        assignment=GroupAssignment(labels, spec.c),
        outlier_indices=outliers,
    )


def synth_outlier_set(d: int, n_inliers: int = 190, n_outliers: int = 10,
                      noise_sigma: float = 0.01, seed: int = 0) -> Tuple[DenseMatrix, np.ndarray]:
    """
    近乎相同的欄位 (同一向量加上小雜訊) 混入完全不同的離群欄位

    Returns:
        Tuple[DenseMatrix, np.ndarray]: 資料矩陣與離群欄位索引 (已排序)
    """
    if d < 1 or n_inliers < 1 or n_outliers < 0:
        raise ConfigError(f"參數不合法: d={d}, n_inliers={n_inliers}, n_outliers={n_outliers}")
    rng = np.random.default_rng(seed)
    n = n_inliers + n_outliers
    base = rng.uniform(0.0, 1.0, size=(d, 1))
    X = base + noise_sigma * rng.standard_normal((d, n))
    outliers = np.sort(rng.choice(n, size=n_outliers, replace=False))
    X[:, outliers] = rng.uniform(0.0, 1.0, size=(d, n_outliers))
    return DenseMatrix(X), outliers


def synth_scene(height: int, width: int, frames: int, kind: str = 'moving_square',
                seed: int = 0) -> Tuple[DenseMatrix, FrameStackMeta, Dict[str, np.ndarray]]:
    """
    合成影片場景 (像素值介於 [0, 1])

    Args:
        kind: 'static' 靜態畫面、'moving_square' 靜態背景加上移動的亮方塊、
              'two_backgrounds' 每 5 張影格切換一次的兩種背景

    Returns:
        Tuple: (資料矩陣, 影格資訊, 真值 {'background': d×n, 'mask': d×n bool})
    """
    if kind not in SCENE_KINDS:
        raise ConfigError(f"未知的場景類型: {kind}，可用: {', '.join(SCENE_KINDS)}")
    if height < 4 or width < 4 or frames < 1:
        raise ConfigError(f"場景尺寸過小: {width}x{height}x{frames}")
    rng = np.random.default_rng(seed)
    d = height * width

    rows, cols = np.mgrid[0:height, 0:width]
    gradient = 0.1 + 0.2 * (rows + cols) / (height + width - 2)
    texture = rng.uniform(0.0, 0.1, size=(height, width))
    first = (gradient + texture).reshape(-1)

    background = np.repeat(first[:, np.newaxis], frames, axis=1)
    mask = np.zeros((d, frames), dtype=bool)

    if kind == 'two_backgrounds':
        # 開燈後的背景
        second = np.clip(first + 0.4, 0.0, 1.0)
        lit = (np.arange(frames) // 5) % 2 == 1
        background[:, lit] = second[:, np.newaxis]
    elif kind == 'moving_square':
        side = max(2, min(height, width) // 5)
        top = (height - side) // 2
        span = width - side + 1
        for t in range(frames):
            left = (2 * t) % span
            square = np.zeros((height, width), dtype=bool)
            square[top:top + side, left:left + side] = True
            mask[:, t] = square.reshape(-1)

    scene = np.where(mask, 1.0, background)
    # 量化成 8-bit 像素，與寫出後再讀回的資料一致
    scene = np.floor(scene * 255.0 + 0.5) / 255.0
    background = np.floor(background * 255.0 + 0.5) / 255.0
    meta = FrameStackMeta(frame_height=height, frame_width=width, frame_count=frames)
    return DenseMatrix(scene), meta, {'background': background, 'mask': mask}
