"""
PGM 影格服務
讀寫 8-bit P5 影格序列；每張影格依列優先展平成矩陣的一個欄位，像素值縮放到 [0, 1]
"""

import glob
import logging
import os
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from core.errors import (
    ConfigError,
    DimensionMismatchError,
    EmptyFileError,
    FormatError,
    TruncatedPayloadError,
    UnsupportedPgmError,
)
from core.matrix import DenseMatrix, as_array

logger = logging.getLogger(__name__)

FRAME_PATTERN = "frame_{index:05d}.pgm"


@dataclass(frozen=True)
class FrameStackMeta:
    """影格序列資訊"""

    frame_height: int
    frame_width: int
    frame_count: int
    sources: Tuple[str, ...] = ()

    @property
    def pixels(self) -> int:
        return self.frame_height * self.frame_width


def _header_tokens(raw: bytes, path: str):
    """解析 PGM 標頭的四個欄位，回傳 (tokens, 影像資料起點)"""
    tokens = []
    position = 0
    while len(tokens) < 4:
        while position < len(raw) and raw[position:position + 1].isspace():
            position += 1
        if position < len(raw) and raw[position:position + 1] == b'#':
            end = raw.find(b'\n', position)
            position = len(raw) if end < 0 else end + 1
            continue
        start = position
        while position < len(raw) and not raw[position:position + 1].isspace() and raw[position:position + 1] != b'#':
            position += 1
        if start == position:
            raise TruncatedPayloadError("PGM 標頭不完整", path=path)
        tokens.append(raw[start:position])
    # 標頭後恰有一個空白字元
    if position >= len(raw) or not raw[position:position + 1].isspace():
        raise TruncatedPayloadError("PGM 標頭後缺少影像資料", path=path)
    return tokens, position + 1


def read_pgm_frame(path: str) -> np.ndarray:
    """
    讀取單張 P5 影格

    Returns:
        np.ndarray: height×width 的 uint8 陣列
    """
    with open(path, 'rb') as f:
        raw = f.read()
    if not raw:
        raise EmptyFileError("PGM 檔案為空", path=path)
    if raw[:2] != b'P5':
        raise UnsupportedPgmError(f"只支援 P5 格式，收到 {raw[:2]!r}", path=path)
    tokens, offset = _header_tokens(raw, path)
    if tokens[0] != b"P5":
        raise UnsupportedPgmError(f"只支援 P5 格式，收到 {tokens[0]!r}", path=path)
    try:
        width, height, maxval = (int(token) for token in tokens[1:])
    except ValueError:
        raise FormatError(f"PGM 標頭不是整數: {tokens[1:]}", path=path) from None
    if width < 1 or height < 1:
        raise FormatError(f"PGM 尺寸不合法: {width}x{height}", path=path)
    if maxval != 255:
        raise UnsupportedPgmError(f"只支援 maxval=255，收到 {maxval}", path=path)
    size = width * height
    if len(raw) - offset < size:
        raise TruncatedPayloadError(f"影像資料不足: 預期 {size} bytes，實際 {len(raw) - offset} bytes", path=path)
    return np.frombuffer(raw, dtype=np.uint8, count=size, offset=offset).reshape((height, width))


def write_pgm_frame(path: str, frame: np.ndarray):
    """寫出單張 P5 影格 (uint8)"""
    frame = np.ascontiguousarray(frame, dtype=np.uint8)
    height, width = frame.shape
    with open(path, 'wb') as f:
        f.write(f"P5\n{width} {height}\n255\n".encode('ascii'))
        f.write(frame.tobytes())


def _stack_paths(source: Union[str, Sequence[str]]) -> List[str]:
    if isinstance(source, (str, os.PathLike)):
        source = os.fspath(source)
        if os.path.isdir(source):
            return sorted(glob.glob(os.path.join(source, '*.pgm')))
        return [source]
    return [os.fspath(path) for path in source]


def read_pgm_stack(source: Union[str, Iterable[str]]) -> Tuple[DenseMatrix, FrameStackMeta]:
    """
    讀取影格序列

    Args:
        source: 目錄 (依檔名字典序讀取 *.pgm) 或依序排列的檔案清單

    Returns:
        Tuple[DenseMatrix, FrameStackMeta]: (height·width)×frames 矩陣與影格資訊
    """
    paths = _stack_paths(source)
    if not paths:
        raise EmptyFileError("找不到任何 PGM 影格", path=str(source))

    columns = []
    shape = None
    for path in paths:
        frame = read_pgm_frame(path)
        if shape is None:
            shape = frame.shape
        elif frame.shape != shape:
            raise DimensionMismatchError(
                f"影格尺寸 {frame.shape[1]}x{frame.shape[0]} 與第一張 {shape[1]}x{shape[0]} 不一致",
                path=path)
        columns.append(frame.reshape(-1).astype(np.float64) / 255.0)

    matrix = DenseMatrix(np.column_stack(columns))
    meta = FrameStackMeta(frame_height=shape[0], frame_width=shape[1],
                          frame_count=len(paths), sources=tuple(paths))
    logger.info(f"讀取 {meta.frame_count} 張影格 ({meta.frame_width}x{meta.frame_height})")
    return matrix, meta


def to_pixels(values: np.ndarray, clamp: Tuple[float, float] = (0.0, 1.0)) -> np.ndarray:
    """把 [lo, hi] 仿射映射到 [0, 255]，截斷後四捨五入 (0.5 進位)"""
    lo, hi = clamp
    if not hi > lo:
        raise ConfigError(f"clamp 範圍不合法: [{lo}, {hi}]")
    scaled = (np.asarray(values, dtype=np.float64) - lo) / (hi - lo) * 255.0
    np.clip(scaled, 0.0, 255.0, out=scaled)
    return np.floor(scaled + 0.5).astype(np.uint8)


def write_pgm_stack(M: DenseMatrix, meta: FrameStackMeta, directory: str,
                    clamp: Tuple[float, float] = (0.0, 1.0),
                    pattern: str = FRAME_PATTERN) -> List[str]:
    """
    把每個欄位寫成一張 P5 影格

    Returns:
        List[str]: 依序寫出的檔案路徑
    """
    data = as_array(M)
    if data.shape[0] != meta.pixels:
        raise DimensionMismatchError(
            f"矩陣列數 {data.shape[0]} 與影格大小 {meta.frame_height}x{meta.frame_width} 不一致")
    os.makedirs(directory, exist_ok=True)
    pixels = to_pixels(data, clamp)
    paths = []
    for index in range(data.shape[1]):
        path = os.path.join(directory, pattern.format(index=index))
        write_pgm_frame(path, pixels[:, index].reshape((meta.frame_height, meta.frame_width)))
        paths.append(path)
    logger.info(f"寫出 {len(paths)} 張影格到 {directory}")
    return paths
