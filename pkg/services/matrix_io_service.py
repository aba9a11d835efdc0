"""
矩陣檔案服務
CSV 與 RESPCA1 二進位格式的讀寫，以及依副檔名/魔術位元組的自動分派
"""

import csv
import logging
import math
import os
import struct
from typing import List

import numpy as np

from core.errors import (
    BadMagicError,
    EmptyFileError,
    FormatError,
    NonNumericCellError,
    RaggedRowError,
    TrailingDataError,
    TruncatedPayloadError,
)
from core.matrix import DenseMatrix, GroupAssignment

logger = logging.getLogger(__name__)

MAGIC = b"RESPCA1\0"
HEADER = struct.Struct('<QQ')
HEADER_SIZE = len(MAGIC) + HEADER.size


def read_csv_matrix(path: str, delimiter: str = ',') -> DenseMatrix:
    """
    讀取純數值 CSV (無標題列)，檔案第 r 列第 c 欄對應矩陣元素 (r, c)

    空白行會被略過

    Raises:
        EmptyFileError: 沒有任何資料列
        RaggedRowError: 列長度與第一列不同
        NonNumericCellError: 儲存格不是有限的數值
    """
    rows: List[List[float]] = []
    width = None
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f, delimiter=delimiter)
        for record in reader:
            line = reader.line_num
            if not record or all(not cell.strip() for cell in record):
                continue
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise RaggedRowError(f"第 {line} 行有 {len(record)} 個欄位，預期 {width}", path=path, line=line)
            values = []
            for column, cell in enumerate(record, start=1):
                try:
                    value = float(cell.strip())
                except ValueError:
                    raise NonNumericCellError(f"第 {column} 欄不是數值: {cell!r}",
                                              path=path, line=line, column=column) from None
                if not math.isfinite(value):
                    raise NonNumericCellError(f"第 {column} 欄不是有限值: {cell!r}",
                                              path=path, line=line, column=column)
                values.append(value)
            rows.append(values)

    if not rows:
        raise EmptyFileError("CSV 檔案沒有資料", path=path)
    matrix = DenseMatrix.from_rows(rows)
    logger.info(f"讀取 CSV 矩陣 {path}: {matrix.rows}x{matrix.cols}")
    return matrix


def write_csv_matrix(path: str, M: DenseMatrix, delimiter: str = ','):
    """以完整精度 (repr) 寫出 CSV，重新讀取後數值完全相同"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for row in M.data:
            f.write(delimiter.join(repr(float(value)) for value in row))
            f.write('\n')
    logger.info(f"寫入 CSV 矩陣 {path}: {M.rows}x{M.cols}")


def write_binary_matrix(path: str, M: DenseMatrix):
    """
    寫出 RESPCA1 二進位格式

    格式: 魔術位元組 "RESPCA1\\0" (8 bytes)、rows 與 cols (各為 uint64 LE)，
    接著 rows×cols 個 float64 LE，以 column-major 排列
    """
    payload = np.asarray(M.data, dtype='<f8').tobytes(order='F')
    with open(path, 'wb') as f:
        f.write(MAGIC)
        f.write(HEADER.pack(M.rows, M.cols))
        f.write(payload)
    logger.info(f"寫入二進位矩陣 {path}: {M.rows}x{M.cols}")


def read_binary_matrix(path: str) -> DenseMatrix:
    """
    讀取 RESPCA1 二進位格式

    Raises:
        BadMagicError: 魔術位元組不符
        TruncatedPayloadError: 標頭或資料長度不足
        TrailingDataError: 資料之後還有多餘位元組
    """
    with open(path, 'rb') as f:
        raw = f.read()
    if raw[:len(MAGIC)] != MAGIC:
        raise BadMagicError(f"魔術位元組錯誤: {raw[:len(MAGIC)]!r}", path=path)
    if len(raw) < HEADER_SIZE:
        raise TruncatedPayloadError(f"標頭不完整 ({len(raw)} bytes)", path=path)
    rows, cols = HEADER.unpack_from(raw, len(MAGIC))
    if rows < 1 or cols < 1:
        raise FormatError(f"矩陣維度不合法: {rows}x{cols}", path=path)
    expected = HEADER_SIZE + rows * cols * 8
    if len(raw) < expected:
        raise TruncatedPayloadError(f"資料不完整: 預期 {expected} bytes，實際 {len(raw)} bytes", path=path)
    if len(raw) > expected:
        raise TrailingDataError(f"資料後有 {len(raw) - expected} 個多餘位元組", path=path)
    values = np.frombuffer(raw, dtype='<f8', offset=HEADER_SIZE, count=rows * cols)
    matrix = DenseMatrix(values.reshape((rows, cols), order='F'))
    logger.info(f"讀取二進位矩陣 {path}: {rows}x{cols}")
    return matrix


def detect_format(path: str) -> str:
    """
    判斷檔案格式

    Returns:
        str: 'pgm' (目錄)、'bin' 或 'csv'
    """
    if os.path.isdir(path):
        return 'pgm'
    extension = os.path.splitext(path)[1].lower()
    if extension == '.csv':
        return 'csv'
    if extension == '.bin':
        return 'bin'
    if os.path.exists(path):
        with open(path, 'rb') as f:
            if f.read(len(MAGIC)) == MAGIC:
                return 'bin'
    return 'csv'


def read_matrix(path: str) -> DenseMatrix:
    """依格式讀取 CSV 或二進位矩陣 (PGM 目錄請使用 pgm_service)"""
    kind = detect_format(path)
    if kind == 'pgm':
        raise FormatError("PGM 影格目錄請使用 read_pgm_stack", path=path)
    return read_binary_matrix(path) if kind == 'bin' else read_csv_matrix(path)


def write_matrix(path: str, M: DenseMatrix, kind: str = None):
    """依格式寫出矩陣，kind 未指定時依副檔名判斷"""
    kind = kind or ('bin' if path.lower().endswith('.bin') else 'csv')
    if kind == 'bin':
        write_binary_matrix(path, M)
    else:
        write_csv_matrix(path, M)


def write_labels_csv(path: str, assignment: GroupAssignment):
    """每行一個群組標籤"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for label in assignment.labels:
            f.write(f"{int(label)}\n")
    logger.info(f"寫入分組標籤 {path}: n={assignment.n}, c={assignment.c}")


def read_labels_csv(path: str) -> GroupAssignment:
    labels = []
    with open(path, 'r', encoding='utf-8') as f:
        for line, text in enumerate(f, start=1):
            text = text.strip()
            if not text:
                continue
            try:
                labels.append(int(text))
            except ValueError:
                raise NonNumericCellError(f"標籤不是整數: {text!r}", path=path, line=line, column=1) from None
    if not labels:
        raise EmptyFileError("標籤檔案沒有資料", path=path)
    return GroupAssignment.from_labels(labels)
