"""
主控台視圖
命令列輸出 (標準輸出的結果表格與標準錯誤的訊息)
"""

import sys
from typing import IO, Optional, Sequence

import numpy as np


class ConsoleView:
    """主控台輸出視圖類"""

    @staticmethod
    def banner(title: str, stream: IO[str] = None):
        stream = stream or sys.stderr
        print("=" * 60, file=stream)
        print(title, file=stream)
        print("=" * 60, file=stream)

    @staticmethod
    def error(message: str, stream: IO[str] = None):
        """錯誤訊息 (標準錯誤)"""
        print(f"錯誤: {message}", file=stream or sys.stderr)

    @staticmethod
    def outlier_table(scores: np.ndarray, flagged: Sequence[int], threshold: Optional[float],
                      stream: IO[str] = None):
        """
        每行輸出「欄位索引 分數 [*]」，依分數由大到小排列

        threshold 為 None 時不標記，只列出所有分數
        """
        stream = stream or sys.stdout
        flagged_set = set(int(j) for j in flagged)
        header = f"# threshold={threshold:g}" if threshold is not None else "# threshold=none"
        print(header, file=stream)
        print(f"# flagged={len(flagged_set)} columns={len(scores)}", file=stream)
        for j in np.argsort(-np.asarray(scores), kind='stable'):
            mark = ' *' if int(j) in flagged_set else ''
            print(f"{int(j)} {float(scores[j]):.6g}{mark}", file=stream)

    @staticmethod
    def bench_table(records, ratios, stream: IO[str] = None):
        """效能測試摘要 (標準錯誤)"""
        stream = stream or sys.stderr
        print(f"{'mode':>4} {'d':>7} {'n':>7} {'mean(s)':>10} {'std(s)':>10} {'ratio':>7}", file=stream)
        for record, ratio in zip(records, ratios):
            ratio_text = f"{ratio:.2f}" if ratio is not None else '-'
            print(f"{record.mode:>4} {record.d:>7} {record.n:>7} {record.mean_time:>10.4f} "
                  f"{record.stddev_time:>10.4f} {ratio_text:>7}", file=stream)
