"""
報告視圖
標準化求解報告 (JSON lines) 與效能測試 CSV 的輸出格式
"""

import csv
import json
from datetime import datetime
from typing import Any, Dict, IO, List, Optional

from models.solver_model import DecompositionResult, IterationRecord


class ReportView:
    """求解報告視圖類：每次迭代一行 JSON，最後一行為總結"""

    @staticmethod
    def iteration(record: IterationRecord) -> Dict[str, Any]:
        """單次迭代紀錄"""
        return {
            'type': 'iteration',
            'iter': record.iter,
            'feas': record.residuals.feas,
            'dL': record.residuals.dL,
            'dS': record.residuals.dS,
            'rho': record.rho,
            'objective': record.objective,
            'kmeans_inertia': record.kmeans_inertia,
            'kmeans_iters': record.kmeans_iters
        }

    @staticmethod
    def summary(result: DecompositionResult, **kwargs) -> Dict[str, Any]:
        """最終總結"""
        final = result.report.final
        response = {
            'type': 'summary',
            'converged': result.report.converged,
            'iters': result.report.iters,
            'lambda': result.lam,
            'd': result.L.rows,
            'n': result.L.cols,
            'c': result.assignment.c,
            'group_sizes': result.assignment.sizes().tolist(),
            'feas': final.feas if final else None,
            'dL': final.dL if final else None,
            'dS': final.dS if final else None,
            'objective': result.report.objective_trace[-1] if result.report.iters else None,
            'wall_time': result.wall_time,
            'kmeans_time': result.kmeans_time,
            'timestamp': datetime.now().isoformat()
        }

        # 添加其他資訊
        response.update(kwargs)

        return response

    @staticmethod
    def write_line(stream: IO[str], payload: Dict[str, Any]):
        stream.write(json.dumps(payload, ensure_ascii=False))
        stream.write('\n')

    @staticmethod
    def read_report(path: str) -> List[Dict[str, Any]]:
        """讀回 JSON lines 報告"""
        with open(path, 'r', encoding='utf-8') as f:
            return [json.loads(line) for line in f if line.strip()]


class BenchView:
    """效能測試輸出視圖類"""

    FIELDS = ['mode', 'd', 'n', 'iters', 'repeats', 'wall_time', 'mean_time', 'stddev_time',
              'platform', 'cpu_count']

    @staticmethod
    def write_csv(stream: IO[str], records: List[Any]):
        writer = csv.DictWriter(stream, fieldnames=BenchView.FIELDS, lineterminator='\n')
        writer.writeheader()
        for record in records:
            writer.writerow(record.to_dict())

    @staticmethod
    def ratios(records: List[Any]) -> List[Optional[float]]:
        """相鄰尺寸的平均時間比"""
        return [None] + [current.mean_time / previous.mean_time if previous.mean_time > 0 else None
                         for previous, current in zip(records, records[1:])]
