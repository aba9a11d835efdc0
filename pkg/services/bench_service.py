"""
效能測試服務
固定迭代次數下，量測 RES-PCA 隨樣本數 n 或維度 d 變化的時間
"""

import logging
import time
from dataclasses import asdict, dataclass
from typing import List, Sequence

import numpy as np

from core.errors import ConfigError
from models.solver_model import SolverConfig, solve
from models.system_model import SystemModel
from services.synth_service import SynthSpec, synth_generate

logger = logging.getLogger(__name__)

BENCH_MODES = ('n', 'd')


@dataclass(frozen=True)
class BenchRecord:
    """單一尺寸的效能測試結果"""

    mode: str
    d: int
    n: int
    iters: int
    repeats: int
    wall_time: float
    mean_time: float
    stddev_time: float
    platform: str = ''
    cpu_count: int = 1

    def to_dict(self):
        return asdict(self)


def run_bench(mode: str, sizes: Sequence[int], repeats: int = 10, iters: int = 30,
              seed: int = 0, fixed_dim: int = 500, c: int = 3,
              sparsity: float = 0.05) -> List[BenchRecord]:
    """
    依序對每個尺寸產生一個合成問題，重複求解 repeats 次並記錄時間

    Args:
        mode: 'n' 改變樣本數 (d 固定為 fixed_dim)，'d' 改變維度 (n 固定為 fixed_dim)
        sizes: 尺寸清單
        repeats: 重複次數
        iters: 每次求解的固定迭代次數 (忽略收斂容忍度)

    Returns:
        List[BenchRecord]: 每個尺寸一筆
    """
    if mode not in BENCH_MODES:
        raise ConfigError(f"mode 必須是 {BENCH_MODES} 之一，收到 {mode!r}")
    if not sizes:
        raise ConfigError("尺寸清單不可為空")
    if repeats < 1 or iters < 1:
        raise ConfigError(f"repeats 與 iters 必須 ≥ 1，收到 {repeats}, {iters}")

    info = SystemModel.get_system_info()
    records = []
    for size in sizes:
        d, n = (fixed_dim, int(size)) if mode == 'n' else (int(size), fixed_dim)
        groups = min(c, n)
        problem = synth_generate(SynthSpec(d=d, n=n, c=groups, sparsity=sparsity, seed=seed))
        cfg = SolverConfig(c=groups, fixed_iters=iters, seed=seed)

        times = []
        for repeat in range(repeats):
            start = time.perf_counter()
            solve(problem.X, cfg)
            times.append(time.perf_counter() - start)
            logger.debug(f"bench {mode}: d={d}, n={n}, repeat={repeat}, time={times[-1]:.4f}s")

        record = BenchRecord(
            mode=mode,
            d=d,
            n=n,
            iters=iters,
            repeats=repeats,
            wall_time=float(np.sum(times)),
            mean_time=float(np.mean(times)),
            stddev_time=float(np.std(times)),
            platform=info['platform'],
            cpu_count=info['cpu_count'],
        )
        logger.info(f"bench {mode}: d={d}, n={n}, mean={record.mean_time:.4f}s, std={record.stddev_time:.4f}s")
        records.append(record)
    return records
