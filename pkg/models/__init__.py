"""
模型層 (Models)
處理數值演算法：K-means 分群、RES-PCA 求解器與診斷
"""

from .clustering_model import KMeansConfig, KMeansResult, kmeans, kmeans_pp_init, lloyd_step
from .solver_model import (
    SolverConfig,
    SolverState,
    ConvergenceReport,
    DecompositionResult,
    SparseNorm,
    solve,
)

__all__ = [
    'KMeansConfig',
    'KMeansResult',
    'kmeans',
    'kmeans_pp_init',
    'lloyd_step',
    'SolverConfig',
    'SolverState',
    'ConvergenceReport',
    'DecompositionResult',
    'SparseNorm',
    'solve',
]
