#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
RES-PCA 求解器模型
以 ALM (增廣拉格朗日法) 交替更新 L、分組 p、S 與乘子 Θ / 罰參數 ρ，
每一步的成本都與資料大小 d·n 成線性關係，不使用 SVD
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.errors import ConfigError, DimensionMismatchError, NonFiniteValueError, SolverError
from core.matrix import (
    DenseMatrix,
    GroupAssignment,
    as_array,
    column_l2_norms,
    elementwise_l1,
    frob_norm,
    group_scatter,
    group_sums,
    l21_norm,
)
from models.clustering_model import KMeansConfig, kmeans

logger = logging.getLogger(__name__)

# p 更新時每個群組至少的欄位數
MIN_GROUP_SIZE = 2


class SparseNorm(str, Enum):
    """稀疏項 S 的範數"""

    L1 = 'l1'
    L21 = 'l21'


@dataclass(frozen=True)
class SolverConfig:
    """
    求解器參數

    lam 為 None 時自動取 √max(n,d)；fixed_iters 設定時忽略 tol 與 max_iter，
    固定跑該次數 (效能測試用)
    """

    c: int = 1
    lam: Optional[float] = None
    rho0: float = 1e-4
    kappa: float = 1.5
    tol: float = 1e-3
    max_iter: int = 500
    sparse_norm: SparseNorm = SparseNorm.L1
    kmeans: Optional[KMeansConfig] = None
    fixed_iters: Optional[int] = None
    rho_max: float = 1e12
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'sparse_norm', SparseNorm(self.sparse_norm))
        if int(self.c) < 1:
            raise ConfigError(f"群組數 c 必須 ≥ 1，收到 {self.c}")
        if self.lam is not None and not self.lam > 0:
            raise ConfigError(f"lambda 必須 > 0，收到 {self.lam}")
        if not self.rho0 > 0:
            raise ConfigError(f"rho0 必須 > 0，收到 {self.rho0}")
        if not self.kappa > 1:
            raise ConfigError(f"kappa 必須 > 1，收到 {self.kappa}")
        if not self.tol > 0:
            raise ConfigError(f"tol 必須 > 0，收到 {self.tol}")
        if int(self.max_iter) < 1:
            raise ConfigError(f"max_iter 必須 ≥ 1，收到 {self.max_iter}")
        if self.fixed_iters is not None and int(self.fixed_iters) < 1:
            raise ConfigError(f"fixed_iters 必須 ≥ 1，收到 {self.fixed_iters}")
        if not self.rho_max >= self.rho0:
            raise ConfigError(f"rho_max 必須 ≥ rho0，收到 {self.rho_max}")
        if self.kmeans is not None and self.kmeans.c != self.c:
            raise ConfigError(f"K-means 的 c={self.kmeans.c} 與求解器 c={self.c} 不一致")

    def kmeans_config(self) -> KMeansConfig:
        if self.kmeans is not None:
            return self.kmeans
        return KMeansConfig(c=self.c, seed=self.seed, min_cluster_size=MIN_GROUP_SIZE)


@dataclass(frozen=True)
class SolverState:
    """ALM 迭代狀態"""

    L: DenseMatrix
    S: DenseMatrix
    Theta: DenseMatrix
    rho: float
    assignment: GroupAssignment
    iter: int = 0
    rho_capped: bool = False


@dataclass(frozen=True)
class ResidualTriple:
    """停止準則的三個相對殘差"""

    feas: float
    dL: float
    dS: float

    def max(self) -> float:
        return max(self.feas, self.dL, self.dS)


@dataclass(frozen=True)
class IterationRecord:
    """單次外層迭代的紀錄"""

    iter: int
    residuals: ResidualTriple
    rho: float
    objective: float
    kmeans_inertia: float
    kmeans_iters: int


@dataclass
class ConvergenceReport:
    """收斂報告"""

    records: List[IterationRecord] = field(default_factory=list)
    converged: bool = False

    @property
    def iters(self) -> int:
        return len(self.records)

    @property
    def residuals(self) -> List[ResidualTriple]:
        return [record.residuals for record in self.records]

    @property
    def objective_trace(self) -> List[float]:
        return [record.objective for record in self.records]

    @property
    def final(self) -> Optional[ResidualTriple]:
        return self.records[-1].residuals if self.records else None


@dataclass(frozen=True)
class DecompositionResult:
    """分解結果 X ≈ L + S"""

    L: DenseMatrix
    S: DenseMatrix
    assignment: GroupAssignment
    report: ConvergenceReport
    wall_time: float
    lam: float
    kmeans_time: float = 0.0


def resolve_lambda(d: int, n: int, lam: Optional[float] = None) -> float:
    """lam 未指定時回傳 √max(n,d)"""
    if lam is None:
        return math.sqrt(max(n, d))
    if not lam > 0:
        raise ConfigError(f"lambda 必須 > 0，收到 {lam}")
    return float(lam)


def l_update(D: DenseMatrix, g: GroupAssignment, lam: float, rho: float) -> DenseMatrix:
    """
    L 子問題的封閉解 (Sherman-Morrison-Woodbury)

    每個群組 i 的欄位更新為
        (ρ/(2λ+ρ))·D_j + (2λ/(n_i(2λ+ρ)))·Σ_{k∈group i} D_k
    只需要每組一個加總向量，不會形成 n×n 矩陣

    Args:
        D: X − S + Θ/ρ
        g: 欄位分組
        lam: λ ≥ 0
        rho: ρ > 0

    Returns:
        DenseMatrix: 更新後的 L
    """
    if not rho > 0:
        raise ConfigError(f"rho 必須 > 0，收到 {rho}")
    if lam < 0:
        raise ConfigError(f"lambda 必須 ≥ 0，收到 {lam}")
    data = as_array(D)
    if g.n != data.shape[1]:
        raise DimensionMismatchError(f"分組長度 {g.n} 與矩陣欄數 {data.shape[1]} 不一致")
    denom = 2.0 * lam + rho
    scaled_sums = group_sums(data, g) * ((2.0 * lam) / (g.sizes() * denom))
    return DenseMatrix((rho / denom) * data + scaled_sums[:, g.labels])


def s_update_l1(B: DenseMatrix, threshold: float) -> DenseMatrix:
    """逐元素軟閾值 sign(B)·max(|B| − t, 0)"""
    if threshold < 0:
        raise ConfigError(f"閾值必須 ≥ 0，收到 {threshold}")
    data = as_array(B)
    return DenseMatrix(np.sign(data) * np.maximum(np.abs(data) - threshold, 0.0))


def s_update_l21(B: DenseMatrix, threshold: float) -> DenseMatrix:
    """逐欄收縮 max(0, 1 − t/‖B_j‖)·B_j，零欄保持為零"""
    if threshold < 0:
        raise ConfigError(f"閾值必須 ≥ 0，收到 {threshold}")
    data = as_array(B)
    norms = column_l2_norms(data)
    scale = np.zeros_like(norms)
    keep = norms > threshold
    scale[keep] = 1.0 - threshold / norms[keep]
    return DenseMatrix(data * scale[np.newaxis, :])


def s_update(B: DenseMatrix, threshold: float, norm: SparseNorm = SparseNorm.L1) -> DenseMatrix:
    if SparseNorm(norm) is SparseNorm.L21:
        return s_update_l21(B, threshold)
    return s_update_l1(B, threshold)


def sparse_norm_value(S: DenseMatrix, norm: SparseNorm = SparseNorm.L1) -> float:
    return l21_norm(S) if SparseNorm(norm) is SparseNorm.L21 else elementwise_l1(S)


def multiplier_update(state: SolverState, X: DenseMatrix, kappa: float,
                      rho_max: float = 1e12) -> SolverState:
    """Θ ← Θ + ρ(X − L − S)，ρ ← ρκ (上限 rho_max)"""
    if not kappa > 1:
        raise ConfigError(f"kappa 必須 > 1，收到 {kappa}")
    residual = as_array(X) - state.L.data - state.S.data
    theta = DenseMatrix(state.Theta.data + state.rho * residual)
    rho = state.rho * kappa
    capped = rho > rho_max
    if capped and not state.rho_capped:
        logger.warning(f"rho 已達上限 {rho_max:g}，之後維持不變")
    return replace(state, Theta=theta, rho=min(rho, rho_max), rho_capped=state.rho_capped or capped)


def check_convergence(X: DenseMatrix, L_prev: DenseMatrix, L: DenseMatrix,
                      S_prev: DenseMatrix, S: DenseMatrix, tol: float) -> Tuple[bool, ResidualTriple]:
    """
    停止準則：max{‖X−L−S‖, ‖L−L_prev‖, ‖S−S_prev‖} / ‖X‖_F ≤ tol

    Returns:
        Tuple[bool, ResidualTriple]: (是否收斂, 三個相對殘差)
    """
    x = as_array(X)
    x_norm = frob_norm(x)
    if x_norm == 0:
        raise SolverError("X 全為零，無法計算相對殘差")
    l_now, s_now = as_array(L), as_array(S)
    triple = ResidualTriple(
        feas=frob_norm(x - l_now - s_now) / x_norm,
        dL=frob_norm(l_now - as_array(L_prev)) / x_norm,
        dS=frob_norm(s_now - as_array(S_prev)) / x_norm,
    )
    return triple.max() <= tol, triple


def objective_value(L: DenseMatrix, S: DenseMatrix, g: GroupAssignment, lam: float,
                    norm: SparseNorm = SparseNorm.L1) -> float:
    """λ·scatter(L, g) + ‖S‖"""
    return lam * group_scatter(L, g).value + sparse_norm_value(S, norm)


def augmented_lagrangian(X: DenseMatrix, L: DenseMatrix, S: DenseMatrix, Theta: DenseMatrix,
                         g: GroupAssignment, lam: float, rho: float,
                         norm: SparseNorm = SparseNorm.L1) -> float:
    """增廣拉格朗日函數值 λ·scatter + ‖S‖ + (ρ/2)‖X − L − S + Θ/ρ‖²"""
    penalty = as_array(X) - as_array(L) - as_array(S) + as_array(Theta) / rho
    return objective_value(L, S, g, lam, norm) + 0.5 * rho * float(np.sum(penalty * penalty))


def solve(X: DenseMatrix, cfg: SolverConfig,
          callback: Optional[Callable[[IterationRecord], None]] = None) -> DecompositionResult:
    """
    RES-PCA 主迴圈

    每次迭代依序執行 L 更新 → K-means 分組更新 → S 軟閾值 → Θ/ρ 更新，
    直到三個相對殘差都 ≤ tol 或達到 max_iter (設定 fixed_iters 時固定次數)

    Args:
        X: d×n 資料矩陣
        cfg: 求解器參數
        callback: 每次迭代結束時呼叫，參數為 IterationRecord

    Returns:
        DecompositionResult: L、S、分組與收斂報告
    """
    start = time.perf_counter()
    if not isinstance(X, DenseMatrix):
        X = DenseMatrix(X)
    d, n = X.shape
    if cfg.c > n:
        raise DimensionMismatchError(f"群組數 c={cfg.c} 大於欄數 n={n}")
    if frob_norm(X) == 0:
        raise SolverError("X 全為零")

    lam = resolve_lambda(d, n, cfg.lam)
    km_cfg = cfg.kmeans_config()
    warm_cfg = replace(km_cfg, n_restarts=1)
    limit = cfg.fixed_iters if cfg.fixed_iters is not None else cfg.max_iter
    logger.info(f"開始 RES-PCA: d={d}, n={n}, c={cfg.c}, lambda={lam:.6g}, "
                f"rho0={cfg.rho0:g}, kappa={cfg.kappa:g}, norm={cfg.sparse_norm.value}")

    km_start = time.perf_counter()
    initial = kmeans(X, km_cfg)
    kmeans_time = time.perf_counter() - km_start

    zeros = DenseMatrix.zeros(d, n)
    state = SolverState(L=X, S=zeros, Theta=zeros, rho=cfg.rho0, assignment=initial.assignment)
    report = ConvergenceReport()
    x = X.data

    try:
        for _ in range(limit):
            scaled_theta = state.Theta.data / state.rho
            L = l_update(x - state.S.data + scaled_theta, state.assignment, lam, state.rho)

            km_start = time.perf_counter()
            km = kmeans(L, warm_cfg, init_assignment=state.assignment)
            kmeans_time += time.perf_counter() - km_start

            S = s_update(x - L.data + scaled_theta, 1.0 / state.rho, cfg.sparse_norm)
            converged, triple = check_convergence(X, state.L, L, state.S, S, cfg.tol)

            rho_used = state.rho
            state = replace(state, L=L, S=S, assignment=km.assignment)
            state = multiplier_update(state, X, cfg.kappa, cfg.rho_max)
            state = replace(state, iter=state.iter + 1)

            record = IterationRecord(
                iter=state.iter,
                residuals=triple,
                rho=rho_used,
                objective=objective_value(L, S, km.assignment, lam, cfg.sparse_norm),
                kmeans_inertia=km.inertia,
                kmeans_iters=km.iters_run,
            )
            report.records.append(record)
            logger.debug(f"iter {state.iter}: feas={triple.feas:.3e} dL={triple.dL:.3e} "
                         f"dS={triple.dS:.3e} rho={rho_used:.3e} obj={record.objective:.6g}")
            if callback is not None:
                callback(record)

            report.converged = converged
            if converged and cfg.fixed_iters is None:
                break
    except NonFiniteValueError as e:
        raise SolverError(f"第 {state.iter + 1} 次迭代出現非有限值: {e}") from e

    wall_time = time.perf_counter() - start
    logger.info(f"RES-PCA 結束: iters={report.iters}, converged={report.converged}, "
                f"feas={report.final.feas:.3e}, time={wall_time:.3f}s")
    return DecompositionResult(
        L=state.L,
        S=state.S,
        assignment=state.assignment,
        report=report,
        wall_time=wall_time,
        lam=lam,
        kmeans_time=kmeans_time,
    )
