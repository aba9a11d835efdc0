"""
分解控制器
處理 decompose 命令：讀取資料 → RES-PCA → 寫出 L、S 與 JSON lines 報告
"""

import logging
import os
import sys

import numpy as np

from controllers.command_controller import (EXIT_OK, add_solver_arguments, handle_errors,
                                            load_input, solver_config_from_args)
from core.errors import ConfigError
from core.matrix import DenseMatrix
from models.diagnostics_model import recovered_rank, sparsity_ratio
from models.solver_model import solve
from services.matrix_io_service import write_labels_csv, write_matrix
from services.pgm_service import write_pgm_stack
from views.report_views import ReportView


def register(subparsers):
    """註冊 decompose 子命令"""
    parser = subparsers.add_parser('decompose', help='把資料矩陣分解為低秩 L 與稀疏 S')
    parser.add_argument('--input', '-i', required=True, help='輸入 (CSV、二進位矩陣或 PGM 影格目錄)')
    add_solver_arguments(parser)
    parser.add_argument('--out-l', help='低秩部分輸出路徑')
    parser.add_argument('--out-s', help='稀疏部分輸出路徑')
    parser.add_argument('--out-labels', help='分組標籤輸出路徑 (CSV)')
    parser.add_argument('--report', help='JSON lines 報告路徑 (未指定時只輸出總結到標準輸出)')
    parser.add_argument('--rank-energy', type=float, default=None,
                        help='在總結中加入 SVD 秩診斷 (奇異值能量比例，例如 0.995)')
    parser.set_defaults(handler=cmd_decompose)
    return parser


def write_component(path: str, M: DenseMatrix, kind: str, meta=None, magnitude: bool = False):
    """
    依輸入格式寫出一個分量

    PGM 輸入時 path 為目錄，數值截斷到 [0, 1]；magnitude=True 時先取絕對值
    """
    if kind == 'pgm':
        data = np.abs(M.data) if magnitude else M.data
        write_pgm_stack(DenseMatrix(data), meta, path)
        return
    extension = os.path.splitext(path)[1].lower()
    write_matrix(path, M, kind=None if extension in ('.csv', '.bin') else kind)


@handle_errors
def cmd_decompose(args, config_manager) -> int:
    """執行 decompose 命令"""
    if args.rank_energy is not None and not 0 < args.rank_energy <= 1:
        raise ConfigError(f"--rank-energy 必須介於 (0, 1]，收到 {args.rank_energy}")
    if not os.path.exists(args.input):
        raise FileNotFoundError(f"找不到輸入: {args.input}")

    X, kind, meta = load_input(args.input)
    cfg = solver_config_from_args(args, config_manager)
    logging.info(f"decompose: input={args.input} ({kind}), shape={X.rows}x{X.cols}, c={cfg.c}")

    report_stream = open(args.report, 'w', encoding='utf-8') if args.report else None
    try:
        callback = None
        if report_stream is not None:
            def callback(record):
                ReportView.write_line(report_stream, ReportView.iteration(record))

        result = solve(X, cfg, callback=callback)

        extra = {
            'input': args.input,
            'format': kind,
            'sparse_norm': cfg.sparse_norm.value,
            'sparsity_ratio': sparsity_ratio(result.S),
        }
        if args.rank_energy is not None:
            extra['rank'] = recovered_rank(result.L, args.rank_energy)
            extra['rank_energy'] = args.rank_energy
        summary = ReportView.summary(result, **extra)
        if report_stream is not None:
            ReportView.write_line(report_stream, summary)
    finally:
        if report_stream is not None:
            report_stream.close()

    if args.out_l:
        write_component(args.out_l, result.L, kind, meta)
    if args.out_s:
        write_component(args.out_s, result.S, kind, meta, magnitude=True)
    if args.out_labels:
        write_labels_csv(args.out_labels, result.assignment)

    ReportView.write_line(sys.stdout, summary)
    return EXIT_OK
