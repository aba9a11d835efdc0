"""
離群偵測控制器
處理 outliers 命令：RES-PCA 後以 ‖S_j‖₂ 排序並標記離群欄位
"""

import logging
import os
import sys

import numpy as np

from controllers.command_controller import (EXIT_OK, add_solver_arguments, handle_errors,
                                            load_input, solver_config_from_args)
from core.errors import ConfigError
from models.solver_model import solve
from services.outlier_service import gap_threshold, outlier_scores
from views.console_views import ConsoleView


def parse_threshold(value):
    """None、'gap' 或非負實數"""
    if value is None:
        return None
    text = str(value).strip().lower()
    if text == 'none':
        return None
    if text == 'gap':
        return 'gap'
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"--threshold 必須是數值、gap 或 none，收到 {value!r}") from None


def register(subparsers):
    """註冊 outliers 子命令"""
    parser = subparsers.add_parser('outliers', help='以稀疏項欄位範數偵測離群樣本')
    parser.add_argument('--input', '-i', required=True, help='輸入 (CSV、二進位矩陣或 PGM 影格目錄)')
    add_solver_arguments(parser)
    parser.add_argument('--threshold', default=None,
                        help='標記閾值 (數值或 gap；未指定時讀取配置，預設只列出分數)')
    parser.set_defaults(handler=cmd_outliers)
    return parser


@handle_errors
def cmd_outliers(args, config_manager) -> int:
    """執行 outliers 命令"""
    threshold = parse_threshold(args.threshold)
    if threshold is None:
        threshold = parse_threshold(config_manager.get('outliers.threshold'))
    if not os.path.exists(args.input):
        raise FileNotFoundError(f"找不到輸入: {args.input}")

    X, kind, _ = load_input(args.input)
    cfg = solver_config_from_args(args, config_manager)
    result = solve(X, cfg)

    if threshold is None:
        scores, _ = outlier_scores(result.S, 0.0)
        flagged = np.array([], dtype=np.int64)
    else:
        if threshold == 'gap':
            scores, _ = outlier_scores(result.S, 0.0)
            threshold = gap_threshold(scores)
            logging.info(f"gap 閾值: {threshold:.6g}")
        scores, flagged = outlier_scores(result.S, threshold)

    ConsoleView.outlier_table(scores, flagged, threshold, stream=sys.stdout)
    return EXIT_OK
