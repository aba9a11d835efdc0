#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
RES-PCA 命令列工具
免 SVD 的穩健主成分分析：把資料矩陣 X 分解為低秩 L 與稀疏 S

命令：
- decompose  分解資料矩陣並輸出 L、S 與 JSON lines 報告
- synth      產生保留真值的合成資料
- bench      固定迭代次數下量測時間隨 n / d 的變化
- outliers   以 ‖S_j‖₂ 偵測離群樣本
- frames     PGM 影格序列的前景/背景分離

結束碼：0 成功、2 參數或輸入錯誤、3 數值求解失敗
"""

import argparse
import logging
import sys

from config.config_manager import ConfigManager
from controllers import COMMAND_CONTROLLERS, EXIT_USAGE
from models.logging_model import LoggingModel


def build_parser() -> argparse.ArgumentParser:
    """建立命令列解析器"""
    parser = argparse.ArgumentParser(
        prog='respca',
        description='RES-PCA: 以分組散佈取代奇異值分解的穩健主成分分析')
    parser.add_argument('--config', help='配置檔案路徑 (預設 RESPCA_CONFIG 或 config.json)')
    parser.add_argument('--log-level', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'), type=str.upper,
                        help='日誌等級 (覆寫 RESPCA_LOG_LEVEL 與配置檔)')
    parser.add_argument('--log-dir', help='日誌目錄 (每日一個 respca_YYYYMMDD.log)')

    subparsers = parser.add_subparsers(dest='command', metavar='<command>')
    subparsers.required = True
    for controller in COMMAND_CONTROLLERS:
        controller.register(subparsers)
    return parser


def setup_logging(args, config_manager: ConfigManager) -> LoggingModel:
    """優先順序: 命令列 > 環境變數 > 配置檔"""
    level = args.log_level or config_manager.get('system.log_level', 'INFO')
    log_dir = args.log_dir
    if log_dir is None and config_manager.get('system.log_to_file', False):
        log_dir = config_manager.get('system.log_dir')
    return LoggingModel(log_dir=log_dir, level=level)


def main(argv=None) -> int:
    """主程式入口，回傳結束碼"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法錯誤固定為 2，--help 為 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    config_manager = ConfigManager(args.config)

    logging_model = setup_logging(args, config_manager)
    try:
        logging.debug(f"執行命令 {args.command}，配置檔 {config_manager.config_file}")
        return args.handler(args, config_manager)
    finally:
        logging_model.close()


if __name__ == '__main__':
    sys.exit(main())
