#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置驗證器模組
提供配置檔案的驗證和自動修復功能
"""

import copy
import json
import os
from typing import Dict, Any, List, Tuple


def validate_and_fix_config(config_file: str, auto_fix: bool = True) -> Tuple[bool, Dict[str, Any], List[str]]:
    """
    驗證和修復配置檔案

    Args:
        config_file: 配置檔案路徑
        auto_fix: 是否把修復結果寫回檔案

    Returns:
        Tuple[success, config_data, messages]
    """
    messages = []

    try:
        # 檢查檔案是否存在
        if not os.path.exists(config_file):
            default_config = get_default_config()
            if auto_fix:
                with open(config_file, 'w', encoding='utf-8') as f:
                    json.dump(default_config, f, indent=2, ensure_ascii=False)
                messages.append(f"創建了默認配置檔案: {config_file}")
            else:
                messages.append(f"配置檔案不存在，使用默認配置: {config_file}")
            return True, default_config, messages

        # 讀取配置檔案
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
        except json.JSONDecodeError as e:
            messages.append(f"JSON 格式錯誤: {e}")
            default_config = get_default_config()
            if auto_fix:
                # 備份損壞的配置並創建新配置
                backup_file = f"{config_file}.backup"
                os.replace(config_file, backup_file)
                with open(config_file, 'w', encoding='utf-8') as f:
                    json.dump(default_config, f, indent=2, ensure_ascii=False)
                messages.append(f"備份損壞的配置到 {backup_file}，創建新的默認配置")
            return False, default_config, messages

        if not isinstance(config_data, dict):
            messages.append("配置根節點必須是 JSON 物件")
            return False, get_default_config(), messages

        # 驗證配置結構
        validation_result, fixed_config, problems = validate_config_structure(config_data)
        messages.extend(problems)

        if auto_fix and fixed_config != config_data:
            with open(config_file, 'w', encoding='utf-8') as f:
                json.dump(fixed_config, f, indent=2, ensure_ascii=False)
            messages.append("配置已自動修復並保存")

        if validation_result:
            messages.append("配置驗證通過")

        return validation_result, fixed_config, messages

    except OSError as e:
        messages.append(f"驗證配置時發生錯誤: {e}")
        return False, get_default_config(), messages


def _matches(value: Any, default: Any) -> bool:
    """值的型別是否與預設值相容"""
    if default is None:
        return True
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, (int, float)):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, type(default))


def validate_config_structure(config: Dict[str, Any]) -> Tuple[bool, Dict[str, Any], List[str]]:
    """
    驗證配置結構：補上缺少的區段與鍵，型別錯誤的值以預設值取代

    Args:
        config: 要驗證的配置

    Returns:
        Tuple[is_valid, fixed_config, messages]
    """
    fixed_config = copy.deepcopy(config)
    defaults = get_default_config()
    messages = []
    is_valid = True

    for section, section_defaults in defaults.items():
        current = fixed_config.get(section)
        if not isinstance(current, dict):
            fixed_config[section] = copy.deepcopy(section_defaults)
            messages.append(f"缺少區段 {section}，已補上預設值")
            is_valid = False
            continue
        for key, default_value in section_defaults.items():
            if key not in current:
                current[key] = copy.deepcopy(default_value)
                messages.append(f"缺少設定 {section}.{key}，已補上預設值")
                is_valid = False
            elif not _matches(current[key], default_value) and not _is_auto_lambda(section, key, current[key]):
                messages.append(f"設定 {section}.{key} 型別錯誤 ({current[key]!r})，改用預設值")
                current[key] = copy.deepcopy(default_value)
                is_valid = False

    solver = fixed_config['solver']
    if solver.get('sparse_norm') not in ('l1', 'l21'):
        messages.append(f"solver.sparse_norm 必須是 l1 或 l21，收到 {solver.get('sparse_norm')!r}")
        solver['sparse_norm'] = 'l1'
        is_valid = False
    if not _is_auto_lambda('solver', 'lambda', solver.get('lambda')):
        messages.append(f"solver.lambda 必須是 auto 或數值，收到 {solver.get('lambda')!r}")
        solver['lambda'] = 'auto'
        is_valid = False

    return is_valid, fixed_config, messages


def _is_auto_lambda(section: str, key: str, value: Any) -> bool:
    # solver.lambda 可以是 "auto" 或數值
    return section == 'solver' and key == 'lambda' and (
        value == 'auto' or (isinstance(value, (int, float)) and not isinstance(value, bool)))


def get_default_config() -> Dict[str, Any]:
    """
    獲取默認配置

    Returns:
        默認配置字典
    """
    return {
        "general": {
            "app_name": "RES-PCA Toolkit",
            "version": "1.0.0",
            "description": "免 SVD 的穩健主成分分析 (低秩 + 稀疏分解)"
        },
        "solver": {
            "lambda": "auto",
            "rho0": 1e-4,
            "kappa": 1.5,
            "tol": 1e-3,
            "max_iter": 500,
            "sparse_norm": "l1",
            "rho_max": 1e12
        },
        "kmeans": {
            "max_iters": 100,
            "n_restarts": 5,
            "tol": 1e-6,
            "seed": 0,
            "min_cluster_size": 2
        },
        "bench": {
            "repeats": 10,
            "iters": 30,
            "d": 500,
            "n": 500
        },
        "outliers": {
            "threshold": None
        },
        "io": {
            "frame_pattern": "frame_{index:05d}.pgm"
        },
        "system": {
            "log_level": "INFO",
            "log_dir": None,
            "log_to_file": False
        }
    }
