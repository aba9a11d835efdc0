#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模組
提供統一的配置檔案管理與求解器參數建立
"""

import copy
import json
import os
import logging
from typing import Dict, Any, Optional

from core.errors import ConfigError
from models.clustering_model import KMeansConfig
from models.solver_model import SolverConfig
from utils.config_validator import get_default_config, validate_and_fix_config

CONFIG_ENV = 'RESPCA_CONFIG'
LOG_LEVEL_ENV = 'RESPCA_LOG_LEVEL'


class ConfigManager:
    """
    配置管理器
    提供配置檔案的載入、儲存、驗證，並把設定轉成 SolverConfig / KMeansConfig
    """

    def __init__(self, config_file: Optional[str] = None, auto_fix: bool = False):
        """
        初始化配置管理器

        Args:
            config_file: 配置檔案路徑 (未指定時讀取環境變數 RESPCA_CONFIG，再退回 config.json)
            auto_fix: 是否把修復後的配置寫回檔案
        """
        self.config_file = config_file or os.environ.get(CONFIG_ENV, 'config.json')
        self.auto_fix = auto_fix
        self.config: Dict[str, Any] = {}
        self.logger = logging.getLogger(__name__)

        # 載入並驗證配置
        self._load_and_validate_config()

    def _load_and_validate_config(self):
        """載入並驗證配置檔案"""
        success, config, messages = validate_and_fix_config(self.config_file, auto_fix=self.auto_fix)
        self.config = config
        log = self.logger.debug if success else self.logger.warning
        for message in messages:
            log(message)

        # 環境變數覆寫日誌等級
        env_level = os.environ.get(LOG_LEVEL_ENV)
        if env_level:
            self.config['system']['log_level'] = env_level.upper()

    def reload_config(self) -> bool:
        """
        重新載入配置檔案

        Returns:
            bool: 是否成功重新載入
        """
        try:
            self._load_and_validate_config()
            self.logger.info("配置檔案重新載入成功")
            return True
        except Exception as e:
            self.logger.error(f"重新載入配置檔案失敗: {e}")
            return False

    def save_config(self) -> bool:
        """
        儲存配置到檔案

        Returns:
            bool: 是否成功儲存
        """
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=2, ensure_ascii=False)
            self.logger.info(f"配置已儲存到 {self.config_file}")
            return True
        except OSError as e:
            self.logger.error(f"儲存配置檔案時發生錯誤: {e}")
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """
        獲取配置值，支援 "section.key" 形式

        Args:
            key: 配置鍵名
            default: 預設值
        """
        node: Any = self.config
        for part in key.split('.'):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def get_section(self, section: str) -> Dict[str, Any]:
        """獲取整個區段的副本"""
        return copy.deepcopy(self.config.get(section, get_default_config().get(section, {})))

    def kmeans_config(self, c: int, **overrides) -> KMeansConfig:
        """
        建立 K-means 參數

        Args:
            c: 群組數
            overrides: 覆寫的欄位 (值為 None 時忽略)
        """
        section = self.get_section('kmeans')
        values = {
            'c': c,
            'max_iters': int(section['max_iters']),
            'n_restarts': int(section['n_restarts']),
            'tol': float(section['tol']),
            'seed': int(section['seed']),
            'min_cluster_size': int(section['min_cluster_size']),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return KMeansConfig(**values)

    def solver_config(self, c: int, **overrides) -> SolverConfig:
        """
        建立求解器參數，優先順序: overrides (CLI) > 配置檔 > 預設值

        Args:
            c: 群組數
            overrides: lam / rho0 / kappa / tol / max_iter / sparse_norm / fixed_iters / seed
        """
        section = self.get_section('solver')
        lam = section['lambda']
        values = {
            'c': c,
            'lam': None if lam == 'auto' else float(lam),
            'rho0': float(section['rho0']),
            'kappa': float(section['kappa']),
            'tol': float(section['tol']),
            'max_iter': int(section['max_iter']),
            'sparse_norm': section['sparse_norm'],
            'rho_max': float(section['rho_max']),
            'seed': int(self.get('kmeans.seed', 0)),
        }
        for key, value in overrides.items():
            if value is None:
                continue
            if key == 'lam' and value == 'auto':
                values['lam'] = None
                continue
            values[key] = value
        try:
            values['kmeans'] = self.kmeans_config(c, seed=values['seed'])
            return SolverConfig(**values)
        except ValueError as e:
            raise ConfigError(f"求解器參數不合法: {e}") from e
