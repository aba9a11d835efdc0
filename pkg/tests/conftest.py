"""
測試共用設定
"""

import numpy as np
import pytest


@pytest.fixture
def rng():
    """固定種子的亂數產生器"""
    return np.random.default_rng(20240521)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """每個測試使用不存在的配置檔 (只讀預設值，不寫檔)"""
    monkeypatch.setenv('RESPCA_CONFIG', str(tmp_path / 'respca_config.json'))
    monkeypatch.delenv('RESPCA_LOG_LEVEL', raising=False)
