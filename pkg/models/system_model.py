"""
系統資訊模型
提供效能測試紀錄所需的主機資訊
"""

import os
import platform
import logging

try:
    import psutil
    PSUTIL_AVAILABLE = True
except ImportError:
    PSUTIL_AVAILABLE = False


class SystemModel:
    """系統資訊模型"""

    @staticmethod
    def get_system_info():
        """獲取系統基本資訊"""
        return {
            'platform': platform.system(),
            'cpu_count': SystemModel.get_cpu_count(),
        }

    @staticmethod
    def get_cpu_count():
        """實體 CPU 核心數 (psutil 不可用時使用邏輯核心數)"""
        if PSUTIL_AVAILABLE:
            try:
                count = psutil.cpu_count(logical=False)
                if count:
                    return count
            except Exception as e:
                logging.warning(f"獲取 CPU 核心數失敗: {e}")
        return os.cpu_count() or 1
