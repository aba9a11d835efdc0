"""
日誌管理模型
處理命令列工具的日誌記錄和管理
"""

import os
import re
import sys
import time
import logging
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
LOG_NAME = re.compile(r'respca_\d{8}\.log')


def dated_log_path(log_dir: str, timestamp: float) -> str:
    """respca_YYYYMMDD.log (本地時間)"""
    return os.path.join(log_dir, f"respca_{datetime.fromtimestamp(timestamp).strftime('%Y%m%d')}.log")


class DailyLogHandler(TimedRotatingFileHandler):
    """每天寫入一個以日期命名的日誌檔，午夜後改寫到新日期的檔案"""

    def __init__(self, log_dir, backup_count=30):
        os.makedirs(log_dir, exist_ok=True)
        self.log_dir = log_dir
        super().__init__(dated_log_path(log_dir, time.time()), when='midnight', interval=1,
                         backupCount=backup_count, encoding='utf-8')

    def doRollover(self):
        """關閉目前的檔案，開啟當天的檔案，並只保留最近 backupCount 個舊檔"""
        if self.stream:
            self.stream.close()
            self.stream = None
        now = time.time()
        self.baseFilename = os.path.abspath(dated_log_path(self.log_dir, now))
        self.prune()
        self.rolloverAt = self.computeRollover(int(now))
        if not self.delay:
            self.stream = self._open()

    def prune(self):
        """刪除超過保留數量的舊日誌檔"""
        if self.backupCount <= 0:
            return
        current = os.path.basename(self.baseFilename)
        older = sorted(name for name in os.listdir(self.log_dir)
                       if LOG_NAME.fullmatch(name) and name < current)
        for name in older[:max(len(older) - self.backupCount, 0)]:
            os.remove(os.path.join(self.log_dir, name))


class LoggingModel:
    """日誌管理模型"""

    def __init__(self, log_dir=None, level='INFO'):
        """
        Args:
            log_dir: 日誌目錄 (None 時只輸出到標準錯誤)
            level: 日誌等級名稱
        """
        self.log_dir = log_dir
        self.level = getattr(logging, str(level).upper(), logging.INFO)
        self.daily_handler = None
        self.handlers = []
        self.setup_logging()

    def setup_logging(self):
        """設定日誌系統"""
        handlers = [logging.StreamHandler(sys.stderr)]
        if self.log_dir:
            try:
                self.daily_handler = DailyLogHandler(self.log_dir)
                self.daily_handler.setLevel(self.level)
                self.daily_handler.setFormatter(logging.Formatter(LOG_FORMAT))
                handlers.append(self.daily_handler)
            except OSError as e:
                print(f"設定日誌檔案時發生錯誤: {e}", file=sys.stderr)

        self.handlers = handlers
        logging.basicConfig(level=self.level, format=LOG_FORMAT, handlers=handlers, force=True)
        logging.debug("日誌系統初始化完成")

    def close(self):
        """移除並關閉本模型安裝的處理器"""
        root = logging.getLogger()
        for handler in self.handlers:
            root.removeHandler(handler)
            if handler is self.daily_handler:
                handler.close()
        self.handlers = []
        self.daily_handler = None
