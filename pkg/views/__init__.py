"""
視圖層 (Views)
處理結果展示和輸出格式化
"""

from .report_views import ReportView, BenchView
from .console_views import ConsoleView

__all__ = [
    'ReportView',
    'BenchView',
    'ConsoleView'
]
