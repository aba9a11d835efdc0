"""
輸出視圖、日誌與系統資訊測試
"""

import io
import json
import logging
from datetime import datetime

import numpy as np
import pytest

from models import logging_model, system_model
from models.logging_model import LOG_NAME, DailyLogHandler, LoggingModel
from models.solver_model import SolverConfig, solve
from models.system_model import SystemModel
from services.bench_service import BenchRecord, run_bench
from core.errors import ConfigError
from views.console_views import ConsoleView
from views.report_views import BenchView, ReportView


def record(n, mean):
    return BenchRecord(mode='n', d=10, n=n, iters=30, repeats=2, wall_time=2 * mean,
                       mean_time=mean, stddev_time=0.0)


class TestReportView:

    def test_summary_and_iterations(self, rng, tmp_path):
        result = solve(rng.uniform(size=(6, 8)), SolverConfig(c=2, fixed_iters=4))
        path = tmp_path / 'report.jsonl'
        with open(path, 'w', encoding='utf-8') as stream:
            for item in result.report.records:
                ReportView.write_line(stream, ReportView.iteration(item))
            ReportView.write_line(stream, ReportView.summary(result, input='x.csv'))

        lines = ReportView.read_report(str(path))
        assert [line['iter'] for line in lines[:-1]] == [1, 2, 3, 4]
        summary = lines[-1]
        assert summary['type'] == 'summary'
        assert (summary['d'], summary['n'], summary['c'], summary['iters']) == (6, 8, 2, 4)
        assert sum(summary['group_sizes']) == 8
        assert summary['input'] == 'x.csv'
        assert summary['feas'] == pytest.approx(result.report.final.feas)


class TestBenchView:

    def test_csv_columns(self):
        stream = io.StringIO()
        BenchView.write_csv(stream, [record(10, 0.5)])
        header, row = stream.getvalue().splitlines()
        assert header.split(',') == BenchView.FIELDS
        assert row.startswith('n,10,10,30,2,1.0,0.5,0.0')

    def test_ratios(self):
        ratios = BenchView.ratios([record(10, 0.5), record(20, 1.0), record(40, 0.0), record(80, 1.0)])
        assert ratios == [None, 2.0, 0.0, None]


class TestConsoleView:

    def test_outlier_table(self):
        stream = io.StringIO()
        ConsoleView.outlier_table(np.array([0.5, 7.0, 6.0]), [1, 2], 5.0, stream=stream)
        assert stream.getvalue().splitlines() == [
            '# threshold=5',
            '# flagged=2 columns=3',
            '1 7 *',
            '2 6 *',
            '0 0.5',
        ]

    def test_error_goes_to_stderr(self, capsys):
        ConsoleView.error('壞掉了')
        captured = capsys.readouterr()
        assert captured.out == ''
        assert '壞掉了' in captured.err


class TestBenchService:

    def test_invalid_arguments(self):
        with pytest.raises(ConfigError):
            run_bench('x', [10])
        with pytest.raises(ConfigError):
            run_bench('n', [])
        with pytest.raises(ConfigError):
            run_bench('n', [10], repeats=0)

    def test_host_fields(self):
        records = run_bench('n', [8], repeats=1, iters=2, fixed_dim=6)
        assert records[0].cpu_count >= 1
        assert records[0].platform == SystemModel.get_system_info()['platform']


class TestLoggingModel:

    def test_file_handler_writes_dated_file(self, tmp_path):
        model = LoggingModel(log_dir=str(tmp_path), level='INFO')
        try:
            logging.getLogger('respca.test').info('寫入一行')
            files = sorted(path.name for path in tmp_path.iterdir())
            assert len(files) == 1
            assert LOG_NAME.fullmatch(files[0])
            assert model.daily_handler.baseFilename == str(tmp_path / files[0])
        finally:
            model.close()
        assert model.daily_handler is None
        assert '寫入一行' in (tmp_path / files[0]).read_text(encoding='utf-8')

    def test_console_only(self):
        model = LoggingModel(level='warning')
        try:
            assert model.daily_handler is None
            assert logging.getLogger().level == logging.WARNING
        finally:
            model.close()


class TestDailyLogHandler:

    @staticmethod
    def fake_clock(monkeypatch, when):
        clock = {'now': when.timestamp()}
        monkeypatch.setattr(logging_model.time, 'time', lambda: clock['now'])
        return clock

    def test_rollover_writes_each_day_to_its_own_file(self, tmp_path, monkeypatch):
        clock = self.fake_clock(monkeypatch, datetime(2024, 2, 28, 23, 59))
        handler = DailyLogHandler(str(tmp_path))
        handler.setFormatter(logging.Formatter('%(message)s'))
        try:
            handler.emit(logging.makeLogRecord({'msg': 'day-one line'}))
            clock['now'] = datetime(2024, 2, 29, 0, 1).timestamp()
            handler.doRollover()
            handler.emit(logging.makeLogRecord({'msg': 'day-two line'}))
        finally:
            handler.close()
        assert (tmp_path / 'respca_20240228.log').read_text(encoding='utf-8') == 'day-one line\n'
        assert (tmp_path / 'respca_20240229.log').read_text(encoding='utf-8') == 'day-two line\n'
        assert handler.rolloverAt == int(datetime(2024, 3, 1).timestamp())

    def test_rollover_keeps_backup_count_files(self, tmp_path, monkeypatch):
        for day in range(1, 6):
            (tmp_path / f'respca_2024010{day}.log').write_text('old\n', encoding='utf-8')
        (tmp_path / 'notes.txt').write_text('keep\n', encoding='utf-8')
        self.fake_clock(monkeypatch, datetime(2024, 1, 6, 0, 1))
        handler = DailyLogHandler(str(tmp_path), backup_count=2)
        try:
            handler.doRollover()
        finally:
            handler.close()
        assert sorted(path.name for path in tmp_path.iterdir()) == [
            'notes.txt', 'respca_20240104.log', 'respca_20240105.log', 'respca_20240106.log']


class TestSystemModel:

    def test_system_info(self):
        info = SystemModel.get_system_info()
        assert set(info) == {'platform', 'cpu_count'}
        assert info['cpu_count'] >= 1

    def test_cpu_count_without_psutil(self, monkeypatch):
        monkeypatch.setattr(system_model, 'PSUTIL_AVAILABLE', False)
        monkeypatch.setattr(system_model.os, 'cpu_count', lambda: None)
        assert SystemModel.get_cpu_count() == 1
