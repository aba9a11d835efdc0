"""
命令列工具測試
"""

import csv
import io
import json
import math
import os

import numpy as np
import pytest

from core.matrix import DenseMatrix, frob_norm
from services.matrix_io_service import read_labels_csv, read_matrix, write_matrix
from services.pgm_service import read_pgm_stack, write_pgm_stack
from services.synth_service import SynthSpec, synth_generate, synth_scene
from respca_cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def synth_file(directory, name='X.csv', **kwargs):
    spec = dict(d=100, n=200, c=3, sparsity=0.05, seed=1)
    spec.update(kwargs)
    problem = synth_generate(SynthSpec(**spec))
    path = str(directory / name)
    write_matrix(path, problem.X)
    return path, problem


def read_report(path):
    with open(path, encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]


class TestUsage:

    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_help(self, capsys):
        assert main(['--help']) == 0
        assert 'decompose' in capsys.readouterr().out

    def test_unknown_flag(self, capsys):
        assert main(['synth', '--bogus']) == 2


class TestSynth:

    def test_defaults_write_consistent_files(self, workdir):
        assert main(['synth']) == 0
        for name in ('X.csv', 'L0.csv', 'S0.csv', 'labels.csv'):
            assert (workdir / name).exists()
        X, L0, S0 = (read_matrix(str(workdir / name)) for name in ('X.csv', 'L0.csv', 'S0.csv'))
        np.testing.assert_array_equal(X.data, L0.data + S0.data)
        assert read_labels_csv(str(workdir / 'labels.csv')).n == X.cols

    def test_nonzero_count(self, workdir):
        assert main(['synth', '--sparsity', '0.05', '--d', '50', '--n', '120']) == 0
        assert np.count_nonzero(read_matrix('S0.csv').data) == 300

    def test_binary_outputs(self, workdir):
        assert main(['synth', '--d', '5', '--n', '6', '--c', '2', '--out-x', 'x.bin']) == 0
        assert read_matrix('x.bin').shape == (5, 6)

    def test_invalid_spec(self, workdir, capsys):
        assert main(['synth', '--c', '5', '--n', '3']) == 2
        assert capsys.readouterr().err


class TestDecompose:

    def test_report_and_outputs(self, workdir, capsys):
        path, _ = synth_file(workdir)
        code = main(['decompose', '--input', path, '--groups', '3', '--lambda', 'auto',
                     '--out-l', 'L.csv', '--out-s', 'S.csv', '--out-labels', 'g.csv',
                     '--report', 'report.jsonl', '--rank-energy', '0.995'])
        assert code == 0

        lines = read_report('report.jsonl')
        summary = lines[-1]
        assert summary['type'] == 'summary'
        assert summary['converged'] is True
        assert summary['lambda'] == pytest.approx(math.sqrt(200), abs=1e-4)
        assert summary['iters'] == len(lines) - 1
        assert 23 <= summary['iters'] <= 28
        assert all(line['type'] == 'iteration' for line in lines[:-1])
        assert summary['rank'] >= 1
        assert 0.0 <= summary['sparsity_ratio'] < 1.0

        X = read_matrix(path)
        L, S = read_matrix('L.csv'), read_matrix('S.csv')
        assert frob_norm(X.data - L.data - S.data) / frob_norm(X) <= 1e-3 + 1e-12
        assert read_labels_csv('g.csv').c == 3

        stdout_summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert stdout_summary['iters'] == summary['iters']

    def test_binary_input_keeps_binary_outputs(self, workdir):
        path, _ = synth_file(workdir, name='X.bin', d=20, n=30, c=2)
        assert main(['decompose', '-i', path, '-c', '2', '--out-l', 'L.out', '--out-s', 'S.bin',
                     '--max-iter', '5']) == 0
        assert read_matrix('L.out').shape == (20, 30)
        with open('L.out', 'rb') as f:
            assert f.read(8) == b"RESPCA1\0"

    def test_pgm_input_writes_frames(self, workdir):
        scene, meta, _ = synth_scene(8, 8, 6, kind='static')
        write_pgm_stack(scene, meta, str(workdir / 'frames'))
        assert main(['decompose', '-i', 'frames', '-c', '1', '--out-l', 'bg', '--out-s', 'fg']) == 0
        background, _ = read_pgm_stack('bg')
        assert np.max(np.abs(background.data - scene.data)) <= 2 / 255
        assert len(os.listdir('fg')) == 6

    def test_zero_groups(self, workdir, capsys):
        path, _ = synth_file(workdir, d=5, n=6, c=2)
        assert main(['decompose', '-i', path, '--groups', '0']) == 2
        assert capsys.readouterr().err

    def test_missing_input(self, workdir, capsys):
        assert main(['decompose', '-i', 'nope.csv', '--groups', '1']) == 2
        assert 'nope.csv' in capsys.readouterr().err

    def test_more_groups_than_columns(self, workdir):
        path, _ = synth_file(workdir, d=5, n=4, c=2)
        assert main(['decompose', '-i', path, '--groups', '5']) == 2

    def test_malformed_input(self, workdir):
        (workdir / 'bad.csv').write_text("1,2\n3\n", encoding='utf-8')
        assert main(['decompose', '-i', 'bad.csv', '--groups', '1']) == 2

    def test_bad_lambda(self, workdir):
        path, _ = synth_file(workdir, d=5, n=6, c=2)
        assert main(['decompose', '-i', path, '--groups', '1', '--lambda', 'big']) == 2

    def test_zero_matrix_is_a_solver_error(self, workdir):
        write_matrix('zero.csv', DenseMatrix.zeros(3, 4))
        assert main(['decompose', '-i', 'zero.csv', '--groups', '1']) == 3


class TestBench:

    def test_records_and_zero_stddev(self, workdir):
        code = main(['bench', '--mode', 'n', '--sizes', '20,40', '--repeats', '1', '--iters', '3',
                     '--fixed-dim', '10', '--out', 'bench.csv'])
        assert code == 0
        with open('bench.csv', encoding='utf-8') as f:
            rows = list(csv.DictReader(f))
        assert [int(row['n']) for row in rows] == [20, 40]
        assert all(int(row['d']) == 10 for row in rows)
        assert all(float(row['stddev_time']) == 0.0 for row in rows)
        assert all(float(row['wall_time']) > 0 for row in rows)
        assert all(int(row['iters']) == 3 for row in rows)

    def test_dimension_sweep_to_stdout(self, workdir, capsys):
        assert main(['bench', '--mode', 'd', '--sizes', '12', '--repeats', '2', '--iters', '2',
                     '--fixed-dim', '15']) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert (int(rows[0]['d']), int(rows[0]['n']), int(rows[0]['repeats'])) == (12, 15, 2)

    def test_empty_sizes(self, workdir):
        assert main(['bench', '--sizes', '']) == 2
        assert main(['bench', '--sizes', 'a,b']) == 2


class TestOutliers:

    def test_threshold_echoed_and_clean_data(self, workdir, capsys):
        path, _ = synth_file(workdir, d=30, n=40, c=2, sparsity=0.0)
        assert main(['outliers', '-i', path, '-c', '2', '--threshold', '5']) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == '# threshold=5'
        assert out[1] == '# flagged=0 columns=40'
        assert len(out) == 42

    def test_default_lists_sorted_scores(self, workdir, capsys):
        path, _ = synth_file(workdir, d=30, n=40, c=1, sparsity=0.0, outlier_columns=3)
        assert main(['outliers', '-i', path, '-c', '1']) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == '# threshold=none'
        scores = [float(line.split()[1]) for line in out[2:]]
        assert scores == sorted(scores, reverse=True)
        assert not any(line.endswith('*') for line in out[2:])

    def test_gap_threshold_flags_injected_columns(self, workdir, capsys):
        path, problem = synth_file(workdir, d=40, n=120, c=1, sparsity=0.0, outlier_columns=10)
        assert main(['outliers', '-i', path, '-c', '1', '--threshold', 'gap']) == 0
        out = capsys.readouterr().out.splitlines()
        flagged = sorted(int(line.split()[0]) for line in out[2:] if line.endswith('*'))
        assert flagged == problem.outlier_indices.tolist()

    def test_negative_threshold(self, workdir):
        path, _ = synth_file(workdir, d=5, n=6, c=1)
        assert main(['outliers', '-i', path, '-c', '1', '--threshold', '-1']) == 2


class TestFrames:

    def test_static_scene(self, workdir):
        assert main(['frames', '--make-scene', 'scene', '--scene', 'static', '-c', '1',
                     '--out-background', 'bg', '--out-foreground', 'fg']) == 0
        X, _ = read_pgm_stack('scene')
        background, _ = read_pgm_stack('bg')
        foreground, _ = read_pgm_stack('fg')
        assert np.max(np.abs(background.data - X.data)) <= 2 / 255
        assert np.max(foreground.data) <= 2 / 255

    def test_moving_square_in_foreground(self, workdir):
        assert main(['frames', '--make-scene', 'scene', '--scene', 'moving_square', '-c', '1',
                     '--out-foreground', 'fg']) == 0
        _, _, truth = synth_scene(32, 48, 40, kind='moving_square', seed=0)
        foreground, _ = read_pgm_stack('fg')
        assert np.all(foreground.data[truth['mask']] * 255 > 128)

    def test_two_backgrounds(self, workdir):
        assert main(['frames', '--make-scene', 'scene', '--scene', 'two_backgrounds', '-c', '2',
                     '--out-background', 'bg']) == 0
        _, _, truth = synth_scene(32, 48, 40, kind='two_backgrounds', seed=0)
        background, _ = read_pgm_stack('bg')
        close = np.abs(background.data - truth['background']) <= 5 / 255
        assert close.mean() >= 0.99

    def test_existing_frames_directory(self, workdir):
        scene, meta, _ = synth_scene(8, 8, 5, kind='static', seed=2)
        write_pgm_stack(scene, meta, str(workdir / 'in'))
        assert main(['frames', '--frames', 'in', '-c', '1', '--out-background', 'bg']) == 0
        assert len(os.listdir('bg')) == 5

    def test_requires_a_source(self, workdir):
        assert main(['frames', '-c', '1']) == 2

    def test_missing_directory(self, workdir):
        assert main(['frames', '--frames', 'missing', '-c', '1']) == 2

    def test_mixed_frame_sizes(self, workdir):
        scene, meta, _ = synth_scene(8, 8, 2, kind='static')
        write_pgm_stack(scene, meta, str(workdir / 'in'))
        other, other_meta, _ = synth_scene(6, 6, 1, kind='static')
        write_pgm_stack(other, other_meta, str(workdir / 'in'), pattern='z_{index}.pgm')
        assert main(['frames', '--frames', 'in', '-c', '1']) == 2


class TestLogging:

    def test_log_directory(self, workdir):
        assert main(['--log-dir', 'logs', '--log-level', 'debug', 'synth', '--d', '4', '--n', '5',
                     '--c', '1']) == 0
        files = os.listdir('logs')
        assert len(files) == 1 and files[0].startswith('respca_') and files[0].endswith('.log')
        assert (workdir / 'logs' / files[0]).read_text(encoding='utf-8')
