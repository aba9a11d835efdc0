"""
配置管理與驗證測試
"""

import json
import os

import pytest

from config.config_manager import ConfigManager
from core.errors import ConfigError
from models.solver_model import SparseNorm
from utils.config_validator import get_default_config, validate_and_fix_config, validate_config_structure


def write_config(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


class TestValidator:

    def test_missing_file_uses_defaults_without_writing(self, tmp_path):
        path = str(tmp_path / 'config.json')
        success, config, _ = validate_and_fix_config(path, auto_fix=False)
        assert success
        assert config == get_default_config()
        assert not os.path.exists(path)

    def test_missing_file_is_created_with_auto_fix(self, tmp_path):
        path = str(tmp_path / 'config.json')
        validate_and_fix_config(path, auto_fix=True)
        with open(path, encoding='utf-8') as f:
            assert json.load(f) == get_default_config()

    def test_malformed_json(self, tmp_path):
        path = tmp_path / 'config.json'
        path.write_text('{"solver": ', encoding='utf-8')
        success, config, messages = validate_and_fix_config(str(path), auto_fix=False)
        assert not success
        assert config == get_default_config()
        assert any('JSON' in message for message in messages)
        assert path.read_text(encoding='utf-8') == '{"solver": '

    def test_malformed_json_backup_with_auto_fix(self, tmp_path):
        path = tmp_path / 'config.json'
        path.write_text('not json', encoding='utf-8')
        validate_and_fix_config(str(path), auto_fix=True)
        assert (tmp_path / 'config.json.backup').read_text(encoding='utf-8') == 'not json'
        assert json.loads(path.read_text(encoding='utf-8')) == get_default_config()

    def test_missing_keys_are_filled(self):
        valid, fixed, messages = validate_config_structure({'solver': {'kappa': 2.0}})
        assert not valid
        assert fixed['solver']['kappa'] == 2.0
        assert fixed['solver']['rho0'] == 1e-4
        assert fixed['kmeans'] == get_default_config()['kmeans']
        assert messages

    def test_wrong_types_are_replaced(self):
        config = get_default_config()
        config['solver']['max_iter'] = 'many'
        config['system']['log_to_file'] = 1
        valid, fixed, _ = validate_config_structure(config)
        assert not valid
        assert fixed['solver']['max_iter'] == 500
        assert fixed['system']['log_to_file'] is False

    def test_lambda_accepts_numbers_and_auto(self):
        config = get_default_config()
        config['solver']['lambda'] = 3.5
        valid, fixed, _ = validate_config_structure(config)
        assert valid
        assert fixed['solver']['lambda'] == 3.5

        config['solver']['lambda'] = 'large'
        valid, fixed, _ = validate_config_structure(config)
        assert not valid
        assert fixed['solver']['lambda'] == 'auto'

    def test_unknown_sparse_norm(self):
        config = get_default_config()
        config['solver']['sparse_norm'] = 'l0'
        valid, fixed, _ = validate_config_structure(config)
        assert not valid
        assert fixed['solver']['sparse_norm'] == 'l1'

    def test_defaults_are_valid(self):
        valid, fixed, _ = validate_config_structure(get_default_config())
        assert valid
        assert fixed == get_default_config()


class TestConfigManager:

    def test_reads_environment_path(self, tmp_path, monkeypatch):
        path = write_config(tmp_path / 'custom.json', {'solver': {'tol': 1e-5}})
        monkeypatch.setenv('RESPCA_CONFIG', path)
        manager = ConfigManager()
        assert manager.config_file == path
        assert manager.get('solver.tol') == 1e-5

    def test_get_with_default(self):
        manager = ConfigManager()
        assert manager.get('kmeans.n_restarts') == 5
        assert manager.get('solver.missing', 'x') == 'x'
        assert manager.get('nothing.at.all') is None

    def test_log_level_from_environment(self, monkeypatch):
        monkeypatch.setenv('RESPCA_LOG_LEVEL', 'debug')
        assert ConfigManager().get('system.log_level') == 'DEBUG'

    def test_solver_config_from_file(self, tmp_path):
        path = write_config(tmp_path / 'c.json', {
            'solver': {'lambda': 2.0, 'kappa': 1.2, 'sparse_norm': 'l21'},
            'kmeans': {'n_restarts': 2, 'seed': 7},
        })
        cfg = ConfigManager(path).solver_config(4)
        assert cfg.c == 4
        assert cfg.lam == 2.0
        assert cfg.kappa == 1.2
        assert cfg.sparse_norm is SparseNorm.L21
        assert cfg.seed == 7
        assert cfg.kmeans_config().n_restarts == 2

    def test_overrides_take_precedence(self, tmp_path):
        path = write_config(tmp_path / 'c.json', {'solver': {'lambda': 2.0, 'max_iter': 50}})
        cfg = ConfigManager(path).solver_config(2, lam='auto', max_iter=None, tol=1e-4, seed=3)
        assert cfg.lam is None
        assert cfg.max_iter == 50
        assert cfg.tol == 1e-4
        assert cfg.kmeans_config().seed == 3

    def test_invalid_override(self):
        manager = ConfigManager()
        with pytest.raises(ConfigError):
            manager.solver_config(2, kappa=0.5)
        with pytest.raises(ConfigError):
            manager.solver_config(2, sparse_norm='l3')

    def test_kmeans_config(self):
        cfg = ConfigManager().kmeans_config(3, n_restarts=1)
        assert (cfg.c, cfg.n_restarts, cfg.max_iters, cfg.min_cluster_size) == (3, 1, 100, 2)

    def test_save_and_reload(self, tmp_path):
        path = str(tmp_path / 'c.json')
        manager = ConfigManager(path)
        manager.config['bench']['repeats'] = 3
        assert manager.save_config()
        assert manager.reload_config()
        assert manager.get('bench.repeats') == 3

    def test_get_section_is_a_copy(self):
        manager = ConfigManager()
        section = manager.get_section('solver')
        section['tol'] = 1.0
        assert manager.get('solver.tol') == 1e-3
