"""
命令共用控制器
處理例外與結束碼的對應、共用的求解器參數，以及輸入矩陣的載入
"""

import logging
from functools import wraps
from typing import Optional, Tuple

from core.errors import ConfigError, FormatError, MatrixError, SolverError
from core.matrix import DenseMatrix
from services.matrix_io_service import detect_format, read_matrix
from services.pgm_service import FrameStackMeta, read_pgm_stack
from views.console_views import ConsoleView

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3


def handle_errors(f):
    """把例外轉成穩定的結束碼：輸入/參數錯誤 2，數值錯誤 3"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except SolverError as e:
            logging.error(f"求解失敗: {e}")
            ConsoleView.error(str(e))
            return EXIT_SOLVER
        except (ConfigError, FormatError, MatrixError) as e:
            logging.error(f"輸入錯誤: {e}")
            ConsoleView.error(str(e))
            return EXIT_USAGE
        except OSError as e:
            logging.error(f"檔案錯誤: {e}")
            ConsoleView.error(str(e))
            return EXIT_USAGE
    return decorated_function


def add_solver_arguments(parser):
    """加入 decompose / outliers / frames 共用的求解器參數"""
    parser.add_argument('--groups', '-c', type=int, required=True, help='群組數 c')
    parser.add_argument('--lambda', dest='lam', default=None, help="λ (數值或 auto，預設 √max(n,d))")
    parser.add_argument('--rho0', type=float, default=None, help='初始罰參數 ρ0')
    parser.add_argument('--kappa', type=float, default=None, help='罰參數成長率 κ')
    parser.add_argument('--tol', type=float, default=None, help='停止容忍度')
    parser.add_argument('--max-iter', type=int, default=None, help='最大迭代次數')
    parser.add_argument('--norm', choices=('l1', 'l21'), default=None, help='稀疏項範數')
    parser.add_argument('--seed', type=int, default=None, help='K-means 亂數種子')


def parse_lambda(value: Optional[str]):
    if value is None:
        return None
    if str(value).lower() == 'auto':
        return 'auto'
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"--lambda 必須是數值或 auto，收到 {value!r}") from None


def solver_config_from_args(args, config_manager):
    """命令列參數優先於配置檔"""
    if args.groups is None or args.groups < 1:
        raise ConfigError(f"--groups 必須 ≥ 1，收到 {args.groups}")
    return config_manager.solver_config(
        args.groups,
        lam=parse_lambda(args.lam),
        rho0=args.rho0,
        kappa=args.kappa,
        tol=args.tol,
        max_iter=args.max_iter,
        sparse_norm=args.norm,
        seed=args.seed,
    )


def load_input(path: str) -> Tuple[DenseMatrix, str, Optional[FrameStackMeta]]:
    """
    載入輸入資料

    Returns:
        Tuple: (矩陣, 格式 'csv' | 'bin' | 'pgm', PGM 影格資訊或 None)
    """
    kind = detect_format(path)
    if kind == 'pgm':
        matrix, meta = read_pgm_stack(path)
        return matrix, kind, meta
    return read_matrix(path), kind, None
