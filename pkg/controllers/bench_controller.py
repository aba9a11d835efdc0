"""
效能測試控制器
處理 bench 命令：固定迭代次數下對 n 或 d 掃描並輸出 CSV
"""

import sys

from controllers.command_controller import EXIT_OK, handle_errors
from core.errors import ConfigError
from services.bench_service import BENCH_MODES, run_bench
from views.console_views import ConsoleView
from views.report_views import BenchView


def parse_sizes(text: str):
    """逗號分隔的尺寸清單"""
    try:
        sizes = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigError(f"--sizes 必須是逗號分隔的整數，收到 {text!r}") from None
    if not sizes:
        raise ConfigError("--sizes 不可為空")
    if min(sizes) < 1:
        raise ConfigError(f"尺寸必須 ≥ 1，收到 {sizes}")
    return sizes


def register(subparsers):
    """註冊 bench 子命令"""
    parser = subparsers.add_parser('bench', help='量測時間隨 n 或 d 的變化')
    parser.add_argument('--mode', choices=BENCH_MODES, default='n', help='掃描樣本數 (n) 或維度 (d)')
    parser.add_argument('--sizes', required=True, help='逗號分隔的尺寸清單，例如 1000,2000,4000')
    parser.add_argument('--repeats', type=int, default=None, help='每個尺寸重複次數 (預設 10)')
    parser.add_argument('--iters', type=int, default=None, help='固定迭代次數 (預設 30)')
    parser.add_argument('--fixed-dim', type=int, default=None,
                        help='固定的另一個維度 (預設取配置 bench.d 或 bench.n)')
    parser.add_argument('--groups', '-c', type=int, default=3, help='合成資料的群組數')
    parser.add_argument('--seed', type=int, default=0, help='亂數種子')
    parser.add_argument('--out', '-o', help='CSV 輸出路徑 (預設標準輸出)')
    parser.set_defaults(handler=cmd_bench)
    return parser


@handle_errors
def cmd_bench(args, config_manager) -> int:
    """執行 bench 命令"""
    sizes = parse_sizes(args.sizes)
    bench = config_manager.get_section('bench')
    repeats = args.repeats if args.repeats is not None else int(bench['repeats'])
    iters = args.iters if args.iters is not None else int(bench['iters'])
    fixed_dim = args.fixed_dim
    if fixed_dim is None:
        fixed_dim = int(bench['d'] if args.mode == 'n' else bench['n'])

    records = run_bench(args.mode, sizes, repeats=repeats, iters=iters, seed=args.seed,
                        fixed_dim=fixed_dim, c=args.groups)

    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            BenchView.write_csv(f, records)
    else:
        BenchView.write_csv(sys.stdout, records)
    ConsoleView.banner(f"效能測試結果 (mode={args.mode}, iters={iters}, repeats={repeats})")
    ConsoleView.bench_table(records, BenchView.ratios(records))
    return EXIT_OK
