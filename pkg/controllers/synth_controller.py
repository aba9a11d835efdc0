"""
合成資料控制器
處理 synth 命令：產生 X = L0 + S0 與分組真值
"""

import logging

from controllers.command_controller import EXIT_OK, handle_errors
from services.matrix_io_service import write_labels_csv, write_matrix
from services.synth_service import SynthSpec, synth_generate


def register(subparsers):
    """註冊 synth 子命令"""
    parser = subparsers.add_parser('synth', help='產生保留真值的合成低秩 + 稀疏資料')
    parser.add_argument('--d', type=int, default=100, help='維度 (列數)')
    parser.add_argument('--n', type=int, default=200, help='樣本數 (欄數)')
    parser.add_argument('--c', type=int, default=3, help='子空間 (群組) 數')
    parser.add_argument('--sparsity', type=float, default=0.05, help='稀疏項非零比例')
    parser.add_argument('--magnitude', type=float, default=1.0, help='稀疏項數值大小')
    parser.add_argument('--noise-sigma', type=float, default=0.0, help='高斯雜訊標準差')
    parser.add_argument('--outlier-columns', type=int, default=0, help='整欄離群值的欄數')
    parser.add_argument('--seed', type=int, default=0, help='亂數種子')
    parser.add_argument('--out-x', default='X.csv', help='X 輸出路徑')
    parser.add_argument('--out-l0', default='L0.csv', help='L0 輸出路徑')
    parser.add_argument('--out-s0', default='S0.csv', help='S0 輸出路徑')
    parser.add_argument('--out-labels', default='labels.csv', help='分組標籤輸出路徑')
    parser.set_defaults(handler=cmd_synth)
    return parser


@handle_errors
def cmd_synth(args, config_manager) -> int:
    """執行 synth 命令"""
    spec = SynthSpec(
        d=args.d,
        n=args.n,
        c=args.c,
        sparsity=args.sparsity,
        magnitude=args.magnitude,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
        outlier_columns=args.outlier_columns,
    )
    result = synth_generate(spec)

    write_matrix(args.out_x, result.X)
    write_matrix(args.out_l0, result.L0)
    write_matrix(args.out_s0, result.S0)
    write_labels_csv(args.out_labels, result.assignment)

    logging.info(f"synth: d={spec.d}, n={spec.n}, c={spec.c}, sparsity={spec.sparsity:g}, "
                 f"outliers={result.outlier_indices.tolist()}")
    return EXIT_OK
