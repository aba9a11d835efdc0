"""
控制器層 (Controllers)
每個命令一個控制器，負責協調模型、服務與視圖
"""

from . import bench_controller, decompose_controller, frames_controller, outliers_controller, synth_controller
from .command_controller import EXIT_OK, EXIT_SOLVER, EXIT_USAGE

COMMAND_CONTROLLERS = [
    decompose_controller,
    synth_controller,
    bench_controller,
    outliers_controller,
    frames_controller,
]

__all__ = [
    'COMMAND_CONTROLLERS',
    'EXIT_OK',
    'EXIT_USAGE',
    'EXIT_SOLVER'
]
