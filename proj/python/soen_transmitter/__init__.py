"""Python access to the soen simulation core."""

from ._core import (
    ConfigError,
    DATA_DIR,
    SimulationError,
    __version__,
    dump_config,
    evaluate,
    figure,
    figure_ids,
    forward_voltage,
    poisson_zero,
    sweep,
    target_outputs,
    targets,
)

__all__ = [
    "ConfigError",
    "DATA_DIR",
    "SimulationError",
    "__version__",
    "dump_config",
    "evaluate",
    "figure",
    "figure_ids",
    "forward_voltage",
    "poisson_zero",
    "sweep",
    "target_outputs",
    "targets",
]
