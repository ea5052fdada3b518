from hfbgeo.control_plane.config.experiment_config import (
    COMMANDS,
    ExperimentConfig,
    ExperimentConfigParser,
    HfbSettings,
    HubbardSettings,
    build_config,
    load_config_file,
)

__all__ = [
    "COMMANDS",
    "ExperimentConfig",
    "ExperimentConfigParser",
    "HfbSettings",
    "HubbardSettings",
    "build_config",
    "load_config_file",
]
