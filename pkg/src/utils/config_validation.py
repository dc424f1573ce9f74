"""Experiment config loading and validation utilities."""

import json
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from pydantic import ValidationError

from models.experiment import ExperimentConfig, SweepKind
from models.geometry import ExteriorMap, NormalizedMap, is_infinite
from services.geometry_service import GeometryService
from utils.errors import ConfigInvalidError, GeometryError


def parse_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Parse a config document into an ExperimentConfig.

    Raises:
        ConfigInvalidError: Naming the first offending field
    """
    if not isinstance(data, dict):
        raise ConfigInvalidError("<root>", "config must be a JSON object")
    try:
        return ExperimentConfig(**data)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "<root>"
        raise ConfigInvalidError(field, error["msg"])


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and parse a config JSON file.

    Raises:
        ConfigInvalidError: If the file is missing, is not JSON, or fails validation
    """
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigInvalidError("<file>", f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigInvalidError("<file>", f"invalid JSON: {e}")
    return parse_config(data)


def resolve_geometry(
    config: ExperimentConfig, geometry_service: GeometryService
) -> Tuple[ExteriorMap, NormalizedMap]:
    """
    Build the exterior map and normalize it at z0, checking the grid rule.

    Raises:
        ConfigInvalidError: Naming geometry, grid_M or z0
    """
    M = config.grid_M
    if M & (M - 1):
        raise ConfigInvalidError("grid_M", f"must be a power of two, got {M}")
    if M < 16 * config.n_max:
        raise ConfigInvalidError("grid_M", f"must be at least 16 * n_max = {16 * config.n_max}, got {M}")
    if SweepKind.AHLFORS in config.sweeps and is_infinite(config.z0):
        raise ConfigInvalidError("z0", "the ahlfors sweep needs a finite z0")

    try:
        exterior_map = geometry_service.from_preset(config.geometry.preset, config.geometry.params)
    except GeometryError as e:
        raise ConfigInvalidError("geometry", str(e))

    try:
        nm = geometry_service.normalize(exterior_map, config.z0)
    except GeometryError as e:
        raise ConfigInvalidError("z0", f"must lie strictly outside K: {e}")
    return exterior_map, nm

