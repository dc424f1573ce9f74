"""list-presets command handler."""

import json

from models.measure import DENSITY_PARAMETERS
from services.geometry_service import GEOMETRY_PRESETS


def list_presets(as_json: bool = False) -> str:
    """
    Enumerate geometry presets and density kinds with their parameter schemas.

    Args:
        as_json: Emit a machine-readable document instead of text

    Returns:
        Text to print on stdout
    """
    if as_json:
        return json.dumps({"geometry": GEOMETRY_PRESETS, "density": DENSITY_PARAMETERS}, indent=2, sort_keys=True)

    lines = ["Geometry presets:"]
    for name, params in GEOMETRY_PRESETS.items():
        lines.append(f"  {name}")
        lines.extend(f"    {key}: {doc}" for key, doc in params.items())
    lines.append("Density kinds:")
    for name, params in DENSITY_PARAMETERS.items():
        lines.append(f"  {name}")
        lines.extend(f"    {key}: {doc}" for key, doc in params.items())
    return "\n".join(lines)
