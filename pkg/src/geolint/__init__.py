"""geolint: linting, classification and autofix for choropleth map specs."""

__version__ = "0.1.0"

from .document import Patch, SpecDocument, apply_patches, diff, parse_spec, serialize
from .mapspec import MapSpec, extract_map_spec

__all__ = [
    "Patch",
    "SpecDocument",
    "apply_patches",
    "diff",
    "parse_spec",
    "serialize",
    "MapSpec",
    "extract_map_spec",
    "__version__",
]
