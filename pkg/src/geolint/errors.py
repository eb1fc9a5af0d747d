"""Exception types shared across the package."""
from __future__ import annotations


class GeolintError(Exception):
    """Base class for all errors raised by this package."""


class SpecSyntaxError(GeolintError):
    """The spec text is not well-formed JSON. Carries source position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class PointerSyntaxError(GeolintError):
    """A path string is not a valid RFC 6901 pointer."""


class PatchTargetMissing(GeolintError):
    """A patch refers to a path that cannot be resolved in the document."""

    def __init__(self, path: str):
        super().__init__(f"patch target not found: {path!r}")
        self.path = path


class InputError(GeolintError):
    """Bad user-supplied data (files, tables) outside the spec itself."""


class GeometryUnsupported(InputError):
    """GeoJSON contains a geometry type other than Polygon/MultiPolygon."""


class MissingId(InputError):
    """A feature has no usable region identifier."""


class KeyMismatch(InputError):
    """Attribute join could not match every region id."""

    def __init__(self, unmatched: list[str]):
        super().__init__(f"no attribute row for region ids: {', '.join(unmatched)}")
        self.unmatched = unmatched


class NonNumericValue(InputError):
    """An attribute value could not be read as a finite number."""


class DegenerateRange(GeolintError):
    """All data values are equal; range-based classification impossible."""


class ZeroVariance(GeolintError):
    """The data (or classed surface) has no variance."""


class TooManyClasses(GeolintError):
    """Requested class count exceeds the number of distinct values."""


class InvalidClassCount(GeolintError):
    """Requested class count violates a classifier's precondition."""


class InfeasibleFloor(GeolintError):
    """max-p floor exceeds the number of spatial units."""


class NoNeighbors(GeolintError):
    """Spatial weights are empty; Moran's I is undefined."""


class NoPaletteAvailable(GeolintError):
    """No catalog palette satisfies the requested kind/size/background."""


class OutOfDomain(GeolintError):
    """Point lies outside the projection's forward domain."""


class UnsupportedProjection(GeolintError):
    """No forward equations implemented for this projection kind."""


class NoFixAvailable(GeolintError):
    """The rule has no machine-applicable fix; user action required."""


class ZeroDenominator(GeolintError):
    """Normalization denominator is zero for one or more regions."""

    def __init__(self, region_ids: list[str]):
        super().__init__(f"zero denominator for regions: {', '.join(region_ids)}")
        self.region_ids = region_ids


class MissingAux(GeolintError):
    """Normalization requires an auxiliary series that was not supplied."""


class EmptyVariable(GeolintError):
    """Title generation requires a non-empty variable name."""
