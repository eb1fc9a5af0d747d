"""Extent-driven equal-area projection recommendation and forward math.

Policy: only equal-area projections are ever recommended or accepted; the
right one depends on the extent's scale and shape.  Compromise and conformal
projections stay representable so existing specs can be linted (and flagged),
but they are never acceptable.

Forward equations are the published spherical forms on a unit sphere,
shifted so the projection's own center lands at (0, 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import OutOfDomain, UnsupportedProjection
from .geodata import Extent


class ProjectionKind(str, Enum):
    EQUAL_EARTH = "equal_earth"
    ALBERS_USA = "albers_usa"
    ALBERS_CONIC = "albers_conic"
    LAMBERT_AZIMUTHAL = "lambert_azimuthal"
    TCEA = "transverse_cylindrical_equal_area"
    NATURAL_EARTH = "natural_earth"
    MERCATOR = "mercator"
    OTHER = "other"


EQUAL_AREA_KINDS = frozenset(
    {
        ProjectionKind.EQUAL_EARTH,
        ProjectionKind.ALBERS_USA,
        ProjectionKind.ALBERS_CONIC,
        ProjectionKind.LAMBERT_AZIMUTHAL,
        ProjectionKind.TCEA,
    }
)

# VegaLite projection-type strings <-> kinds.  "tcea" is this tool's own
# string for the transverse cylindrical equal-area (see README mapping table).
_FROM_NAME = {
    "equalearth": ProjectionKind.EQUAL_EARTH,
    "albersusa": ProjectionKind.ALBERS_USA,
    "albers": ProjectionKind.ALBERS_CONIC,
    "conicequalarea": ProjectionKind.ALBERS_CONIC,
    "azimuthalequalarea": ProjectionKind.LAMBERT_AZIMUTHAL,
    "tcea": ProjectionKind.TCEA,
    "naturalearth1": ProjectionKind.NATURAL_EARTH,
    "naturalearth": ProjectionKind.NATURAL_EARTH,
    "mercator": ProjectionKind.MERCATOR,
}
TO_VEGALITE = {
    ProjectionKind.EQUAL_EARTH: "equalEarth",
    ProjectionKind.ALBERS_USA: "albersUsa",
    ProjectionKind.ALBERS_CONIC: "albers",
    ProjectionKind.LAMBERT_AZIMUTHAL: "azimuthalEqualArea",
    ProjectionKind.TCEA: "tcea",
    ProjectionKind.NATURAL_EARTH: "naturalEarth1",
    ProjectionKind.MERCATOR: "mercator",
}

# Rough lower-48 bounding box used for named-region matching.
USA_BBOX = (-124.8, -66.9, 24.4, 49.4)
USA_BBOX_TOLERANCE = 6.0
USA_HINT_MARKERS = ("us-10m", "us_states", "us-states", "united_states", "unitedstates", "usa")


@dataclass(frozen=True)
class ProjectionChoice:
    kind: ProjectionKind
    params: dict = field(default_factory=dict)
    name: str | None = None  # original string for OTHER

    @property
    def equal_area(self) -> bool:
        return self.kind in EQUAL_AREA_KINDS

    @property
    def vegalite_name(self) -> str:
        if self.kind is ProjectionKind.OTHER:
            return self.name or "unknown"
        return TO_VEGALITE[self.kind]

    def to_projection_object(self) -> dict:
        """The /projection value a fix patch writes."""
        obj: dict = {"type": self.vegalite_name}
        if "parallels" in self.params:
            obj["parallels"] = list(self.params["parallels"])
        if "center" in self.params:
            # VegaLite rotates longitudes and centers latitudes
            lon, lat = self.params["center"]
            obj["rotate"] = [-lon, 0]
            obj["center"] = [0, lat]
        return obj


def from_vegalite_name(name: str, params: dict | None = None) -> ProjectionChoice:
    kind = _FROM_NAME.get(name.strip().lower())
    if kind is None:
        return ProjectionChoice(ProjectionKind.OTHER, params or {}, name=name)
    return ProjectionChoice(kind, params or {})


def is_usa_extent(e: Extent, hint: str | None = None) -> bool:
    """Named-region detection for the composite USA projection."""
    if hint:
        h = hint.lower()
        if any(marker in h for marker in USA_HINT_MARKERS):
            return True
    lon_min, lon_max, lat_min, lat_max = USA_BBOX
    t = USA_BBOX_TOLERANCE
    return (
        abs(e.lon_min - lon_min) <= t
        and abs(e.lon_max - lon_max) <= t
        and abs(e.lat_min - lat_min) <= t
        and abs(e.lat_max - lat_max) <= t
    )


def recommend_projection(e: Extent, hint: str | None = None) -> ProjectionChoice:
    """The equal-area projection suited to the extent's scale and shape."""
    if e.scale_class == "global":
        return ProjectionChoice(ProjectionKind.EQUAL_EARTH)
    if is_usa_extent(e, hint):
        return ProjectionChoice(ProjectionKind.ALBERS_USA)
    center = e.center
    if e.scale_class == "continental":
        return ProjectionChoice(ProjectionKind.LAMBERT_AZIMUTHAL, {"center": center})
    if e.aspect == "east_west":
        inset = e.lat_span / 6
        return ProjectionChoice(
            ProjectionKind.ALBERS_CONIC,
            {
                "parallels": (e.lat_min + inset, e.lat_max - inset),
                "center": center,
            },
        )
    if e.aspect == "north_south":
        return ProjectionChoice(ProjectionKind.TCEA, {"center": center})
    return ProjectionChoice(ProjectionKind.LAMBERT_AZIMUTHAL, {"center": center})


def acceptable_kinds(e: Extent, hint: str | None = None) -> frozenset[ProjectionKind]:
    kinds = {recommend_projection(e, hint).kind}
    if e.scale_class == "global":
        kinds.add(ProjectionKind.EQUAL_EARTH)
    if is_usa_extent(e, hint):
        kinds.update({ProjectionKind.ALBERS_USA, ProjectionKind.ALBERS_CONIC})
    return frozenset(kinds)


def is_acceptable(p: ProjectionChoice, e: Extent, hint: str | None = None) -> bool:
    """Equal-area AND compatible with the extent's recommendation branch."""
    return p.equal_area and p.kind in acceptable_kinds(e, hint)


# ---------------------------------------------------------------------------
# Forward projection math (unit sphere)
# ---------------------------------------------------------------------------

_EE_A1, _EE_A2, _EE_A3, _EE_A4 = 1.340264, -0.081106, 0.000893, 0.003796
_EE_M = math.sqrt(3) / 2


def _equal_earth(lon: float, lat: float, lon0: float, y0: float) -> tuple[float, float]:
    lam = math.radians(lon - lon0)
    t = math.asin(_EE_M * math.sin(math.radians(lat)))
    t2 = t * t
    t6 = t2 * t2 * t2
    x = lam * math.cos(t) / (_EE_M * (_EE_A1 + 3 * _EE_A2 * t2 + t6 * (7 * _EE_A3 + 9 * _EE_A4 * t2)))
    y = t * (_EE_A1 + _EE_A2 * t2 + t6 * (_EE_A3 + _EE_A4 * t2))
    return x, y - y0


def _equal_earth_y(lat: float) -> float:
    t = math.asin(_EE_M * math.sin(math.radians(lat)))
    t2 = t * t
    t6 = t2 * t2 * t2
    return t * (_EE_A1 + _EE_A2 * t2 + t6 * (_EE_A3 + _EE_A4 * t2))


def _albers(lon: float, lat: float, lon0: float, lat0: float, p1: float, p2: float) -> tuple[float, float]:
    phi = math.radians(lat)
    phi0, phi1, phi2 = math.radians(lat0), math.radians(p1), math.radians(p2)
    n = (math.sin(phi1) + math.sin(phi2)) / 2
    if abs(n) < 1e-12:
        # symmetric parallels about the equator degrade to a cylindrical form
        return math.radians(lon - lon0) * math.cos(phi1), (math.sin(phi) - math.sin(phi0)) / math.cos(phi1)
    c = math.cos(phi1) ** 2 + 2 * n * math.sin(phi1)
    rho = math.sqrt(max(c - 2 * n * math.sin(phi), 0.0)) / n
    rho0 = math.sqrt(max(c - 2 * n * math.sin(phi0), 0.0)) / n
    theta = n * math.radians(lon - lon0)
    return rho * math.sin(theta), rho0 - rho * math.cos(theta)


def _lambert_azimuthal(lon: float, lat: float, lon0: float, lat0: float) -> tuple[float, float]:
    phi = math.radians(lat)
    lam = math.radians(lon - lon0)
    phi1 = math.radians(lat0)
    den = 1 + math.sin(phi1) * math.sin(phi) + math.cos(phi1) * math.cos(phi) * math.cos(lam)
    if den <= 1e-12:
        raise OutOfDomain("antipode of the projection center")
    k = math.sqrt(2.0 / den)
    x = k * math.cos(phi) * math.sin(lam)
    y = k * (math.cos(phi1) * math.sin(phi) - math.sin(phi1) * math.cos(phi) * math.cos(lam))
    return x, y


def _tcea(lon: float, lat: float, lon0: float, lat0: float) -> tuple[float, float]:
    phi = math.radians(lat)
    lam = math.radians(lon - lon0)
    x = math.cos(phi) * math.sin(lam)
    y = math.atan2(math.tan(phi), math.cos(lam)) - math.radians(lat0)
    return x, y


def _mercator(lon: float, lat: float, lon0: float, y0: float) -> tuple[float, float]:
    if abs(lat) >= 89.9:
        raise OutOfDomain(f"mercator undefined at latitude {lat}")
    x = math.radians(lon - lon0)
    y = math.log(math.tan(math.pi / 4 + math.radians(lat) / 2))
    return x, y - y0


# Composite USA layout: conus in place; Alaska scaled and tucked lower-left,
# Hawaii lower-middle (conventional atlas inset arrangement).
_AK_SCALE = 0.35
_AK_OFFSET = (-1.9, -1.3)
_HI_OFFSET = (-0.7, -1.45)


def _albers_usa(lon: float, lat: float) -> tuple[float, float]:
    if lat >= 50.0 and lon <= -127.0:
        x, y = _albers(lon, lat, -154, 60, 55, 65)
        return x * _AK_SCALE + _AK_OFFSET[0], y * _AK_SCALE + _AK_OFFSET[1]
    if 18.0 <= lat <= 24.0 and -162.0 <= lon <= -154.0:
        x, y = _albers(lon, lat, -157, 20, 19, 21)
        return x + _HI_OFFSET[0], y + _HI_OFFSET[1]
    x, y = _albers(lon, lat, -96, 37.5, 29.5, 45.5)
    return x, y


def project_point(p: ProjectionChoice, lon: float, lat: float) -> tuple[float, float]:
    """Forward-project one lon/lat degree pair to plane coordinates."""
    center = p.params.get("center", (0.0, 0.0))
    lon0, lat0 = center
    kind = p.kind
    if kind is ProjectionKind.EQUAL_EARTH:
        return _equal_earth(lon, lat, lon0, _equal_earth_y(lat0))
    if kind is ProjectionKind.ALBERS_CONIC:
        p1, p2 = p.params.get("parallels", (29.5, 45.5))
        return _albers(lon, lat, lon0, lat0, p1, p2)
    if kind is ProjectionKind.LAMBERT_AZIMUTHAL:
        return _lambert_azimuthal(lon, lat, lon0, lat0)
    if kind is ProjectionKind.TCEA:
        return _tcea(lon, lat, lon0, lat0)
    if kind is ProjectionKind.MERCATOR:
        y0 = 0.0
        if lat0:
            y0 = math.log(math.tan(math.pi / 4 + math.radians(lat0) / 2))
        return _mercator(lon, lat, lon0, y0)
    if kind is ProjectionKind.ALBERS_USA:
        return _albers_usa(lon, lat)
    raise UnsupportedProjection(f"no forward equations for {kind.value}")


def project_ring(p: ProjectionChoice, ring: list[tuple[float, float]]) -> list[tuple[float, float]]:
    return [project_point(p, lon, lat) for lon, lat in ring]
