"""Geographic inputs: GeoJSON regions, contiguity weights, extent, joins.

Coordinates are WGS84 lon/lat degrees throughout; nothing here reprojects.
Contiguity is computed by hashing vertices (queen) and undirected edges
(rook) after rounding coordinates to 1e-7 degrees, which tolerates the
rounding noise typical of published polygon files.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    GeometryUnsupported,
    InputError,
    KeyMismatch,
    MissingId,
    NonNumericValue,
)

Ring = list[tuple[float, float]]

COORD_ROUND = 1e-7
EARTH_RADIUS_KM = 6371.0088

# Extent classification thresholds (degrees).  east_west/north_south compare
# lon-span scaled by cos(center latitude) against lat-span; the cutoffs are
# calibrated so canonical squarish regions (ratio 0.77..1.28) read as square.
GLOBAL_LON_SPAN = 300.0
GLOBAL_LAT_SPAN = 120.0
CONTINENTAL_LON_SPAN = 60.0
EAST_WEST_RATIO = 1.30
NORTH_SOUTH_RATIO = 0.75


@dataclass
class Region:
    id: str
    polygons: list[list[Ring]]  # polygon -> rings, first ring is the exterior
    properties: dict

    @property
    def rings(self) -> list[Ring]:
        return [ring for poly in self.polygons for ring in poly]


@dataclass
class RegionSet:
    regions: list[Region]

    @property
    def n(self) -> int:
        return len(self.regions)

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.regions]

    def subset(self, indices: list[int]) -> "RegionSet":
        return RegionSet([self.regions[i] for i in indices])


@dataclass
class WeightsMatrix:
    n: int
    kind: str  # queen | rook
    neighbors: list[list[int]]

    @property
    def total_weight(self) -> float:
        """Sum of all binary weights (ordered pairs)."""
        return float(sum(len(ns) for ns in self.neighbors))

    @property
    def isolated(self) -> list[int]:
        return [i for i, ns in enumerate(self.neighbors) if not ns]

    def ordered_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, ns in enumerate(self.neighbors) for j in ns]

    def subset(self, indices: list[int]) -> "WeightsMatrix":
        """Weights over the induced subgraph, reindexed to `indices` order."""
        remap = {orig: new for new, orig in enumerate(indices)}
        neighbors = [
            sorted(remap[j] for j in self.neighbors[orig] if j in remap)
            for orig in indices
        ]
        return WeightsMatrix(n=len(indices), kind=self.kind, neighbors=neighbors)


@dataclass
class Extent:
    lon_min: float
    lon_max: float
    lat_min: float
    lat_max: float
    scale_class: str  # global | continental | regional
    aspect: str  # east_west | north_south | square

    @property
    def lon_span(self) -> float:
        return self.lon_max - self.lon_min

    @property
    def lat_span(self) -> float:
        return self.lat_max - self.lat_min

    @property
    def center(self) -> tuple[float, float]:
        lon = (self.lon_min + self.lon_max) / 2
        if lon > 180:
            lon -= 360
        return (lon, (self.lat_min + self.lat_max) / 2)


@dataclass
class AttributedRegions:
    region_set: RegionSet
    values: list[float | None]
    units: str | None = None
    value_kind: str = "unknown"  # raw_total | normalized | unknown
    missing: frozenset[int] = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return self.region_set.n

    def present_indices(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.missing]

    def present_values(self) -> list[float]:
        return [self.values[i] for i in self.present_indices()]  # type: ignore[misc]


# ---------------------------------------------------------------------------
# GeoJSON loading
# ---------------------------------------------------------------------------

def load_geojson(text: str, id_property: str | None = None) -> RegionSet:
    """Read a FeatureCollection of Polygon/MultiPolygon features.

    The region id comes from the feature's `id` member, or from
    `properties[id_property]` when given (id_property wins if both exist).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid GeoJSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise InputError("expected a GeoJSON FeatureCollection")
    features = data.get("features")
    if not isinstance(features, list) or not features:
        raise InputError("FeatureCollection has no features")

    regions: list[Region] = []
    seen: set[str] = set()
    for idx, feature in enumerate(features):
        geometry = feature.get("geometry") or {}
        gtype = geometry.get("type")
        if gtype == "Polygon":
            polygons = [_read_polygon(geometry.get("coordinates"), idx)]
        elif gtype == "MultiPolygon":
            coords = geometry.get("coordinates") or []
            polygons = [_read_polygon(p, idx) for p in coords]
        else:
            raise GeometryUnsupported(
                f"feature {idx}: geometry type {gtype!r} is not Polygon/MultiPolygon"
            )
        properties = feature.get("properties") or {}
        rid = _region_id(feature, properties, id_property, idx)
        if rid in seen:
            raise MissingId(f"duplicate region id {rid!r}")
        seen.add(rid)
        regions.append(Region(id=rid, polygons=polygons, properties=properties))
    return RegionSet(regions)


def _region_id(feature: dict, properties: dict, id_property: str | None, idx: int) -> str:
    if id_property is not None:
        if id_property not in properties:
            raise MissingId(f"feature {idx}: property {id_property!r} not found")
        return str(properties[id_property])
    if "id" in feature and feature["id"] is not None:
        return str(feature["id"])
    raise MissingId(f"feature {idx}: no 'id' member (pass an id property name)")


def _read_polygon(coordinates, idx: int) -> list[Ring]:
    if not isinstance(coordinates, list) or not coordinates:
        raise InputError(f"feature {idx}: empty polygon coordinates")
    rings = []
    for raw in coordinates:
        ring = [_read_vertex(v, idx) for v in raw]
        if ring and ring[0] != ring[-1]:
            ring.append(ring[0])
        if len(ring) < 4:
            raise InputError(f"feature {idx}: ring with fewer than 3 distinct vertices")
        rings.append(ring)
    return rings


def _read_vertex(v, idx: int) -> tuple[float, float]:
    if not isinstance(v, list) or len(v) < 2:
        raise InputError(f"feature {idx}: bad coordinate {v!r}")
    lon, lat = float(v[0]), float(v[1])
    if not (-180.0 - 1e-6 <= lon <= 180.0 + 1e-6) or not (-90.0 - 1e-6 <= lat <= 90.0 + 1e-6):
        raise InputError(f"feature {idx}: coordinate out of range ({lon}, {lat})")
    return (min(max(lon, -180.0), 180.0), min(max(lat, -90.0), 90.0))


# ---------------------------------------------------------------------------
# Contiguity
# ---------------------------------------------------------------------------

def _round_key(vertex: tuple[float, float]) -> tuple[int, int]:
    return (round(vertex[0] / COORD_ROUND), round(vertex[1] / COORD_ROUND))


def build_contiguity(rs: RegionSet, kind: str = "queen") -> WeightsMatrix:
    """Binary symmetric adjacency; queen shares a vertex, rook shares an edge."""
    if kind not in ("queen", "rook"):
        raise ValueError(f"contiguity kind must be queen or rook, got {kind!r}")
    owners: dict[object, set[int]] = {}
    for i, region in enumerate(rs.regions):
        for ring in region.rings:
            keys = [_round_key(v) for v in ring]
            if kind == "queen":
                for key in keys:
                    owners.setdefault(key, set()).add(i)
            else:
                for a, b in zip(keys, keys[1:]):
                    if a == b:
                        continue  # degenerate edge after rounding
                    edge = (a, b) if a <= b else (b, a)
                    owners.setdefault(edge, set()).add(i)
    neighbor_sets: list[set[int]] = [set() for _ in range(rs.n)]
    for members in owners.values():
        if len(members) < 2:
            continue
        for i in members:
            neighbor_sets[i].update(j for j in members if j != i)
    return WeightsMatrix(n=rs.n, kind=kind, neighbors=[sorted(s) for s in neighbor_sets])


# ---------------------------------------------------------------------------
# Extent
# ---------------------------------------------------------------------------

def compute_extent(rs: RegionSet) -> Extent:
    lons: list[float] = []
    lats: list[float] = []
    for region in rs.regions:
        for ring in region.rings:
            for lon, lat in ring:
                lons.append(lon)
                lats.append(lat)
    # antimeridian-crossing data gets its western side shifted +360 when that
    # produces a tighter box; a true straddle is always under 180 deg wide
    plain_min, plain_max = min(lons), max(lons)
    shifted = [lon + 360.0 if lon < 0 else lon for lon in lons]
    shifted_min, shifted_max = min(shifted), max(shifted)
    shifted_span = shifted_max - shifted_min
    if shifted_span < plain_max - plain_min and shifted_span < 180.0:
        lon_min, lon_max = shifted_min, shifted_max
    else:
        lon_min, lon_max = plain_min, plain_max
    lat_min, lat_max = min(lats), max(lats)

    lon_span = lon_max - lon_min
    lat_span = lat_max - lat_min
    if lon_span >= GLOBAL_LON_SPAN or lat_span >= GLOBAL_LAT_SPAN:
        scale_class = "global"
    elif lon_span >= CONTINENTAL_LON_SPAN:
        scale_class = "continental"
    else:
        scale_class = "regional"

    center_lat = (lat_min + lat_max) / 2
    effective_width = lon_span * math.cos(math.radians(center_lat))
    if lat_span <= 0:
        ratio = math.inf if effective_width > 0 else 1.0
    else:
        ratio = effective_width / lat_span
    if ratio >= EAST_WEST_RATIO:
        aspect = "east_west"
    elif ratio <= NORTH_SOUTH_RATIO:
        aspect = "north_south"
    else:
        aspect = "square"
    return Extent(lon_min, lon_max, lat_min, lat_max, scale_class, aspect)


# ---------------------------------------------------------------------------
# Areas (for density normalization)
# ---------------------------------------------------------------------------

def _ring_area_sr(ring: Ring) -> float:
    """Unsigned spherical area of a ring in steradians (shoelace on the sphere)."""
    total = 0.0
    for (lon1, lat1), (lon2, lat2) in zip(ring, ring[1:]):
        total += math.radians(lon2 - lon1) * (
            2 + math.sin(math.radians(lat1)) + math.sin(math.radians(lat2))
        )
    return abs(total) / 2.0


def region_areas_km2(rs: RegionSet) -> list[float]:
    """Approximate area of each region in square kilometers (holes subtracted)."""
    areas = []
    for region in rs.regions:
        sr = 0.0
        for rings in region.polygons:
            if not rings:
                continue
            outer = _ring_area_sr(rings[0])
            holes = sum(_ring_area_sr(r) for r in rings[1:])
            sr += max(outer - holes, 0.0)
        areas.append(sr * EARTH_RADIUS_KM * EARTH_RADIUS_KM)
    return areas


# ---------------------------------------------------------------------------
# Attribute join
# ---------------------------------------------------------------------------

def _as_number(raw, where: str) -> float:
    if isinstance(raw, bool):
        raise NonNumericValue(f"{where}: boolean is not a value")
    if isinstance(raw, (int, float)):
        value = float(raw)
    elif isinstance(raw, str):
        try:
            value = float(raw.replace(",", ""))
        except ValueError:
            raise NonNumericValue(f"{where}: {raw!r} is not a number") from None
    else:
        raise NonNumericValue(f"{where}: {raw!r} is not a number")
    if not math.isfinite(value):
        raise NonNumericValue(f"{where}: non-finite value")
    return value


def join_attributes(
    rs: RegionSet,
    table: list[dict],
    key_field: str,
    value_field: str,
    missing_policy: str = "error",
    units: str | None = None,
    value_kind: str = "unknown",
) -> AttributedRegions:
    """Align one numeric column to region order via a key column.

    missing_policy: 'error' raises KeyMismatch; 'exclude' drops unmatched
    regions from the set; 'treat_as_missing' keeps them with a missing mark.
    """
    if missing_policy not in ("error", "exclude", "treat_as_missing"):
        raise ValueError(f"unknown missing policy {missing_policy!r}")
    by_key: dict[str, dict] = {}
    for row in table:
        if key_field not in row:
            raise InputError(f"table row lacks key field {key_field!r}")
        by_key[str(row[key_field])] = row

    values: list[float | None] = []
    unmatched: list[str] = []
    for region in rs.regions:
        row = by_key.get(region.id)
        if row is None or row.get(value_field) in ("", None):
            unmatched.append(region.id)
            values.append(None)
        else:
            values.append(_as_number(row[value_field], f"{region.id}.{value_field}"))

    if unmatched and missing_policy == "error":
        raise KeyMismatch(unmatched)
    if unmatched and missing_policy == "exclude":
        keep = [i for i, v in enumerate(values) if v is not None]
        return AttributedRegions(
            region_set=rs.subset(keep),
            values=[values[i] for i in keep],
            units=units,
            value_kind=value_kind,
        )
    missing = frozenset(i for i, v in enumerate(values) if v is None)
    return AttributedRegions(
        region_set=rs,
        values=values,
        units=units,
        value_kind=value_kind,
        missing=missing,
    )


def join_from_properties(
    rs: RegionSet,
    value_field: str,
    missing_policy: str = "error",
    units: str | None = None,
    value_kind: str = "unknown",
) -> AttributedRegions:
    """Join using values embedded in each feature's properties."""
    table = [dict(region.properties, __id=region.id) for region in rs.regions]
    return join_attributes(
        rs, table, "__id", value_field, missing_policy=missing_policy,
        units=units, value_kind=value_kind,
    )
