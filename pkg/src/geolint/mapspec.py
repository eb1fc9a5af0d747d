"""Extraction of the recognized choropleth fields from a spec document.

Only a fixed set of paths is interpreted; everything else in the document is
preserved untouched and never linted.  Absent fields stay absent — the rule
layer decides what absence means — except background and stroke, which take
the renderer's defaults and are tagged as defaulted so rules can tell a
deliberate choice from a fallback.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .document import SpecDocument

# Paths this linter reads.  Kept deliberately small; see README.
RECOGNIZED_PATHS = (
    "/data/url",
    "/data/format/feature",
    "/mark",
    "/mark/type",
    "/mark/stroke",
    "/mark/strokeWidth",
    "/encoding/color/field",
    "/encoding/color/type",
    "/encoding/color/scale/domain",
    "/encoding/color/scale/range",
    "/encoding/color/scale/scheme",
    "/encoding/color/legend/title",
    "/projection/type",
    "/title",
    "/background",
    "/transform",
)

DEFAULT_BACKGROUND = "#ffffff"
DEFAULT_PROJECTION = "equalEarth"  # renderer default when /projection is absent
DEFAULT_SCHEME = "viridis"  # renderer default ramp for quantitative color
DEFAULT_STROKE_WIDTH = 1.0

_CSS_COLORS = {
    "white": "#ffffff",
    "black": "#000000",
    "red": "#ff0000",
    "green": "#008000",
    "blue": "#0000ff",
    "gray": "#808080",
    "grey": "#808080",
    "lightgray": "#d3d3d3",
    "lightgrey": "#d3d3d3",
    "darkgray": "#a9a9a9",
    "darkgrey": "#a9a9a9",
}

_HEX_RE = re.compile(r"^#([0-9a-fA-F]{3}|[0-9a-fA-F]{6})$")
_CALC_RE = re.compile(
    r"^\s*datum(?:\.(?P<num1>\w+)|\[['\"](?P<num2>[^'\"]+)['\"]\])\s*/\s*"
    r"datum(?:\.(?P<den1>\w+)|\[['\"](?P<den2>[^'\"]+)['\"]\])\s*$"
)


@dataclass
class RatioTransform:
    """A recognized `calculate` transform of the form datum.a / datum.b."""

    numerator: str
    denominator: str
    output: str


@dataclass
class MapSpec:
    data_url: str | None = None
    data_feature: str | None = None
    mark: str | None = None
    color_field: str | None = None
    color_type: str | None = None
    breaks: list[float] | None = None
    colors: list[str] | None = None
    scheme_name: str | None = None
    projection: str | None = None
    projection_defaulted: bool = False
    title: str | None = None
    legend_title: str | None = None
    background: str = DEFAULT_BACKGROUND
    background_defaulted: bool = False
    stroke_color: str | None = None
    stroke_defaulted: bool = False
    stroke_width: float = DEFAULT_STROKE_WIDTH
    transform: RatioTransform | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def k(self) -> int | None:
        """Class count implied by explicit breaks, if any."""
        return len(self.breaks) + 1 if self.breaks is not None else None

    @property
    def classed(self) -> bool:
        return self.breaks is not None


def normalize_color(value, notes: list[str], where: str) -> str | None:
    """Return '#rrggbb' for a recognized color literal, else None with a note."""
    if not isinstance(value, str):
        notes.append(f"{where}: color is not a string; ignored")
        return None
    raw = value.strip()
    named = _CSS_COLORS.get(raw.lower())
    if named:
        return named
    m = _HEX_RE.match(raw)
    if not m:
        notes.append(f"{where}: unrecognized color {raw!r}; ignored")
        return None
    h = m.group(1)
    if len(h) == 3:
        h = "".join(c * 2 for c in h)
    return "#" + h.lower()


def _get(doc: SpecDocument, path: str):
    try:
        return doc.resolve(path)
    except KeyError:
        return None


def _string_at(doc: SpecDocument, path: str, notes: list[str]) -> str | None:
    value = _get(doc, path)
    if value is None:
        return None
    if not isinstance(value, str):
        notes.append(f"{path}: expected a string; ignored")
        return None
    return value


def extract_map_spec(doc: SpecDocument) -> MapSpec:
    """Pull the recognized fields out of a parsed document.  Never raises."""
    notes: list[str] = []
    spec = MapSpec(notes=notes)

    spec.data_url = _string_at(doc, "/data/url", notes)
    spec.data_feature = _string_at(doc, "/data/format/feature", notes)

    mark = _get(doc, "/mark")
    if isinstance(mark, str):
        spec.mark = mark
    elif isinstance(mark, dict):
        mark_type = mark.get("type")
        spec.mark = mark_type if isinstance(mark_type, str) else None
        stroke = mark.get("stroke")
        if stroke is not None:
            spec.stroke_color = normalize_color(stroke, notes, "/mark/stroke")
        width = mark.get("strokeWidth")
        if isinstance(width, (int, float)) and not isinstance(width, bool) and width >= 0:
            spec.stroke_width = float(width)
        elif width is not None:
            notes.append("/mark/strokeWidth: expected a non-negative number; ignored")
    elif mark is not None:
        notes.append("/mark: expected a string or object; ignored")
    if spec.stroke_color is None:
        # geoshape draws no internal stroke unless one is given
        spec.stroke_defaulted = True

    spec.color_field = _string_at(doc, "/encoding/color/field", notes)
    spec.color_type = _string_at(doc, "/encoding/color/type", notes)

    domain = _get(doc, "/encoding/color/scale/domain")
    if domain is not None:
        breaks = _numeric_list(domain)
        if breaks is None:
            notes.append("/encoding/color/scale/domain: expected a list of numbers; ignored")
        elif any(b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])):
            notes.append("/encoding/color/scale/domain: not strictly ascending; ignored")
        elif breaks:
            spec.breaks = breaks

    rng = _get(doc, "/encoding/color/scale/range")
    if rng is not None:
        if not isinstance(rng, list):
            notes.append("/encoding/color/scale/range: expected a list; ignored")
        else:
            colors = [normalize_color(c, notes, "/encoding/color/scale/range") for c in rng]
            if all(c is not None for c in colors) and colors:
                spec.colors = colors  # type: ignore[assignment]
            else:
                notes.append("/encoding/color/scale/range: unusable color list; ignored")
    if spec.breaks is not None and spec.colors is not None:
        if len(spec.colors) != len(spec.breaks) + 1:
            notes.append(
                f"range has {len(spec.colors)} colors but domain implies "
                f"{len(spec.breaks) + 1} classes"
            )

    spec.scheme_name = _string_at(doc, "/encoding/color/scale/scheme", notes)
    spec.legend_title = _string_at(doc, "/encoding/color/legend/title", notes)

    projection = _string_at(doc, "/projection/type", notes)
    if projection is None:
        spec.projection = DEFAULT_PROJECTION
        spec.projection_defaulted = True
    else:
        spec.projection = projection

    spec.title = _string_at(doc, "/title", notes)

    background = _get(doc, "/background")
    if background is None:
        spec.background = DEFAULT_BACKGROUND
        spec.background_defaulted = True
    else:
        normalized = normalize_color(background, notes, "/background")
        if normalized is None:
            spec.background = DEFAULT_BACKGROUND
            spec.background_defaulted = True
        else:
            spec.background = normalized

    spec.transform = _extract_transform(doc, notes)
    return spec


def _numeric_list(value) -> list[float] | None:
    if not isinstance(value, list):
        return None
    out: list[float] = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            return None
        out.append(float(v))
    return out


def _extract_transform(doc: SpecDocument, notes: list[str]) -> RatioTransform | None:
    transform = _get(doc, "/transform")
    if transform is None:
        return None
    if not isinstance(transform, list):
        notes.append("/transform: expected a list; ignored")
        return None
    found = None
    for entry in transform:
        if not isinstance(entry, dict) or "calculate" not in entry:
            continue
        expr = entry.get("calculate")
        out = entry.get("as")
        if not isinstance(expr, str) or not isinstance(out, str):
            continue
        m = _CALC_RE.match(expr)
        if not m:
            notes.append(f"/transform: unrecognized calculate expression {expr!r}")
            continue
        num = m.group("num1") or m.group("num2")
        den = m.group("den1") or m.group("den2")
        found = RatioTransform(numerator=num, denominator=den, output=out)
    return found
