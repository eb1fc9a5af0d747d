"""Rule codes, diagnostics, and the hard/soft rule evaluators.

Hard rules are grammar prerequisites: without them the map cannot render at
all.  Soft rules are design guidance: the map renders, but badly.  Every rule
is evaluated independently of the others; when an input a rule needs cannot
be derived (bad spec, no data), the rule is recorded as skipped rather than
guessed at.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from ..classify import gvf
from ..color import check_color_set, delta_e
from ..document import Patch
from ..projection import from_vegalite_name, is_acceptable, recommend_projection


class RuleCode(str, Enum):
    DATA_URL = "DATA_URL"
    DATA_FEATURE = "DATA_FEATURE"
    MARK = "MARK"
    COLOR_FIELD = "COLOR_FIELD"
    COLOR_TYPE = "COLOR_TYPE"
    NUM_CLASSES = "NUM_CLASSES"
    LEGEND_COLOR = "LEGEND_COLOR"
    BORDER_COLOR = "BORDER_COLOR"
    BG_COLOR = "BG_COLOR"
    LOW_GVF = "LOW_GVF"
    PROJ = "PROJ"
    DATA_NORM = "DATA_NORM"
    TITLE_LEGEND = "TITLE_LEGEND"


HARD_CODES = (
    RuleCode.DATA_URL,
    RuleCode.DATA_FEATURE,
    RuleCode.MARK,
    RuleCode.COLOR_FIELD,
    RuleCode.COLOR_TYPE,
)
SOFT_CODES = (
    RuleCode.NUM_CLASSES,
    RuleCode.LEGEND_COLOR,
    RuleCode.BORDER_COLOR,
    RuleCode.BG_COLOR,
    RuleCode.LOW_GVF,
    RuleCode.PROJ,
    RuleCode.DATA_NORM,
    RuleCode.TITLE_LEGEND,
)
CODE_ORDER = tuple(HARD_CODES) + tuple(SOFT_CODES)
# DATA_NORM is advisory: its heuristic can false-positive, so it may be
# acknowledged without a change.
ADVISORY_CODES = frozenset({RuleCode.DATA_NORM})


def severity_of(code: RuleCode) -> str:
    return "hard" if code in HARD_CODES else "soft"


EXPLANATIONS: dict[RuleCode, str] = {
    RuleCode.DATA_URL: (
        "A choropleth map needs a geographic data source. Point data.url at "
        "the boundary file (GeoJSON) whose regions you want to shade."
    ),
    RuleCode.DATA_FEATURE: (
        "The renderer needs to know which feature set inside the data file "
        "holds the region shapes. Set data.format.feature to its name."
    ),
    RuleCode.MARK: (
        "Region shading only works with the geographic-shape mark. Any other "
        "mark type draws charts, not regions, so the map cannot render."
    ),
    RuleCode.COLOR_FIELD: (
        "The color channel must be bound to a data field; that field's value "
        "is what each region's shade communicates."
    ),
    RuleCode.COLOR_TYPE: (
        "Statistical data should be declared quantitative and categorical "
        "data nominal; other type declarations produce broken color scales. "
        "Ordered categories (ordinal) are also accepted."
    ),
    RuleCode.NUM_CLASSES: (
        "Readers can only reliably tell apart a handful of shades: between 3 "
        "and 7 classes is the dependable range. Maps without any class bins "
        "(continuous color) make value lookup and comparison unreliable, and "
        "more than 11 shades cannot be matched to a legend at all."
    ),
    RuleCode.LEGEND_COLOR: (
        "Two or more legend colors are so close that readers cannot tell the "
        "classes apart on the map. Use a palette with clearly separated "
        "steps."
    ),
    RuleCode.BORDER_COLOR: (
        "The region outline color blends into the fills or the page "
        "background, so region boundaries disappear. A black outline is a "
        "safe default."
    ),
    RuleCode.BG_COLOR: (
        "The page background is hard to distinguish from the map's fills or "
        "outlines, so regions visually merge with the page. A white "
        "background is a safe default."
    ),
    RuleCode.LOW_GVF: (
        "The current class breaks explain little of the data's variance "
        "(low goodness-of-variance fit), hiding real differences inside "
        "classes. A better method or class count will sharpen the picture."
    ),
    RuleCode.PROJ: (
        "Shaded-area maps need an equal-area projection matched to the "
        "mapped region's size and shape; otherwise some regions look bigger "
        "than they are and mislead area comparisons."
    ),
    RuleCode.DATA_NORM: (
        "Raw totals mostly track region size or population, not the "
        "phenomenon itself. Shade a normalized value instead: divide by "
        "area, population, or another suitable base."
    ),
    RuleCode.TITLE_LEGEND: (
        "Readers need a title saying what, where and when the map shows, and "
        "a legend label carrying the data's units."
    ),
}

NORMALIZED_NAME_MARKERS = re.compile(
    r"(per[_\s]|per$|_per$|rate|pct|percent|%|density|capita|mean|median|avg|average|ratio|share|index|score)",
    re.IGNORECASE,
)
RAW_TOTAL_SKEW_RATIO = 50.0


@dataclass
class Fix:
    label: str
    patches: list[Patch]

    def to_dict(self) -> dict:
        return {"label": self.label, "patches": [p.to_dict() for p in self.patches]}


@dataclass
class Diagnostic:
    code: RuleCode
    location: str
    message: str
    explanation: str = ""
    fixes: list[Fix] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def severity(self) -> str:
        return severity_of(self.code)

    @property
    def advisory(self) -> bool:
        return self.code in ADVISORY_CODES


@dataclass
class Skip:
    code: RuleCode
    reason: str


def make_diagnostic(code: RuleCode, location: str, message: str, **details) -> Diagnostic:
    return Diagnostic(
        code=code,
        location=location,
        message=message,
        explanation=EXPLANATIONS[code],
        details=dict(details),
    )


# ---------------------------------------------------------------------------
# Hard rules
# ---------------------------------------------------------------------------

def evaluate_hard(ctx) -> tuple[list[Diagnostic], list[str]]:
    """Grammar prerequisites.  Returns (diagnostics, notes)."""
    spec = ctx.spec
    diags: list[Diagnostic] = []
    notes: list[str] = []

    if not spec.data_url:
        diags.append(make_diagnostic(RuleCode.DATA_URL, "/data/url", "data.url must be a non-empty path"))
    if not spec.data_feature:
        diags.append(
            make_diagnostic(
                RuleCode.DATA_FEATURE, "/data/format/feature",
                "data.format.feature must name the region feature set",
            )
        )
    if spec.mark != "geoshape":
        found = repr(spec.mark) if spec.mark is not None else "missing"
        diags.append(
            make_diagnostic(RuleCode.MARK, "/mark", f"mark must be 'geoshape' ({found})")
        )
    if not spec.color_field:
        diags.append(
            make_diagnostic(
                RuleCode.COLOR_FIELD, "/encoding/color/field",
                "encoding.color.field must name the mapped data field",
            )
        )
    if spec.color_type in ("quantitative", "nominal"):
        pass
    elif spec.color_type == "ordinal":
        notes.append(
            "color.type 'ordinal' accepted; ordered categories are classed like quantitative data"
        )
    else:
        found = repr(spec.color_type) if spec.color_type is not None else "missing"
        diags.append(
            make_diagnostic(
                RuleCode.COLOR_TYPE, "/encoding/color/type",
                f"color.type must be quantitative or nominal ({found})",
            )
        )
    return diags, notes


# ---------------------------------------------------------------------------
# Soft rules
# ---------------------------------------------------------------------------

def evaluate_soft(ctx) -> tuple[list[Diagnostic], list[Skip]]:
    diags: list[Diagnostic] = []
    skips: list[Skip] = []

    if not ctx.spec.color_field:
        for code in SOFT_CODES:
            skips.append(Skip(code, "no color encoding: the spec is not a judgeable choropleth"))
        return diags, skips

    _rule_num_classes(ctx, diags, skips)
    _rule_colors(ctx, diags, skips)
    _rule_low_gvf(ctx, diags, skips)
    _rule_projection(ctx, diags, skips)
    _rule_data_norm(ctx, diags, skips)
    _rule_title_legend(ctx, diags)
    return diags, skips


MAX_CLASSED = 11


def _rule_num_classes(ctx, diags, skips):
    spec = ctx.spec
    if spec.color_type == "nominal":
        skips.append(Skip(RuleCode.NUM_CLASSES, "nominal data: categories are not classed"))
        return
    if spec.breaks is None:
        diags.append(
            make_diagnostic(
                RuleCode.NUM_CLASSES, "/encoding/color/scale",
                "continuous (unclassed) color: explicit class bins are required",
                unclassed=True,
            )
        )
        return
    k = spec.k
    if k < 3 or k > 7:
        qualifier = "unclassed territory" if k > MAX_CLASSED else "outside the 3-7 range"
        diags.append(
            make_diagnostic(
                RuleCode.NUM_CLASSES, "/encoding/color/scale/domain",
                f"{k} classes is {qualifier}",
                k=k,
            )
        )


def _rule_colors(ctx, diags, skips):
    spec = ctx.spec
    if ctx.fills is None:
        skips.append(Skip(RuleCode.LEGEND_COLOR, ctx.fills_skip_reason))
        if spec.stroke_color is not None:
            skips.append(Skip(RuleCode.BORDER_COLOR, ctx.fills_skip_reason))
        skips.append(Skip(RuleCode.BG_COLOR, ctx.fills_skip_reason))
        return

    threshold = ctx.config.delta_e_threshold
    border = spec.stroke_color
    if ctx.fills_source == "unclassed_ramp":
        clashes = _unclassed_clashes(ctx.fills, border, spec.background, threshold)
    else:
        clashes = check_color_set(ctx.fills, border, spec.background, threshold)

    by_rule: dict[str, list] = {}
    for clash in clashes:
        by_rule.setdefault(clash.rule, []).append(clash)

    if "LEGEND_COLOR" in by_rule:
        worst = min(by_rule["LEGEND_COLOR"], key=lambda c: c.distance)
        diags.append(
            make_diagnostic(
                RuleCode.LEGEND_COLOR, "/encoding/color/scale",
                f"{len(by_rule['LEGEND_COLOR'])} fill pair(s) are too similar "
                f"(closest: {worst.colors[0]} vs {worst.colors[1]}, dE {worst.distance:.1f})",
                pairs=[_clash_dict(c) for c in by_rule["LEGEND_COLOR"]],
            )
        )
    if "BORDER_COLOR" in by_rule:
        worst = min(by_rule["BORDER_COLOR"], key=lambda c: c.distance)
        diags.append(
            make_diagnostic(
                RuleCode.BORDER_COLOR, "/mark/stroke",
                f"border {border} is too similar to {worst.roles[1]} "
                f"({worst.colors[1]}, dE {worst.distance:.1f})",
                pairs=[_clash_dict(c) for c in by_rule["BORDER_COLOR"]],
            )
        )
    if "BG_COLOR" in by_rule:
        worst = min(by_rule["BG_COLOR"], key=lambda c: c.distance)
        diags.append(
            make_diagnostic(
                RuleCode.BG_COLOR, "/background",
                f"background {spec.background} is too similar to {worst.roles[1]} "
                f"({worst.colors[1]}, dE {worst.distance:.1f})",
                pairs=[_clash_dict(c) for c in by_rule["BG_COLOR"]],
            )
        )


def _clash_dict(clash) -> dict:
    return {
        "roles": list(clash.roles),
        "colors": list(clash.colors),
        "delta_e": round(clash.distance, 3),
    }


@dataclass
class _SimpleClash:
    rule: str
    roles: tuple[str, str]
    colors: tuple[str, str]
    distance: float


def _unclassed_clashes(fills_with_values, border, background, threshold):
    """Discriminability scan for a continuous fill ramp.

    fills here are (value, color) pairs sorted by value; the nearest colors
    are value-adjacent, so an adjacent scan finds legend clashes in O(n).
    """
    clashes = []
    seen_legend = False
    for (v1, c1), (v2, c2) in zip(fills_with_values, fills_with_values[1:]):
        d = delta_e(c1, c2)
        if d < threshold and not seen_legend:
            clashes.append(
                _SimpleClash("LEGEND_COLOR", (f"fill(value {v1:g})", f"fill(value {v2:g})"), (c1, c2), d)
            )
            seen_legend = True
    for v, c in fills_with_values:
        d = delta_e(background, c)
        if d < threshold:
            clashes.append(
                _SimpleClash("BG_COLOR", ("background", f"fill(value {v:g})"), (background, c), d)
            )
            break
    if border is not None:
        for v, c in fills_with_values:
            d = delta_e(border, c)
            if d < threshold:
                clashes.append(
                    _SimpleClash("BORDER_COLOR", ("border", f"fill(value {v:g})"), (border, c), d)
                )
                break
        d = delta_e(border, background)
        if d < threshold:
            clashes.append(_SimpleClash("BORDER_COLOR", ("border", "background"), (border, background), d))
            clashes.append(_SimpleClash("BG_COLOR", ("background", "border"), (background, border), d))
    return clashes


def _rule_low_gvf(ctx, diags, skips):
    if ctx.dataset is None:
        skips.append(Skip(RuleCode.LOW_GVF, ctx.values_skip_reason))
        return
    if ctx.dataset.sst <= 0:
        skips.append(Skip(RuleCode.LOW_GVF, "constant data: classification quality undefined"))
        return
    threshold = ctx.average_gvf
    if ctx.current is None:
        diags.append(
            make_diagnostic(
                RuleCode.LOW_GVF, "/encoding/color/scale",
                "no classification to score: continuous color has no class fit",
                average_gvf=round(threshold, 4),
            )
        )
        return
    current = gvf(ctx.dataset, ctx.current)
    if current < threshold:
        source = (
            "configured threshold"
            if ctx.config.low_gvf_threshold is not None
            else "all-methods average"
        )
        diags.append(
            make_diagnostic(
                RuleCode.LOW_GVF, "/encoding/color/scale/domain",
                f"classification fit {current:.3f} is below the {source} {threshold:.3f}",
                gvf=round(current, 4),
                average_gvf=round(threshold, 4),
            )
        )


def _rule_projection(ctx, diags, skips):
    if ctx.extent is None:
        skips.append(Skip(RuleCode.PROJ, "no geometry supplied: extent unknown"))
        return
    spec = ctx.spec
    choice = from_vegalite_name(spec.projection or "")
    if not is_acceptable(choice, ctx.extent, ctx.data_hint):
        recommended = recommend_projection(ctx.extent, ctx.data_hint)
        reason = "not an equal-area projection" if not choice.equal_area else \
            "equal-area but not suited to this extent"
        suffix = " (renderer default)" if spec.projection_defaulted else ""
        diags.append(
            make_diagnostic(
                RuleCode.PROJ, "/projection/type",
                f"projection '{spec.projection}'{suffix} is {reason}",
                current=spec.projection,
                recommended=recommended.vegalite_name,
                extent_scale=ctx.extent.scale_class,
                extent_aspect=ctx.extent.aspect,
            )
        )


def _rule_data_norm(ctx, diags, skips):
    if ctx.ar is None or ctx.dataset is None:
        skips.append(Skip(RuleCode.DATA_NORM, ctx.values_skip_reason))
        return
    kind = ctx.ar.value_kind
    if kind == "normalized":
        return
    field_name = ctx.spec.color_field or ""
    if kind == "raw_total":
        diags.append(
            make_diagnostic(
                RuleCode.DATA_NORM, "/encoding/color/field",
                f"field '{field_name}' carries raw totals; shade a normalized value",
                value_kind=kind,
            )
        )
        return
    # unknown: flag only when the name carries no normalization marker and
    # the distribution looks like size-driven totals
    if NORMALIZED_NAME_MARKERS.search(field_name):
        return
    values = ctx.dataset.values
    if values.min() < 0:
        return
    median = float(sorted(values)[len(values) // 2])
    if median <= 0:
        return
    ratio = float(values.max()) / median
    if ratio > RAW_TOTAL_SKEW_RATIO:
        diags.append(
            make_diagnostic(
                RuleCode.DATA_NORM, "/encoding/color/field",
                f"field '{field_name}' looks like raw totals "
                f"(max/median {ratio:.0f}x, no normalization marker in the name)",
                value_kind=kind,
                max_over_median=round(ratio, 1),
            )
        )


def _rule_title_legend(ctx, diags):
    spec = ctx.spec
    missing = []
    if not (spec.title or "").strip():
        missing.append("title")
    if not (spec.legend_title or "").strip():
        missing.append("legend units label")
    if missing:
        diags.append(
            make_diagnostic(
                RuleCode.TITLE_LEGEND,
                "/title" if "title" in missing else "/encoding/color/legend/title",
                "missing " + " and ".join(missing),
                missing=missing,
            )
        )
