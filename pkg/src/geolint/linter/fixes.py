"""Machine-applicable fixes for diagnostics, plus normalization and titling.

Every fix is a list of spec patches; applying one and re-linting removes the
diagnostic it belongs to.  Options are ordered best-first (classification
fixes by the active metric), so option 0 is the default quick fix.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass

from ..classify import MethodScore, fisher_jenks, knee_point_k, recommend
from ..color import check_color_set, suggest_palette
from ..document import Patch, SpecDocument, join_pointer, resolve_pointer, split_pointer
from ..errors import (
    EmptyVariable,
    MissingAux,
    NoFixAvailable,
    NoPaletteAvailable,
    ZeroDenominator,
    ZeroVariance,
)
from ..geodata import AttributedRegions
from ..projection import recommend_projection
from .rules import Diagnostic, RuleCode

AREA_COLUMN = "__area_km2"
MAX_CLASSIFICATION_OPTIONS = 5
MAX_RATIO_OPTIONS = 3


class PatchBuilder:
    """Accumulates patches against a document, creating ancestors as needed."""

    def __init__(self, doc: SpecDocument):
        self._tree = copy.deepcopy(doc.tree)
        self.patches: list[Patch] = []

    def _exists(self, path: str) -> bool:
        try:
            resolve_pointer(self._tree, path)
            return True
        except KeyError:
            return False

    def _apply(self, patch: Patch):
        from ..document import _apply_one

        self._tree = _apply_one(self._tree, patch)
        self.patches.append(patch)

    def set(self, path: str, value):
        tokens = split_pointer(path)
        for i in range(1, len(tokens)):
            prefix = join_pointer(tokens[:i])
            if not self._exists(prefix):
                self._apply(Patch("add", prefix, {}))
        op = "replace" if self._exists(path) else "add"
        self._apply(Patch(op, path, value))

    def remove_if_present(self, path: str):
        if self._exists(path):
            self._apply(Patch("remove", path))


def attach_fixes(diag: Diagnostic, ctx) -> Diagnostic:
    """Populate diag.fixes in place; raises NoFixAvailable where none exists."""
    code = diag.code
    if code in (RuleCode.DATA_URL, RuleCode.DATA_FEATURE, RuleCode.COLOR_FIELD):
        raise NoFixAvailable("this value must come from the author; nothing to patch")
    builder = {
        RuleCode.MARK: _fix_mark,
        RuleCode.COLOR_TYPE: _fix_color_type,
        RuleCode.NUM_CLASSES: _fix_classification,
        RuleCode.LOW_GVF: _fix_classification,
        RuleCode.LEGEND_COLOR: _fix_legend_color,
        RuleCode.BORDER_COLOR: _fix_border_color,
        RuleCode.BG_COLOR: _fix_bg_color,
        RuleCode.PROJ: _fix_projection,
        RuleCode.DATA_NORM: _fix_data_norm,
        RuleCode.TITLE_LEGEND: _fix_title_legend,
    }[code]
    from .rules import Fix

    fixes = builder(ctx)
    diag.fixes = [Fix(label, patches) for label, patches in fixes]
    return diag


def _fix_mark(ctx) -> list[tuple[str, list[Patch]]]:
    doc = ctx.doc
    b = PatchBuilder(doc)
    if doc.exists("/mark") and isinstance(doc.resolve("/mark"), dict):
        b.set("/mark/type", "geoshape")
    else:
        b.set("/mark", "geoshape")
    return [("Use the geoshape mark", b.patches)]


def _fix_color_type(ctx) -> list[tuple[str, list[Patch]]]:
    options = []
    for type_name in ("quantitative", "nominal"):
        b = PatchBuilder(ctx.doc)
        b.set("/encoding/color/type", type_name)
        options.append((f"Declare the color field {type_name}", b.patches))
    return options


# -- classification fixes ----------------------------------------------------

def _palette_kind(ctx) -> str:
    if ctx.spec.color_type == "nominal":
        return "qualitative"
    if ctx.dataset is not None:
        vmin, vmax = float(ctx.dataset.values.min()), float(ctx.dataset.values.max())
        if vmin < 0 < vmax:
            return "diverging"
    return "sequential"


def _colors_for(ctx, k: int, background: str | None = None) -> list[str] | None:
    """k fill colors: current scheme resized when possible, else a catalog pick."""
    from ..color import catalog

    background = background or ctx.spec.background
    scheme = ctx.spec.scheme_name
    if scheme:
        palette = catalog()._by_name.get(scheme.lower())
        if palette and k in palette.colors_by_k:
            colors = palette.colors_by_k[k]
            if not check_color_set(colors, ctx.spec.stroke_color, background, ctx.config.delta_e_threshold):
                return list(colors)
    try:
        return suggest_palette(
            _palette_kind(ctx), k, background, ctx.config.delta_e_threshold,
            border=ctx.spec.stroke_color,
        ).colors(k)
    except NoPaletteAvailable:
        return None


def _classification_candidates(ctx) -> list[MethodScore]:
    scores = recommend(
        ctx.dataset,
        ctx.present_weights,
        sort_by=ctx.config.metric,
        seed=ctx.config.seed,
    )
    renderable = [s for s in scores if s.breaks]
    if ctx.average_gvf is not None:
        qualifying = [s for s in renderable if s.gvf >= ctx.average_gvf]
        if qualifying:
            renderable = qualifying
    return renderable[:MAX_CLASSIFICATION_OPTIONS]


def _fix_classification(ctx) -> list[tuple[str, list[Patch]]]:
    if ctx.dataset is None or ctx.dataset.sst <= 0:
        raise NoFixAvailable("no data values to classify")
    options = []
    for score in _classification_candidates(ctx):
        b = PatchBuilder(ctx.doc)
        b.set("/encoding/color/scale/type", "threshold")
        b.set("/encoding/color/scale/domain", [float(x) for x in score.breaks])
        keep_colors = (
            ctx.spec.colors is not None
            and len(ctx.spec.colors) == score.k
            and ctx.fills_source == "range"
        )
        if not keep_colors:
            colors = _colors_for(ctx, score.k)
            if colors is None:
                continue
            b.set("/encoding/color/scale/range", colors)
            b.remove_if_present("/encoding/color/scale/scheme")
        metric_bit = f"GVF {score.gvf:.3f}"
        if score.morans_i is not None:
            metric_bit += f", Moran's I {score.morans_i:.3f}"
        options.append(
            (f"Reclassify: {score.method}, {score.k} classes ({metric_bit})", b.patches)
        )
    if not options:
        raise NoFixAvailable("no classification with discriminable colors available")
    return options


# -- color fixes ---------------------------------------------------------------

def _current_k(ctx) -> int | None:
    if ctx.spec.k is not None:
        return ctx.spec.k
    if ctx.spec.colors is not None:
        return len(ctx.spec.colors)
    return None


def _palette_patch(ctx, background: str) -> tuple[list[Patch], str] | None:
    """Patches swapping the fills for a catalog palette (classifying first if
    the spec is unclassed).  Returns (patches, label-suffix) or None."""
    b = PatchBuilder(ctx.doc)
    k = _current_k(ctx)
    suffix = ""
    needs_classing = ctx.spec.breaks is None and ctx.spec.color_type != "nominal"
    if k is None or needs_classing:
        if ctx.dataset is None or ctx.dataset.sst <= 0:
            return None
        try:
            k = max(3, min(7, knee_point_k(ctx.dataset)))
        except ZeroVariance:
            return None
        breaks = fisher_jenks(ctx.dataset, k).breaks
        b.set("/encoding/color/scale/type", "threshold")
        b.set("/encoding/color/scale/domain", [float(x) for x in breaks])
        suffix = f" (classing into {k} bins first)"
    colors = _colors_for(ctx, k, background)
    if colors is None:
        return None
    b.set("/encoding/color/scale/range", colors)
    b.remove_if_present("/encoding/color/scale/scheme")
    return b.patches, suffix


def _fix_legend_color(ctx) -> list[tuple[str, list[Patch]]]:
    result = _palette_patch(ctx, ctx.spec.background)
    if result is None:
        raise NoFixAvailable("no discriminable palette available for this class count")
    patches, suffix = result
    return [(f"Switch to a discriminable catalog palette{suffix}", patches)]


def _fills_clash_with(ctx, border: str | None, background: str) -> bool:
    if ctx.fills is None:
        return False
    if ctx.fills_source == "unclassed_ramp":
        fills = [c for _, c in ctx.fills]
    else:
        fills = list(ctx.fills)
    return bool(check_color_set(fills, border, background, ctx.config.delta_e_threshold))


def _fix_border_color(ctx) -> list[tuple[str, list[Patch]]]:
    b = PatchBuilder(ctx.doc)
    doc = ctx.doc
    if doc.exists("/mark") and not isinstance(doc.resolve("/mark"), dict):
        mark_value = doc.resolve("/mark")
        b._apply(Patch("replace", "/mark", {"type": mark_value, "stroke": "#000000"}))
    else:
        b.set("/mark/stroke", "#000000")
    label = "Reset the border to black"
    if _fills_clash_with(ctx, "#000000", ctx.spec.background):
        extra = _palette_patch(ctx, ctx.spec.background)
        if extra is not None:
            b.patches.extend(extra[0])
            label += " and switch to a catalog palette"
    return [(label, b.patches)]


def _fix_bg_color(ctx) -> list[tuple[str, list[Patch]]]:
    b = PatchBuilder(ctx.doc)
    b.set("/background", "#ffffff")
    label = "Set the background to white"
    if _fills_clash_with(ctx, ctx.spec.stroke_color, "#ffffff"):
        extra = _palette_patch(ctx, "#ffffff")
        if extra is not None:
            b.patches.extend(extra[0])
            label += " and switch to a catalog palette"
    return [(label, b.patches)]


def _fix_projection(ctx) -> list[tuple[str, list[Patch]]]:
    if ctx.extent is None:
        raise NoFixAvailable("no geometry supplied: cannot pick a projection")
    choice = recommend_projection(ctx.extent, ctx.data_hint)
    b = PatchBuilder(ctx.doc)
    b.set("/projection", choice.to_projection_object())
    return [(f"Use the {choice.vegalite_name} projection", b.patches)]


# -- normalization -------------------------------------------------------------

def _pretty(name: str) -> str:
    out = name.replace("_", " ").replace("-", " ").strip()
    return out[:1].upper() + out[1:] if out else out


def _numeric_columns(ctx) -> list[str]:
    if not ctx.table:
        return []
    skip = {ctx.config.key_field, ctx.spec.color_field, AREA_COLUMN}
    if ctx.spec.transform:
        skip.update({ctx.spec.transform.output})
    candidates = []
    for column in ctx.table[0].keys():
        if column in skip or column is None:
            continue
        try:
            values = [float(str(row.get(column, "")).replace(",", "")) for row in ctx.table]
        except (TypeError, ValueError):
            continue
        if all(v == v for v in values):  # no NaN
            candidates.append(column)
    population_like = [c for c in candidates if "pop" in c.lower()]
    rest = sorted(c for c in candidates if c not in population_like)
    return population_like + rest


def _fix_data_norm(ctx) -> list[tuple[str, list[Patch]]]:
    field = ctx.spec.color_field
    if not field or ctx.table is None:
        raise NoFixAvailable("no attribute table to derive a normalized value from")
    options: list[tuple[str, list[Patch]]] = []
    for column in _numeric_columns(ctx)[:MAX_RATIO_OPTIONS]:
        out = f"{field}_per_{column}"
        b = PatchBuilder(ctx.doc)
        b.set("/transform", [{"calculate": f"datum['{field}'] / datum['{column}']", "as": out}])
        b.set("/encoding/color/field", out)
        b.set("/encoding/color/legend/title", f"{_pretty(field)} per {column}")
        options.append((f"Divide {field} by {column} (ratio of totals)", b.patches))
    if ctx.regions is not None:
        out = f"{field}_per_km2"
        b = PatchBuilder(ctx.doc)
        b.set("/transform", [{"calculate": f"datum['{field}'] / datum['{AREA_COLUMN}']", "as": out}])
        b.set("/encoding/color/field", out)
        b.set("/encoding/color/legend/title", f"{_pretty(field)} per km²")
        options.append((f"Convert {field} to a density (per km²)", b.patches))
    if not options:
        raise NoFixAvailable("no denominator column or geometry for normalization")
    return options


def _fix_title_legend(ctx) -> list[tuple[str, list[Patch]]]:
    spec = ctx.spec
    b = PatchBuilder(ctx.doc)
    variable = _pretty(spec.color_field or "") or "Mapped value"
    if not (spec.title or "").strip():
        b.set("/title", generate_title(variable, "", ""))
    if not (spec.legend_title or "").strip():
        b.set("/encoding/color/legend/title", _units_label(ctx, variable))
    return [("Add a descriptive title and legend units", b.patches)]


def _units_label(ctx, variable: str) -> str:
    if ctx.ar is not None and ctx.ar.units:
        return ctx.ar.units
    t = ctx.spec.transform
    if t is not None:
        den = "km²" if t.denominator == AREA_COLUMN else t.denominator
        return f"{_pretty(t.numerator)} per {den}"
    return variable


# ---------------------------------------------------------------------------
# Normalization of in-memory values (service/UI path)
# ---------------------------------------------------------------------------

NORMALIZATION_KINDS = (
    "ratio_of_area_totals",
    "density_by_area",
    "ratio_of_totals",
    "summary_measure",
)


@dataclass(frozen=True)
class NormalizationMethod:
    kind: str
    numerator_field: str
    denominator_field: str  # "area" for density_by_area
    units_label: str

    def __post_init__(self):
        if self.kind not in NORMALIZATION_KINDS:
            raise ValueError(f"unknown normalization kind {self.kind!r}")


def normalize_data(
    ar: AttributedRegions,
    method: NormalizationMethod,
    aux: list[float] | None,
) -> AttributedRegions:
    """Replace values elementwise per the normalization method.

    aux carries the per-region denominators (or the per-region summary for
    summary_measure), aligned to region order.
    """
    if aux is None:
        raise MissingAux(f"{method.kind} needs per-region auxiliary values")
    if len(aux) != ar.n:
        raise MissingAux(f"expected {ar.n} auxiliary values, got {len(aux)}")

    if method.kind == "summary_measure":
        values = [float(a) for a in aux]
    else:
        zeros = [
            ar.region_set.regions[i].id
            for i, a in enumerate(aux)
            if a == 0 and i not in ar.missing
        ]
        if zeros:
            raise ZeroDenominator(zeros)
        values = [
            None if ar.values[i] is None else float(ar.values[i]) / float(aux[i])
            for i in range(ar.n)
        ]
    return AttributedRegions(
        region_set=ar.region_set,
        values=values,
        units=method.units_label,
        value_kind="normalized",
        missing=ar.missing,
    )


def generate_title(variable: str, region: str, time: str) -> str:
    """'{variable} in {region} over {time}', eliding empty segments."""
    if not variable.strip():
        raise EmptyVariable("title needs a variable name")
    title = variable.strip()
    if region.strip():
        title += f" in {region.strip()}"
    if time.strip():
        title += f" over {time.strip()}"
    return title
