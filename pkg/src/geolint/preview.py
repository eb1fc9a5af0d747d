"""Preview payloads: projected polygons, fills, legend, histogram.

All cartographic work happens here so clients only draw: coordinates arrive
already projected and scaled into a fixed viewport (y grows downward, SVG
style), fills arrive as hex strings, and the histogram arrives as bins with
the class breaks marked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import Classification
from .color import catalog, ramp_color
from .errors import OutOfDomain, UnsupportedProjection
from .linter.pipeline import LintContext
from .projection import ProjectionChoice, from_vegalite_name, project_point, recommend_projection

VIEW_WIDTH = 960.0
VIEW_HEIGHT = 600.0
VIEW_PADDING = 12.0
HISTOGRAM_BINS = 20
MISSING_FILL = "#cccccc"
FALLBACK_FILL = "#4c78a8"


@dataclass
class _Frame:
    scale: float
    x_off: float
    y_off: float

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (x * self.scale + self.x_off, VIEW_HEIGHT - (y * self.scale + self.y_off))


def _projection_for(ctx: LintContext) -> tuple[ProjectionChoice, bool]:
    """The spec's projection when drawable, else the recommended one."""
    choice = from_vegalite_name(ctx.spec.projection or "")
    recommended = recommend_projection(ctx.extent, ctx.data_hint) if ctx.extent else None
    if recommended is not None and choice.kind == recommended.kind:
        return recommended, False  # adopt recommended params (center etc.)
    try:
        project_point(choice, ctx.extent.center[0] if ctx.extent else 0.0, 0.0)
        return choice, False
    except (UnsupportedProjection, OutOfDomain):
        if recommended is None:
            return from_vegalite_name("equalEarth"), True
        return recommended, True


def _project_regions(ctx: LintContext, choice: ProjectionChoice) -> list[list[list[tuple[float, float]]]]:
    projected = []
    for region in ctx.regions.regions:
        rings = []
        for ring in region.rings:
            pts = []
            for lon, lat in ring:
                try:
                    pts.append(project_point(choice, lon, lat))
                except OutOfDomain:
                    continue
            if len(pts) >= 4:
                pts = _densify_safe(choice, ring, pts)
                rings.append(pts)
        projected.append(rings)
    return projected


def _densify_safe(choice, ring, pts):
    # grid fixtures have long straight edges; subdivide so curved projections
    # draw faithfully
    dense = []
    for (lon1, lat1), (lon2, lat2) in zip(ring, ring[1:]):
        steps = max(1, int(max(abs(lon2 - lon1), abs(lat2 - lat1)) // 2))
        for s in range(steps):
            f = s / steps
            try:
                dense.append(project_point(choice, lon1 + (lon2 - lon1) * f, lat1 + (lat2 - lat1) * f))
            except OutOfDomain:
                continue
    if dense:
        dense.append(dense[0])
        return dense
    return pts


def _frame(projected) -> _Frame:
    xs = [x for rings in projected for ring in rings for x, _ in ring]
    ys = [y for rings in projected for ring in rings for _, y in ring]
    if not xs:
        return _Frame(1.0, 0.0, 0.0)
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)
    span_x = max(x_max - x_min, 1e-12)
    span_y = max(y_max - y_min, 1e-12)
    scale = min(
        (VIEW_WIDTH - 2 * VIEW_PADDING) / span_x,
        (VIEW_HEIGHT - 2 * VIEW_PADDING) / span_y,
    )
    x_off = (VIEW_WIDTH - span_x * scale) / 2 - x_min * scale
    y_off = (VIEW_HEIGHT - span_y * scale) / 2 - y_min * scale
    return _Frame(scale, x_off, y_off)


def _fills_and_legend(ctx: LintContext, classification: Classification | None):
    spec = ctx.spec
    cat = catalog()
    values = ctx.ar.values if ctx.ar is not None else []
    n = ctx.regions.n

    if classification is not None and ctx.dataset is not None:
        k = classification.k
        colors = spec.colors if spec.colors and len(spec.colors) == k else None
        if colors is None:
            scheme = spec.scheme_name or "viridis"
            colors = cat.resolve_scheme(scheme, k) or cat.resolve_scheme("viridis", k)
        fills: list[str] = []
        present_iter = iter(classification.assignment)
        for i in range(n):
            if ctx.ar is None or values[i] is None:
                fills.append(MISSING_FILL)
            else:
                fills.append(colors[int(next(present_iter))])
        legend = []
        for ci in range(k):
            stats = classification.class_stats[ci]
            if stats.count and stats.min is not None:
                label = f"{_fmt(stats.min)} – {_fmt(stats.max)}"
            else:
                label = "(empty)"
            legend.append({"color": colors[ci], "label": label, "count": stats.count})
        return fills, legend

    if ctx.categories is not None:
        return _categorical_fills(ctx, cat)

    # unclassed: continuous ramp over values
    ramp = cat.ramp_for(spec.scheme_name or "viridis") or cat.ramps["viridis"]
    if ctx.dataset is None:
        return [FALLBACK_FILL] * n, []
    finite = [v for v in values if v is not None]
    vmin, vmax = min(finite), max(finite)
    span = (vmax - vmin) or 1.0
    fills = [
        MISSING_FILL if v is None else ramp_color(ramp, (v - vmin) / span) for v in values
    ]
    legend = [
        {"color": ramp_color(ramp, t), "label": _fmt(vmin + t * span), "count": None}
        for t in (0.0, 0.25, 0.5, 0.75, 1.0)
    ]
    return fills, legend


def _categorical_fills(ctx: LintContext, cat) -> tuple[list[str], list[dict]]:
    spec = ctx.spec
    labels: list[str] = []
    for value in ctx.categories:
        if value not in labels:
            labels.append(value)
    if spec.colors and len(spec.colors) >= len(labels):
        palette = spec.colors
    else:
        size = min(max(len(labels), 3), 8)
        palette = cat.resolve_scheme(spec.scheme_name or "Set2", size) or cat.resolve_scheme("Set2", size)
    color_of = {label: palette[i % len(palette)] for i, label in enumerate(labels)}
    fills = [color_of[value] for value in ctx.categories]
    legend = [
        {"color": color_of[label], "label": label or "(blank)", "count": ctx.categories.count(label)}
        for label in labels
    ]
    return fills, legend


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.4g}"


def _histogram(ctx: LintContext, breaks: list[float] | None) -> dict | None:
    if ctx.dataset is None:
        return None
    values = ctx.dataset.values
    vmin, vmax = float(values.min()), float(values.max())
    if vmax <= vmin:
        edges = [vmin, vmax + 1]
        counts = [int(values.size)]
    else:
        counts_arr, edges_arr = np.histogram(values, bins=HISTOGRAM_BINS, range=(vmin, vmax))
        counts = [int(c) for c in counts_arr]
        edges = [float(e) for e in edges_arr]
    return {
        "bin_edges": edges,
        "counts": counts,
        "breaks": [float(b) for b in breaks] if breaks else [],
        "min": vmin,
        "max": vmax,
    }


def build_preview(ctx: LintContext, classification_override: dict | None = None) -> dict:
    """Everything a dumb SVG client needs to draw the map panel."""
    if ctx.regions is None:
        raise ValueError("preview needs geometry")

    classification = ctx.current
    if classification_override and ctx.dataset is not None:
        classification = _classify_override(ctx, classification_override)

    choice, substituted = _projection_for(ctx)
    projected = _project_regions(ctx, choice)
    frame = _frame(projected)

    fills, legend = _fills_and_legend(ctx, classification)
    regions_payload = []
    for region, rings, fill in zip(ctx.regions.regions, projected, fills):
        regions_payload.append(
            {
                "id": region.id,
                "fill": fill,
                "rings": [
                    [[round(x, 2), round(y, 2)] for x, y in (frame.apply(*p) for p in ring)]
                    for ring in rings
                ],
            }
        )

    breaks = classification.breaks if classification is not None else None
    return {
        "width": VIEW_WIDTH,
        "height": VIEW_HEIGHT,
        "projection": choice.vegalite_name,
        "projection_substituted": substituted,
        "background": ctx.spec.background,
        "stroke": ctx.spec.stroke_color,
        "stroke_width": ctx.spec.stroke_width,
        "regions": regions_payload,
        "legend": legend,
        "legend_title": ctx.spec.legend_title,
        "title": ctx.spec.title,
        "histogram": _histogram(ctx, breaks),
        "scores": ctx.scores.to_dict(),
    }


def _classify_override(ctx: LintContext, override: dict) -> Classification:
    from .classify import (
        equal_intervals,
        fisher_jenks,
        head_tail,
        jenks_caspall,
        max_p,
        maximum_breaks,
        mean_std,
        quantiles,
    )

    method = override.get("method", "fisher_jenks")
    k = int(override.get("k", 5))
    d = ctx.dataset
    if method == "head_tail":
        return head_tail(d)
    if method == "max_p":
        if ctx.present_weights is None:
            raise ValueError("max_p preview needs weights")
        return max_p(d, ctx.present_weights, floor=max(1, d.n // k), seed=ctx.config.seed)
    table = {
        "equal_intervals": equal_intervals,
        "quantiles": quantiles,
        "mean_std": mean_std,
        "maximum_breaks": maximum_breaks,
        "jenks_caspall": jenks_caspall,
        "fisher_jenks": fisher_jenks,
    }
    if method not in table:
        raise ValueError(f"unknown classification method {method!r}")
    return table[method](d, k)
