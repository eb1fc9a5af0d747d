"""Lint orchestration: inputs -> context -> rules -> fixes -> report."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..classify import (
    Classification,
    Dataset,
    assign_by_breaks,
    average_gvf,
    classed_morans_i,
    gvf,
)
from ..color import catalog, ramp_color
from ..document import Patch, SpecDocument, apply_patches, parse_spec, split_pointer
from ..errors import InputError, NoFixAvailable, ZeroVariance, NoNeighbors
from ..geodata import (
    AttributedRegions,
    Extent,
    RegionSet,
    WeightsMatrix,
    build_contiguity,
    compute_extent,
    join_attributes,
    region_areas_km2,
)
from ..mapspec import MapSpec, extract_map_spec
from .fixes import attach_fixes
from .rules import CODE_ORDER, Diagnostic, Skip, evaluate_hard, evaluate_soft

AREA_COLUMN = "__area_km2"


@dataclass
class LintConfig:
    key_field: str = "id"
    id_property: str | None = None
    metric: str = "gvf"  # gvf | morans_i
    contiguity: str = "queen"
    delta_e_threshold: float = 10.0
    low_gvf_threshold: float | None = None  # None: average over all methods/k
    seed: int = 0
    missing_policy: str = "error"
    value_kind: str | None = None  # override for DATA_NORM detection


@dataclass
class Scores:
    gvf: float | None = None
    morans_i: float | None = None
    k: int | None = None
    method: str | None = None

    def to_dict(self) -> dict | None:
        if self.gvf is None and self.morans_i is None and self.k is None:
            return None
        return {"gvf": self.gvf, "morans_i": self.morans_i, "k": self.k, "method": self.method}


@dataclass
class LintContext:
    doc: SpecDocument
    spec: MapSpec
    config: LintConfig
    regions: RegionSet | None = None
    weights: WeightsMatrix | None = None
    present_weights: WeightsMatrix | None = None
    extent: Extent | None = None
    table: list[dict] | None = None
    ar: AttributedRegions | None = None
    categories: list[str] | None = None  # per region, nominal specs only
    dataset: Dataset | None = None
    current: Classification | None = None
    fills: list | None = None
    fills_source: str | None = None
    fills_skip_reason: str = "fill colors could not be derived"
    values_skip_reason: str = "data values could not be derived"
    average_gvf: float | None = None
    scores: Scores = field(default_factory=Scores)
    notes: list[str] = field(default_factory=list)

    @property
    def data_hint(self) -> str:
        return f"{self.spec.data_url or ''} {self.spec.data_feature or ''}".strip()


@dataclass
class LintReport:
    diagnostics: list[Diagnostic]
    scores: Scores
    skipped: list[Skip]
    notes: list[str]

    @property
    def clean(self) -> bool:
        return not self.diagnostics

    @property
    def has_hard(self) -> bool:
        return any(d.severity == "hard" for d in self.diagnostics)

    @property
    def advisory_only(self) -> bool:
        return bool(self.diagnostics) and all(d.advisory for d in self.diagnostics)

    def codes(self) -> list[str]:
        return [d.code.value for d in self.diagnostics]

    def to_dict(self) -> dict:
        return {
            "clean": self.clean,
            "diagnostics": [_diagnostic_dict(d) for d in self.diagnostics],
            "scores": self.scores.to_dict(),
            "skipped": [{"code": s.code.value, "reason": s.reason} for s in self.skipped],
            "notes": list(self.notes),
        }


def _diagnostic_dict(d: Diagnostic) -> dict:
    return {
        "code": d.code.value,
        "severity": d.severity,
        "advisory": d.advisory,
        "location": d.location,
        "message": d.message,
        "explanation": d.explanation,
        "fixes": [f.to_dict() for f in d.fixes],
        "details": d.details,
    }


def location_position(doc: SpecDocument, path: str) -> tuple[int, int]:
    """Source position of the path, or of its nearest existing ancestor."""
    tokens = split_pointer(path)
    while True:
        candidate = "".join("/" + t.replace("~", "~0").replace("/", "~1") for t in tokens)
        pos = doc.provenance.get(candidate)
        if pos is not None:
            return pos
        if not tokens:
            return (1, 1)
        tokens = tokens[:-1]


# ---------------------------------------------------------------------------
# Context building
# ---------------------------------------------------------------------------

def build_context(
    doc: SpecDocument,
    geojson_text: str | None,
    table: list[dict] | None,
    config: LintConfig,
) -> LintContext:
    from ..geodata import load_geojson  # local to keep module import light

    spec = extract_map_spec(doc)
    ctx = LintContext(doc=doc, spec=spec, config=config)
    ctx.notes.extend(spec.notes)

    if geojson_text:
        ctx.regions = load_geojson(geojson_text, id_property=config.id_property)
        ctx.weights = build_contiguity(ctx.regions, config.contiguity)
        ctx.extent = compute_extent(ctx.regions)

    _derive_values(ctx, table)
    _derive_current_classification(ctx)
    _derive_fills(ctx)
    _derive_scores(ctx)
    return ctx


def _derive_values(ctx: LintContext, table: list[dict] | None):
    spec, config = ctx.spec, ctx.config
    if ctx.regions is None:
        ctx.values_skip_reason = "no geometry supplied"
        return
    if not spec.color_field:
        ctx.values_skip_reason = "no color field to join on"
        return

    areas = region_areas_km2(ctx.regions)
    if table is not None:
        rows = [dict(r) for r in table]
        by_key = {str(r.get(config.key_field)): r for r in rows}
        for region, area in zip(ctx.regions.regions, areas):
            row = by_key.get(region.id)
            if row is not None:
                row.setdefault(AREA_COLUMN, area)
    else:
        rows = []
        for region, area in zip(ctx.regions.regions, areas):
            row = dict(region.properties)
            row[config.key_field] = region.id
            row.setdefault(AREA_COLUMN, area)
            rows.append(row)
    ctx.table = rows

    if spec.color_type == "nominal":
        # categorical data: no numeric surface, classification rules skip
        by_key = {str(r.get(config.key_field)): r for r in rows}
        ctx.categories = [
            str((by_key.get(region.id) or {}).get(spec.color_field, ""))
            for region in ctx.regions.regions
        ]
        ctx.values_skip_reason = "nominal data: categories carry no classification"
        return

    value_field = spec.color_field
    value_kind = config.value_kind or "unknown"
    if spec.transform is not None:
        applied = _apply_transform(ctx, rows)
        if applied and spec.color_field == spec.transform.output:
            # the encoding is driven by the derived ratio column
            value_kind = "normalized"
        elif not applied and spec.color_field == spec.transform.output:
            ctx.values_skip_reason = (
                f"transform output '{spec.transform.output}' could not be computed"
            )
            return

    try:
        ctx.ar = join_attributes(
            ctx.regions,
            rows,
            config.key_field,
            value_field,
            missing_policy=config.missing_policy,
            units=spec.legend_title,
            value_kind=value_kind,
        )
    except InputError:
        raise
    present = ctx.ar.present_values()
    if len(present) >= 1:
        ctx.dataset = Dataset.from_values(present)
        if ctx.ar.missing:
            ctx.present_weights = _present_weights(ctx)
        else:
            ctx.present_weights = _reindexed_weights(ctx)


def _present_weights(ctx: LintContext) -> WeightsMatrix | None:
    if ctx.weights is None or ctx.ar is None:
        return None
    return ctx.weights.subset(ctx.ar.present_indices())


def _reindexed_weights(ctx: LintContext) -> WeightsMatrix | None:
    if ctx.weights is None or ctx.ar is None:
        return None
    if ctx.ar.region_set is ctx.regions:
        return ctx.weights
    # exclude policy produced a subset region set: rebuild over it
    return build_contiguity(ctx.ar.region_set, ctx.config.contiguity)


def _apply_transform(ctx: LintContext, rows: list[dict]) -> bool:
    t = ctx.spec.transform
    ok = True
    for row in rows:
        num, den = row.get(t.numerator), row.get(t.denominator)
        try:
            num_f, den_f = float(num), float(den)
            if den_f == 0:
                raise ValueError
            row[t.output] = num_f / den_f
        except (TypeError, ValueError):
            ok = False
            break
    if not ok:
        ctx.notes.append(
            f"transform {t.numerator}/{t.denominator} not computable over the table; ignored"
        )
        for row in rows:
            row.pop(t.output, None)
    return ok


def _derive_current_classification(ctx: LintContext):
    spec = ctx.spec
    if ctx.dataset is None or spec.breaks is None:
        return
    assignment = assign_by_breaks(ctx.dataset.values, spec.breaks)
    k = len(spec.breaks) + 1
    stats = []
    from ..classify import ClassStats

    for i in range(k):
        members = ctx.dataset.values[assignment == i]
        if members.size == 0:
            stats.append(ClassStats(0, None, None, None))
        else:
            stats.append(
                ClassStats(int(members.size), float(members.mean()), float(members.min()), float(members.max()))
            )
    ctx.current = Classification(
        method="current", k=k, breaks=list(spec.breaks), assignment=assignment, class_stats=stats
    )


def _derive_fills(ctx: LintContext):
    spec = ctx.spec
    cat = catalog()
    if spec.colors is not None:
        ctx.fills = list(spec.colors)
        ctx.fills_source = "range"
        return
    if spec.breaks is not None:
        scheme = spec.scheme_name or "viridis"
        resolved = cat.resolve_scheme(scheme, spec.k)
        if resolved is None:
            ctx.fills_skip_reason = f"unknown color scheme {scheme!r}"
            return
        ctx.fills = list(resolved)
        ctx.fills_source = "scheme"
        return
    # unclassed: per-region ramp colors over the data values
    if ctx.dataset is None:
        ctx.fills_skip_reason = f"unclassed map and {ctx.values_skip_reason}"
        return
    ramp = cat.ramp_for(spec.scheme_name or "viridis")
    if ramp is None:
        ctx.fills_skip_reason = f"unknown color scheme {spec.scheme_name!r}"
        return
    values = np.unique(ctx.dataset.values)
    vmin, vmax = float(values[0]), float(values[-1])
    if vmax <= vmin:
        ctx.fills_skip_reason = "constant data: no color ramp to judge"
        return
    pairs = [
        (float(v), ramp_color(ramp, (float(v) - vmin) / (vmax - vmin))) for v in values
    ]
    ctx.fills = pairs
    ctx.fills_source = "unclassed_ramp"


def _derive_scores(ctx: LintContext):
    if ctx.dataset is None:
        return
    if ctx.dataset.sst > 0:
        weights = ctx.present_weights
        if ctx.config.low_gvf_threshold is not None:
            ctx.average_gvf = ctx.config.low_gvf_threshold
        else:
            ctx.average_gvf = average_gvf(ctx.dataset, weights, seed=ctx.config.seed)
        if ctx.current is not None:
            ctx.scores.gvf = round(gvf(ctx.dataset, ctx.current), 6)
            ctx.scores.k = ctx.current.k
            ctx.scores.method = ctx.spec.scheme_name or "custom"
            if weights is not None and weights.total_weight > 0:
                try:
                    ctx.scores.morans_i = round(
                        classed_morans_i(ctx.dataset, ctx.current, weights), 6
                    )
                except (ZeroVariance, NoNeighbors):
                    ctx.scores.morans_i = None


# ---------------------------------------------------------------------------
# Lint entry points
# ---------------------------------------------------------------------------

def analyze(
    spec_text: str,
    geojson_text: str | None = None,
    table: list[dict] | None = None,
    config: LintConfig | None = None,
) -> tuple[LintReport, LintContext]:
    config = config or LintConfig()
    doc = parse_spec(spec_text)
    ctx = build_context(doc, geojson_text, table, config)

    hard, hard_notes = evaluate_hard(ctx)
    soft, skips = evaluate_soft(ctx)
    diagnostics = hard + soft
    order = {code: i for i, code in enumerate(CODE_ORDER)}
    diagnostics.sort(key=lambda d: order[d.code])

    for diag in diagnostics:
        try:
            attach_fixes(diag, ctx)
        except NoFixAvailable as exc:
            diag.details["no_fix"] = str(exc)

    report = LintReport(
        diagnostics=diagnostics,
        scores=ctx.scores,
        skipped=sorted(skips, key=lambda s: order[s.code]),
        notes=ctx.notes + hard_notes,
    )
    return report, ctx


def lint(
    spec_text: str,
    geojson_text: str | None = None,
    table: list[dict] | None = None,
    config: LintConfig | None = None,
) -> LintReport:
    """Parse, join, evaluate every rule, and propose fixes."""
    return analyze(spec_text, geojson_text, table, config)[0]


# ---------------------------------------------------------------------------
# Fix application
# ---------------------------------------------------------------------------

@dataclass
class AppliedFix:
    code: str
    label: str
    patches: list[Patch]


@dataclass
class FixResult:
    spec_text: str
    applied: list[AppliedFix]
    report: LintReport
    rounds: int

    @property
    def patch_log(self) -> list[dict]:
        return [
            {"code": a.code, "label": a.label, "patches": [p.to_dict() for p in a.patches]}
            for a in self.applied
        ]


def _paths_conflict(a: str, b: str) -> bool:
    ta, tb = tuple(split_pointer(a)), tuple(split_pointer(b))
    shorter = min(len(ta), len(tb))
    return ta[:shorter] == tb[:shorter]


def apply_fixes(
    spec_text: str,
    geojson_text: str | None = None,
    table: list[dict] | None = None,
    config: LintConfig | None = None,
    selections: dict[str, int] | str = "all",
    max_rounds: int = 3,
) -> FixResult:
    """Apply selected fix options, re-linting between rounds.

    selections: "all" applies the first option of every fixable diagnostic;
    a dict maps rule code -> option index (codes not in the dict are left
    alone).  Fixes whose patch paths overlap within a round are deferred to
    the next round, after a fresh lint.
    """
    doc = parse_spec(spec_text)
    applied: list[AppliedFix] = []
    rounds = 0
    for _ in range(max_rounds):
        report, _ctx = analyze(doc.source_text, geojson_text, table, config)
        wanted: list[tuple[Diagnostic, int]] = []
        for diag in report.diagnostics:
            if not diag.fixes:
                continue
            if selections == "all":
                wanted.append((diag, 0))
            elif isinstance(selections, dict):
                code = diag.code.value
                if code in selections:
                    idx = selections[code]
                    if not 0 <= idx < len(diag.fixes):
                        raise InputError(
                            f"{code}: fix option {idx} out of range (0..{len(diag.fixes) - 1})"
                        )
                    wanted.append((diag, idx))
        if not wanted:
            break
        rounds += 1
        taken: list[str] = []
        progressed = False
        for diag, idx in wanted:
            fix = diag.fixes[idx]
            paths = [p.path for p in fix.patches]
            if any(_paths_conflict(p, t) for p in paths for t in taken):
                continue  # deferred to the next round
            doc = apply_patches(doc, fix.patches)
            taken.extend(paths)
            applied.append(AppliedFix(diag.code.value, fix.label, list(fix.patches)))
            progressed = True
        if not progressed:
            break

    final_report, _ = analyze(doc.source_text, geojson_text, table, config)
    return FixResult(spec_text=doc.source_text, applied=applied, report=final_report, rounds=rounds)
