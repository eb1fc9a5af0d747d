"""Command-line interface: lint, fix, recommend, serve.

Exit codes for `lint`: 0 clean, 1 soft violations only, 2 any hard violation,
3 IO/parse/usage error.  `fix` exits 0 when the re-lint comes back clean,
1 when diagnostics remain (including unfixable ones), 3 on errors.
"""
from __future__ import annotations

import argparse
import difflib
import json
import os
import shutil
import sys

from . import __version__
from .classify import sweep
from .document import parse_spec
from .errors import GeolintError, InputError, SpecSyntaxError, ZeroVariance
from .linter import LintConfig, analyze, apply_fixes, to_sarif
from .service import DEFAULT_PORT, PORT_ENV_VAR, ServiceConfig, serve
from .tabledata import read_table_file

EXIT_CLEAN = 0
EXIT_SOFT = 1
EXIT_HARD = 2
EXIT_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geolint",
        description="Lint choropleth map specs and fix what can be fixed.",
    )
    parser.add_argument("--version", action="version", version=f"geolint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--key-field", default="id", help="table column holding region ids")
        p.add_argument("--id-property", help="feature property holding region ids")
        p.add_argument("--metric", choices=("gvf", "morans_i"), default="gvf")
        p.add_argument("--contiguity", choices=("queen", "rook"), default="queen")
        p.add_argument("--delta-e-threshold", type=float, default=10.0,
                       help="minimum discriminable CIELAB distance")
        p.add_argument("--low-gvf-threshold", type=float, default=None,
                       help="override the classification-fit threshold "
                            "(default: average over all methods and class counts)")
        p.add_argument("--seed", type=int, default=0, help="seed for the regionalization heuristic")
        p.add_argument("--missing-policy", choices=("error", "exclude", "treat_as_missing"),
                       default="error")

    def add_io_args(p, need_geo=True):
        p.add_argument("spec", help="map spec file (JSON)")
        p.add_argument("--geojson", required=need_geo, help="region boundaries (GeoJSON)")
        p.add_argument("--data", help="attribute table (CSV with header)")
        add_config_args(p)

    p_lint = sub.add_parser("lint", help="report rule violations")
    add_io_args(p_lint, need_geo=False)
    p_lint.add_argument("--format", choices=("text", "structured", "sarif"), default="text",
                        dest="output_format")

    p_fix = sub.add_parser("fix", help="apply fixes and rewrite the spec")
    add_io_args(p_fix, need_geo=False)
    p_fix.add_argument("--apply", default=None, metavar="CODES",
                       help="'all' or comma-separated rule codes to fix")
    p_fix.add_argument("--choose", action="append", default=[], metavar="CODE=INDEX",
                       help="pick a specific fix option (repeatable)")
    p_fix.add_argument("--out", help="write the fixed spec here instead of in place")
    p_fix.add_argument("--no-backup", action="store_true",
                       help="skip the .bak copy when rewriting in place")

    p_rec = sub.add_parser("recommend", help="score classification methods")
    add_io_args(p_rec, need_geo=True)
    p_rec.add_argument("--format", choices=("text", "csv"), default="text", dest="output_format")

    p_serve = sub.add_parser(
        "serve",
        help="run the local HTTP service (stateless: inputs arrive per request)",
    )
    add_config_args(p_serve)
    p_serve.add_argument("--port", type=int, default=None,
                         help=f"port (default {DEFAULT_PORT}; env {PORT_ENV_VAR} overrides)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", help="serve this directory as the web UI")
    return parser


def _config_from_args(args) -> LintConfig:
    return LintConfig(
        key_field=args.key_field,
        id_property=args.id_property,
        metric=args.metric,
        contiguity=args.contiguity,
        delta_e_threshold=args.delta_e_threshold,
        low_gvf_threshold=args.low_gvf_threshold,
        seed=args.seed,
        missing_policy=args.missing_policy,
    )


def _load_inputs(args):
    try:
        with open(args.spec, encoding="utf-8") as f:
            spec_text = f.read()
    except OSError as exc:
        raise InputError(f"cannot read spec {args.spec!r}: {exc}") from exc
    geojson_text = None
    if args.geojson:
        try:
            with open(args.geojson, encoding="utf-8") as f:
                geojson_text = f.read()
        except OSError as exc:
            raise InputError(f"cannot read geojson {args.geojson!r}: {exc}") from exc
    table = read_table_file(args.data) if args.data else None
    return spec_text, geojson_text, table


def _print_text_report(report, out=None):
    out = out if out is not None else sys.stdout
    if report.clean:
        print("clean: no rule violations", file=out)
    for diag in report.diagnostics:
        severity = diag.severity + (" (advisory)" if diag.advisory else "")
        print(f"[{diag.code.value}] {severity} at {diag.location}", file=out)
        print(f"  {diag.message}", file=out)
        print(f"  why: {diag.explanation}", file=out)
        for i, fix in enumerate(diag.fixes):
            marker = "*" if i == 0 else " "
            print(f"  fix[{i}]{marker} {fix.label}", file=out)
        if not diag.fixes:
            print("  fix: none available (author input needed)", file=out)
    if report.scores.to_dict():
        s = report.scores
        bits = [f"k={s.k}", f"method={s.method}"]
        if s.gvf is not None:
            bits.append(f"GVF={s.gvf:.4f}")
        if s.morans_i is not None:
            bits.append(f"Moran's I={s.morans_i:.4f}")
        print("scores: " + ", ".join(bits), file=out)
    for skip in report.skipped:
        print(f"skipped {skip.code.value}: {skip.reason}", file=out)
    for note in report.notes:
        print(f"note: {note}", file=out)


def _report_exit_code(report) -> int:
    if report.has_hard:
        return EXIT_HARD
    if not report.clean:
        return EXIT_SOFT
    return EXIT_CLEAN


def cmd_lint(args) -> int:
    spec_text, geojson_text, table = _load_inputs(args)
    report = analyze(spec_text, geojson_text, table, _config_from_args(args))[0]
    if args.output_format == "structured":
        print(json.dumps(report.to_dict(), indent=2))
    elif args.output_format == "sarif":
        print(json.dumps(to_sarif(report, parse_spec(spec_text), os.path.basename(args.spec)), indent=2))
    else:
        _print_text_report(report)
    return _report_exit_code(report)


def _parse_selections(args):
    chosen: dict[str, int] = {}
    for item in args.choose:
        if "=" not in item:
            raise InputError(f"--choose expects CODE=INDEX, got {item!r}")
        code, _, idx = item.partition("=")
        try:
            chosen[code.strip()] = int(idx)
        except ValueError:
            raise InputError(f"--choose index must be an integer: {item!r}") from None
    if args.apply is None and not chosen:
        return "all"
    if args.apply is None:
        return chosen
    if args.apply.strip().lower() == "all":
        if chosen:
            raise InputError("--apply all cannot be combined with --choose")
        return "all"
    for code in args.apply.split(","):
        chosen.setdefault(code.strip(), 0)
    return chosen


def cmd_fix(args) -> int:
    spec_text, geojson_text, table = _load_inputs(args)
    selections = _parse_selections(args)
    result = apply_fixes(spec_text, geojson_text, table, _config_from_args(args), selections=selections)

    diff_lines = difflib.unified_diff(
        spec_text.splitlines(keepends=True),
        result.spec_text.splitlines(keepends=True),
        fromfile=args.spec,
        tofile=args.out or args.spec,
    )
    sys.stdout.writelines(diff_lines)
    if result.applied:
        print(f"\napplied {len(result.applied)} fix(es) in {result.rounds} round(s):")
        for entry in result.applied:
            print(f"  [{entry.code}] {entry.label}")
        print("patches: " + json.dumps(
            [p.to_dict() for entry in result.applied for p in entry.patches]
        ))
    else:
        print("no applicable fixes")

    target = args.out or args.spec
    if result.spec_text != spec_text:
        if args.out is None and not args.no_backup:
            shutil.copyfile(args.spec, args.spec + ".bak")
        with open(target, "w", encoding="utf-8") as f:
            f.write(result.spec_text)
        print(f"wrote {target}")

    remaining = result.report
    if remaining.diagnostics:
        codes = ", ".join(remaining.codes())
        print(f"remaining: {codes}")
        return EXIT_SOFT
    print("re-lint: clean")
    return EXIT_CLEAN


def cmd_recommend(args) -> int:
    spec_text, geojson_text, table = _load_inputs(args)
    cfg = _config_from_args(args)
    report, ctx = analyze(spec_text, geojson_text, table, cfg)
    if ctx.dataset is None:
        raise InputError(f"no data values to score: {ctx.values_skip_reason}")
    if ctx.dataset.sst <= 0:
        raise ZeroVariance("data values are constant; no classification to score")
    scores, skipped = sweep(ctx.dataset, ctx.present_weights, seed=cfg.seed)
    metric = cfg.metric
    if metric == "morans_i" and all(s.morans_i is None for s in scores):
        print("note: no spatial weights; sorting by GVF", file=sys.stderr)
        metric = "gvf"
    scores.sort(
        key=lambda s: (
            -(s.gvf if metric == "gvf" else (s.morans_i if s.morans_i is not None else float("-inf"))),
            s.k,
            s.method,
        )
    )
    current = report.scores
    if args.output_format == "csv":
        print("method,k,gvf,morans_i")
        for s in scores:
            mi = "" if s.morans_i is None else f"{s.morans_i:.6f}"
            print(f"{s.method},{s.k},{s.gvf:.6f},{mi}")
    else:
        print(f"{'method':<16} {'k':>2}  {'GVF':>7}  {'Moran I':>8}  band")
        for s in scores:
            mi = "      --" if s.morans_i is None else f"{s.morans_i:8.4f}"
            band = "3-7" if 3 <= s.k <= 7 else "   "
            marker = " <- current" if (current.k == s.k and current.method == s.method) else ""
            print(f"{s.method:<16} {s.k:>2}  {s.gvf:7.4f}  {mi}  {band}{marker}")
        if current.to_dict():
            print(f"current spec: k={current.k}, GVF={current.gvf}")
        for sk in skipped:
            print(f"skipped {sk.method} k={sk.k}: {sk.reason}", file=sys.stderr)
    return EXIT_CLEAN


def resolve_port(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    return int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))


def cmd_serve(args) -> int:
    config = ServiceConfig(lint=_config_from_args(args), ui_dir=args.ui_dir)
    port = resolve_port(args.port)
    print(f"geolint service on http://{args.host}:{port} (Ctrl-C stops)")
    try:
        serve(config, port=port, host=args.host)
    except KeyboardInterrupt:
        pass
    return EXIT_CLEAN


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lint":
            return cmd_lint(args)
        if args.command == "fix":
            return cmd_fix(args)
        if args.command == "recommend":
            return cmd_recommend(args)
        if args.command == "serve":
            return cmd_serve(args)
        raise InputError(f"unknown command {args.command!r}")
    except SpecSyntaxError as exc:
        print(f"error: spec {exc}", file=sys.stderr)
        return EXIT_ERROR
    except GeolintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
