"""Local HTTP service behind the companion UI.

Stateless by design: every request carries the full spec/geojson/data, so the
client's editor buffer stays the single document of record.  Handlers are
plain functions from a request body to (status, payload), wrapped by a thin
stdlib HTTP server; tests drive the handlers directly.
"""
from __future__ import annotations

import json
import mimetypes
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .classify import sweep
from .color import catalog
from .errors import GeolintError, InputError, SpecSyntaxError
from .linter import CODE_ORDER, LintConfig, analyze, apply_fixes
from .preview import build_preview
from .tabledata import read_table_text

API_VERSION = 1
DEFAULT_PORT = 7878
PORT_ENV_VAR = "GEOLINT_PORT"


@dataclass
class ServiceConfig:
    lint: LintConfig = field(default_factory=LintConfig)
    ui_dir: str | None = None


class RequestError(Exception):
    def __init__(self, status: int, message: str, **details):
        super().__init__(message)
        self.status = status
        self.payload = {"api": API_VERSION, "error": message, **details}


def _inputs_from(body: dict, require_geojson: bool = False):
    if not isinstance(body, dict):
        raise RequestError(400, "request body must be a JSON object")
    spec_text = body.get("spec")
    if not isinstance(spec_text, str) or not spec_text.strip():
        raise RequestError(400, "missing 'spec' (spec text)")
    geojson = body.get("geojson")
    if geojson is not None and not isinstance(geojson, str):
        raise RequestError(400, "'geojson' must be GeoJSON text")
    if require_geojson and not geojson:
        raise RequestError(400, "this endpoint needs 'geojson'")
    table = None
    data_text = body.get("data")
    if data_text is not None:
        if not isinstance(data_text, str):
            raise RequestError(400, "'data' must be CSV text")
        try:
            table = read_table_text(data_text)
        except InputError as exc:
            raise RequestError(422, f"attribute table: {exc}") from exc
    return spec_text, geojson, table


def _config_from(body: dict, base: LintConfig) -> LintConfig:
    cfg = LintConfig(**vars(base))
    metric = body.get("metric")
    if metric is not None:
        if metric not in ("gvf", "morans_i"):
            raise RequestError(400, "metric must be 'gvf' or 'morans_i'")
        cfg.metric = metric
    key_field = body.get("key_field")
    if key_field is not None:
        cfg.key_field = str(key_field)
    return cfg


def _run_analyze(spec_text, geojson, table, cfg):
    try:
        return analyze(spec_text, geojson, table, cfg)
    except SpecSyntaxError as exc:
        raise RequestError(
            422, "spec is not well-formed", line=exc.line, col=exc.col, detail=exc.message
        ) from exc
    except InputError as exc:
        raise RequestError(422, str(exc)) from exc


def handle_lint(body: dict, config: ServiceConfig) -> dict:
    spec_text, geojson, table = _inputs_from(body)
    cfg = _config_from(body, config.lint)
    report, _ = _run_analyze(spec_text, geojson, table, cfg)
    return {"api": API_VERSION, "report": report.to_dict()}


def handle_fix(body: dict, config: ServiceConfig) -> dict:
    spec_text, geojson, table = _inputs_from(body)
    cfg = _config_from(body, config.lint)
    selections = body.get("selections", "all")
    if selections != "all":
        if not isinstance(selections, dict):
            raise RequestError(400, "'selections' must be 'all' or {code: option_index}")
        known = {c.value for c in CODE_ORDER}
        for code, idx in selections.items():
            if code not in known:
                raise RequestError(400, f"unknown rule code {code!r}")
            if not isinstance(idx, int) or idx < 0:
                raise RequestError(400, f"{code}: option index must be a non-negative integer")
    _run_analyze(spec_text, geojson, table, cfg)  # surface 422s before fixing
    try:
        result = apply_fixes(spec_text, geojson, table, cfg, selections=selections)
    except InputError as exc:
        raise RequestError(400, str(exc)) from exc
    return {
        "api": API_VERSION,
        "spec": result.spec_text,
        "patches": result.patch_log,
        "report": result.report.to_dict(),
        "rounds": result.rounds,
    }


def handle_recommend(body: dict, config: ServiceConfig) -> dict:
    spec_text, geojson, table = _inputs_from(body, require_geojson=True)
    cfg = _config_from(body, config.lint)
    report, ctx = _run_analyze(spec_text, geojson, table, cfg)
    if ctx.dataset is None:
        raise RequestError(422, f"no data values: {ctx.values_skip_reason}")
    scores, skipped = sweep(ctx.dataset, ctx.present_weights, seed=cfg.seed)
    metric = cfg.metric
    if metric == "morans_i" and all(s.morans_i is None for s in scores):
        metric = "gvf"
    scores = sorted(
        scores,
        key=lambda s: (
            -(s.gvf if metric == "gvf" else (s.morans_i if s.morans_i is not None else float("-inf"))),
            s.k,
            s.method,
        ),
    )
    return {
        "api": API_VERSION,
        "metric": metric,
        "scores": [s.to_row() for s in scores],
        "skipped": [{"method": s.method, "k": s.k, "reason": s.reason} for s in skipped],
        "current": report.scores.to_dict(),
        "recommended_k": [3, 7],
    }


def handle_preview(body: dict, config: ServiceConfig) -> dict:
    spec_text, geojson, table = _inputs_from(body, require_geojson=True)
    cfg = _config_from(body, config.lint)
    override = body.get("classification")
    if override is not None and not isinstance(override, dict):
        raise RequestError(400, "'classification' must be an object")
    _, ctx = _run_analyze(spec_text, geojson, table, cfg)
    try:
        preview = build_preview(ctx, classification_override=override)
    except (ValueError, GeolintError) as exc:
        raise RequestError(400, str(exc)) from exc
    return {"api": API_VERSION, "preview": preview}


def handle_palettes(config: ServiceConfig) -> dict:
    cat = catalog()
    return {
        "api": API_VERSION,
        "palettes": [
            {
                "name": p.name,
                "kind": p.kind,
                "family": p.background_family,
                "colors_by_k": {str(k): v for k, v in sorted(p.colors_by_k.items())},
            }
            for p in cat.palettes
        ],
        "ramps": cat.ramps,
    }


def handle_request(method: str, path: str, body: dict | None, config: ServiceConfig) -> tuple[int, dict]:
    """Dispatch; returns (status, payload). Pure aside from catalog reads."""
    try:
        if method == "GET" and path == "/palettes":
            return 200, handle_palettes(config)
        if method == "POST":
            if body is None:
                raise RequestError(400, "request body must be JSON")
            if path == "/lint":
                return 200, handle_lint(body, config)
            if path == "/fix":
                return 200, handle_fix(body, config)
            if path == "/recommend":
                return 200, handle_recommend(body, config)
            if path == "/preview":
                return 200, handle_preview(body, config)
        return 404, {"api": API_VERSION, "error": f"no such endpoint: {method} {path}"}
    except RequestError as exc:
        return exc.status, exc.payload
    except GeolintError as exc:
        return 422, {"api": API_VERSION, "error": str(exc)}


class _Handler(BaseHTTPRequestHandler):
    config: ServiceConfig

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload: dict):
        raw = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(raw)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(raw)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()

    def do_GET(self):
        if self.path == "/palettes":
            status, payload = handle_request("GET", self.path, None, self.config)
            self._send(status, payload)
            return
        if self.config.ui_dir:
            self._serve_static()
            return
        self._send(404, {"api": API_VERSION, "error": "not found"})

    def _serve_static(self):
        root = Path(self.config.ui_dir).resolve()
        rel = self.path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            self._send(404, {"api": API_VERSION, "error": "not found"})
            return
        data = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode("utf-8")) if raw else None
        except (json.JSONDecodeError, UnicodeDecodeError):
            self._send(400, {"api": API_VERSION, "error": "request body is not valid JSON"})
            return
        status, payload = handle_request("POST", self.path, body, self.config)
        self._send(status, payload)


def make_server(config: ServiceConfig, port: int = DEFAULT_PORT, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"config": config})
    return ThreadingHTTPServer((host, port), handler)


def serve(config: ServiceConfig, port: int = DEFAULT_PORT, host: str = "127.0.0.1"):
    server = make_server(config, port, host)
    try:
        server.serve_forever()
    finally:
        server.server_close()
