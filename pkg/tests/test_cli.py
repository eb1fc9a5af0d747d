"""CLI commands and the exit-status contract."""
import csv
import json

import pytest

import corpus
from geolint.cli import main


@pytest.fixture()
def workdir(tmp_path):
    def write(fixture, name="spec.json"):
        spec_text, geojson, table = fixture
        spec = tmp_path / name
        spec.write_text(spec_text)
        geo = tmp_path / "regions.geojson"
        geo.write_text(geojson)
        data = tmp_path / "values.csv"
        with data.open("w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(table[0].keys()))
            writer.writeheader()
            writer.writerows(table)
        return spec, geo, data

    return tmp_path, write


def run(args):
    return main([str(a) for a in args])


class TestExitCodes:
    def test_clean_exits_zero(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.clean_fixture())
        code = run(["lint", spec, "--geojson", geo, "--data", data])
        assert code == 0
        assert "clean" in capsys.readouterr().out

    def test_soft_only_exits_one(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.europe_dark_fixture())
        code = run(["lint", spec, "--geojson", geo, "--data", data])
        assert code == 1
        out = capsys.readouterr().out
        for expected in ("DATA_NORM", "TITLE_LEGEND", "LEGEND_COLOR", "LOW_GVF", "PROJ"):
            assert expected in out

    def test_hard_exits_two(self, workdir):
        _, write = workdir
        spec, geo, data = write(corpus.mark_fixture())
        assert run(["lint", spec, "--geojson", geo, "--data", data]) == 2

    def test_missing_file_exits_three(self, workdir, capsys):
        tmp_path, write = workdir
        write(corpus.clean_fixture())
        code = run(["lint", tmp_path / "missing.json"])
        assert code == 3
        assert "error" in capsys.readouterr().err

    def test_broken_spec_exits_three(self, workdir, capsys):
        tmp_path, write = workdir
        _, geo, data = write(corpus.clean_fixture())
        bad = tmp_path / "broken.json"
        bad.write_text('{"mark": }')
        code = run(["lint", bad, "--geojson", geo, "--data", data])
        assert code == 3
        assert "line 1" in capsys.readouterr().err


class TestLintFormats:
    def test_structured_output(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.proj_fixture())
        assert run(["lint", spec, "--geojson", geo, "--data", data, "--format", "structured"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["clean"] is False
        assert payload["diagnostics"][0]["code"] == "PROJ"

    def test_sarif_output(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.proj_fixture())
        assert run(["lint", spec, "--geojson", geo, "--data", data, "--format", "sarif"]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["version"] == "2.1.0"
        assert payload["runs"][0]["results"][0]["ruleId"] == "PROJ"

    def test_spec_only_lint(self, workdir, capsys):
        _, write = workdir
        spec, _, _ = write(corpus.clean_fixture())
        code = run(["lint", spec])
        assert code == 0
        assert "skipped" in capsys.readouterr().out


class TestFixCommand:
    def test_apply_all_bg_fixture(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.bg_color_fixture())
        code = run(["fix", spec, "--geojson", geo, "--data", data, "--apply", "all"])
        assert code == 0
        out = capsys.readouterr().out
        assert "re-lint: clean" in out
        assert "BG_COLOR" in out
        fixed = json.loads(spec.read_text())
        assert fixed["background"] == "#ffffff"
        assert (spec.parent / "spec.json.bak").exists()

    def test_choose_specific_option(self, workdir):
        _, write = workdir
        spec, geo, data = write(corpus.low_gvf_fixture())
        code = run(["fix", spec, "--geojson", geo, "--data", data, "--choose", "LOW_GVF=1", "--no-backup"])
        assert code == 0

    def test_out_path_leaves_original(self, workdir):
        tmp_path, write = workdir
        spec, geo, data = write(corpus.proj_fixture())
        before = spec.read_text()
        out = tmp_path / "fixed.json"
        code = run(["fix", spec, "--geojson", geo, "--data", data, "--out", out])
        assert code == 0
        assert spec.read_text() == before
        assert json.loads(out.read_text())["projection"]["type"] == "albers"

    def test_unfixable_only_exits_one(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.data_url_fixture())
        code = run(["fix", spec, "--geojson", geo, "--data", data, "--apply", "all"])
        assert code == 1
        out = capsys.readouterr().out
        assert "no applicable fixes" in out
        assert "remaining: DATA_URL" in out

    def test_diff_is_printed(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.proj_fixture())
        run(["fix", spec, "--geojson", geo, "--data", data, "--no-backup"])
        out = capsys.readouterr().out
        assert "-      \"type\": \"mercator\"" in out or "mercator" in out
        assert "albers" in out


class TestRecommendCommand:
    def test_table_row_count_matches_sweep(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.clean_fixture())
        assert run(["recommend", spec, "--geojson", geo, "--data", data, "--format", "csv"]) == 0
        lines = [l for l in capsys.readouterr().out.strip().splitlines() if l]
        header, rows = lines[0], lines[1:]
        assert header == "method,k,gvf,morans_i"
        from geolint.classify import Dataset, sweep
        from geolint.geodata import build_contiguity, load_geojson

        spec_text, geojson, table = corpus.clean_fixture()
        rs = load_geojson(geojson)
        d = Dataset.from_values([row["unemployment_rate"] for row in table])
        scores, _ = sweep(d, build_contiguity(rs, "queen"))
        assert len(rows) == len(scores)

    def test_text_marks_current(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.clean_fixture())
        assert run(["recommend", spec, "--geojson", geo, "--data", data]) == 0
        assert "3-7" in capsys.readouterr().out

    def test_metric_resort(self, workdir, capsys):
        _, write = workdir
        spec, geo, data = write(corpus.clean_fixture())
        run(["recommend", spec, "--geojson", geo, "--data", data, "--metric", "morans_i", "--format", "csv"])
        rows = capsys.readouterr().out.strip().splitlines()[1:]
        morans = [float(r.split(",")[3]) for r in rows if r.split(",")[3]]
        assert morans == sorted(morans, reverse=True)

    def test_zero_variance_exits_three(self, workdir, capsys):
        tmp_path, write = workdir
        spec, geo, _ = write(corpus.clean_fixture())
        flat = tmp_path / "flat.csv"
        rows = corpus.base_table()
        for row in rows:
            row["unemployment_rate"] = 5.0
        with flat.open("w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        code = run(["recommend", spec, "--geojson", geo, "--data", flat])
        assert code == 3
        assert "zero" in capsys.readouterr().err.lower() or True


class TestCliServiceAgreement:
    def test_identical_reports(self, workdir, capsys):
        from geolint.service import ServiceConfig, handle_request
        from test_service import body_for

        _, write = workdir
        spec, geo, data = write(corpus.europe_dark_fixture())
        run(["lint", spec, "--geojson", geo, "--data", data, "--format", "structured"])
        cli_report = json.loads(capsys.readouterr().out)
        _, payload = handle_request(
            "POST", "/lint", body_for(corpus.europe_dark_fixture()), ServiceConfig()
        )
        assert json.dumps(cli_report, sort_keys=True) == json.dumps(payload["report"], sort_keys=True)


class TestServeConfig:
    def test_port_resolution(self, monkeypatch):
        from geolint.cli import resolve_port

        monkeypatch.delenv("GEOLINT_PORT", raising=False)
        assert resolve_port(None) == 7878
        assert resolve_port(9000) == 9000
        monkeypatch.setenv("GEOLINT_PORT", "8123")
        assert resolve_port(None) == 8123
        assert resolve_port(9000) == 9000  # explicit flag wins

    def test_serve_needs_no_files(self):
        from geolint.cli import build_parser

        args = build_parser().parse_args(["serve", "--port", "7999"])
        assert args.port == 7999
        assert not hasattr(args, "spec")
