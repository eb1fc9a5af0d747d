"""Acceptance gate: one test per required criterion, each at its stated
tolerance, printing a PASS line on success (run with -s or -v to see them).

Oracles are independent of the code under test: exhaustive partition
enumeration for optimality, hand-computed closed forms for the metric cases,
and direct pairwise recomputation for the color catalog.
"""
import itertools
import json
import math
import time

import numpy as np
import pytest

import corpus
from grids import grid_feature_collection, grid_geojson
from geolint.classify import Dataset, fisher_jenks, gvf, morans_i
from geolint.color import catalog, check_color_set, discriminable, family_defaults
from geolint.errors import ZeroVariance
from geolint.geodata import WeightsMatrix, build_contiguity, load_geojson
from geolint.linter import LintConfig, apply_fixes, lint
from geolint.projection import (
    EQUAL_AREA_KINDS,
    ProjectionKind,
    from_vegalite_name,
    is_acceptable,
    recommend_projection,
)
from geolint.geodata import compute_extent

from test_classify import classification_ssw, exhaustive_min_ssw
from test_projection import TENNESSEE, VERMONT, WORLD, WYOMING, extent_of


def ok(name: str):
    print(f"ACCEPTANCE {name}: PASS")


class TestAcceptance:
    def test_a1_fisher_jenks_optimality_200_random(self):
        rng = np.random.default_rng(20240817)
        start = time.monotonic()
        checked = 0
        while checked < 200:
            n = int(rng.integers(2, 13))
            values = np.round(rng.uniform(0, 100, size=n), 2)
            d = Dataset.from_values(values)
            k = int(rng.integers(1, 5))
            if k > d.n_distinct:
                continue
            got = classification_ssw(d, fisher_jenks(d, k))
            want = exhaustive_min_ssw(values, k)
            assert got == pytest.approx(want, abs=1e-9), (values.tolist(), k)
            checked += 1
        elapsed = time.monotonic() - start
        assert elapsed < 10.0, f"took {elapsed:.1f}s"
        ok(f"A1 fisher-jenks optimality (200 datasets, {elapsed:.2f}s)")

    def test_a2_gvf_properties(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            values = rng.normal(size=int(rng.integers(4, 40))) * 50
            d = Dataset.from_values(values)
            prev = -1.0
            for k in range(1, min(9, d.n_distinct) + 1):
                g = gvf(d, fisher_jenks(d, k))
                assert 0.0 <= g <= 1.0
                assert g >= prev - 1e-12  # non-decreasing in k
                prev = g
            assert gvf(d, fisher_jenks(d, 1)) == 0.0
            assert gvf(d, fisher_jenks(d, d.n_distinct)) == 1.0
        hand = Dataset.from_values([1, 2, 3, 10, 11, 12])
        assert gvf(hand, fisher_jenks(hand, 2)) == pytest.approx(0.9681, abs=1e-4)
        ok("A2 gvf properties + hand case 0.9681")

    def test_a3_morans_i_hand_cases(self):
        chain4 = WeightsMatrix(4, "rook", [[1], [0, 2], [1, 3], [2]])
        assert morans_i([1, 0, 1, 0], chain4) == -1.0
        pair = WeightsMatrix(2, "queen", [[1], [0]])
        assert morans_i([0, 1], pair) == -1.0
        with pytest.raises(ZeroVariance):
            morans_i([5, 5, 5, 5], chain4)
        value = morans_i([1.0, 2.0, 2.0, 1.0], chain4)
        assert not math.isnan(value)
        ok("A3 moran's I: chain -1, pair -1, constant raises (never NaN)")

    def test_a4_contiguity_counts_and_subset(self):
        rs = load_geojson(grid_geojson(2, 2))
        assert build_contiguity(rs, "queen").total_weight == 12
        assert build_contiguity(rs, "rook").total_weight == 8
        rng = np.random.default_rng(99)
        for mesh in range(50):
            cols = int(rng.integers(2, 7))
            rows = int(rng.integers(2, 7))
            fc = grid_feature_collection(
                cols, rows,
                lon0=float(rng.uniform(-160, 120)),
                lat0=float(rng.uniform(-70, 50)),
                dlon=float(rng.uniform(0.5, 4.0)),
                dlat=float(rng.uniform(0.5, 4.0)),
            )
            # knock out a few random cells to vary the topology
            keep = rng.random(len(fc["features"])) > 0.2
            fc["features"] = [f for f, k in zip(fc["features"], keep) if k] or fc["features"]
            rs = load_geojson(json.dumps(fc))
            queen = build_contiguity(rs, "queen")
            rook = build_contiguity(rs, "rook")
            queen_pairs = set(queen.ordered_pairs())
            rook_pairs = set(rook.ordered_pairs())
            assert rook_pairs <= queen_pairs, f"mesh {mesh}"
            for i, j in queen_pairs:
                assert (j, i) in queen_pairs
        ok("A4 contiguity: 2x2 queen=12 rook=8; queen>=rook on 50 meshes")

    def test_a5_rule_fixtures_precision_recall(self):
        expected: dict[str, set] = {code: {code} for code in corpus.SINGLE_VIOLATION}
        expected["clean"] = set()
        expected["europe_dark"] = {"DATA_NORM", "TITLE_LEGEND", "LEGEND_COLOR", "LOW_GVF", "PROJ"}
        got: dict[str, set] = {}
        for code, builder in corpus.SINGLE_VIOLATION.items():
            spec_text, geojson, table = builder()
            got[code] = set(lint(spec_text, geojson, table).codes())
        spec_text, geojson, table = corpus.clean_fixture()
        got["clean"] = set(lint(spec_text, geojson, table).codes())
        spec_text, geojson, table = corpus.europe_dark_fixture()
        got["europe_dark"] = set(lint(spec_text, geojson, table).codes())
        assert got == expected  # precision and recall both 100%
        ok("A5 rule fixtures: 13 single-violation + composite, P/R = 100%")

    def test_a6_fix_soundness_and_idempotence(self):
        fixable = [
            c for c in corpus.SINGLE_VIOLATION
            if c not in ("DATA_URL", "DATA_FEATURE", "COLOR_FIELD")
        ]
        for code in fixable:
            spec_text, geojson, table = corpus.SINGLE_VIOLATION[code]()
            report = lint(spec_text, geojson, table)
            diag = next(d for d in report.diagnostics if d.code.value == code)
            for idx in range(len(diag.fixes)):
                result = apply_fixes(
                    spec_text, geojson, table, selections={code: idx}, max_rounds=1
                )
                assert code not in result.report.codes(), (code, idx)
        all_fixtures = list(corpus.SINGLE_VIOLATION.values()) + [
            corpus.unclassed_default_fixture,
            corpus.europe_dark_fixture,
        ]
        for builder in all_fixtures:
            spec_text, geojson, table = builder()
            result = apply_fixes(spec_text, geojson, table)
            final = result.report
            fixable_left = [d for d in final.diagnostics if d.fixes]
            assert not fixable_left, (builder.__name__, final.codes())
            assert result.rounds <= 3, builder.__name__
            again = apply_fixes(result.spec_text, geojson, table)
            assert again.spec_text == result.spec_text  # fixed point
        ok("A6 fix soundness (every option) + idempotent fixed point <= 3 rounds")

    def test_a7_projection_policy(self):
        for bbox in (WORLD, WYOMING, TENNESSEE, VERMONT):
            choice = recommend_projection(extent_of(bbox))
            assert choice.kind in EQUAL_AREA_KINDS
        assert recommend_projection(extent_of(WORLD)).kind is ProjectionKind.EQUAL_EARTH
        assert recommend_projection(extent_of(WYOMING)).kind is ProjectionKind.LAMBERT_AZIMUTHAL
        assert recommend_projection(extent_of(TENNESSEE)).kind is ProjectionKind.ALBERS_CONIC
        assert recommend_projection(extent_of(VERMONT)).kind is ProjectionKind.TCEA
        mercator = from_vegalite_name("mercator")
        for bbox in (WORLD, WYOMING, TENNESSEE, VERMONT):
            assert not is_acceptable(mercator, extent_of(bbox))
        rng = np.random.default_rng(3)
        for _ in range(100):
            lon0 = float(rng.uniform(-170, 100))
            lat0 = float(rng.uniform(-80, 50))
            dlon = float(rng.uniform(0.5, min(80.0, (178.0 - lon0) / 2)))
            dlat = float(rng.uniform(0.5, min(25.0, (88.0 - lat0) / 2)))
            extent = compute_extent(load_geojson(grid_geojson(
                2, 2, lon0=lon0, lat0=lat0, dlon=dlon, dlat=dlat,
            )))
            assert recommend_projection(extent).kind in EQUAL_AREA_KINDS
            assert not is_acceptable(mercator, extent)
        ok("A7 projection policy: equal-area only; branch table per extent")

    def test_a8_color_catalog_soundness(self):
        cat = catalog()
        variants = 0
        for kind in ("sequential", "diverging", "qualitative"):
            for family in ("light", "dark"):
                for palette, k in cat.suggestible_variants(kind, family):
                    bg, border = family_defaults(family)
                    clashes = check_color_set(palette.colors(k), border, bg)
                    assert clashes == [], (palette.name, k)
                    variants += 1
        assert variants >= 50
        assert not discriminable("#FC9272", "#FC9272")
        ok(f"A8 color catalog soundness ({variants} variants) + #FC9272 self-clash")

    def test_a9_determinism_byte_identical(self):
        builders = [corpus.clean_fixture, corpus.europe_dark_fixture,
                    corpus.unclassed_default_fixture, corpus.bg_color_fixture]
        for builder in builders:
            spec_text, geojson, table = builder()
            cfg = LintConfig(seed=0)
            a = json.dumps(lint(spec_text, geojson, table, cfg).to_dict())
            b = json.dumps(lint(spec_text, geojson, table, cfg).to_dict())
            assert a.encode() == b.encode(), builder.__name__
        ok("A9 determinism: byte-identical reports")

    def test_a10_cli_exit_codes(self, tmp_path):
        import csv

        from geolint.cli import main

        def materialize(fixture, name):
            spec_text, geojson, table = fixture
            spec = tmp_path / f"{name}.json"
            spec.write_text(spec_text)
            geo = tmp_path / f"{name}.geojson"
            geo.write_text(geojson)
            data = tmp_path / f"{name}.csv"
            with data.open("w", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=list(table[0].keys()))
                writer.writeheader()
                writer.writerows(table)
            return spec, geo, data

        spec, geo, data = materialize(corpus.clean_fixture(), "clean")
        assert main(["lint", str(spec), "--geojson", str(geo), "--data", str(data)]) == 0
        spec, geo, data = materialize(corpus.proj_fixture(), "soft")
        assert main(["lint", str(spec), "--geojson", str(geo), "--data", str(data)]) == 1
        spec, geo, data = materialize(corpus.mark_fixture(), "hard")
        assert main(["lint", str(spec), "--geojson", str(geo), "--data", str(data)]) == 2
        broken = tmp_path / "broken.json"
        broken.write_text('{"mark": ')
        assert main(["lint", str(broken), "--geojson", str(geo), "--data", str(data)]) == 3
        ok("A10 CLI exit codes 0/1/2/3")
