"""Lintable fixture corpus: one clean base map, 13 single-violation mutants,
and the composite scenarios used by the end-to-end tests.

Every fixture is a (spec_text, geojson_text, table) triple built
deterministically.  The clean base is a 6x4 cell grid whose values form six
tight clusters arranged column-wise (so the surface is spatially smooth),
classed optimally into 6 bins with a catalog palette.
"""
from __future__ import annotations

import copy
import json

from geolint.classify import Dataset, fisher_jenks

from grids import grid_feature_collection

# -- base geography ------------------------------------------------------------

COLS, ROWS = 6, 4
LON0, LAT0, DLON, DLAT = -100.0, 35.0, 2.0, 1.25
CLUSTER_BY_COL = [2.0, 10.0, 25.0, 50.0, 80.0, 99.0]

GEOJSON = json.dumps(grid_feature_collection(COLS, ROWS, LON0, LAT0, DLON, DLAT))


def region_ids() -> list[str]:
    return [f"r{row}c{col}" for row in range(ROWS) for col in range(COLS)]


def base_values() -> dict[str, float]:
    values = {}
    for row in range(ROWS):
        for col in range(COLS):
            values[f"r{row}c{col}"] = CLUSTER_BY_COL[col] + row * 0.2
    return values


def base_table(field: str = "unemployment_rate") -> list[dict]:
    values = base_values()
    table = []
    for i, rid in enumerate(region_ids()):
        table.append(
            {
                "id": rid,
                field: values[rid],
                "population": 1000 + 37 * i,
            }
        )
    return table


def base_breaks(k: int = 6, field_values: list[float] | None = None) -> list[float]:
    values = field_values or list(base_values().values())
    return [float(b) for b in fisher_jenks(Dataset.from_values(values), k).breaks]


YLGNBU_6 = ["#ffffcc", "#c7e9b4", "#7fcdbb", "#41b6c4", "#2c7fb8", "#253494"]
YLGNBU_9 = ["#ffffd9", "#edf8b1", "#c7e9b4", "#7fcdbb", "#41b6c4", "#1d91c0", "#225ea8", "#253494", "#081d58"]
REDS_6 = ["#fee5d9", "#fcbba1", "#fc9272", "#fb6a4a", "#de2d26", "#a50f15"]
TEMPS_7 = ["#009392", "#39b185", "#9ccb86", "#e9e29c", "#eeb479", "#e88471", "#cf597e"]


def clean_spec_tree() -> dict:
    return {
        "data": {"url": "regions.geojson", "format": {"feature": "cells"}},
        "mark": "geoshape",
        "encoding": {
            "color": {
                "field": "unemployment_rate",
                "type": "quantitative",
                "scale": {
                    "type": "threshold",
                    "domain": base_breaks(6),
                    "range": list(YLGNBU_6),
                },
                "legend": {"title": "Unemployment rate (%)"},
            }
        },
        "projection": {"type": "albers", "parallels": [35.833333, 39.166667]},
        "title": "Unemployment rate in Gridland over 2020",
    }


def fixture(spec_tree: dict, table: list[dict] | None = None) -> tuple[str, str, list[dict]]:
    return json.dumps(spec_tree, indent=2), GEOJSON, table if table is not None else base_table()


def clean_fixture() -> tuple[str, str, list[dict]]:
    return fixture(clean_spec_tree())


# -- single-violation mutants ---------------------------------------------------

def _mutate(**edits):
    tree = clean_spec_tree()
    for path, value in edits.items():
        tokens = path.split(".")
        node = tree
        for token in tokens[:-1]:
            node = node[token]
        if value is _REMOVE:
            del node[tokens[-1]]
        else:
            node[tokens[-1]] = value
    return tree


_REMOVE = object()


def data_url_fixture():
    tree = clean_spec_tree()
    del tree["data"]["url"]
    return fixture(tree)


def data_feature_fixture():
    tree = clean_spec_tree()
    del tree["data"]["format"]["feature"]
    return fixture(tree)


def mark_fixture():
    return fixture(_mutate(mark="bar"))


def color_field_fixture():
    tree = clean_spec_tree()
    del tree["encoding"]["color"]["field"]
    return fixture(tree)


def color_type_fixture():
    tree = clean_spec_tree()
    tree["encoding"]["color"]["type"] = "temporal"
    return fixture(tree)


def num_classes_fixture():
    tree = clean_spec_tree()
    tree["encoding"]["color"]["scale"]["domain"] = base_breaks(9)
    tree["encoding"]["color"]["scale"]["range"] = list(YLGNBU_9)
    return fixture(tree)


def legend_color_fixture():
    tree = clean_spec_tree()
    colors = list(YLGNBU_6)
    colors[1] = colors[2]  # duplicate swatch: indistinguishable classes
    tree["encoding"]["color"]["scale"]["range"] = colors
    return fixture(tree)


def border_color_fixture():
    tree = clean_spec_tree()
    tree["mark"] = {"type": "geoshape", "stroke": YLGNBU_6[-1]}
    return fixture(tree)


def bg_color_fixture():
    """Background exactly equal to one legend fill (the dark-UI study case)."""
    tree = clean_spec_tree()
    tree["encoding"]["color"]["scale"]["range"] = list(REDS_6)
    tree["background"] = "#fc9272"
    return fixture(tree)


def low_gvf_fixture():
    tree = clean_spec_tree()
    # five breaks inside one cluster gap: classes mix the natural clusters
    tree["encoding"]["color"]["scale"]["domain"] = [30.0, 40.0, 55.0, 60.0, 70.0]
    return fixture(tree)


def proj_fixture():
    return fixture(_mutate(projection={"type": "mercator"}))


def data_norm_fixture():
    tree = clean_spec_tree()
    tree["encoding"]["color"]["field"] = "freight"
    tree["encoding"]["color"]["legend"]["title"] = "Freight shipments (USD)"
    tree["title"] = "Freight shipments in Gridland over 2020"
    # raw totals: mostly small regions plus a few giants (max/median >> 50)
    freight_by_col = [40.0, 80.0, 120.0, 160.0, 30000.0, 250000.0]
    raw = {}
    for row in range(ROWS):
        for col in range(COLS):
            raw[f"r{row}c{col}"] = freight_by_col[col] + row * 5
    table = []
    for i, rid in enumerate(region_ids()):
        table.append({"id": rid, "freight": raw[rid], "population": 1000 + 37 * i})
    values = [raw[rid] for rid in region_ids()]
    tree["encoding"]["color"]["scale"]["domain"] = base_breaks(6, values)
    return fixture(tree, table)


def title_legend_fixture():
    tree = clean_spec_tree()
    del tree["title"]
    return fixture(tree)


SINGLE_VIOLATION = {
    "DATA_URL": data_url_fixture,
    "DATA_FEATURE": data_feature_fixture,
    "MARK": mark_fixture,
    "COLOR_FIELD": color_field_fixture,
    "COLOR_TYPE": color_type_fixture,
    "NUM_CLASSES": num_classes_fixture,
    "LEGEND_COLOR": legend_color_fixture,
    "BORDER_COLOR": border_color_fixture,
    "BG_COLOR": bg_color_fixture,
    "LOW_GVF": low_gvf_fixture,
    "PROJ": proj_fixture,
    "DATA_NORM": data_norm_fixture,
    "TITLE_LEGEND": title_legend_fixture,
}


# -- composite scenarios ---------------------------------------------------------

def unclassed_default_fixture():
    """The study's first task: unclassed default ramp on otherwise-sound spec."""
    tree = clean_spec_tree()
    del tree["encoding"]["color"]["scale"]
    return fixture(tree)


EUROPE_GDP = [
    3, 5, 8, 12, 20, 35, 60, 90, 150, 260, 400, 700, 1200, 2000, 3500,
    6000, 10000, 18000, 30000, 60000, 110000, 200000, 380000, 700000, 1300000,
]
EUROPE_POP = [
    0.3, 0.6, 1.1, 2.0, 2.8, 3.4, 4.1, 5.5, 7.0, 8.2, 9.6, 10.5, 11.3, 17.4,
    19.0, 38.0, 10.7, 46.7, 59.1, 67.4, 83.2, 37.7, 47.3, 83.7, 144.1,
]


def europe_dark_fixture():
    """Dark-background continental map with five simultaneous soft violations."""
    fc = grid_feature_collection(5, 5, lon0=-10.0, lat0=36.0, dlon=10.0, dlat=6.8,
                                 id_format="c{row}{col}")
    geojson = json.dumps(fc)
    ids = [f"c{row}{col}" for row in range(5) for col in range(5)]
    table = [
        {"id": rid, "gdp": gdp, "population": pop}
        for rid, gdp, pop in zip(ids, EUROPE_GDP, EUROPE_POP)
    ]
    colors = list(TEMPS_7)
    colors[2] = "#3cb287"  # nearly identical to its neighbor swatch
    tree = {
        "data": {"url": "europe.geojson", "format": {"feature": "countries"}},
        "mark": "geoshape",
        "encoding": {
            "color": {
                "field": "gdp",
                "type": "quantitative",
                "scale": {
                    "type": "threshold",
                    # all six breaks crammed above the second-largest value:
                    # every country but one lands in the bottom class
                    "domain": [1150000.0, 1160000.0, 1170000.0, 1180000.0, 1190000.0, 1200000.0],
                    "range": colors,
                },
            }
        },
        "projection": {"type": "mercator"},
        "background": "#222222",
    }
    return json.dumps(tree, indent=2), geojson, table


def all_hard_fixture():
    return fixture({})
