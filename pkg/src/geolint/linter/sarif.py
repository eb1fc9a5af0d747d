"""SARIF 2.1.0 export of lint reports for CI integration."""
from __future__ import annotations

from .. import __version__
from ..document import SpecDocument
from .pipeline import LintReport, location_position
from .rules import CODE_ORDER, EXPLANATIONS, severity_of

_SCHEMA = (
    "https://raw.githubusercontent.com/oasis-tcs/sarif-spec/master/"
    "Schemata/sarif-schema-2.1.0.json"
)


def _level(diag) -> str:
    if diag.severity == "hard":
        return "error"
    return "note" if diag.advisory else "warning"


def to_sarif(report: LintReport, doc: SpecDocument, artifact_uri: str = "spec.json") -> dict:
    rules = [
        {
            "id": code.value,
            "shortDescription": {"text": EXPLANATIONS[code].split(".")[0] + "."},
            "fullDescription": {"text": EXPLANATIONS[code]},
            "properties": {"severity": severity_of(code)},
        }
        for code in CODE_ORDER
    ]
    rule_index = {code.value: i for i, code in enumerate(CODE_ORDER)}
    results = []
    for diag in report.diagnostics:
        line, col = location_position(doc, diag.location)
        results.append(
            {
                "ruleId": diag.code.value,
                "ruleIndex": rule_index[diag.code.value],
                "level": _level(diag),
                "message": {"text": diag.message},
                "locations": [
                    {
                        "physicalLocation": {
                            "artifactLocation": {"uri": artifact_uri},
                            "region": {"startLine": line, "startColumn": col},
                        },
                        "logicalLocations": [{"fullyQualifiedName": diag.location}],
                    }
                ],
            }
        )
    return {
        "version": "2.1.0",
        "$schema": _SCHEMA,
        "runs": [
            {
                "tool": {
                    "driver": {
                        "name": "geolint",
                        "version": __version__,
                        "rules": rules,
                    }
                },
                "results": results,
            }
        ],
    }
