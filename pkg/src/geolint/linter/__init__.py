"""Rule engine: hard/soft rule evaluation, diagnostics, fixes, reports."""

from .fixes import NormalizationMethod, generate_title, normalize_data
from .pipeline import (
    AppliedFix,
    FixResult,
    LintConfig,
    LintReport,
    analyze,
    apply_fixes,
    lint,
)
from .rules import (
    ADVISORY_CODES,
    CODE_ORDER,
    HARD_CODES,
    SOFT_CODES,
    Diagnostic,
    Fix,
    RuleCode,
    Skip,
)
from .sarif import to_sarif

__all__ = [
    "ADVISORY_CODES",
    "AppliedFix",
    "CODE_ORDER",
    "Diagnostic",
    "Fix",
    "FixResult",
    "HARD_CODES",
    "LintConfig",
    "LintReport",
    "NormalizationMethod",
    "RuleCode",
    "SOFT_CODES",
    "Skip",
    "analyze",
    "apply_fixes",
    "generate_title",
    "lint",
    "normalize_data",
    "to_sarif",
]
