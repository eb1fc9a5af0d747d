"""Colors, perceptual distance, discriminability and the palette catalog.

Discriminability is a fixed Euclidean-CIELAB (CIE76) threshold, default 10:
a deliberately conservative swatch-scale cutoff.  The shipped catalog embeds
published scheme tables; a variant is suggestible only when every pairwise
combination (fills, border default, family background) clears the default
threshold, so recommendations never trip the rules they are meant to fix.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import NoPaletteAvailable

DEFAULT_DELTA_E_THRESHOLD = 10.0
LIGHT_BACKGROUND = "#ffffff"
DARK_BACKGROUND = "#222222"
LIGHT_FAMILY_BORDER = "#000000"
DARK_FAMILY_BORDER = "#ffffff"

# sRGB -> XYZ (D65) and CIELAB constants
_M = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)
_WHITE = (0.95047, 1.0, 1.08883)
_EPS = (6 / 29) ** 3
_KAPPA = 3 * (6 / 29) ** 2


@dataclass(frozen=True)
class Color:
    r: int
    g: int
    b: int

    @classmethod
    def from_hex(cls, text: str) -> "Color":
        h = text.strip().lstrip("#")
        if len(h) == 3:
            h = "".join(c * 2 for c in h)
        if len(h) != 6:
            raise ValueError(f"not a hex color: {text!r}")
        return cls(int(h[0:2], 16), int(h[2:4], 16), int(h[4:6], 16))

    @property
    def hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float


def _as_color(c) -> Color:
    return c if isinstance(c, Color) else Color.from_hex(c)


def _linearize(channel: int) -> float:
    c = channel / 255.0
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def _f(t: float) -> float:
    return t ** (1 / 3) if t > _EPS else t / _KAPPA + 4 / 29


def srgb_to_lab(c: Color | str) -> LabColor:
    """Standard sRGB -> XYZ(D65) -> CIELAB pipeline."""
    c = _as_color(c)
    rgb = (_linearize(c.r), _linearize(c.g), _linearize(c.b))
    xyz = tuple(sum(m * v for m, v in zip(row, rgb)) for row in _M)
    fx, fy, fz = (_f(v / w) for v, w in zip(xyz, _WHITE))
    return LabColor(L=116 * fy - 16, a=500 * (fx - fy), b=200 * (fy - fz))


def delta_e(c1: Color | str, c2: Color | str) -> float:
    """CIE76 color difference (Euclidean distance in CIELAB)."""
    l1, l2 = srgb_to_lab(c1), srgb_to_lab(c2)
    return math.sqrt((l1.L - l2.L) ** 2 + (l1.a - l2.a) ** 2 + (l1.b - l2.b) ** 2)


def discriminable(c1, c2, threshold: float = DEFAULT_DELTA_E_THRESHOLD) -> bool:
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    return delta_e(c1, c2) >= threshold


@dataclass(frozen=True)
class ColorClash:
    rule: str  # LEGEND_COLOR | BORDER_COLOR | BG_COLOR
    roles: tuple[str, str]  # e.g. ("fill[0]", "fill[3]")
    colors: tuple[str, str]
    distance: float


def check_color_set(
    fills: list,
    border: Color | str | None,
    background: Color | str,
    threshold: float = DEFAULT_DELTA_E_THRESHOLD,
) -> list[ColorClash]:
    """Pairwise discriminability across fills, border and background.

    Each rule is judged independently: indiscriminable fill pairs are
    LEGEND_COLOR clashes; border vs fills/background are BORDER_COLOR; and
    background vs fills/border are BG_COLOR.  A border of None (no stroke
    drawn) skips the border comparisons.
    """
    if not fills:
        raise ValueError("fills must be non-empty")
    fill_colors = [_as_color(f) for f in fills]
    bg = _as_color(background)
    clashes: list[ColorClash] = []

    for i in range(len(fill_colors)):
        for j in range(i + 1, len(fill_colors)):
            d = delta_e(fill_colors[i], fill_colors[j])
            if d < threshold:
                clashes.append(
                    ColorClash(
                        "LEGEND_COLOR",
                        (f"fill[{i}]", f"fill[{j}]"),
                        (fill_colors[i].hex, fill_colors[j].hex),
                        d,
                    )
                )
    if border is not None:
        bd = _as_color(border)
        for i, f in enumerate(fill_colors):
            d = delta_e(bd, f)
            if d < threshold:
                clashes.append(
                    ColorClash("BORDER_COLOR", ("border", f"fill[{i}]"), (bd.hex, f.hex), d)
                )
        d = delta_e(bd, bg)
        if d < threshold:
            clashes.append(ColorClash("BORDER_COLOR", ("border", "background"), (bd.hex, bg.hex), d))
    for i, f in enumerate(fill_colors):
        d = delta_e(bg, f)
        if d < threshold:
            clashes.append(
                ColorClash("BG_COLOR", ("background", f"fill[{i}]"), (bg.hex, f.hex), d)
            )
    if border is not None:
        bd = _as_color(border)
        d = delta_e(bg, bd)
        if d < threshold:
            clashes.append(ColorClash("BG_COLOR", ("background", "border"), (bg.hex, bd.hex), d))
    return clashes


# ---------------------------------------------------------------------------
# Palette catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Palette:
    name: str
    kind: str  # sequential | diverging | qualitative
    background_family: str  # light | dark
    colors_by_k: dict[int, list[str]]

    def colors(self, k: int) -> list[str]:
        return self.colors_by_k[k]


def family_defaults(family: str) -> tuple[str, str]:
    """(background, border) the family is designed against."""
    if family == "light":
        return LIGHT_BACKGROUND, LIGHT_FAMILY_BORDER
    return DARK_BACKGROUND, DARK_FAMILY_BORDER


def background_family(background: Color | str) -> str:
    return "light" if srgb_to_lab(background).L >= 50 else "dark"


class PaletteCatalog:
    """Published palette tables plus continuous ramps for scheme resolution."""

    def __init__(self, palettes: list[Palette], ramps: dict[str, list[str]]):
        self.palettes = palettes
        self.ramps = ramps
        self._by_name = {p.name.lower(): p for p in palettes}

    @classmethod
    def load(cls) -> "PaletteCatalog":
        raw = json.loads(
            resources.files("geolint.data").joinpath("palettes.json").read_text()
        )
        palettes = [
            Palette(
                name=p["name"],
                kind=p["kind"],
                background_family=p["family"],
                colors_by_k={int(k): v for k, v in p["colors_by_k"].items()},
            )
            for p in raw["palettes"]
        ]
        return cls(palettes, raw["ramps"])

    def variant_is_sound(self, palette: Palette, k: int,
                         threshold: float = DEFAULT_DELTA_E_THRESHOLD) -> bool:
        """Does this k-variant clear the threshold against its family defaults?"""
        bg, border = family_defaults(palette.background_family)
        return not check_color_set(palette.colors(k), border, bg, threshold)

    def suggestible_variants(
        self, kind: str, family: str, threshold: float = DEFAULT_DELTA_E_THRESHOLD
    ) -> list[tuple[Palette, int]]:
        out = []
        for p in self.palettes:
            if p.kind != kind or p.background_family != family:
                continue
            for k in sorted(p.colors_by_k):
                if self.variant_is_sound(p, k, threshold):
                    out.append((p, k))
        return out

    def resolve_scheme(self, name: str, k: int) -> list[str] | None:
        """Colors a renderer would use for a named scheme at k classes."""
        key = name.lower()
        palette = self._by_name.get(key)
        if palette and k in palette.colors_by_k:
            return palette.colors_by_k[k]
        ramp = self.ramps.get(key)
        if ramp:
            return sample_ramp(ramp, k)
        if palette:
            # fall back to interpolating the palette's largest variant
            return sample_ramp(palette.colors_by_k[max(palette.colors_by_k)], k)
        return None

    def ramp_for(self, name: str | None) -> list[str] | None:
        if name is None:
            return None
        key = name.lower()
        if key in self.ramps:
            return self.ramps[key]
        palette = self._by_name.get(key)
        if palette:
            return palette.colors_by_k[max(palette.colors_by_k)]
        return None


@lru_cache(maxsize=1)
def catalog() -> PaletteCatalog:
    return PaletteCatalog.load()


def sample_ramp(anchors: list[str], n: int) -> list[str]:
    """n colors evenly spaced along a piecewise-linear RGB ramp."""
    if n == 1:
        return [anchors[0]]
    colors = [Color.from_hex(a) for a in anchors]
    out = []
    for i in range(n):
        x = i / (n - 1) * (len(colors) - 1)
        lo = min(int(math.floor(x)), len(colors) - 2)
        f = x - lo
        c1, c2 = colors[lo], colors[lo + 1]
        out.append(
            Color(
                round(c1.r + (c2.r - c1.r) * f),
                round(c1.g + (c2.g - c1.g) * f),
                round(c1.b + (c2.b - c1.b) * f),
            ).hex
        )
    return out


def ramp_color(anchors: list[str], t: float) -> str:
    """Color at position t in [0, 1] along a ramp."""
    t = min(max(t, 0.0), 1.0)
    colors = [Color.from_hex(a) for a in anchors]
    x = t * (len(colors) - 1)
    lo = min(int(math.floor(x)), len(colors) - 2)
    f = x - lo
    c1, c2 = colors[lo], colors[lo + 1]
    return Color(
        round(c1.r + (c2.r - c1.r) * f),
        round(c1.g + (c2.g - c1.g) * f),
        round(c1.b + (c2.b - c1.b) * f),
    ).hex


def suggest_palette(
    kind: str,
    k: int,
    background: Color | str,
    threshold: float = DEFAULT_DELTA_E_THRESHOLD,
    border: Color | str | None = None,
) -> Palette:
    """First catalog palette of the kind whose k-variant suits the background.

    The palette family follows the background's lightness (L >= 50 is light);
    the chosen variant must clear check_color_set against the actual
    background and the border (family default when not given).
    """
    if kind not in ("sequential", "diverging", "qualitative"):
        raise ValueError(f"unknown palette kind {kind!r}")
    max_k = 9 if kind == "sequential" else 11
    if not 3 <= k <= max_k:
        raise NoPaletteAvailable(f"no {kind} palette for k={k} (catalog range 3..{max_k})")
    family = background_family(background)
    if border is None:
        border = family_defaults(family)[1]
    cat = catalog()
    for palette, variant_k in cat.suggestible_variants(kind, family, DEFAULT_DELTA_E_THRESHOLD):
        if variant_k != k:
            continue
        if not check_color_set(palette.colors(k), border, background, threshold):
            return palette
    raise NoPaletteAvailable(f"no {kind}/{family} palette with {k} discriminable classes")
