"""Deterministic SVG rendering of glyphs, sheets, and legend models.

Output is SVG 1.1 with all coordinates formatted to 4 decimal places,
so equal inputs give byte-identical documents on any platform.  Sheets
place one glyph per cell in a grid; a custom layout may pull individual
glyphs out of the grid via per-key position/size overrides.

Fixed chrome constants (cell padding, caption font) are echoed in a
comment at the top of each document.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from html import escape

from . import geometry
from .data_core import DataTable, renderable_rows
from .errors import RowOutOfRange
from .palettes import PaletteConfig
from .sampler import GlyphDesign
from .scales import GLYPH_FRACTION, ResolvedGlyph, resolve

FLOAT_DECIMALS = 4
CELL_PADDING = 8.0
CAPTION_HEIGHT = 16.0
CAPTION_FONT = "11px sans-serif"
SCAFFOLD_STROKE = "#d9d9d9"
SCAFFOLD_STROKE_FRACTION = 0.012   # of glyph width
WAVE_STROKE_FRACTION = 0.03        # of glyph width
PIP_FILL = "#ffffff"

SMALL_MULTIPLES = "small_multiples"
SMALL_PERMUTABLES = "small_permutables"
CUSTOM = "custom"

_HEADER_COMMENT = (f"<!-- glyphgen sheet: cell padding {CELL_PADDING:g}px, "
                   f"caption {CAPTION_FONT}, floats to {FLOAT_DECIMALS} "
                   "decimal places -->")


def fmt(v: float) -> str:
    return f"{v + 0.0:.{FLOAT_DECIMALS}f}"


@dataclass
class SheetLayout:
    mode: str                      # small_multiples | small_permutables | custom
    columns: int
    rows: int
    cell_size: float
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.columns < 1 or self.rows < 1:
            raise ValueError("grid needs at least one column and row")
        if self.cell_size <= 0:
            raise ValueError("cell size must be positive")
        for key, ov in self.overrides.items():
            if "size" in ov and ov["size"] <= 0:
                raise ValueError(f"override for {key!r} has non-positive size")

    @classmethod
    def auto(cls, count: int, cell_size: float = 140.0,
             mode: str = SMALL_MULTIPLES, overrides: dict | None = None
             ) -> "SheetLayout":
        """Near-square grid sized to the item count."""
        columns = max(1, math.ceil(math.sqrt(max(count, 1))))
        rows = max(1, math.ceil(max(count, 1) / columns))
        return cls(mode, columns, rows, cell_size, dict(overrides or {}))

    def capacity(self) -> int:
        return self.columns * self.rows


@dataclass
class LegendEntry:
    shape: str
    columns: list[str]
    channels: list[str]
    values: list[str]
    color: str

    def to_dict(self) -> dict:
        return {"shape": self.shape, "columns": list(self.columns),
                "channels": list(self.channels), "values": list(self.values),
                "color": self.color}


@dataclass
class LegendModel:
    row_key: str
    entries: list[LegendEntry]

    def to_dict(self) -> dict:
        return {"row_key": self.row_key,
                "entries": [e.to_dict() for e in self.entries]}


def legend(rg: ResolvedGlyph) -> LegendModel:
    """Mark-by-mark correspondences between columns, channels, and the
    row's raw values; every in-scope column appears exactly once."""
    entries = []
    for mark in rg.marks:
        entries.append(LegendEntry(
            shape=mark.shape,
            columns=[col for col, _, _ in mark.legend_entries],
            channels=[ch for _, ch, _ in mark.legend_entries],
            values=[val for _, _, val in mark.legend_entries],
            color=mark.fill_color,
        ))
    return LegendModel(row_key=rg.row_key, entries=entries)


# ----------------------------------------------------------------------
# Glyph bodies
# ----------------------------------------------------------------------

def _glyph_body(rg: ResolvedGlyph, origin=(0.0, 0.0)) -> list[str]:
    """SVG fragments for one resolved glyph, offset by ``origin``.

    Draw order: scaffold, marks in set order, then all pips on top.
    """
    ox, oy = origin
    gw = rg.size * GLYPH_FRACTION
    parts = []
    scaffold = rg.scaffold_geometry.transformed(translate=(ox, oy))
    parts.append(
        f'<path class="scaffold" d="{scaffold.to_svg_d(FLOAT_DECIMALS)}" '
        f'fill="none" stroke="{SCAFFOLD_STROKE}" '
        f'stroke-width="{fmt(SCAFFOLD_STROKE_FRACTION * gw)}"/>'
    )
    for mark in rg.marks:
        outline = mark.outline.transformed(translate=(ox, oy))
        if mark.wave_params is not None:
            parts.append(
                f'<path class="mark mark-wave" '
                f'd="{outline.to_svg_d(FLOAT_DECIMALS)}" fill="none" '
                f'stroke="{mark.fill_color}" '
                f'stroke-opacity="{fmt(mark.alpha)}" '
                f'stroke-width="{fmt(WAVE_STROKE_FRACTION * gw)}" '
                f'stroke-linecap="round"/>'
            )
        else:
            parts.append(
                f'<path class="mark mark-polygon" '
                f'd="{outline.to_svg_d(FLOAT_DECIMALS)}" '
                f'fill="{mark.fill_color}" '
                f'fill-opacity="{fmt(mark.alpha)}"/>'
            )
    for mark in rg.marks:
        (px, py), radius = mark.pip
        parts.append(
            f'<circle class="pip" cx="{fmt(px + ox)}" cy="{fmt(py + oy)}" '
            f'r="{fmt(radius)}" fill="{PIP_FILL}"/>'
        )
    return parts


def render_glyph(rg: ResolvedGlyph) -> str:
    """Standalone SVG document for a single resolved glyph."""
    s = fmt(rg.size)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{s}" height="{s}" viewBox="0 0 {s} {s}">',
        _HEADER_COMMENT,
    ]
    lines.extend(_glyph_body(rg))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Sheets
# ----------------------------------------------------------------------

def _cell_geometry(layout: SheetLayout, index: int, key: str):
    """(x, y, size) for a cell: grid slot, unless a custom override
    repositions or resizes this glyph."""
    col = index % layout.columns
    row = index // layout.columns
    x = CELL_PADDING + col * (layout.cell_size + CELL_PADDING)
    y = CELL_PADDING + row * (layout.cell_size + CELL_PADDING + CAPTION_HEIGHT)
    size = layout.cell_size
    if layout.mode == CUSTOM and key in layout.overrides:
        ov = layout.overrides[key]
        if "position" in ov:
            x, y = float(ov["position"][0]), float(ov["position"][1])
        if "size" in ov:
            size = float(ov["size"])
    return x, y, size


def _sheet(cells, layout: SheetLayout) -> str:
    """Assemble cells = [(key, caption, ResolvedGlyph, x, y)] into a sheet."""
    width = CELL_PADDING + layout.columns * (layout.cell_size + CELL_PADDING)
    height = (CELL_PADDING
              + layout.rows * (layout.cell_size + CELL_PADDING + CAPTION_HEIGHT))
    for key, _, rg, x, y in cells:
        width = max(width, x + rg.size + CELL_PADDING)
        height = max(height, y + rg.size + CAPTION_HEIGHT + CELL_PADDING)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">',
        _HEADER_COMMENT,
    ]
    for key, caption, rg, x, y in cells:
        lines.append(f'<g class="cell" data-key="{escape(key, quote=True)}">')
        lines.extend(_glyph_body(rg, origin=(x, y)))
        lines.append(
            f'<text class="caption" x="{fmt(x + rg.size / 2)}" '
            f'y="{fmt(y + rg.size + CAPTION_HEIGHT - 4)}" '
            f'text-anchor="middle" style="font: {CAPTION_FONT}">'
            f'{escape(caption)}</text>'
        )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_small_multiples(design: GlyphDesign, table: DataTable,
                           palette: PaletteConfig,
                           layout: SheetLayout | None = None) -> str:
    """One cell per renderable row, in row order, all drawn to ``design``."""
    rows = renderable_rows(table, design.designation)
    if layout is None:
        layout = SheetLayout.auto(len(rows))
    cells = []
    for i, row_index in enumerate(rows):
        key = table.row_keys[row_index]
        x, y, size = _cell_geometry(layout, i, key)
        rg = resolve(design, row_index, table, palette, size)
        cells.append((key, key, rg, x, y))
    return _sheet(cells, layout)


def render_small_permutables(designs: list[GlyphDesign], table: DataTable,
                             palette: PaletteConfig, row_index: int,
                             layout: SheetLayout | None = None) -> str:
    """One cell per design, in design order, all drawn to one row."""
    if not designs:
        raise ValueError("small permutables needs at least one design")
    if not 0 <= row_index < table.row_count:
        raise RowOutOfRange(f"row {row_index} of {table.row_count}")
    if layout is None:
        layout = SheetLayout.auto(len(designs),
                                  mode=SMALL_PERMUTABLES)
    cells = []
    for i, design in enumerate(designs):
        x, y, size = _cell_geometry(layout, i, design.id)
        rg = resolve(design, row_index, table, palette, size)
        cells.append((design.id, design.id, rg, x, y))
    return _sheet(cells, layout)


def render_empty_sheet(layout: SheetLayout | None = None) -> str:
    """Header-only sheet for zero rows or zero designs."""
    return _sheet([], layout or SheetLayout.auto(0))
