"""Resolve a glyph design against one data row into drawable marks.

Quantitative columns map through clamped linear scales onto each
channel's output range; repeat sets share one scale over the union of
their members' domains so the marks stay directly comparable.  Colors
are handed out injectively in first-appearance order: category values
first (set order, then row order), then repeat-set member columns.

The glyph cell is a square of ``glyph_size`` pixels.  The scaffold is
drawn in a centered box of GLYPH_FRACTION * glyph_size (the "glyph
width" that all size-like channel fractions refer to), which leaves
enough margin that the largest mark at the farthest anchor stays inside
the cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .data_core import (
    CATEGORICAL,
    REPEAT,
    ColumnSetDesignation,
    DataTable,
    color_budget,
)
from .errors import ColorBudgetExceeded, MissingValue, RowOutOfRange
from .palettes import PaletteConfig
from .sampler import GlyphDesign

GLYPH_FRACTION = 0.48
PIP_RADIUS_FRACTION = 0.045
DEFAULT_FILL = "#8c8c8c"
DEFAULT_ALPHA = 1.0
DEFAULT_ROTATION = 0.0
FALLBACK_RANGES = {"size": (0.18, 0.55), "frequency": (1.0, 6.0),
                   "amplitude": (0.05, 0.22), "length": (0.25, 0.9)}

WAVE_PARAM_CHANNELS = ("frequency", "amplitude", "length")


def quant_scale(domain: tuple[float, float], output_range: tuple[float, float],
                x: float) -> float:
    """Clamped linear interpolation; a degenerate domain maps everything
    to the range midpoint, and the domain extremes hit the range
    endpoints exactly."""
    dmin, dmax = domain
    lo, hi = output_range
    if dmin == dmax:
        return 0.5 * (lo + hi)
    t = (x - dmin) / (dmax - dmin)
    if t <= 0.0:
        return lo
    if t >= 1.0:
        return hi
    return lo + t * (hi - lo)


@dataclass
class QuantScale:
    domain: tuple[float, float]
    output_range: tuple[float, float]

    def __call__(self, x: float) -> float:
        return quant_scale(self.domain, self.output_range, x)


def assign_colors(designation: ColumnSetDesignation, table: DataTable,
                  palette: PaletteConfig) -> dict:
    """Injective map to palette colors.

    Keys are ("category", column, value) for categorical cells and
    ("repeat", column) for repeat-set members.
    """
    budget = color_budget(designation, table, palette)
    if not budget.ok:
        raise ColorBudgetExceeded(
            f"need {budget.required} colors, have {budget.available}")
    mapping: dict = {}
    cursor = 0
    for cs in designation.sets:
        if cs.designation == REPEAT:
            continue
        for name in cs.columns:
            col = table.column(name)
            if col.kind != CATEGORICAL:
                continue
            for value in col.categories():
                mapping[("category", name, value)] = palette.colors[cursor]
                cursor += 1
    for cs in designation.sets:
        if cs.designation != REPEAT:
            continue
        for name in cs.columns:
            mapping[("repeat", name)] = palette.colors[cursor]
            cursor += 1
    return mapping


def _mid(output_range: tuple[float, float]) -> float:
    return 0.5 * (output_range[0] + output_range[1])


def _default_range(palette: PaletteConfig, channel_id: str) -> tuple[float, float]:
    for c in palette.channels:
        if c.id == channel_id and c.output_range is not None:
            return c.output_range
    return FALLBACK_RANGES[channel_id]


@dataclass(eq=False)
class ResolvedMark:
    shape: str
    position: np.ndarray               # pixel anchor in the glyph cell
    fill_color: str
    alpha: float
    size: float                        # fraction of glyph width
    rotation: float                    # degrees clockwise from north
    wave_params: dict | None           # frequency/amplitude/length
    pip: tuple[np.ndarray, float]      # (pixel point, radius)
    legend_entries: list[tuple[str, str, str]]   # (column, channel, raw value)
    outline: geometry.Path = None      # pixel-space outline or polyline

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "position": [float(self.position[0]), float(self.position[1])],
            "fill_color": self.fill_color,
            "alpha": self.alpha,
            "size": self.size,
            "rotation": self.rotation,
            "wave_params": self.wave_params,
            "legend_entries": [list(e) for e in self.legend_entries],
        }


@dataclass(eq=False)
class ResolvedGlyph:
    design_id: str
    row_key: str
    marks: list[ResolvedMark]
    scaffold_geometry: geometry.Path
    size: float                        # glyph cell size, pixels

    def to_dict(self) -> dict:
        return {
            "design_id": self.design_id,
            "row_key": self.row_key,
            "size": self.size,
            "marks": [m.to_dict() for m in self.marks],
        }


def column_domain(table: DataTable, name: str) -> tuple[float, float]:
    values = [v for v in table.column(name).values if v is not None]
    if not values:
        return (0.0, 0.0)
    return (min(values), max(values))


def shared_domain(table: DataTable, names: list[str]) -> tuple[float, float]:
    """Union [min, max] across repeat-set member columns."""
    mins, maxs = [], []
    for name in names:
        lo, hi = column_domain(table, name)
        mins.append(lo)
        maxs.append(hi)
    return (min(mins), max(maxs))


def resolve(design: GlyphDesign, row_index: int, table: DataTable,
            palette: PaletteConfig, glyph_size: float) -> ResolvedGlyph:
    """Apply a design to one row, producing concrete pixel geometry."""
    if glyph_size <= 0:
        raise ValueError("glyph_size must be positive")
    if not 0 <= row_index < table.row_count:
        raise RowOutOfRange(f"row {row_index} of {table.row_count}")
    for name in design.designation.in_scope_columns():
        if table.column(name).values[row_index] is None:
            raise MissingValue(row_index, name)

    gw = GLYPH_FRACTION * glyph_size
    center = np.array([glyph_size / 2.0, glyph_size / 2.0])
    scaffold_spec = palette.scaffold(design.scaffold)
    unit_path = geometry.scaffold_path(scaffold_spec)
    scaffold_px = unit_path.transformed(scale=gw, translate=center)

    mark_slots = sum(len(m.channel_assignments) if m.repeat else 1
                     for m in design.marks)
    anchors = np.empty((0, 2))
    if mark_slots:
        layout = geometry.anchor_points(unit_path, mark_slots,
                                        palette.gravity(design.gravity),
                                        scaffold_spec.centroid)
        anchors = layout.points * gw + center

    colors = assign_colors(design.designation, table, palette)
    pip_radius = PIP_RADIUS_FRACTION * gw

    marks: list[ResolvedMark] = []
    slot = 0
    for mark in design.marks:
        shape_spec = palette.shape(mark.shape)
        if mark.repeat:
            domain = shared_domain(table,
                                   [a.column for a in mark.channel_assignments])
            for assign in mark.channel_assignments:
                marks.append(_resolve_mark(
                    mark, shape_spec, [assign], anchors[slot], table, palette,
                    row_index, gw, pip_radius, colors, repeat_domain=domain))
                slot += 1
        else:
            marks.append(_resolve_mark(
                mark, shape_spec, mark.channel_assignments, anchors[slot],
                table, palette, row_index, gw, pip_radius, colors))
            slot += 1

    return ResolvedGlyph(
        design_id=design.id,
        row_key=table.row_keys[row_index],
        marks=marks,
        scaffold_geometry=scaffold_px,
        size=glyph_size,
    )


def _resolve_mark(mark, shape_spec, assignments, anchor, table, palette,
                  row_index, gw, pip_radius, colors,
                  repeat_domain=None) -> ResolvedMark:
    fill = DEFAULT_FILL
    alpha = DEFAULT_ALPHA
    rotation = DEFAULT_ROTATION
    size = _mid(_default_range(palette, "size"))
    wave = None
    if shape_spec.shape_class == "wave":
        wave = {cid: _mid(_default_range(palette, cid))
                for cid in WAVE_PARAM_CHANNELS}

    legend: list[tuple[str, str, str]] = []
    for assign in assignments:
        column = table.column(assign.column)
        raw = column.raw[row_index]
        legend.append((assign.column, assign.channel, raw))
        channel = palette.channel(assign.channel)

        if mark.repeat:
            fill = palette.colors[assign.color]
        if channel.value_kind == CATEGORICAL:
            fill = colors[("category", assign.column, column.values[row_index])]
            continue

        domain = repeat_domain or column_domain(table, assign.column)
        value = quant_scale(domain, channel.output_range,
                            column.values[row_index])
        if channel.id == "alpha":
            alpha = value
        elif channel.id == "size":
            size = value
        elif channel.id == "rotation":
            rotation = value
        elif channel.id in WAVE_PARAM_CHANNELS:
            wave[channel.id] = value

    if shape_spec.shape_class == "wave":
        outline = geometry.wave_polyline(
            wave["frequency"], wave["amplitude"], wave["length"],
            rotation=0.0, glyph_width=gw).transformed(translate=anchor)
        pip_pt = anchor + geometry.wave_pip_anchor(wave["length"], 0.0, gw)
    else:
        path, pip_local = geometry.mark_outline(shape_spec, size, rotation, gw)
        outline = path.transformed(translate=anchor)
        pip_pt = anchor + pip_local

    return ResolvedMark(
        shape=mark.shape,
        position=np.asarray(anchor, dtype=float),
        fill_color=fill,
        alpha=alpha,
        size=size,
        rotation=rotation,
        wave_params=wave,
        pip=(pip_pt, pip_radius),
        legend_entries=legend,
        outline=outline,
    )
