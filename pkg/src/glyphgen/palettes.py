"""Sampleable palettes: mark shapes, encoding channels, scaffolds, gravity.

The default configuration bundles eight polygon mark shapes plus one
wave shape, one categorical channel (mark color) with three quantitative
channels per shape class, eight scaffolds (two linear, six polygon) and
three gravity levels.  Designers can replace any of it with a JSON
palette file; custom outlines are SVG path-data in unit coordinates and
get normalized into the unit box at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import DegeneratePath, DuplicateId, SchemaError

POLYGON = "polygon"
WAVE = "wave"
LINEAR = "linear"
CATEGORICAL = "categorical"
QUANTITATIVE = "quantitative"

GRAVITY_IDS = ("weak", "medium", "strong")
DEFAULT_GRAVITY_PULLS = {"weak": 0.15, "medium": 0.45, "strong": 0.80}

# Ten categorical colors picked for pairwise distinguishability at small
# sizes; indices 4-6 are purple, brown, pink.
DEFAULT_COLORS = (
    "#4e79a7",  # blue
    "#f28e2b",  # orange
    "#59a14f",  # green
    "#e15759",  # red
    "#b07aa1",  # purple
    "#9c755f",  # brown
    "#ff9da7",  # pink
    "#76b7b2",  # teal
    "#edc949",  # yellow
    "#bab0ac",  # grey
)

# Output ranges keep every mark inside its glyph cell.
DEFAULT_RANGES = {
    "alpha": (0.25, 1.0),
    "size": (0.18, 0.55),
    "rotation": (0.0, 300.0),
    "frequency": (1.0, 6.0),
    "amplitude": (0.05, 0.22),
    "length": (0.25, 0.9),
}

_ASYMMETRIC_MARKS = {"drop", "houndstooth"}

# The renderer maps channel ids onto concrete visual properties, so a
# palette may subset/re-range these but cannot invent new ids.
CHANNEL_TARGETS = {
    "mark-color": (CATEGORICAL, ("polygon", "wave", "both")),
    "alpha": (QUANTITATIVE, ("polygon",)),
    "size": (QUANTITATIVE, ("polygon",)),
    "rotation": (QUANTITATIVE, ("polygon",)),
    "frequency": (QUANTITATIVE, ("wave",)),
    "amplitude": (QUANTITATIVE, ("wave",)),
    "length": (QUANTITATIVE, ("wave",)),
}


@dataclass(eq=False)
class MarkShapeSpec:
    id: str
    shape_class: str                       # polygon | wave
    geometry: str                          # built-in outline id (= id for defaults)
    symmetric: bool
    path: geometry.Path | None = None      # custom outline, normalized
    pip_anchor: np.ndarray | None = None   # shape-local pip point


@dataclass(eq=False)
class ChannelSpec:
    id: str
    value_kind: str                        # categorical | quantitative
    applies_to: str                        # polygon | wave | both
    output_range: tuple[float, float] | None = None

    def applies_to_class(self, shape_class: str) -> bool:
        return self.applies_to == "both" or self.applies_to == shape_class


@dataclass(eq=False)
class ScaffoldSpec:
    id: str
    scaffold_class: str                    # linear | polygon
    path: geometry.Path | None = None      # custom path; None selects built-in
    centroid: np.ndarray = field(default_factory=lambda: np.zeros(2))


@dataclass(eq=False)
class GravityLevel:
    id: str
    pull: float


@dataclass(eq=False)
class PaletteConfig:
    mark_shapes: list[MarkShapeSpec]
    channels: list[ChannelSpec]
    scaffolds: list[ScaffoldSpec]
    gravities: list[GravityLevel]
    colors: list[str]

    # ---- lookups ----

    def shape(self, shape_id: str) -> MarkShapeSpec:
        return _by_id(self.mark_shapes, shape_id, "shape")

    def channel(self, channel_id: str) -> ChannelSpec:
        return _by_id(self.channels, channel_id, "channel")

    def scaffold(self, scaffold_id: str) -> ScaffoldSpec:
        return _by_id(self.scaffolds, scaffold_id, "scaffold")

    def gravity(self, gravity_id: str) -> GravityLevel:
        return _by_id(self.gravities, gravity_id, "gravity")

    def shapes_of_class(self, shape_class: str) -> list[MarkShapeSpec]:
        return [s for s in self.mark_shapes if s.shape_class == shape_class]

    def channels_for(self, shape_class: str, value_kind: str) -> list[ChannelSpec]:
        return [c for c in self.channels
                if c.value_kind == value_kind and c.applies_to_class(shape_class)]

    def shape_classes(self) -> list[str]:
        seen = []
        for s in self.mark_shapes:
            if s.shape_class not in seen:
                seen.append(s.shape_class)
        return seen

    def to_dict(self) -> dict:
        return _palette_to_dict(self)


def _by_id(items, wanted, kind):
    for item in items:
        if item.id == wanted:
            return item
    raise KeyError(f"unknown {kind} id {wanted!r}")


# ----------------------------------------------------------------------
# Defaults
# ----------------------------------------------------------------------

def default_palettes() -> PaletteConfig:
    """The stock palette configuration (see module docstring)."""
    shapes = [
        MarkShapeSpec(mid, POLYGON, mid, symmetric=mid not in _ASYMMETRIC_MARKS)
        for mid in ("circle", "square", "triangle", "hexagon",
                    "star", "drop", "houndstooth", "diamond")
    ]
    shapes.append(MarkShapeSpec("wave", WAVE, "wave", symmetric=True))

    channels = [ChannelSpec("mark-color", CATEGORICAL, "both")]
    for cid, applies in (("alpha", POLYGON), ("size", POLYGON), ("rotation", POLYGON),
                         ("frequency", WAVE), ("amplitude", WAVE), ("length", WAVE)):
        channels.append(ChannelSpec(cid, QUANTITATIVE, applies, DEFAULT_RANGES[cid]))

    scaffolds = [ScaffoldSpec("horizontal-line", LINEAR),
                 ScaffoldSpec("vertical-line", LINEAR)]
    scaffolds += [ScaffoldSpec(sid, POLYGON)
                  for sid in ("circle", "triangle", "square",
                              "pentagon", "hexagon", "spiral")]

    gravities = [GravityLevel(gid, DEFAULT_GRAVITY_PULLS[gid]) for gid in GRAVITY_IDS]
    return PaletteConfig(shapes, channels, scaffolds, gravities, list(DEFAULT_COLORS))


# ----------------------------------------------------------------------
# Palette files
# ----------------------------------------------------------------------

def load_palette(json_text: str) -> PaletteConfig:
    """Parse and fully validate a designer palette file."""
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"palette file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "palette file must be a JSON object")

    shapes = _load_shapes(_expect_list(doc, "shapes"))
    channels = _load_channels(_expect_list(doc, "channels"))
    scaffolds = _load_scaffolds(_expect_list(doc, "scaffolds"))
    gravities = _load_gravities(_expect_list(doc, "gravities"))
    colors = _load_colors(_expect_list(doc, "colors"))

    palette = PaletteConfig(shapes, channels, scaffolds, gravities, colors)
    _check_cross_references(palette)
    return palette


def serialize_palette(palette: PaletteConfig) -> str:
    return json.dumps(_palette_to_dict(palette), indent=2)


def _palette_to_dict(palette: PaletteConfig) -> dict:
    shapes = []
    for s in palette.mark_shapes:
        entry: dict = {"id": s.id, "class": s.shape_class, "symmetric": s.symmetric}
        if s.path is not None:
            entry["path"] = s.path.to_svg_d(decimals=None)
        shapes.append(entry)
    channels = []
    for c in palette.channels:
        entry = {"id": c.id, "value_kind": c.value_kind, "applies_to": c.applies_to}
        if c.output_range is not None:
            entry["range"] = list(c.output_range)
        channels.append(entry)
    scaffolds = []
    for s in palette.scaffolds:
        entry = {"id": s.id, "class": s.scaffold_class}
        if s.path is not None:
            entry["path"] = s.path.to_svg_d(decimals=None)
        scaffolds.append(entry)
    return {
        "shapes": shapes,
        "channels": channels,
        "scaffolds": scaffolds,
        "gravities": [{"id": gr.id, "pull": gr.pull} for gr in palette.gravities],
        "colors": list(palette.colors),
    }


def _expect_list(doc: dict, key: str) -> list:
    value = doc.get(key)
    if not isinstance(value, list):
        raise SchemaError(key, f"{key!r} must be a list")
    return value


def _check_unique(ids, path):
    seen = set()
    for item_id in ids:
        if item_id in seen:
            raise DuplicateId(item_id)
        seen.add(item_id)


def _load_shapes(entries) -> list[MarkShapeSpec]:
    shapes = []
    for i, entry in enumerate(entries):
        where = f"shapes[{i}]"
        sid = _req_str(entry, "id", where)
        cls = _req_str(entry, "class", where)
        if cls not in (POLYGON, WAVE):
            raise SchemaError(f"{where}.class", f"unknown shape class {cls!r}")
        symmetric = bool(entry.get("symmetric", True))
        path_data = entry.get("path")
        if cls == WAVE:
            if path_data is not None:
                raise SchemaError(f"{where}.path",
                                  "wave shapes are parametric and take no path")
            shapes.append(MarkShapeSpec(sid, WAVE, sid, symmetric))
            continue
        if path_data is None:
            if sid not in geometry.BUILTIN_MARK_IDS:
                raise SchemaError(f"{where}.id",
                                  f"no built-in outline named {sid!r}")
            shapes.append(MarkShapeSpec(sid, POLYGON, sid, symmetric))
            continue
        try:
            pts, closed = geometry.parse_path_data(path_data)
        except ValueError as exc:
            raise SchemaError(f"{where}.path", str(exc)) from exc
        if not closed:
            raise DegeneratePath(sid, f"shape {sid!r} outline is not closed")
        try:
            pts, _ = geometry.normalize_outline(pts, (0.0, 0.0))
        except ValueError as exc:
            raise DegeneratePath(sid, str(exc)) from exc
        if not geometry.polygon_is_simple(pts):
            raise DegeneratePath(sid, f"shape {sid!r} outline self-intersects")
        height = float(pts[:, 1].max() - pts[:, 1].min())
        pip = np.array([0.0, -0.25 * height])
        shapes.append(MarkShapeSpec(sid, POLYGON, sid, symmetric,
                                    path=geometry.Path(pts, closed=True),
                                    pip_anchor=pip))
    _check_unique([s.id for s in shapes], "shapes")
    return shapes


def _load_channels(entries) -> list[ChannelSpec]:
    channels = []
    for i, entry in enumerate(entries):
        where = f"channels[{i}]"
        cid = _req_str(entry, "id", where)
        if cid not in CHANNEL_TARGETS:
            raise SchemaError(f"{where}.id",
                              f"unknown channel {cid!r}; renderable channels "
                              f"are {sorted(CHANNEL_TARGETS)}")
        kind = _req_str(entry, "value_kind", where)
        if kind not in (CATEGORICAL, QUANTITATIVE):
            raise SchemaError(f"{where}.value_kind", f"unknown value kind {kind!r}")
        applies = _req_str(entry, "applies_to", where)
        if applies not in (POLYGON, WAVE, "both"):
            raise SchemaError(f"{where}.applies_to", f"unknown target {applies!r}")
        expect_kind, allowed_targets = CHANNEL_TARGETS[cid]
        if kind != expect_kind:
            raise SchemaError(f"{where}.value_kind",
                              f"channel {cid!r} carries {expect_kind} values")
        if applies not in allowed_targets:
            raise SchemaError(f"{where}.applies_to",
                              f"channel {cid!r} can target {allowed_targets}")
        rng = entry.get("range")
        if kind == QUANTITATIVE:
            if rng is None and cid in DEFAULT_RANGES:
                rng = DEFAULT_RANGES[cid]
            if (not isinstance(rng, (list, tuple)) or len(rng) != 2
                    or not all(isinstance(v, (int, float)) for v in rng)):
                raise SchemaError(f"{where}.range",
                                  "quantitative channels need a [lo, hi] range")
            lo, hi = float(rng[0]), float(rng[1])
            if not lo < hi:
                raise SchemaError(f"{where}.range", "range must satisfy lo < hi")
            channels.append(ChannelSpec(cid, kind, applies, (lo, hi)))
        else:
            channels.append(ChannelSpec(cid, kind, applies))
    _check_unique([c.id for c in channels], "channels")
    return channels


def _load_scaffolds(entries) -> list[ScaffoldSpec]:
    scaffolds = []
    for i, entry in enumerate(entries):
        where = f"scaffolds[{i}]"
        sid = _req_str(entry, "id", where)
        cls = _req_str(entry, "class", where)
        if cls not in (LINEAR, POLYGON):
            raise SchemaError(f"{where}.class", f"unknown scaffold class {cls!r}")
        path_data = entry.get("path")
        if path_data is None:
            if sid not in geometry.BUILTIN_SCAFFOLD_IDS:
                raise SchemaError(f"{where}.id",
                                  f"no built-in scaffold named {sid!r}")
            scaffolds.append(ScaffoldSpec(sid, cls))
            continue
        try:
            pts, closed = geometry.parse_path_data(path_data)
        except ValueError as exc:
            raise SchemaError(f"{where}.path", str(exc)) from exc
        try:
            pts, _ = geometry.normalize_outline(pts, (0.0, 0.0))
        except ValueError as exc:
            raise DegeneratePath(sid, str(exc)) from exc
        path = geometry.Path(pts, closed=closed)
        if path.arc_length <= 0:
            raise DegeneratePath(sid, f"scaffold {sid!r} has zero arc length")
        scaffolds.append(ScaffoldSpec(sid, cls, path=path,
                                      centroid=geometry.path_centroid(path)))
    _check_unique([s.id for s in scaffolds], "scaffolds")
    return scaffolds


def _load_gravities(entries) -> list[GravityLevel]:
    gravities = []
    for i, entry in enumerate(entries):
        where = f"gravities[{i}]"
        gid = _req_str(entry, "id", where)
        if gid not in GRAVITY_IDS:
            raise SchemaError(f"{where}.id",
                              f"gravity id must be one of {GRAVITY_IDS}")
        pull = entry.get("pull")
        if not isinstance(pull, (int, float)) or not 0.0 <= pull < 1.0:
            raise SchemaError(f"{where}.pull", "pull must be a number in [0, 1)")
        gravities.append(GravityLevel(gid, float(pull)))
    _check_unique([g.id for g in gravities], "gravities")
    ordered = {g.id: g.pull for g in gravities}
    ranked = [ordered[gid] for gid in GRAVITY_IDS if gid in ordered]
    if ranked != sorted(ranked) or len(set(ranked)) != len(ranked):
        raise SchemaError("gravities", "pull must increase weak < medium < strong")
    return gravities


def _load_colors(entries) -> list[str]:
    colors = []
    for i, value in enumerate(entries):
        if (not isinstance(value, str) or len(value) != 7 or value[0] != "#"
                or any(ch not in "0123456789abcdefABCDEF" for ch in value[1:])):
            raise SchemaError(f"colors[{i}]", f"not a #rrggbb color: {value!r}")
        colors.append(value.lower())
    _check_unique(colors, "colors")
    return colors


def _req_str(entry, key, where) -> str:
    if not isinstance(entry, dict):
        raise SchemaError(where, "expected an object")
    value = entry.get(key)
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{where}.{key}", f"{key!r} must be a non-empty string")
    return value


def _check_cross_references(palette: PaletteConfig):
    """Every channel must point at a shape class that actually exists."""
    classes = set(palette.shape_classes())
    for c in palette.channels:
        if c.applies_to == "both":
            if not classes:
                raise SchemaError("channels", f"channel {c.id!r} has no shapes")
        elif c.applies_to not in classes:
            raise SchemaError(
                "channels",
                f"channel {c.id!r} applies to {c.applies_to!r} but the palette "
                f"has no {c.applies_to} shapes")
