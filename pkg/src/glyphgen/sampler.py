"""Constrained random sampling of glyph designs, plus overrides.

A design binds each column set to a mark: one shape per set drawn
without replacement, per-column channels drawn with replacement across
sets but injectively within a conjunction mark, repeat sets sharing one
shape + quantitative channel with a distinct color per member column,
and a uniformly drawn scaffold and gravity level.

Determinism: every choice comes from one SplitMix64 stream seeded by the
design seed, consumed in a fixed order (per set: shape, then channels in
column order; then scaffold; then gravity).  Identical inputs and seed
give byte-identical serialized designs on any platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .data_core import (
    CATEGORICAL,
    QUANTITATIVE,
    REPEAT,
    ColumnSetDesignation,
    DataTable,
    Violation,
    hosting_classes,
    validate_designation,
)
from .errors import (
    ColorBudgetExceeded,
    IncompatibleChannel,
    PaletteExhausted,
    ShapeAlreadyUsed,
    UnknownTarget,
    UnsatisfiableConjunction,
)
from .palettes import PaletteConfig
from .rng import Rng, derive_seed

SCHEMA_VERSION = 1

# How many sampling attempts a batch may burn on duplicate designs
# before giving up on a tiny design space.
def _retry_budget(n: int) -> int:
    return 128 + 64 * n


@dataclass(frozen=True)
class Seed:
    value: int

    def __post_init__(self):
        if not 0 <= self.value < 1 << 64:
            object.__setattr__(self, "value", self.value & ((1 << 64) - 1))

    def child(self, index: int) -> "Seed":
        return Seed(derive_seed(self.value, index))


@dataclass
class ChannelAssignment:
    column: str
    channel: str
    color: int | None = None      # palette color index; set for categorical
                                  # columns (block start) and repeat members

    def to_dict(self) -> dict:
        return {"column": self.column, "channel": self.channel, "color": self.color}


@dataclass
class MarkAssignment:
    set_index: int
    shape: str
    channel_assignments: list[ChannelAssignment]
    repeat: bool

    def to_dict(self) -> dict:
        return {
            "set_index": self.set_index,
            "shape": self.shape,
            "repeat": self.repeat,
            "channels": [a.to_dict() for a in self.channel_assignments],
        }


@dataclass
class GlyphDesign:
    id: str
    designation: ColumnSetDesignation
    marks: list[MarkAssignment]
    scaffold: str
    gravity: str
    seed: Seed
    revision: int = 0

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "id": self.id,
            "designation": self.designation.to_dict(),
            "marks": [m.to_dict() for m in self.marks],
            "scaffold": self.scaffold,
            "gravity": self.gravity,
            "seed": self.seed.value,
            "revision": self.revision,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "GlyphDesign":
        marks = [
            MarkAssignment(
                set_index=m["set_index"],
                shape=m["shape"],
                repeat=m["repeat"],
                channel_assignments=[
                    ChannelAssignment(a["column"], a["channel"], a["color"])
                    for a in m["channels"]
                ],
            )
            for m in d["marks"]
        ]
        return cls(
            id=d["id"],
            designation=ColumnSetDesignation.from_dict(d["designation"]),
            marks=marks,
            scaffold=d["scaffold"],
            gravity=d["gravity"],
            seed=Seed(d["seed"]),
            revision=d.get("revision", 0),
        )

    def signature(self) -> str:
        """Full-specification identity: everything except id/seed/revision."""
        spec = self.to_dict()
        for k in ("id", "seed", "revision"):
            spec.pop(k)
        return json.dumps(spec)


# Violation code -> error raised when sampling is attempted anyway.
VIOLATION_ERRORS = {
    "too-many-sets": PaletteExhausted,
    "shape-class-capacity": PaletteExhausted,
    "unsatisfiable-conjunction": UnsatisfiableConjunction,
    "repeat-not-quantitative": UnsatisfiableConjunction,
    "color-budget": ColorBudgetExceeded,
    "unknown-column": UnknownTarget,
    "key-column-in-set": UnknownTarget,
}


def raise_for_violations(violations: list[Violation]):
    if violations:
        first = violations[0]
        raise VIOLATION_ERRORS.get(first.code, UnsatisfiableConjunction)(first.message)


def sample_design(designation: ColumnSetDesignation, table: DataTable,
                  palette: PaletteConfig, seed: Seed,
                  design_id: str | None = None) -> GlyphDesign:
    """Draw one glyph design uniformly from the legal design space."""
    raise_for_violations(validate_designation(designation, table, palette))

    rng = Rng(seed.value)
    host_lists = [hosting_classes(palette, cs, table) for cs in designation.sets]
    class_counts = {sc: len(palette.shapes_of_class(sc))
                    for sc in palette.shape_classes()}

    used_shapes: set[str] = set()
    marks: list[MarkAssignment] = []
    for i, cs in enumerate(designation.sets):
        legal = [
            s for s in palette.mark_shapes
            if s.id not in used_shapes
            and s.shape_class in host_lists[i]
            and _still_feasible(class_counts, used_shapes, s,
                                host_lists[i + 1:], palette)
        ]
        if not legal:
            raise PaletteExhausted(f"no legal shape left for set {i}")
        shape = rng.choice(legal)
        used_shapes.add(shape.id)

        if cs.designation == REPEAT:
            channel = rng.choice(palette.channels_for(shape.shape_class,
                                                      QUANTITATIVE))
            assigns = [ChannelAssignment(col, channel.id) for col in cs.columns]
        else:
            assigns = []
            taken: set[str] = set()
            for col in cs.columns:
                kind = table.column(col).kind
                options = [c for c in palette.channels_for(shape.shape_class, kind)
                           if c.id not in taken]
                if not options:
                    raise UnsatisfiableConjunction(
                        f"no free {kind} channel for column {col!r}")
                channel = rng.choice(options)
                taken.add(channel.id)
                assigns.append(ChannelAssignment(col, channel.id))
        marks.append(MarkAssignment(i, shape.id, assigns,
                                    repeat=cs.designation == REPEAT))

    scaffold = rng.choice(palette.scaffolds)
    gravity = rng.choice(palette.gravities)

    _allocate_colors(marks, designation, table)
    return GlyphDesign(
        id=design_id or f"d{seed.value:016x}",
        designation=designation,
        marks=marks,
        scaffold=scaffold.id,
        gravity=gravity.id,
        seed=seed,
    )


def _still_feasible(class_counts, used_shapes, candidate, remaining_hosts,
                    palette) -> bool:
    """Would drawing ``candidate`` leave enough shapes of each class for
    the remaining sets?  (Hall's condition over the two shape classes.)"""
    remaining = dict(class_counts)
    for sid in used_shapes:
        remaining[palette.shape(sid).shape_class] -= 1
    remaining[candidate.shape_class] -= 1
    total = sum(remaining.values())
    if len(remaining_hosts) > total:
        return False
    for sc, count in remaining.items():
        forced = sum(1 for hosts in remaining_hosts if hosts == [sc])
        if forced > count:
            return False
    return True


def _allocate_colors(marks: list[MarkAssignment],
                     designation: ColumnSetDesignation, table: DataTable):
    """Reserve palette color indices in the same order assign_colors
    hands them out: categorical columns first (block start recorded),
    then repeat members, all in set order."""
    cursor = 0
    for mark in marks:
        if mark.repeat:
            continue
        for assign in mark.channel_assignments:
            if table.column(assign.column).kind == CATEGORICAL:
                assign.color = cursor
                cursor += len(table.column(assign.column).categories())
    for mark in marks:
        if not mark.repeat:
            continue
        for assign in mark.channel_assignments:
            assign.color = cursor
            cursor += 1


def sample_batch(designation: ColumnSetDesignation, table: DataTable,
                 palette: PaletteConfig, base_seed: Seed, n: int,
                 ) -> list[GlyphDesign]:
    """n pairwise-distinct designs from sub-seeds of ``base_seed``."""
    designs, _ = extend_batch(designation, table, palette, base_seed, n)
    return designs


def extend_batch(designation: ColumnSetDesignation, table: DataTable,
                 palette: PaletteConfig, base_seed: Seed, n: int,
                 start_index: int = 0,
                 existing_signatures: set[str] | None = None,
                 ) -> tuple[list[GlyphDesign], int]:
    """Batch generation core: draws designs from sub-seed ``start_index``
    onward, skipping duplicates of anything in ``existing_signatures``,
    and returns (designs, next sub-seed index) so a later call can keep
    extending the same seed lineage."""
    if n < 1:
        raise ValueError("batch size must be >= 1")
    seen = set(existing_signatures or ())
    designs: list[GlyphDesign] = []
    k = start_index
    attempts = 0
    budget = _retry_budget(n)
    while len(designs) < n:
        if attempts >= budget:
            raise PaletteExhausted(
                f"could not find {n} distinct designs in {attempts} attempts")
        design = sample_design(designation, table, palette,
                               base_seed.child(k), design_id=f"design-{k:03d}")
        k += 1
        attempts += 1
        sig = design.signature()
        if sig in seen:
            continue
        seen.add(sig)
        designs.append(design)
    return designs, k


# ----------------------------------------------------------------------
# Post-sampling overrides
# ----------------------------------------------------------------------

def override_assignment(design: GlyphDesign, palette: PaletteConfig,
                        set_index: int, new_shape: str | None = None,
                        column: str | None = None,
                        new_channel: str | None = None) -> GlyphDesign:
    """Swap one mark's shape and/or one column's channel, leaving the
    rest of the design untouched; returns a new design with the revision
    counter bumped.  Shape swaps remap now-incompatible channels to the
    lexicographically first legal channel."""
    updated = GlyphDesign.from_dict(design.to_dict())
    if not 0 <= set_index < len(updated.marks):
        raise UnknownTarget(f"no mark for set index {set_index}")
    mark = updated.marks[set_index]

    if new_shape is not None:
        try:
            shape = palette.shape(new_shape)
        except KeyError as exc:
            raise UnknownTarget(str(exc)) from exc
        for other in updated.marks:
            if other is not mark and other.shape == new_shape:
                raise ShapeAlreadyUsed(
                    f"shape {new_shape!r} already used by set {other.set_index}")
        _remap_channels(mark, shape.shape_class, palette)
        mark.shape = new_shape

    if new_channel is not None:
        _swap_channel(mark, palette, column, new_channel)
    elif column is not None and new_shape is None:
        raise UnknownTarget("a column override needs a new_channel")

    updated.revision = design.revision + 1
    return updated


def _remap_channels(mark: MarkAssignment, new_class: str,
                    palette: PaletteConfig):
    def compatible(channel_id: str) -> bool:
        return palette.channel(channel_id).applies_to_class(new_class)

    if mark.repeat:
        current = mark.channel_assignments[0].channel
        if compatible(current):
            return
        options = sorted(c.id for c in palette.channels_for(new_class, QUANTITATIVE))
        if not options:
            raise IncompatibleChannel(
                f"no quantitative channel for {new_class} marks")
        for assign in mark.channel_assignments:
            assign.channel = options[0]
        return

    taken = {a.channel for a in mark.channel_assignments if compatible(a.channel)}
    for assign in mark.channel_assignments:
        if compatible(assign.channel):
            continue
        kind = palette.channel(assign.channel).value_kind
        options = sorted(c.id for c in palette.channels_for(new_class, kind)
                         if c.id not in taken)
        if not options:
            raise IncompatibleChannel(
                f"no free {kind} channel on {new_class} marks for "
                f"column {assign.column!r}")
        assign.channel = options[0]
        taken.add(options[0])


def _swap_channel(mark: MarkAssignment, palette: PaletteConfig,
                  column: str | None, new_channel: str):
    try:
        channel = palette.channel(new_channel)
    except KeyError as exc:
        raise UnknownTarget(str(exc)) from exc
    shape_class = palette.shape(mark.shape).shape_class
    if not channel.applies_to_class(shape_class):
        raise IncompatibleChannel(
            f"channel {new_channel!r} does not apply to {shape_class} marks")

    if mark.repeat:
        if column is not None and column not in [a.column for a in
                                                 mark.channel_assignments]:
            raise UnknownTarget(f"column {column!r} is not in this repeat set")
        if channel.value_kind != QUANTITATIVE:
            raise IncompatibleChannel("repeat marks encode quantitative values")
        for assign in mark.channel_assignments:
            assign.channel = new_channel
        return

    if column is None:
        if len(mark.channel_assignments) != 1:
            raise UnknownTarget("specify the column to re-channel")
        target = mark.channel_assignments[0]
    else:
        matches = [a for a in mark.channel_assignments if a.column == column]
        if not matches:
            raise UnknownTarget(f"column {column!r} is not in set "
                                f"{mark.set_index}")
        target = matches[0]
    old_kind = palette.channel(target.channel).value_kind
    if channel.value_kind != old_kind:
        raise IncompatibleChannel(
            f"column {target.column!r} holds {old_kind} values")
    if any(a.channel == new_channel for a in mark.channel_assignments
           if a is not target):
        raise IncompatibleChannel(
            f"channel {new_channel!r} already used within this mark")
    target.channel = new_channel


# ----------------------------------------------------------------------
# Invariant checking (used by tests and the session fuzzer)
# ----------------------------------------------------------------------

def check_design(design: GlyphDesign, table: DataTable,
                 palette: PaletteConfig) -> list[str]:
    """All GlyphDesign invariants; returns human-readable problems."""
    problems: list[str] = []
    sets = design.designation.sets
    if len(design.marks) != len(sets):
        problems.append("mark count differs from set count")
        return problems

    shape_uses: list[str] = []
    colors_used: list[int] = []
    for i, (mark, cs) in enumerate(zip(design.marks, sets)):
        shape_uses.append(mark.shape)
        try:
            shape = palette.shape(mark.shape)
        except KeyError:
            problems.append(f"unknown shape {mark.shape!r}")
            continue
        if mark.set_index != i:
            problems.append(f"mark {i} carries set index {mark.set_index}")
        if [a.column for a in mark.channel_assignments] != list(cs.columns):
            problems.append(f"set {mark.set_index}: column order mismatch")
        if mark.repeat != (cs.designation == REPEAT):
            problems.append(f"set {mark.set_index}: repeat flag mismatch")

        for assign in mark.channel_assignments:
            try:
                channel = palette.channel(assign.channel)
            except KeyError:
                problems.append(f"unknown channel {assign.channel!r}")
                continue
            if not channel.applies_to_class(shape.shape_class):
                problems.append(
                    f"channel {assign.channel!r} incompatible with "
                    f"{shape.shape_class} shape {mark.shape!r}")
            kind = table.column(assign.column).kind
            if mark.repeat:
                if channel.value_kind != QUANTITATIVE:
                    problems.append("repeat set bound to a categorical channel")
            elif kind == CATEGORICAL and channel.value_kind != CATEGORICAL:
                problems.append(
                    f"categorical column {assign.column!r} on a "
                    f"{channel.value_kind} channel")
            elif kind == QUANTITATIVE and channel.value_kind != QUANTITATIVE:
                problems.append(
                    f"quantitative column {assign.column!r} on a "
                    f"{channel.value_kind} channel")
            if kind == CATEGORICAL and assign.color is None and not mark.repeat:
                problems.append(f"categorical column {assign.column!r} "
                                "has no color block")

        if mark.repeat:
            channels = {a.channel for a in mark.channel_assignments}
            if len(channels) != 1:
                problems.append(f"repeat set {mark.set_index} mixes channels")
            member_colors = [a.color for a in mark.channel_assignments]
            if None in member_colors or len(set(member_colors)) != len(member_colors):
                problems.append(f"repeat set {mark.set_index} colors not distinct")
            colors_used.extend(c for c in member_colors if c is not None)
        else:
            channels = [a.channel for a in mark.channel_assignments]
            if len(set(channels)) != len(channels):
                problems.append(
                    f"conjunction set {mark.set_index} reuses a channel")
            for assign in mark.channel_assignments:
                if assign.color is not None:
                    col = table.column(assign.column)
                    colors_used.extend(
                        range(assign.color, assign.color + len(col.categories())))

    if len(set(shape_uses)) != len(shape_uses):
        problems.append("a shape is used by more than one set")
    if len(set(colors_used)) != len(colors_used):
        problems.append("color indices overlap")
    if any(c >= len(palette.colors) for c in colors_used):
        problems.append("color index beyond the palette color list")
    try:
        palette.scaffold(design.scaffold)
    except KeyError:
        problems.append(f"unknown scaffold {design.scaffold!r}")
    try:
        palette.gravity(design.gravity)
    except KeyError:
        problems.append(f"unknown gravity {design.gravity!r}")
    return problems
