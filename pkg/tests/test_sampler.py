import json

import pytest

from glyphgen.data_core import parse_table
from glyphgen.errors import (
    IncompatibleChannel,
    PaletteExhausted,
    ShapeAlreadyUsed,
    UnknownTarget,
)
from glyphgen.palettes import load_palette
from glyphgen.sampler import (
    Seed,
    check_design,
    extend_batch,
    override_assignment,
    sample_batch,
    sample_design,
)

import oracles
from conftest import SEED_DESIGN_A, SEED_DESIGN_B, singleton_designation


def summary(design):
    m0, m1 = design.marks
    ch0 = {a.column: a.channel for a in m0.channel_assignments}
    return (m0.shape, ch0["region"], ch0["area"], ch0["population"],
            m1.shape, m1.channel_assignments[0].channel,
            design.scaffold, design.gravity)


# ---- determinism ----

def test_sample_design_is_deterministic(fig_designation, cities, palette):
    runs = [sample_design(fig_designation, cities, palette, Seed(123)).to_json()
            for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_different_seeds_explore_the_space(fig_designation, cities, palette):
    sigs = {sample_design(fig_designation, cities, palette, Seed(s)).signature()
            for s in range(60)}
    assert len(sigs) > 30


def test_design_serialization_round_trip(fig_designation, cities, palette):
    from glyphgen.sampler import GlyphDesign
    design = sample_design(fig_designation, cities, palette, Seed(9))
    again = GlyphDesign.from_dict(json.loads(design.to_json()))
    assert again.to_json() == design.to_json()


# ---- worked-example designs ----

def test_seed_reproduces_design_a(fig_designation, cities, palette):
    design = sample_design(fig_designation, cities, palette,
                           Seed(SEED_DESIGN_A))
    assert summary(design) == ("drop", "mark-color", "size", "rotation",
                               "wave", "amplitude", "spiral", "weak")
    assert not check_design(design, cities, palette)


def test_seed_reproduces_design_b(fig_designation, cities, palette):
    design = sample_design(fig_designation, cities, palette,
                           Seed(SEED_DESIGN_B))
    assert summary(design) == ("hexagon", "mark-color", "rotation", "alpha",
                               "star", "rotation", "triangle", "medium")
    assert not check_design(design, cities, palette)


def test_repeat_set_shares_shape_and_channel_distinct_colors(
        fig_designation, cities, palette):
    design = sample_design(fig_designation, cities, palette, Seed(77))
    repeat = design.marks[1]
    channels = {a.channel for a in repeat.channel_assignments}
    colors = [a.color for a in repeat.channel_assignments]
    assert repeat.repeat and len(channels) == 1
    assert len(set(colors)) == 3 and None not in colors


def test_categorical_block_precedes_repeat_colors(fig_designation, cities,
                                                  palette):
    design = sample_design(fig_designation, cities, palette, Seed(5))
    region = design.marks[0].channel_assignments[0]
    assert region.column == "region" and region.color == 0
    assert [a.color for a in design.marks[1].channel_assignments] == [4, 5, 6]


# ---- legal-space membership ----

def test_singleton_channel_always_in_class_legal_space(cities, palette):
    d = singleton_designation("population")
    for seed in range(1000):
        design = sample_design(d, cities, palette, Seed(seed))
        (mark,) = design.marks
        shape_class = palette.shape(mark.shape).shape_class
        legal = oracles.legal_channel_space(palette, shape_class, "quantitative")
        assert mark.channel_assignments[0].channel in legal


def test_conjunction_assignment_always_in_enumerated_space(
        fig_designation, cities, palette):
    kinds = ["categorical", "quantitative", "quantitative"]
    for seed in range(500):
        design = sample_design(fig_designation, cities, palette, Seed(seed))
        mark = design.marks[0]
        shape_class = palette.shape(mark.shape).shape_class
        space = oracles.conjunction_assignments(palette, shape_class, kinds)
        assert tuple(a.channel for a in mark.channel_assignments) in space


def test_invariants_hold_across_seeds(fig_designation, cities, palette):
    for seed in range(1000):
        design = sample_design(fig_designation, cities, palette, Seed(seed))
        assert not check_design(design, cities, palette)


# ---- batches ----

def test_batch_of_five_is_pairwise_distinct(fig_designation, cities, palette):
    designs = sample_batch(fig_designation, cities, palette, Seed(42), 5)
    assert len(designs) == 5
    assert len({d.signature() for d in designs}) == 5
    assert [d.id for d in designs] == [f"design-{k:03d}" for k in range(5)]


def test_batch_of_one_equals_child_seed_sample(fig_designation, cities,
                                               palette):
    (only,) = sample_batch(fig_designation, cities, palette, Seed(42), 1)
    direct = sample_design(fig_designation, cities, palette,
                           Seed(42).child(0), design_id="design-000")
    assert only.to_json() == direct.to_json()


def test_batch_rejects_nonpositive_n(fig_designation, cities, palette):
    with pytest.raises(ValueError):
        sample_batch(fig_designation, cities, palette, Seed(1), 0)


TINY_PALETTE = {
    "shapes": [
        {"id": "circle", "class": "polygon", "symmetric": True},
        {"id": "square", "class": "polygon", "symmetric": True},
    ],
    "channels": [
        {"id": "alpha", "value_kind": "quantitative", "applies_to": "polygon"},
        {"id": "size", "value_kind": "quantitative", "applies_to": "polygon"},
        {"id": "rotation", "value_kind": "quantitative", "applies_to": "polygon"},
    ],
    "scaffolds": [{"id": "circle", "class": "polygon"}],
    "gravities": [{"id": "weak", "pull": 0.2}],
    "colors": ["#123456"],
}


def test_tiny_design_space_exhausts():
    palette = load_palette(json.dumps(TINY_PALETTE))
    table = parse_table("id,x\nr1,1\nr2,2\n", "id")
    d = singleton_designation("x")
    # oracle: 2 shapes x 3 channels x 1 scaffold x 1 gravity = 6 designs
    space = 2 * 3 * 1 * 1
    designs, _ = extend_batch(d, table, palette, Seed(3), space)
    assert len({x.signature() for x in designs}) == space
    with pytest.raises(PaletteExhausted):
        sample_batch(d, table, palette, Seed(3), space + 1)


def test_extend_batch_continues_lineage(fig_designation, cities, palette):
    first, cursor = extend_batch(fig_designation, cities, palette, Seed(11), 3)
    more, _ = extend_batch(fig_designation, cities, palette, Seed(11), 2,
                           start_index=cursor,
                           existing_signatures={d.signature() for d in first})
    assert [d.id for d in first + more] == [f"design-{k:03d}" for k in range(5)]
    full = sample_batch(fig_designation, cities, palette, Seed(11), 5)
    assert [d.to_json() for d in first + more] == [d.to_json() for d in full]


# ---- overrides ----

def fig_design(cities, palette, fig_designation, seed=SEED_DESIGN_A):
    return sample_design(fig_designation, cities, palette, Seed(seed))


def test_override_shape_to_compatible_polygon_keeps_channels(
        fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)
    updated = override_assignment(design, palette, 0, new_shape="square")
    assert updated.marks[0].shape == "square"
    assert [a.channel for a in updated.marks[0].channel_assignments] \
        == [a.channel for a in design.marks[0].channel_assignments]
    assert updated.revision == design.revision + 1
    assert updated.id == design.id and updated.seed == design.seed
    assert not check_design(updated, cities, palette)


def test_override_shape_to_wave_remaps_quantitative_channels(
        fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation, SEED_DESIGN_B)
    # hexagon(color/rotation/alpha) + star repeat; move set 1 off star first
    # so the wave swap on set 0 is exercised in isolation
    updated = override_assignment(design, palette, 0, new_shape="wave")
    channels = {a.column: a.channel for a in updated.marks[0].channel_assignments}
    assert channels["region"] == "mark-color"
    wave_channels = oracles.legal_channel_space(palette, "wave", "quantitative")
    assert channels["area"] in wave_channels
    assert channels["population"] in wave_channels
    assert channels["area"] != channels["population"]
    # lexicographic first legal picks: rotation -> amplitude, alpha -> frequency
    assert channels["area"] == "amplitude"
    assert channels["population"] == "frequency"
    assert not check_design(updated, cities, palette)


def test_override_to_used_shape_rejected(fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)
    with pytest.raises(ShapeAlreadyUsed):
        override_assignment(design, palette, 0, new_shape="wave")  # repeat has it


def test_override_channel_swap(fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)  # area -> size
    updated = override_assignment(design, palette, 0, column="area",
                                  new_channel="alpha")
    channels = {a.column: a.channel for a in updated.marks[0].channel_assignments}
    assert channels["area"] == "alpha"
    assert not check_design(updated, cities, palette)


def test_override_channel_conflicts_rejected(fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)
    with pytest.raises(IncompatibleChannel):
        override_assignment(design, palette, 0, column="area",
                            new_channel="rotation")  # taken by population
    with pytest.raises(IncompatibleChannel):
        override_assignment(design, palette, 0, column="region",
                            new_channel="size")  # categorical column
    with pytest.raises(IncompatibleChannel):
        override_assignment(design, palette, 0, column="area",
                            new_channel="amplitude")  # wave channel on drop


def test_override_unknown_targets(fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)
    with pytest.raises(UnknownTarget):
        override_assignment(design, palette, 9, new_shape="square")
    with pytest.raises(UnknownTarget):
        override_assignment(design, palette, 0, new_shape="decagon")
    with pytest.raises(UnknownTarget):
        override_assignment(design, palette, 0, column="nope",
                            new_channel="alpha")


def test_override_changes_exactly_the_target_fields(fig_designation, cities,
                                                    palette):
    design = fig_design(cities, palette, fig_designation)
    updated = override_assignment(design, palette, 0, column="area",
                                  new_channel="alpha")
    before = design.to_dict()
    after = updated.to_dict()
    assert after["revision"] == before["revision"] + 1
    before["revision"] = after["revision"]
    for assign in before["marks"][0]["channels"]:
        if assign["column"] == "area":
            assign["channel"] = "alpha"
    assert before == after


def test_override_repeat_group_channel(fig_designation, cities, palette):
    design = fig_design(cities, palette, fig_designation)  # waves on amplitude
    updated = override_assignment(design, palette, 1, new_channel="length")
    assert {a.channel for a in updated.marks[1].channel_assignments} \
        == {"length"}
    colors = [a.color for a in updated.marks[1].channel_assignments]
    assert colors == [a.color for a in design.marks[1].channel_assignments]
    assert not check_design(updated, cities, palette)
