import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glyphgen.data_core import parse_table
from glyphgen.errors import MissingValue, RowOutOfRange
from glyphgen.sampler import Seed, sample_design
from glyphgen.scales import (
    assign_colors,
    column_domain,
    quant_scale,
    resolve,
)

from conftest import SEED_DESIGN_A, SEED_DESIGN_B, singleton_designation


# ---- quant_scale ----

def test_midpoint_example():
    assert quant_scale((0, 100), (0, 300), 50) == 150


def test_degenerate_domain_maps_to_range_midpoint():
    for x in (-10, 7, 99):
        assert quant_scale((7, 7), (0.25, 1.0), x) == pytest.approx(0.625)


def test_clamp_above_domain():
    # analytic oracle: t = 1.2 -> clamped to hi
    assert quant_scale((0, 100), (0.25, 1.0), 120) == 1.0
    assert quant_scale((0, 100), (0.25, 1.0), -5) == 0.25


def test_domain_extremes_hit_endpoints_exactly():
    assert quant_scale((0.0, 100.0), (0.05, 0.22), 100.0) == 0.22
    assert quant_scale((0.0, 100.0), (0.05, 0.22), 0.0) == 0.05


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_scale_stays_in_range(a, b, x):
    lo, hi = sorted((a, b))
    if lo == hi:
        hi = lo + 1.0
    v = quant_scale((min(a, b), max(a, b)), (lo, hi), x)
    assert lo <= v <= hi


# ---- assign_colors ----

def test_fig_color_assignment(fig_designation, cities, palette):
    mapping = assign_colors(fig_designation, cities, palette)
    assert len(mapping) == 7
    regions = ["North America", "South America", "Europe", "Asia"]
    for i, region in enumerate(regions):
        assert mapping[("category", "region", region)] == palette.colors[i]
    # repeat members take the 5th-7th colors: purple, brown, pink
    assert mapping[("repeat", "bike score")] == palette.colors[4] == "#b07aa1"
    assert mapping[("repeat", "transit score")] == palette.colors[5] == "#9c755f"
    assert mapping[("repeat", "walk score")] == palette.colors[6] == "#ff9da7"


def test_no_categorical_content_empty_map(cities, palette):
    mapping = assign_colors(singleton_designation("area"), cities, palette)
    assert mapping == {}


def test_shuffled_rows_change_order_but_stay_injective(cities_csv, palette,
                                                       fig_designation):
    lines = cities_csv.strip().splitlines()
    rng = random.Random(4)
    body = lines[1:]
    rng.shuffle(body)
    shuffled = parse_table("\n".join([lines[0]] + body) + "\n", "city")
    mapping = assign_colors(fig_designation, shuffled, palette)
    values = list(mapping.values())
    assert len(set(values)) == len(values) == 7


# ---- resolve ----

def design_a(fig_designation, cities, palette):
    return sample_design(fig_designation, cities, palette, Seed(SEED_DESIGN_A))


def design_b(fig_designation, cities, palette):
    return sample_design(fig_designation, cities, palette, Seed(SEED_DESIGN_B))


def test_mark_count_and_order_match_designation(fig_designation, cities,
                                                palette):
    rg = resolve(design_a(fig_designation, cities, palette), 0, cities,
                 palette, 140)
    assert [m.shape for m in rg.marks] == ["drop", "wave", "wave", "wave"]
    assert rg.row_key == "Mexico City"
    assert rg.size == 140


def test_wave_amplitudes_order_like_scores(fig_designation, cities, palette):
    design = design_a(fig_designation, cities, palette)
    for row in range(cities.row_count):
        rg = resolve(design, row, cities, palette, 140)
        amplitudes = [m.wave_params["amplitude"] for m in rg.marks[1:]]
        scores = [cities.column(c).values[row]
                  for c in ("bike score", "transit score", "walk score")]
        assert np.argsort(amplitudes).tolist() == np.argsort(scores).tolist()


def test_max_population_row_reaches_alpha_top(fig_designation, cities, palette):
    design = design_b(fig_designation, cities, palette)
    values = cities.column("population").values
    row = values.index(max(values))  # argmax oracle
    rg = resolve(design, row, cities, palette, 140)
    alpha_range = palette.channel("alpha").output_range
    assert rg.marks[0].alpha == pytest.approx(alpha_range[1], abs=1e-9)


def test_domain_max_hits_range_hi_within_tolerance(fig_designation, cities,
                                                   palette):
    design = design_a(fig_designation, cities, palette)  # area -> size
    values = cities.column("area").values
    row = values.index(max(values))
    rg = resolve(design, row, cities, palette, 140)
    size_range = palette.channel("size").output_range
    assert abs(rg.marks[0].size - size_range[1]) < 1e-9


def test_repeat_marks_share_everything_but_color_and_value(
        fig_designation, cities, palette):
    design = design_a(fig_designation, cities, palette)
    rg = resolve(design, 3, cities, palette, 140)
    waves = rg.marks[1:]
    assert len({m.fill_color for m in waves}) == 3
    for m in waves:
        assert m.shape == waves[0].shape
        assert m.alpha == waves[0].alpha
        assert m.rotation == waves[0].rotation
        assert m.size == waves[0].size
        assert m.wave_params["frequency"] == waves[0].wave_params["frequency"]
        assert m.wave_params["length"] == waves[0].wave_params["length"]
    amplitudes = [m.wave_params["amplitude"] for m in waves]
    assert len(set(amplitudes)) > 1  # the encoded channel actually varies


def test_repeat_marks_share_one_scale_over_union_domain(
        fig_designation, cities, palette):
    design = design_a(fig_designation, cities, palette)
    # the union-domain max across the three scores is walk score in Paris
    union_lo = min(column_domain(cities, c)[0]
                   for c in ("bike score", "transit score", "walk score"))
    union_hi = max(column_domain(cities, c)[1]
                   for c in ("bike score", "transit score", "walk score"))
    amp = palette.channel("amplitude").output_range
    row = cities.row_index_of_key("Tokyo")  # transit score 95 = union max
    rg = resolve(design, row, cities, palette, 140)
    transit_mark = rg.marks[2]
    expected = quant_scale((union_lo, union_hi), amp,
                           cities.column("transit score").values[row])
    assert transit_mark.wave_params["amplitude"] == pytest.approx(expected)
    assert transit_mark.wave_params["amplitude"] == pytest.approx(amp[1])


def test_unassigned_channels_take_defaults(cities, palette):
    d = singleton_designation("area")
    design = sample_design(d, cities, palette, Seed(17))
    # find a seed whose only channel is size, then alpha/rotation stay default
    for seed in range(500):
        design = sample_design(d, cities, palette, Seed(seed))
        if (palette.shape(design.marks[0].shape).shape_class == "polygon"
                and design.marks[0].channel_assignments[0].channel == "size"):
            break
    rg = resolve(design, 2, cities, palette, 100)
    mark = rg.marks[0]
    assert mark.alpha == 1.0
    assert mark.rotation == 0.0
    assert mark.fill_color == "#8c8c8c"  # neutral grey, no color channel


def test_monotonicity_between_row_pairs(cities, palette):
    d = singleton_designation("population")
    design = None
    for seed in range(200):
        candidate = sample_design(d, cities, palette, Seed(seed))
        if candidate.marks[0].channel_assignments[0].channel == "size":
            design = candidate
            break
    values = cities.column("population").values
    resolved = [resolve(design, r, cities, palette, 90).marks[0].size
                for r in range(cities.row_count)]
    for i in range(len(values)):
        for j in range(len(values)):
            if values[i] < values[j]:
                assert resolved[i] < resolved[j]


def test_missing_value_raises(palette):
    table = parse_table("k,x\na,1\nb,\nc,3\n", "k")
    d = singleton_designation("x")
    design = sample_design(d, table, palette, Seed(1))
    resolve(design, 0, table, palette, 80)
    with pytest.raises(MissingValue):
        resolve(design, 1, table, palette, 80)


def test_row_out_of_range(fig_designation, cities, palette):
    design = design_a(fig_designation, cities, palette)
    with pytest.raises(RowOutOfRange):
        resolve(design, 99, cities, palette, 80)


def test_all_geometry_inside_cell(fig_designation, cities, palette):
    for seed in (SEED_DESIGN_A, SEED_DESIGN_B, 5, 6, 7):
        design = sample_design(fig_designation, cities, palette, Seed(seed))
        for row in range(0, cities.row_count, 3):
            rg = resolve(design, row, cities, palette, 140)
            for mark in rg.marks:
                pts = mark.outline.points
                assert pts.min() >= -1e-9 and pts.max() <= 140 + 1e-9
                (px, py), r = mark.pip
                assert -1e-9 <= px <= 140 + 1e-9
                assert -1e-9 <= py <= 140 + 1e-9


def test_categorical_fill_is_stable_per_category(fig_designation, cities,
                                                 palette):
    design = design_a(fig_designation, cities, palette)
    mapping = assign_colors(fig_designation, cities, palette)
    for row in range(cities.row_count):
        rg = resolve(design, row, cities, palette, 120)
        region = cities.column("region").values[row]
        assert rg.marks[0].fill_color == mapping[("category", "region", region)]
