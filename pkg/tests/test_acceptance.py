"""Acceptance suite: one test per exit criterion, each printing a
PASS/FAIL line.  Tolerances are pinned here and nowhere else."""

import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from glyphgen import geometry
from glyphgen.data_core import (
    ColumnSet,
    ColumnSetDesignation,
    color_budget,
    parse_table,
    validate_designation,
)
from glyphgen.errors import GlyphgenError
from glyphgen.palettes import GravityLevel, default_palettes
from glyphgen.renderer import legend, render_small_multiples
from glyphgen.sampler import (
    ChannelAssignment,
    GlyphDesign,
    MarkAssignment,
    Seed,
    sample_design,
)
from glyphgen.scales import resolve
from glyphgen.session import (
    append_designs,
    cull_design,
    init_session,
    move_glyph,
    override_design,
    page,
    replay,
    resize_glyph,
    select,
    set_mode,
)

import oracles
from conftest import CITIES_CSV

PALETTE = default_palettes()
CITIES = parse_table(CITIES_CSV, "city")
FIG_DESIGNATION = ColumnSetDesignation([
    ColumnSet(["region", "area", "population"], "conjunction"),
    ColumnSet(["bike score", "transit score", "walk score"], "repeat"),
])


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


# ----------------------------------------------------------------------
# 1. Sampling-constraint suite
# ----------------------------------------------------------------------

def check_constraint_families(design: GlyphDesign, table) -> list[str]:
    """The five families the criterion names, checked independently."""
    problems = []
    # (1) shape uniqueness per design (a repeat group is one use)
    shapes = [m.shape for m in design.marks]
    if len(set(shapes)) != len(shapes):
        problems.append("shape reuse")
    for mark in design.marks:
        shape_class = PALETTE.shape(mark.shape).shape_class
        channels = [a.channel for a in mark.channel_assignments]
        if mark.repeat:
            # (3) repeat marks share one shape+channel pair
            if len(set(channels)) != 1:
                problems.append("repeat channel not shared")
        else:
            # (2) conjunction channel injectivity
            if len(set(channels)) != len(channels):
                problems.append("conjunction channel reuse")
        for assign in mark.channel_assignments:
            spec = PALETTE.channel(assign.channel)
            # (5) wave/polygon channel compatibility
            if not spec.applies_to_class(shape_class):
                problems.append("incompatible channel")
            kind = table.column(assign.column).kind
            if not mark.repeat and kind == "categorical" \
                    and spec.value_kind != "categorical":
                problems.append("categorical column off the color channel")
    # (4) repeat/categorical color injectivity
    used: list[int] = []
    for mark in design.marks:
        for assign in mark.channel_assignments:
            if mark.repeat:
                used.append(assign.color)
            elif assign.color is not None:
                count = len(table.column(assign.column).categories())
                used.extend(range(assign.color, assign.color + count))
    if None in used or len(set(used)) != len(used):
        problems.append("color indices collide")
    return problems


def random_designation(rng: random.Random) -> ColumnSetDesignation:
    """A structurally valid random designation over the fixture columns."""
    quant = ["area", "population", "bike score", "transit score", "walk score"]
    rng.shuffle(quant)
    sets: list[ColumnSet] = []
    style = rng.randrange(4)
    if style == 0:
        sets.append(ColumnSet(["region"], "single"))
        sets += [ColumnSet([c], "single") for c in quant[:rng.randint(1, 4)]]
    elif style == 1:
        sets.append(ColumnSet(["region", quant[0], quant[1]], "conjunction"))
        sets.append(ColumnSet(quant[2:4], "repeat"))
    elif style == 2:
        sets.append(ColumnSet(quant[:3], "repeat"))
        sets.append(ColumnSet([quant[3], quant[4]], "conjunction"))
        sets.append(ColumnSet(["region"], "single"))
    else:
        sets.append(ColumnSet([quant[0], quant[1]], "repeat"))
        sets.append(ColumnSet([quant[2], quant[3]], "repeat"))
    d = ColumnSetDesignation(sets)
    assert validate_designation(d, CITIES, PALETTE) == []
    return d


def test_sampling_constraint_suite():
    with criterion("sampling-constraint suite (>=10k seeds, <30s)"):
        start = time.perf_counter()
        seen = {"scaffolds": set(), "gravities": set(), "shapes": set(),
                "channels": set()}
        for seed in range(10_000):
            design = sample_design(FIG_DESIGNATION, CITIES, PALETTE,
                                   Seed(seed))
            problems = check_constraint_families(design, CITIES)
            assert not problems, (seed, problems)
            seen["scaffolds"].add(design.scaffold)
            seen["gravities"].add(design.gravity)
            for mark in design.marks:
                seen["shapes"].add(mark.shape)
                for a in mark.channel_assignments:
                    seen["channels"].add(a.channel)
        rng = random.Random(2024)
        for _ in range(5):
            d = random_designation(rng)
            for seed in range(2_000):
                design = sample_design(d, CITIES, PALETTE, Seed(seed))
                problems = check_constraint_families(design, CITIES)
                assert not problems, (d.to_dict(), seed, problems)
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"suite took {elapsed:.1f}s"
        # coverage: the sampler reaches the whole palette
        assert seen["scaffolds"] == {s.id for s in PALETTE.scaffolds}
        assert seen["gravities"] == {g.id for g in PALETTE.gravities}
        assert seen["shapes"] == {s.id for s in PALETTE.mark_shapes}
        assert seen["channels"] == {c.id for c in PALETTE.channels}


# ----------------------------------------------------------------------
# 2. Determinism
# ----------------------------------------------------------------------

def test_determinism(tmp_path):
    with criterion("determinism (generate seed 42; 3-run byte stability)"):
        (tmp_path / "cities.csv").write_text(CITIES_CSV)
        (tmp_path / "sets.json").write_text(json.dumps(
            {"key": "city", "sets": FIG_DESIGNATION.to_dict()["sets"]}))
        trees = []
        for name in ("a", "b"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "glyphgen", "generate",
                 "--data", str(tmp_path / "cities.csv"),
                 "--key", "city", "--sets", str(tmp_path / "sets.json"),
                 "--seed", "42", "--count", "5", "--out", str(out),
                 "--rows", "Tokyo,Paris"],
                capture_output=True, text=True,
                env=dict(os.environ, PYTHONHASHSEED="random"))
            assert proc.returncode == 0, proc.stderr
            trees.append({str(p.relative_to(out)): p.read_bytes()
                          for p in sorted(out.rglob("*")) if p.is_file()})
        assert trees[0] == trees[1]

        runs = {sample_design(FIG_DESIGNATION, CITIES, PALETTE,
                              Seed(4242)).to_json() for _ in range(3)}
        assert len(runs) == 1


# ----------------------------------------------------------------------
# 3. Geometry oracles
# ----------------------------------------------------------------------

def test_geometry_oracles():
    with criterion("geometry oracles (anchors, gravity, spiral quadrature)"):
        no_pull = GravityLevel("weak", 0.0)
        for spec in PALETTE.scaffolds:
            path = geometry.scaffold_path(spec)
            for n in range(1, 13):
                layout = geometry.anchor_points(path, n, no_pull, (0.0, 0.0))
                ratio = oracles.anchor_gap_ratio(path.points, path.closed,
                                                 layout.points)
                assert abs(ratio - 1.0) <= 1e-6, (spec.id, n, ratio)

        pulls = [g.pull for g in PALETTE.gravities]
        assert pulls == sorted(pulls)
        for spec in PALETTE.scaffolds:
            path = geometry.scaffold_path(spec)
            raw = geometry.anchor_points(path, 7, no_pull, (0.0, 0.0)).points
            staged = [geometry.anchor_points(path, 7, g, (0.0, 0.0)).points
                      for g in PALETTE.gravities]
            for a in range(7):
                if np.linalg.norm(raw[a]) < 1e-12:
                    continue
                dists = [float(np.linalg.norm(pts[a]))
                         for pts in [raw] + staged]
                assert all(x > y for x, y in zip(dists, dists[1:])), spec.id

        spiral = geometry.scaffold_path(PALETTE.scaffold("spiral"))
        theta_max = 2 * np.pi * geometry.SPIRAL_TURNS
        k = (geometry.UNIT_RADIUS - geometry.SPIRAL_INNER_RADIUS) / theta_max
        expected = oracles.spiral_arc_length_quadrature(
            geometry.SPIRAL_INNER_RADIUS, k, theta_max)
        assert abs(spiral.arc_length - expected) < 1e-4


# ----------------------------------------------------------------------
# 4. Figure-structure reproduction (explicit construction)
# ----------------------------------------------------------------------

def build_design_a() -> GlyphDesign:
    marks = [
        MarkAssignment(0, "drop", [
            ChannelAssignment("region", "mark-color", 0),
            ChannelAssignment("area", "size"),
            ChannelAssignment("population", "rotation"),
        ], repeat=False),
        MarkAssignment(1, "wave", [
            ChannelAssignment("bike score", "amplitude", 4),
            ChannelAssignment("transit score", "amplitude", 5),
            ChannelAssignment("walk score", "amplitude", 6),
        ], repeat=True),
    ]
    return GlyphDesign("design-A", FIG_DESIGNATION, marks,
                       scaffold="spiral", gravity="weak", seed=Seed(0))


def build_design_b() -> GlyphDesign:
    marks = [
        MarkAssignment(0, "hexagon", [
            ChannelAssignment("region", "mark-color", 0),
            ChannelAssignment("area", "rotation"),
            ChannelAssignment("population", "alpha"),
        ], repeat=False),
        MarkAssignment(1, "star", [
            ChannelAssignment("bike score", "rotation", 4),
            ChannelAssignment("transit score", "rotation", 5),
            ChannelAssignment("walk score", "rotation", 6),
        ], repeat=True),
    ]
    return GlyphDesign("design-B", FIG_DESIGNATION, marks,
                       scaffold="triangle", gravity="medium", seed=Seed(0))


def test_figure_reproduction():
    with criterion("figure-structure reproduction (designs A and B)"):
        from glyphgen.sampler import check_design

        a, b = build_design_a(), build_design_b()
        assert not check_design(a, CITIES, PALETTE)
        assert not check_design(b, CITIES, PALETTE)

        # channel bindings assert exactly
        assert [(x.column, x.channel) for x in a.marks[0].channel_assignments] \
            == [("region", "mark-color"), ("area", "size"),
                ("population", "rotation")]
        assert {x.channel for x in a.marks[1].channel_assignments} \
            == {"amplitude"}
        assert (a.scaffold, a.gravity) == ("spiral", "weak")
        assert [(x.column, x.channel) for x in b.marks[0].channel_assignments] \
            == [("region", "mark-color"), ("area", "rotation"),
                ("population", "alpha")]
        assert {x.channel for x in b.marks[1].channel_assignments} \
            == {"rotation"}
        assert (b.scaffold, b.gravity) == ("triangle", "medium")

        # element structure per glyph and per sheet
        import xml.etree.ElementTree as ET

        for design, polygon_shape in ((a, "drop"), (b, "hexagon")):
            rg = resolve(design, 0, CITIES, PALETTE, 140)
            assert [m.shape for m in rg.marks] \
                == [polygon_shape] + [design.marks[1].shape] * 3
            sheet = render_small_multiples(design, CITIES, PALETTE)
            root = ET.fromstring(sheet)
            cells = [el for el in root.iter()
                     if "cell" in el.get("class", "").split()]
            assert len(cells) == 12
            for cell in cells:
                paths = [el for el in cell.iter()
                         if "mark" in el.get("class", "").split()]
                pips = [el for el in cell.iter()
                        if "pip" in el.get("class", "").split()]
                assert len(paths) == 4 and len(pips) == 4
                waves = [el for el in paths
                         if "mark-wave" in el.get("class", "").split()]
                assert len(waves) == (3 if design is a else 0)

        # legend entries assert exactly (Mexico City row)
        rg = resolve(a, 0, CITIES, PALETTE, 140)
        model = legend(rg).to_dict()
        assert model["entries"] == [
            {"shape": "drop",
             "columns": ["region", "area", "population"],
             "channels": ["mark-color", "size", "rotation"],
             "values": ["North America", "1485", "8918"],
             "color": PALETTE.colors[0]},
            {"shape": "wave", "columns": ["bike score"],
             "channels": ["amplitude"], "values": ["45"],
             "color": PALETTE.colors[4]},
            {"shape": "wave", "columns": ["transit score"],
             "channels": ["amplitude"], "values": ["68"],
             "color": PALETTE.colors[5]},
            {"shape": "wave", "columns": ["walk score"],
             "channels": ["amplitude"], "values": ["72"],
             "color": PALETTE.colors[6]},
        ]

        # amplitude ordering mirrors the scores on every row
        for row in range(CITIES.row_count):
            rg = resolve(a, row, CITIES, PALETTE, 140)
            amplitudes = [m.wave_params["amplitude"] for m in rg.marks[1:]]
            scores = [CITIES.column(c).values[row]
                      for c in ("bike score", "transit score", "walk score")]
            assert np.argsort(amplitudes).tolist() \
                == np.argsort(scores).tolist()


# ----------------------------------------------------------------------
# 5. Color budget boundary
# ----------------------------------------------------------------------

def budget_table(categories: int):
    rows = [f"r{i},c{i % categories},{i},{i * 2},{i * 3}"
            for i in range(max(categories, 12))]
    return parse_table("id,label,x,y,z\n" + "\n".join(rows) + "\n", "id")


def test_color_budget_boundary():
    with criterion("color budget boundary (required vs available)"):
        d = ColumnSetDesignation([
            ColumnSet(["label"], "single"),
            ColumnSet(["x", "y", "z"], "repeat"),
        ])
        # seven categories + three repeat columns = exactly ten colors
        at_limit = budget_table(7)
        budget = color_budget(d, at_limit, PALETTE)
        assert (budget.required, budget.available) == (10, 10) and budget.ok
        assert validate_designation(d, at_limit, PALETTE) == []
        sample_design(d, at_limit, PALETTE, Seed(1))

        # one extra category pushes required to available + 1
        over = budget_table(8)
        budget = color_budget(d, over, PALETTE)
        assert (budget.required, budget.available) == (11, 10)
        assert not budget.ok
        codes = [v.code for v in validate_designation(d, over, PALETTE)]
        assert "color-budget" in codes
        with pytest.raises(GlyphgenError):
            sample_design(d, over, PALETTE, Seed(1))

        # removing one category flips it back to accepted
        back = budget_table(7)
        assert validate_designation(d, back, PALETTE) == []


# ----------------------------------------------------------------------
# 6. Session replay fuzz
# ----------------------------------------------------------------------

FUZZ_CSV = "k,a,b,c\nr0,1,10,x\nr1,2,20,y\nr2,3,30,x\n"
FUZZ_TABLE = parse_table(FUZZ_CSV, "k")
FUZZ_DESIGNATION = ColumnSetDesignation([
    ColumnSet(["a"], "single"),
    ColumnSet(["b"], "single"),
])


def run_random_session(seed: int, steps: int):
    rng = random.Random(seed)
    s = init_session(FUZZ_TABLE, FUZZ_DESIGNATION, PALETTE, Seed(seed))
    for _ in range(steps):
        op = rng.choice(("append", "cull", "select", "toggle", "page",
                         "move", "resize", "override"))
        try:
            if op == "append":
                append_designs(s, rng.randint(1, 2))
            elif op == "cull" and s.designs:
                cull_design(s, rng.choice(s.design_ids()))
            elif op == "select" and s.designs:
                select(s, rng.choice(s.design_ids()),
                       rng.choice(s.table.row_keys))
            elif op == "toggle":
                set_mode(s, rng.choice(("small_multiples",
                                        "small_permutables")))
            elif op == "page":
                page(s, rng.randint(-3, 3))
            elif op == "move":
                move_glyph(s, rng.choice(s.table.row_keys + s.design_ids()),
                           (rng.uniform(0, 400), rng.uniform(0, 400)))
            elif op == "resize":
                resize_glyph(s, rng.choice(s.table.row_keys),
                             rng.choice((-4.0, 25.0, 300.0)))
            elif op == "override" and s.designs:
                override_design(
                    s, rng.choice(s.design_ids()), rng.randrange(3),
                    new_shape=rng.choice(
                        [m.id for m in PALETTE.mark_shapes]))
        except GlyphgenError:
            continue  # legitimately rejected; session must stay intact
    return s


def test_session_replay_fuzz():
    with criterion("session replay (10k random sequences, byte-exact)"):
        for seed in range(10_000):
            # invariants are asserted inside every session operation
            s = run_random_session(seed, steps=5)
            assert replay(s.log).to_json() == s.to_json(), seed


# ----------------------------------------------------------------------
# 7. Scale correctness
# ----------------------------------------------------------------------

def one_column_design(channel: str, shape: str) -> GlyphDesign:
    designation = ColumnSetDesignation([ColumnSet(["v"], "single")])
    marks = [MarkAssignment(0, shape,
                            [ChannelAssignment("v", channel)], repeat=False)]
    return GlyphDesign(f"probe-{channel}", designation, marks,
                       scaffold="circle", gravity="weak", seed=Seed(0))


CHANNEL_PROBES = [("alpha", "square"), ("size", "square"),
                  ("rotation", "square"), ("frequency", "wave"),
                  ("amplitude", "wave"), ("length", "wave")]


def resolved_channel_value(mark, channel: str) -> float:
    if channel in ("frequency", "amplitude", "length"):
        return mark.wave_params[channel]
    return getattr(mark, channel)


def test_scale_correctness():
    with criterion("scale correctness (endpoints 1e-9, monotone pairs)"):
        rng = random.Random(99)
        for channel, shape in CHANNEL_PROBES:
            hi = PALETTE.channel(channel).output_range[1]
            design = one_column_design(channel, shape)
            for _ in range(40):
                values = [rng.uniform(-1000, 1000) for _ in range(6)]
                rows = "\n".join(f"r{i},{v!r}" for i, v in enumerate(values))
                table = parse_table("k,v\n" + rows + "\n", "k")
                top = values.index(max(values))
                rg = resolve(design, top, table, PALETTE, 100)
                got = resolved_channel_value(rg.marks[0], channel)
                assert abs(got - hi) < 1e-9, (channel, got, hi)

        checked = 0
        while checked < 1_000:
            channel, shape = CHANNEL_PROBES[checked % len(CHANNEL_PROBES)]
            design = one_column_design(channel, shape)
            x1, x2 = rng.uniform(-100, 100), rng.uniform(-100, 100)
            if x1 == x2:
                continue
            table = parse_table(f"k,v\nr0,{x1!r}\nr1,{x2!r}\n", "k")
            v0 = resolved_channel_value(
                resolve(design, 0, table, PALETTE, 90).marks[0], channel)
            v1 = resolved_channel_value(
                resolve(design, 1, table, PALETTE, 90).marks[0], channel)
            assert (v0 < v1) == (x1 < x2), (channel, x1, x2, v0, v1)
            checked += 1
