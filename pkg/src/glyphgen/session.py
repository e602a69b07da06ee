"""Curation sessions: the generate-review-cull loop and its replay log.

A session owns an immutable table/designation/palette triple plus the
mutable curation state: the design list, viewing mode, page index,
selection, and per-glyph position/size overrides.  Every mutation is
appended to an operation log; replaying the log against the init entry
reproduces the session byte-for-byte, which doubles as the persistence
and undo substrate.
"""

from __future__ import annotations

import json
import threading
import zipfile
from dataclasses import dataclass, field
from io import BytesIO
from pathlib import Path

from . import renderer
from .data_core import (
    ColumnSetDesignation,
    DataTable,
    parse_table,
    renderable_rows,
    serialize_table,
    validate_designation,
)
from .errors import (
    NonPositiveSize,
    NothingSelected,
    UnknownDesign,
    UnknownRow,
    UnknownTarget,
)
from .palettes import PaletteConfig, load_palette
from .renderer import SheetLayout, legend as build_legend
from .sampler import (
    GlyphDesign,
    Seed,
    extend_batch,
    override_assignment,
    raise_for_violations,
)
from .scales import resolve

INIT_DESIGN_COUNT = 5
SMALL_MULTIPLES = "small_multiples"
SMALL_PERMUTABLES = "small_permutables"
MODES = (SMALL_MULTIPLES, SMALL_PERMUTABLES)
DEFAULT_CELL_SIZE = 140.0


@dataclass
class Session:
    id: str
    table: DataTable
    designation: ColumnSetDesignation
    palette: PaletteConfig
    designs: list[GlyphDesign]
    mode: str = SMALL_MULTIPLES
    page_index: int = 0
    selection: tuple[str, str] | None = None     # (design_id, row_key)
    overrides: dict = field(default_factory=dict)
    base_seed: Seed = Seed(0)
    rng_cursor: int = 0
    log: list[dict] = field(default_factory=list)

    # ---- derived ----

    def design_ids(self) -> list[str]:
        return [d.id for d in self.designs]

    def design(self, design_id: str) -> GlyphDesign:
        for d in self.designs:
            if d.id == design_id:
                return d
        raise UnknownDesign(f"no design with id {design_id!r}")

    def renderable_row_indices(self) -> list[int]:
        return renderable_rows(self.table, self.designation)

    def page_count(self) -> int:
        if self.mode == SMALL_MULTIPLES:
            return len(self.designs)
        return len(self.renderable_row_indices())

    def to_dict(self) -> dict:
        """Snapshot with everything needed to restore the session."""
        return {
            "id": self.id,
            "csv": serialize_table(self.table),
            "key": self.table.key_column,
            "designation": self.designation.to_dict(),
            "palette": self.palette.to_dict(),
            "designs": [d.to_dict() for d in self.designs],
            "mode": self.mode,
            "page_index": self.page_index,
            "selection": list(self.selection) if self.selection else None,
            "overrides": self.overrides,
            "base_seed": self.base_seed.value,
            "rng_cursor": self.rng_cursor,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def public_state(self) -> dict:
        """State view for clients: snapshot plus table/paging metadata."""
        state = self.to_dict()
        renderable = self.renderable_row_indices()
        state.update({
            "columns": [{"name": c.name, "kind": c.kind}
                        for c in self.table.columns],
            "row_keys": list(self.table.row_keys),
            "renderable_row_keys": [self.table.row_keys[i] for i in renderable],
            "page_count": self.page_count(),
        })
        return state


def _check_invariants(s: Session):
    count = s.page_count()
    assert 0 <= s.page_index <= max(0, count - 1), "page index out of range"
    assert s.mode in MODES, "unknown mode"
    if s.selection is not None:
        design_id, row_key = s.selection
        assert design_id in s.design_ids(), "selection dangles on a design"
        assert row_key in s.table.row_keys, "selection dangles on a row"
    for key, ov in s.overrides.items():
        assert ov.get("size", 1) > 0, "override size must be positive"


# ----------------------------------------------------------------------
# Operations (each mutates, logs, and re-checks invariants)
# ----------------------------------------------------------------------

def init_session(table: DataTable, designation: ColumnSetDesignation,
                 palette: PaletteConfig, seed: Seed,
                 session_id: str = "session") -> Session:
    """Seed the curation loop with INIT_DESIGN_COUNT sampled designs."""
    raise_for_violations(validate_designation(designation, table, palette))
    designs, cursor = extend_batch(designation, table, palette, seed,
                                   INIT_DESIGN_COUNT)
    s = Session(
        id=session_id,
        table=table,
        designation=designation,
        palette=palette,
        designs=designs,
        base_seed=seed,
        rng_cursor=cursor,
    )
    s.log.append({
        "op": "init",
        "id": session_id,
        "csv": serialize_table(table),
        "key": table.key_column,
        "designation": designation.to_dict(),
        "palette": palette.to_dict(),
        "seed": seed.value,
    })
    _check_invariants(s)
    return s


def append_designs(s: Session, n: int) -> Session:
    """Sample n more designs from the session's seed lineage, leaving
    existing designs untouched."""
    existing = {d.signature() for d in s.designs}
    designs, cursor = extend_batch(s.designation, s.table, s.palette,
                                   s.base_seed, n, start_index=s.rng_cursor,
                                   existing_signatures=existing)
    s.designs.extend(designs)
    s.rng_cursor = cursor
    s.log.append({"op": "append", "n": n})
    _check_invariants(s)
    return s


def cull_design(s: Session, design_id: str) -> Session:
    design = s.design(design_id)
    index = s.designs.index(design)
    s.designs.pop(index)
    if s.selection is not None and s.selection[0] == design_id:
        s.selection = None
    s.page_index = min(s.page_index, max(0, s.page_count() - 1))
    s.log.append({"op": "cull", "design_id": design_id})
    _check_invariants(s)
    return s


def set_mode(s: Session, mode: str) -> Session:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    s.mode = mode
    s.page_index = _page_for_selection(s)
    s.log.append({"op": "set_mode", "mode": mode})
    _check_invariants(s)
    return s


def _page_for_selection(s: Session) -> int:
    """Page showing the selected design (multiples) or row (permutables);
    page 0 when nothing is selected or the target is not pageable."""
    count = s.page_count()
    if s.selection is None or count == 0:
        return min(s.page_index, max(0, count - 1))
    design_id, row_key = s.selection
    if s.mode == SMALL_MULTIPLES:
        ids = s.design_ids()
        return ids.index(design_id) if design_id in ids else 0
    renderable = [s.table.row_keys[i] for i in s.renderable_row_indices()]
    return renderable.index(row_key) if row_key in renderable else 0


def page(s: Session, delta: int) -> Session:
    count = s.page_count()
    s.page_index = min(max(s.page_index + delta, 0), max(0, count - 1))
    s.log.append({"op": "page", "delta": delta})
    _check_invariants(s)
    return s


def select(s: Session, design_id: str, row_key: str) -> Session:
    if design_id not in s.design_ids():
        raise UnknownDesign(f"no design with id {design_id!r}")
    if row_key not in s.table.row_keys:
        raise UnknownRow(f"no row with key {row_key!r}")
    s.selection = (design_id, row_key)
    s.log.append({"op": "select", "design_id": design_id, "row_key": row_key})
    _check_invariants(s)
    return s


def _known_glyph_key(s: Session, glyph_key) -> str:
    if not glyph_key or not isinstance(glyph_key, str):
        raise NothingSelected("no glyph key given")
    if glyph_key not in s.design_ids() and glyph_key not in s.table.row_keys:
        raise NothingSelected(f"no glyph keyed {glyph_key!r}")
    return glyph_key


def move_glyph(s: Session, glyph_key: str, position) -> Session:
    key = _known_glyph_key(s, glyph_key)
    x, y = float(position[0]), float(position[1])
    s.overrides.setdefault(key, {})["position"] = [x, y]
    s.log.append({"op": "move", "key": key, "position": [x, y]})
    _check_invariants(s)
    return s


def resize_glyph(s: Session, glyph_key: str, size: float) -> Session:
    key = _known_glyph_key(s, glyph_key)
    if size <= 0:
        raise NonPositiveSize(f"size must be positive, got {size}")
    s.overrides.setdefault(key, {})["size"] = float(size)
    s.log.append({"op": "resize", "key": key, "size": float(size)})
    _check_invariants(s)
    return s


def override_design(s: Session, design_id: str, set_index: int,
                    new_shape: str | None = None, column: str | None = None,
                    new_channel: str | None = None) -> Session:
    design = s.design(design_id)
    updated = override_assignment(design, s.palette, set_index,
                                  new_shape=new_shape, column=column,
                                  new_channel=new_channel)
    s.designs[s.designs.index(design)] = updated
    s.log.append({"op": "override", "design_id": design_id,
                  "set_index": set_index, "new_shape": new_shape,
                  "column": column, "new_channel": new_channel})
    _check_invariants(s)
    return s


# ----------------------------------------------------------------------
# Rendering views
# ----------------------------------------------------------------------

def sheet_svg(s: Session, cell_size: float = DEFAULT_CELL_SIZE,
              apply_overrides: bool = True) -> str:
    """Sheet for the current mode and page; recorded position/size
    overrides switch the layout to custom placement."""
    overrides = s.overrides if apply_overrides and s.overrides else {}
    if s.mode == SMALL_MULTIPLES:
        if not s.designs:
            return renderer.render_empty_sheet()
        design = s.designs[s.page_index]
        rows = s.renderable_row_indices()
        layout = SheetLayout.auto(
            len(rows), cell_size,
            mode=renderer.CUSTOM if overrides else renderer.SMALL_MULTIPLES,
            overrides=overrides)
        return renderer.render_small_multiples(design, s.table, s.palette,
                                               layout)
    rows = s.renderable_row_indices()
    if not rows or not s.designs:
        return renderer.render_empty_sheet()
    layout = SheetLayout.auto(
        len(s.designs), cell_size,
        mode=renderer.CUSTOM if overrides else renderer.SMALL_PERMUTABLES,
        overrides=overrides)
    return renderer.render_small_permutables(s.designs, s.table, s.palette,
                                             rows[s.page_index], layout)


def legend_model(s: Session, design_id: str, row_key: str):
    design = s.design(design_id)
    row_index = s.table.row_index_of_key(row_key)
    rg = resolve(design, row_index, s.table, s.palette, DEFAULT_CELL_SIZE)
    return build_legend(rg)


def export_zip(s: Session) -> bytes:
    """Every sheet plus the design list, with fixed timestamps so equal
    sessions export byte-identical archives."""
    buf = BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        def add(name: str, text: str):
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, text)

        designs_doc = {
            "version": 1,
            "key": s.table.key_column,
            "designation": s.designation.to_dict(),
            "palette": s.palette.to_dict(),
            "designs": [d.to_dict() for d in s.designs],
        }
        add("designs.json", json.dumps(designs_doc, indent=2))
        for design in s.designs:
            sheet = renderer.render_small_multiples(design, s.table, s.palette)
            add(f"{design.id}.multiples.svg", sheet)
        if s.designs:
            for row_index in s.renderable_row_indices():
                sheet = renderer.render_small_permutables(
                    s.designs, s.table, s.palette, row_index)
                add(f"{s.table.row_keys[row_index]}.permutables.svg", sheet)
    return buf.getvalue()


# ----------------------------------------------------------------------
# Replay and persistence
# ----------------------------------------------------------------------

_OPS = {
    "append": lambda s, e: append_designs(s, e["n"]),
    "cull": lambda s, e: cull_design(s, e["design_id"]),
    "set_mode": lambda s, e: set_mode(s, e["mode"]),
    "page": lambda s, e: page(s, e["delta"]),
    "select": lambda s, e: select(s, e["design_id"], e["row_key"]),
    "move": lambda s, e: move_glyph(s, e["key"], e["position"]),
    "resize": lambda s, e: resize_glyph(s, e["key"], e["size"]),
    "override": lambda s, e: override_design(
        s, e["design_id"], e["set_index"], e.get("new_shape"),
        e.get("column"), e.get("new_channel")),
}


def replay(log: list[dict]) -> Session:
    """Rebuild a session by applying its operation log to a fresh init."""
    if not log or log[0].get("op") != "init":
        raise ValueError("log must start with an init entry")
    head = log[0]
    table = parse_table(head["csv"], head["key"])
    designation = ColumnSetDesignation.from_dict(head["designation"])
    palette = load_palette(json.dumps(head["palette"]))
    s = init_session(table, designation, palette, Seed(head["seed"]),
                     session_id=head["id"])
    for entry in log[1:]:
        op = _OPS.get(entry.get("op"))
        if op is None:
            raise ValueError(f"unknown op {entry.get('op')!r}")
        op(s, entry)
    return s


class SessionStore:
    """Session registry with per-session write locks and optional
    JSON-snapshot + op-log persistence on disk."""

    def __init__(self, directory: str | None = None):
        self._dir = Path(directory) if directory else None
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def add(self, session: Session):
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks.setdefault(session.id, threading.Lock())
        self.persist(session)

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            found = self._sessions.get(session_id)
        if found is not None:
            return found
        loaded = self._load(session_id)
        if loaded is None:
            raise UnknownTarget(f"no session with id {session_id!r}")
        with self._registry_lock:
            self._sessions.setdefault(session_id, loaded)
        return self._sessions[session_id]

    def ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._sessions)

    def persist(self, session: Session):
        if not self._dir:
            return
        root = self._dir / session.id
        root.mkdir(parents=True, exist_ok=True)
        (root / "snapshot.json").write_text(session.to_json())
        with (root / "log.jsonl").open("w") as fh:
            for entry in session.log:
                fh.write(json.dumps(entry) + "\n")

    def _load(self, session_id: str) -> Session | None:
        if not self._dir:
            return None
        log_path = self._dir / session_id / "log.jsonl"
        if not log_path.exists():
            return None
        log = [json.loads(line) for line in log_path.read_text().splitlines()]
        return replay(log)
