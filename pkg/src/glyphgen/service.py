"""HTTP/JSON API over curation sessions.

All state lives server-side; clients mutate sessions through these
endpoints and re-fetch state.  Mutations on one session are serialized
by a per-session lock; reads and rendering are lock-free since the core
computation is pure over immutable inputs.

Errors are JSON ``{"code", "message"}`` with appropriate HTTP statuses.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path as FsPath

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import session as sess
from .data_core import ColumnSetDesignation, parse_table, validate_designation
from .errors import GlyphgenError
from .palettes import default_palettes, load_palette
from .sampler import Seed


class CreateSessionBody(BaseModel):
    csv: str
    key: str
    sets: list[dict]
    palette: dict | None = None
    seed: int = 0


class ValidateBody(BaseModel):
    csv: str
    key: str
    sets: list[dict]
    palette: dict | None = None


class AppendBody(BaseModel):
    n: int = 1


class ModeBody(BaseModel):
    mode: str


class PageBody(BaseModel):
    delta: int


class SelectBody(BaseModel):
    design_id: str
    row_key: str


class MoveBody(BaseModel):
    x: float
    y: float


class ResizeBody(BaseModel):
    size: float


class OverrideBody(BaseModel):
    set_index: int
    new_shape: str | None = None
    column: str | None = None
    new_channel: str | None = None


def _build_inputs(csv: str, key: str, sets: list[dict], palette: dict | None):
    table = parse_table(csv, key)
    designation = ColumnSetDesignation.from_dict({"sets": sets})
    config = (load_palette(json.dumps(palette)) if palette is not None
              else default_palettes())
    return table, designation, config


def create_app(store_dir: str | None = None,
               ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="glyphgen", version="0.1.0")
    store = sess.SessionStore(store_dir)
    app.state.store = store

    @app.exception_handler(GlyphgenError)
    async def _glyph_error(request: Request, exc: GlyphgenError):
        return JSONResponse(status_code=exc.http_status,
                            content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"code": "invalid-request",
                                     "message": str(exc)})

    def mutate(session_id: str, fn):
        found = store.get(session_id)
        with store.lock(session_id):
            fn(found)
            store.persist(found)
        return found.public_state()

    @app.post("/validate")
    def validate(body: ValidateBody):
        table, designation, config = _build_inputs(
            body.csv, body.key, body.sets, body.palette)
        violations = validate_designation(designation, table, config)
        return {"ok": not violations,
                "violations": [v.to_dict() for v in violations],
                "columns": [{"name": c.name, "kind": c.kind}
                            for c in table.columns],
                "row_keys": list(table.row_keys)}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        table, designation, config = _build_inputs(
            body.csv, body.key, body.sets, body.palette)
        session_id = uuid.uuid4().hex[:12]
        created = sess.init_session(table, designation, config,
                                    Seed(body.seed), session_id=session_id)
        store.add(created)
        return {"session_id": session_id, "state": created.public_state()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return store.get(session_id).public_state()

    @app.post("/sessions/{session_id}/designs:append")
    def append(session_id: str, body: AppendBody):
        return mutate(session_id, lambda s: sess.append_designs(s, body.n))

    @app.delete("/sessions/{session_id}/designs/{design_id}")
    def cull(session_id: str, design_id: str):
        return mutate(session_id, lambda s: sess.cull_design(s, design_id))

    @app.post("/sessions/{session_id}/mode")
    def set_mode(session_id: str, body: ModeBody):
        return mutate(session_id, lambda s: sess.set_mode(s, body.mode))

    @app.post("/sessions/{session_id}/page")
    def turn_page(session_id: str, body: PageBody):
        return mutate(session_id, lambda s: sess.page(s, body.delta))

    @app.post("/sessions/{session_id}/select")
    def select(session_id: str, body: SelectBody):
        return mutate(session_id,
                      lambda s: sess.select(s, body.design_id, body.row_key))

    @app.post("/sessions/{session_id}/glyphs/{glyph_key}/move")
    def move(session_id: str, glyph_key: str, body: MoveBody):
        return mutate(session_id,
                      lambda s: sess.move_glyph(s, glyph_key, (body.x, body.y)))

    @app.post("/sessions/{session_id}/glyphs/{glyph_key}/resize")
    def resize(session_id: str, glyph_key: str, body: ResizeBody):
        return mutate(session_id,
                      lambda s: sess.resize_glyph(s, glyph_key, body.size))

    @app.post("/sessions/{session_id}/designs/{design_id}/override")
    def override(session_id: str, design_id: str, body: OverrideBody):
        return mutate(session_id, lambda s: sess.override_design(
            s, design_id, body.set_index, new_shape=body.new_shape,
            column=body.column, new_channel=body.new_channel))

    @app.get("/sessions/{session_id}/sheet.svg")
    def sheet(session_id: str, cell_size: float = sess.DEFAULT_CELL_SIZE,
              overrides: bool = True):
        svg = sess.sheet_svg(store.get(session_id), cell_size,
                             apply_overrides=overrides)
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/sessions/{session_id}/legend")
    def legend(session_id: str, design_id: str, row_key: str):
        model = sess.legend_model(store.get(session_id), design_id, row_key)
        return model.to_dict()

    @app.get("/sessions/{session_id}/export.zip")
    def export(session_id: str):
        payload = sess.export_zip(store.get(session_id))
        return Response(content=payload, media_type="application/zip")

    if ui_dir and FsPath(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
