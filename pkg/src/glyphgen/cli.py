"""Batch entry point: generate galleries, validate inputs, serve the API.

Subcommands:
  generate   CSV + designation -> n designs -> sheets + designs.json
  validate   check a designation (and optional palette) against a table
  render     rebuild sheets from a designs.json produced by generate
  serve      start the HTTP service

Exit codes: 0 success, 1 validation failure, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data_core import load_designation, parse_table, validate_designation
from .errors import GlyphgenError
from .palettes import default_palettes, load_palette
from .renderer import render_small_multiples, render_small_permutables
from .sampler import GlyphDesign, Seed, sample_batch
from .service import create_app

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


def _fail(code: int, message: str) -> int:
    print(f"glyphgen: {message}", file=sys.stderr)
    return code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IOProblem(str(exc)) from exc


class _IOProblem(Exception):
    pass


def _load_inputs(args):
    csv_text = _read(args.data)
    file_key, designation = load_designation(_read(args.sets))
    key = args.key or file_key
    table = parse_table(csv_text, key)
    palette = (load_palette(_read(args.palette)) if args.palette
               else default_palettes())
    return table, designation, palette


def cmd_validate(args) -> int:
    try:
        table, designation, palette = _load_inputs(args)
    except _IOProblem as exc:
        return _fail(EXIT_IO, str(exc))
    except GlyphgenError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    violations = validate_designation(designation, table, palette)
    for v in violations:
        where = f" (set {v.set_index})" if v.set_index is not None else ""
        print(f"{v.code}{where}: {v.message}", file=sys.stderr)
    if violations:
        return EXIT_VALIDATION
    print("ok")
    return EXIT_OK


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _IOProblem(str(exc)) from exc


def _render_outputs(out: Path, designs, table, palette, row_keys) -> int:
    for design in designs:
        _write(out / f"{design.id}.multiples.svg",
               render_small_multiples(design, table, palette))
    for row_key in row_keys:
        row_index = table.row_index_of_key(row_key)
        _write(out / f"{row_key}.permutables.svg",
               render_small_permutables(designs, table, palette, row_index))
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.count < 1:
        return _fail(EXIT_VALIDATION, "--count must be at least 1")
    try:
        table, designation, palette = _load_inputs(args)
    except _IOProblem as exc:
        return _fail(EXIT_IO, str(exc))
    except GlyphgenError as exc:
        return _fail(EXIT_VALIDATION, str(exc))

    violations = validate_designation(designation, table, palette)
    if violations:
        for v in violations:
            print(f"{v.code}: {v.message}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        designs = sample_batch(designation, table, palette,
                               Seed(args.seed), args.count)
        out = Path(args.out)
        doc = {
            "version": 1,
            "key": table.key_column,
            "designation": designation.to_dict(),
            "palette": palette.to_dict(),
            "seed": args.seed,
            "designs": [d.to_dict() for d in designs],
        }
        _write(out / "designs.json", json.dumps(doc, indent=2) + "\n")
        row_keys = [k for k in (args.rows.split(",") if args.rows else []) if k]
        return _render_outputs(out, designs, table, palette, row_keys)
    except _IOProblem as exc:
        return _fail(EXIT_IO, str(exc))
    except GlyphgenError as exc:
        return _fail(EXIT_VALIDATION, str(exc))


def cmd_render(args) -> int:
    try:
        doc = json.loads(_read(args.designs))
        csv_text = _read(args.data)
    except _IOProblem as exc:
        return _fail(EXIT_IO, str(exc))
    except json.JSONDecodeError as exc:
        return _fail(EXIT_VALIDATION, f"designs file is not valid JSON: {exc}")
    try:
        table = parse_table(csv_text, doc["key"])
        palette = load_palette(json.dumps(doc["palette"]))
        designs = [GlyphDesign.from_dict(d) for d in doc["designs"]]
        row_keys = [k for k in (args.rows.split(",") if args.rows else []) if k]
        return _render_outputs(Path(args.out), designs, table, palette, row_keys)
    except _IOProblem as exc:
        return _fail(EXIT_IO, str(exc))
    except (GlyphgenError, KeyError) as exc:
        return _fail(EXIT_VALIDATION, str(exc))


def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(store_dir=args.store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glyphgen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("--data", required=True, help="CSV table path")
        p.add_argument("--key", help="row-identifier column "
                                     "(defaults to the designation file's key)")
        p.add_argument("--sets", required=True, help="designation JSON path")
        p.add_argument("--palette", help="palette JSON path (default palette "
                                         "when omitted)")

    gen = sub.add_parser("generate", help="sample designs and render sheets")
    add_inputs(gen)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=5)
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--rows", help="comma-separated row keys for "
                                    "permutables sheets")
    gen.set_defaults(fn=cmd_generate)

    val = sub.add_parser("validate", help="check designation and palette")
    add_inputs(val)
    val.set_defaults(fn=cmd_validate)

    ren = sub.add_parser("render", help="render sheets from designs.json")
    ren.add_argument("--designs", required=True)
    ren.add_argument("--data", required=True)
    ren.add_argument("--out", required=True)
    ren.add_argument("--rows")
    ren.set_defaults(fn=cmd_render)

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8008)
    srv.add_argument("--store", help="session persistence directory")
    srv.add_argument("--ui", help="static UI directory to mount at /ui")
    srv.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
