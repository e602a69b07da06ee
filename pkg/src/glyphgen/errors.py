"""Exception hierarchy shared by every glyphgen module.

Each error carries a stable ``code`` string (kebab-case) so the HTTP
service can serialize failures as ``{"code": ..., "message": ...}``
without mapping tables scattered around the codebase.
"""

from __future__ import annotations


class GlyphgenError(Exception):
    """Base class; ``code`` is the wire-format identifier."""

    code = "error"
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)


# ---- table ingestion ----

class MissingKeyColumn(GlyphgenError):
    code = "missing-key-column"


class RaggedRow(GlyphgenError):
    code = "ragged-row"

    def __init__(self, row_index: int):
        self.row_index = row_index
        super().__init__(f"row {row_index} has a different cell count than the header")


class EmptyTable(GlyphgenError):
    code = "empty-table"


class SchemaError(GlyphgenError):
    code = "schema-error"

    def __init__(self, path: str, message: str = ""):
        self.path = path
        super().__init__(message or f"invalid value at {path}")


# ---- palettes ----

class DegeneratePath(GlyphgenError):
    code = "degenerate-path"

    def __init__(self, shape_id: str, message: str = ""):
        self.shape_id = shape_id
        super().__init__(message or f"shape {shape_id!r} has a degenerate path")


class DuplicateId(GlyphgenError):
    code = "duplicate-id"

    def __init__(self, dup_id: str):
        self.dup_id = dup_id
        super().__init__(f"duplicate id {dup_id!r}")


# ---- sampling ----

class UnsatisfiableConjunction(GlyphgenError):
    code = "unsatisfiable-conjunction"


class PaletteExhausted(GlyphgenError):
    code = "palette-exhausted"


class ShapeAlreadyUsed(GlyphgenError):
    code = "shape-already-used"


class IncompatibleChannel(GlyphgenError):
    code = "incompatible-channel"


class UnknownTarget(GlyphgenError):
    code = "unknown-target"
    http_status = 404


# ---- scales / resolution ----

class ColorBudgetExceeded(GlyphgenError):
    code = "color-budget-exceeded"


class MissingValue(GlyphgenError):
    code = "missing-value"

    def __init__(self, row_index: int, column: str):
        self.row_index = row_index
        self.column = column
        super().__init__(f"row {row_index} has no usable value in column {column!r}")


# ---- geometry ----

class WaveShapePassedToPolygonOp(GlyphgenError):
    code = "wave-shape-in-polygon-op"


# ---- rendering / session ----

class RowOutOfRange(GlyphgenError):
    code = "row-out-of-range"
    http_status = 404


class UnknownDesign(GlyphgenError):
    code = "unknown-design"
    http_status = 404


class UnknownRow(GlyphgenError):
    code = "unknown-row"
    http_status = 404


class NothingSelected(GlyphgenError):
    code = "nothing-selected"


class NonPositiveSize(GlyphgenError):
    code = "non-positive-size"
