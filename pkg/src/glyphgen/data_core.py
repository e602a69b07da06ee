"""Tidy-table ingestion, column typing, and column-set designations.

A table is wide-format CSV with a header row and a mandatory key column
that identifies each row (and is never encodable).  Remaining columns
are typed categorical or quantitative by cell inspection.  A designation
groups columns into ordered sets, each marked single, conjunction, or
repeat; sets map one-to-one onto marks (repeat sets onto one mark per
member column) and set order fixes mark order on the scaffold.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .errors import (
    EmptyTable,
    MissingKeyColumn,
    RaggedRow,
    SchemaError,
    UnknownRow,
)

CATEGORICAL = "categorical"
QUANTITATIVE = "quantitative"

SINGLE = "single"
CONJUNCTION = "conjunction"
REPEAT = "repeat"
DESIGNATIONS = (SINGLE, CONJUNCTION, REPEAT)


@dataclass(eq=False)
class Column:
    name: str
    kind: str                      # categorical | quantitative
    values: list                   # parsed cells; None marks a missing cell
    raw: list[str]                 # original cell text, for exact round-trips

    def categories(self) -> list[str]:
        """Distinct non-missing values in first-appearance order."""
        seen: dict[str, None] = {}
        for v in self.values:
            if v is not None and v not in seen:
                seen[v] = None
        return list(seen)


@dataclass(eq=False)
class DataTable:
    key_column: str
    row_keys: list[str]
    columns: list[Column]          # every column except the key column
    row_count: int

    def column(self, name: str) -> Column:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(f"no column named {name!r}")

    def has_column(self, name: str) -> bool:
        return any(col.name == name for col in self.columns)

    def row_index_of_key(self, key: str) -> int:
        try:
            return self.row_keys.index(key)
        except ValueError:
            raise UnknownRow(f"no row with key {key!r}") from None


def infer_kind(cells: list[str]) -> str:
    """Quantitative iff every non-empty cell parses to a finite real;
    empty cells are ignored for typing (they read as missing)."""
    if not cells:
        raise ValueError("infer_kind needs at least one cell")
    for cell in cells:
        if cell.strip() == "":
            continue
        try:
            if not math.isfinite(float(cell)):
                return CATEGORICAL
        except ValueError:
            return CATEGORICAL
    return QUANTITATIVE


def parse_table(csv_text: str, key_column: str) -> DataTable:
    """Parse RFC-4180 CSV with a header row into a typed table."""
    reader = csv.reader(io.StringIO(csv_text))
    rows = list(reader)
    if not rows:
        raise EmptyTable("no header row")
    header = rows[0]
    if len(set(header)) != len(header):
        raise SchemaError("header", "duplicate column names")
    if key_column not in header:
        raise MissingKeyColumn(f"key column {key_column!r} not in header {header}")
    body = rows[1:]
    if not body:
        raise EmptyTable("table has a header but no rows")
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise RaggedRow(i)

    key_idx = header.index(key_column)
    row_keys = [row[key_idx] for row in body]
    if len(set(row_keys)) != len(row_keys):
        raise SchemaError("key", f"key column {key_column!r} has duplicate values")

    columns = []
    for j, name in enumerate(header):
        if j == key_idx:
            continue
        raw = [row[j] for row in body]
        kind = infer_kind(raw)
        if kind == QUANTITATIVE:
            values = [None if c.strip() == "" else float(c) for c in raw]
        else:
            values = [None if c.strip() == "" else c for c in raw]
        columns.append(Column(name, kind, values, raw))
    return DataTable(key_column, row_keys, columns, len(body))


def serialize_table(table: DataTable) -> str:
    """CSV text that reparses to a table with identical cell values."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([table.key_column] + [c.name for c in table.columns])
    for i in range(table.row_count):
        writer.writerow([table.row_keys[i]] + [c.raw[i] for c in table.columns])
    return out.getvalue()


# ----------------------------------------------------------------------
# Column-set designations
# ----------------------------------------------------------------------

@dataclass(eq=False)
class ColumnSet:
    columns: list[str]
    designation: str               # single | conjunction | repeat

    def __post_init__(self):
        if self.designation not in DESIGNATIONS:
            raise ValueError(f"unknown designation {self.designation!r}")
        if not self.columns:
            raise ValueError("a column set cannot be empty")
        if self.designation == SINGLE and len(self.columns) != 1:
            raise ValueError("single sets hold exactly one column")
        if self.designation != SINGLE and len(self.columns) < 2:
            raise ValueError(f"{self.designation} sets need at least two columns")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("a column set cannot repeat a column")


@dataclass(eq=False)
class ColumnSetDesignation:
    sets: list[ColumnSet]

    def __post_init__(self):
        seen: set[str] = set()
        for cs in self.sets:
            for name in cs.columns:
                if name in seen:
                    raise ValueError(f"column {name!r} appears in two sets")
                seen.add(name)

    def in_scope_columns(self) -> list[str]:
        return [name for cs in self.sets for name in cs.columns]

    def to_dict(self) -> dict:
        return {"sets": [{"columns": list(cs.columns), "designation": cs.designation}
                         for cs in self.sets]}

    @classmethod
    def from_dict(cls, d: dict) -> "ColumnSetDesignation":
        return cls([ColumnSet(list(s["columns"]), s["designation"])
                    for s in d["sets"]])


def load_designation(json_text: str) -> tuple[str, ColumnSetDesignation]:
    """Read a designation file: {"key": ..., "sets": [...]}."""
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"designation file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "designation file must be a JSON object")
    key = doc.get("key")
    if not isinstance(key, str) or not key:
        raise SchemaError("key", "'key' must name the row-identifier column")
    sets_doc = doc.get("sets")
    if not isinstance(sets_doc, list):
        raise SchemaError("sets", "'sets' must be a list")
    sets = []
    for i, entry in enumerate(sets_doc):
        where = f"sets[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(where, "expected an object")
        cols = entry.get("columns")
        if (not isinstance(cols, list) or not cols
                or not all(isinstance(c, str) for c in cols)):
            raise SchemaError(f"{where}.columns", "'columns' must be a list of names")
        desig = entry.get("designation")
        if desig not in DESIGNATIONS:
            raise SchemaError(f"{where}.designation",
                              f"'designation' must be one of {DESIGNATIONS}")
        try:
            sets.append(ColumnSet(list(cols), desig))
        except ValueError as exc:
            raise SchemaError(where, str(exc)) from exc
    try:
        return key, ColumnSetDesignation(sets)
    except ValueError as exc:
        raise SchemaError("sets", str(exc)) from exc


def serialize_designation(key: str, designation: ColumnSetDesignation) -> str:
    doc = {"key": key}
    doc.update(designation.to_dict())
    return json.dumps(doc, indent=2)


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------

@dataclass
class Violation:
    code: str
    message: str
    set_index: int | None = None

    def to_dict(self) -> dict:
        d = {"code": self.code, "message": self.message}
        if self.set_index is not None:
            d["set_index"] = self.set_index
        return d


@dataclass
class ColorBudget:
    required: int
    available: int
    ok: bool


def set_kind_counts(cs: ColumnSet, table: DataTable) -> tuple[int, int]:
    """(categorical, quantitative) column counts of a set."""
    n_cat = sum(1 for name in cs.columns
                if table.column(name).kind == CATEGORICAL)
    return n_cat, len(cs.columns) - n_cat


def class_can_host(palette, shape_class: str, cs: ColumnSet,
                   table: DataTable) -> bool:
    """Can a mark of this shape class encode the whole set?

    Repeat sets need one quantitative channel; conjunction/single sets
    need enough distinct channels of each value kind for an injective
    assignment within the mark.
    """
    if cs.designation == REPEAT:
        return len(palette.channels_for(shape_class, QUANTITATIVE)) >= 1
    n_cat, n_quant = set_kind_counts(cs, table)
    return (n_cat <= len(palette.channels_for(shape_class, CATEGORICAL))
            and n_quant <= len(palette.channels_for(shape_class, QUANTITATIVE)))


def hosting_classes(palette, cs: ColumnSet, table: DataTable) -> list[str]:
    return [sc for sc in palette.shape_classes()
            if class_can_host(palette, sc, cs, table)]


def color_budget(designation: ColumnSetDesignation, table: DataTable,
                 palette) -> ColorBudget:
    """Unique colors the designation needs: one per category of every
    in-scope categorical column plus one per repeat-set member column.

    Colors are only reachable through a categorical channel, so a
    palette without one has zero available colors.
    """
    required = 0
    for cs in designation.sets:
        if cs.designation == REPEAT:
            required += len(cs.columns)
            continue
        for name in cs.columns:
            col = table.column(name)
            if col.kind == CATEGORICAL:
                required += len(col.categories())
    has_categorical_channel = any(c.value_kind == CATEGORICAL
                                  for c in palette.channels)
    available = len(palette.colors) if has_categorical_channel else 0
    return ColorBudget(required, available, required <= available)


def validate_designation(designation: ColumnSetDesignation, table: DataTable,
                         palette) -> list[Violation]:
    """Semantic validation; returns violations instead of raising.

    An empty result means every seed can be sampled into a legal design.
    """
    violations: list[Violation] = []

    known = True
    for i, cs in enumerate(designation.sets):
        for name in cs.columns:
            if name == table.key_column:
                violations.append(Violation(
                    "key-column-in-set",
                    f"key column {name!r} cannot be encoded", i))
                known = False
            elif not table.has_column(name):
                violations.append(Violation(
                    "unknown-column", f"column {name!r} is not in the table", i))
                known = False
    if not known:
        return violations

    if len(designation.sets) > len(palette.mark_shapes):
        violations.append(Violation(
            "too-many-sets",
            f"{len(designation.sets)} sets exceed the "
            f"{len(palette.mark_shapes)}-shape palette"))

    hostable = []
    for i, cs in enumerate(designation.sets):
        if cs.designation == REPEAT:
            bad = [n for n in cs.columns
                   if table.column(n).kind != QUANTITATIVE]
            if bad:
                violations.append(Violation(
                    "repeat-not-quantitative",
                    f"repeat set members must be quantitative, got {bad}", i))
                continue
        classes = hosting_classes(palette, cs, table)
        hostable.append(classes)
        if not classes:
            violations.append(Violation(
                "unsatisfiable-conjunction",
                "no shape class offers enough distinct channels for set "
                f"{cs.columns}", i))

    # Even when each set is hostable in isolation, class capacities can
    # make a joint without-replacement shape assignment impossible.
    if all(hostable) and len(hostable) == len(designation.sets):
        counts = {sc: len(palette.shapes_of_class(sc))
                  for sc in palette.shape_classes()}
        for sc in counts:
            forced = sum(1 for classes in hostable if classes == [sc])
            if forced > counts[sc]:
                violations.append(Violation(
                    "shape-class-capacity",
                    f"{forced} sets require {sc} marks but the palette has "
                    f"only {counts[sc]}"))

    budget = color_budget(designation, table, palette)
    if not budget.ok:
        violations.append(Violation(
            "color-budget",
            f"designation needs {budget.required} unique colors, palette "
            f"has {budget.available}"))
    return violations


def renderable_rows(table: DataTable,
                    designation: ColumnSetDesignation) -> list[int]:
    """Indices of rows with no missing cell in any in-scope column;
    rows that fail are excluded from rendering rather than imputed."""
    scope = [table.column(name) for name in designation.in_scope_columns()]
    return [i for i in range(table.row_count)
            if all(col.values[i] is not None for col in scope)]
