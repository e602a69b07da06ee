"""glyphgen: generative glyph-design engine.

Samples candidate glyph designs from palettes of mark shapes, encoding
channels, and scaffold shapes, binds them to rows of a tidy table, and
renders interactive design galleries (small multiples and small
permutables) for human curation.
"""

from .data_core import (
    ColumnSet,
    ColumnSetDesignation,
    DataTable,
    color_budget,
    infer_kind,
    load_designation,
    parse_table,
    renderable_rows,
    serialize_designation,
    serialize_table,
    validate_designation,
)
from .palettes import PaletteConfig, default_palettes, load_palette, serialize_palette
from .renderer import (
    LegendModel,
    SheetLayout,
    legend,
    render_glyph,
    render_small_multiples,
    render_small_permutables,
)
from .sampler import (
    GlyphDesign,
    Seed,
    check_design,
    override_assignment,
    sample_batch,
    sample_design,
)
from .scales import ResolvedGlyph, assign_colors, quant_scale, resolve
from .session import (
    Session,
    SessionStore,
    append_designs,
    cull_design,
    export_zip,
    init_session,
    move_glyph,
    page,
    replay,
    resize_glyph,
    select,
    set_mode,
    sheet_svg,
)

__version__ = "0.1.0"
