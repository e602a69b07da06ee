"""Glyph-local geometry: parametric paths, scaffolds, anchors, mark outlines.

Conventions
-----------
All glyph-local geometry lives in the unit box [-0.5, 0.5] x [-0.5, 0.5]
with the y axis pointing DOWN (screen orientation).  North is (0, -0.5).
Angles are degrees, measured clockwise from north on screen, which with
y-down coordinates is the ordinary rotation matrix.

Paths are piecewise-linear with exact arc-length lookup; curved shapes
(circle, spiral, wave) are sampled densely enough that chord-vs-arc
error is far below the tolerances the rest of the system relies on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import WaveShapePassedToPolygonOp

# Dense-sampling resolutions for curved builtins.
CIRCLE_SEGMENTS = 512
MARK_CIRCLE_SEGMENTS = 72
SPIRAL_SEGMENTS = 4096
SPIRAL_TURNS = 2          # spiral sweeps theta in [0, 2*pi*SPIRAL_TURNS]
SPIRAL_INNER_RADIUS = 0.05
UNIT_RADIUS = 0.5         # circumradius filling the unit box
WAVE_SAMPLES_PER_PERIOD = 48
CURVE_FLATTEN_STEPS = 16  # per bezier segment in custom path data


def rotation_matrix(degrees: float) -> np.ndarray:
    rad = math.radians(degrees)
    c, s = math.cos(rad), math.sin(rad)
    return np.array([[c, -s], [s, c]])


@dataclass
class Path:
    """Piecewise-linear curve with arc-length parameterization.

    ``points`` is an (N, 2) array of vertices; a closed path does not
    repeat its first vertex, the wrap segment is implicit.
    """

    points: np.ndarray
    closed: bool

    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError("path needs at least two 2-d points")
        self.points = pts
        segs = self._segment_points()
        self._cum = np.concatenate(
            [[0.0], np.cumsum(np.linalg.norm(np.diff(segs, axis=0), axis=1))]
        )

    def _segment_points(self) -> np.ndarray:
        if self.closed:
            return np.vstack([self.points, self.points[:1]])
        return self.points

    @property
    def arc_length(self) -> float:
        return float(self._cum[-1])

    def point_at_length(self, s: float) -> np.ndarray:
        """Point at arc-length ``s`` from the path start (clamped)."""
        s = min(max(s, 0.0), self.arc_length)
        segs = self._segment_points()
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(max(i, 0), len(segs) - 2)
        seg_len = self._cum[i + 1] - self._cum[i]
        t = 0.0 if seg_len == 0 else (s - self._cum[i]) / seg_len
        return segs[i] + t * (segs[i + 1] - segs[i])

    def point_at_fraction(self, f: float) -> np.ndarray:
        return self.point_at_length(f * self.arc_length)

    def bounds(self) -> np.ndarray:
        """(xmin, ymin, xmax, ymax) of the vertex set."""
        return np.concatenate([self.points.min(axis=0), self.points.max(axis=0)])

    def transformed(self, scale: float = 1.0, rotation: float = 0.0,
                    translate=(0.0, 0.0)) -> Path:
        """Scale about origin, then rotate, then translate."""
        pts = self.points * scale
        if rotation:
            pts = pts @ rotation_matrix(rotation).T
        pts = pts + np.asarray(translate, dtype=float)
        return Path(pts, self.closed)

    def to_svg_d(self, decimals: int | None = 4) -> str:
        """Path-data string; ``decimals=None`` uses shortest exact floats
        so serialized paths reload bit-identically."""
        def fmt(v: float) -> str:
            if decimals is None:
                return repr(float(v) + 0.0)
            return f"{float(v) + 0.0:.{decimals}f}"

        parts = [f"M {fmt(self.points[0, 0])} {fmt(self.points[0, 1])}"]
        for x, y in self.points[1:]:
            parts.append(f"L {fmt(x)} {fmt(y)}")
        if self.closed:
            parts.append("Z")
        return " ".join(parts)


@dataclass
class AnchorLayout:
    points: np.ndarray         # (n, 2) glyph-local anchor positions
    gravity_applied: str       # gravity level id


# ----------------------------------------------------------------------
# Scaffold construction
# ----------------------------------------------------------------------

def _regular_polygon(n: int) -> np.ndarray:
    """Regular n-gon inscribed in the unit-box circle, vertex at north,
    winding clockwise on screen."""
    theta = 2.0 * math.pi * np.arange(n) / n
    return np.column_stack([UNIT_RADIUS * np.sin(theta),
                            -UNIT_RADIUS * np.cos(theta)])


def _circle_points(segments: int, radius: float = UNIT_RADIUS) -> np.ndarray:
    theta = 2.0 * math.pi * np.arange(segments) / segments
    return np.column_stack([radius * np.sin(theta), -radius * np.cos(theta)])


def _spiral_points() -> np.ndarray:
    theta_max = 2.0 * math.pi * SPIRAL_TURNS
    k = (UNIT_RADIUS - SPIRAL_INNER_RADIUS) / theta_max
    theta = np.linspace(0.0, theta_max, SPIRAL_SEGMENTS + 1)
    r = SPIRAL_INNER_RADIUS + k * theta
    return np.column_stack([r * np.sin(theta), -r * np.cos(theta)])


_SCAFFOLD_BUILDERS = {
    "horizontal-line": lambda: Path(np.array([[-0.5, 0.0], [0.5, 0.0]]), closed=False),
    "vertical-line": lambda: Path(np.array([[0.0, -0.5], [0.0, 0.5]]), closed=False),
    "circle": lambda: Path(_circle_points(CIRCLE_SEGMENTS), closed=True),
    "triangle": lambda: Path(_regular_polygon(3), closed=True),
    "square": lambda: Path(_regular_polygon(4), closed=True),
    "pentagon": lambda: Path(_regular_polygon(5), closed=True),
    "hexagon": lambda: Path(_regular_polygon(6), closed=True),
    "spiral": lambda: Path(_spiral_points(), closed=False),
}

BUILTIN_SCAFFOLD_IDS = tuple(_SCAFFOLD_BUILDERS)


def scaffold_path(spec) -> Path:
    """Concrete path for a scaffold spec (built-in id or custom path)."""
    if getattr(spec, "path", None) is not None:
        return spec.path
    builder = _SCAFFOLD_BUILDERS.get(spec.id)
    if builder is None:
        raise KeyError(f"no built-in scaffold named {spec.id!r}")
    return builder()


def anchor_points(path: Path, n: int, gravity, centroid) -> AnchorLayout:
    """Place ``n`` anchors at equal arc-length intervals, then pull each
    toward the centroid by the gravity fraction.

    Closed paths take fractions i/n starting at the path's start vertex;
    open paths include both endpoints at fractions i/(n-1), with the
    single anchor of n=1 at the midpoint.
    """
    if n < 1:
        raise ValueError("anchor_points needs n >= 1")
    if path.closed:
        fractions = [i / n for i in range(n)]
    elif n == 1:
        fractions = [0.5]
    else:
        fractions = [i / (n - 1) for i in range(n)]
    raw = np.array([path.point_at_fraction(f) for f in fractions])
    c = np.asarray(centroid, dtype=float)
    pulled = c + (1.0 - gravity.pull) * (raw - c)
    return AnchorLayout(points=pulled, gravity_applied=gravity.id)


def path_centroid(path: Path) -> np.ndarray:
    """Arc-length-weighted centroid of the curve (not the enclosed area)."""
    segs = path._segment_points()
    mids = 0.5 * (segs[:-1] + segs[1:])
    lens = np.linalg.norm(np.diff(segs, axis=0), axis=1)
    total = lens.sum()
    if total == 0:
        return segs[0].copy()
    return (mids * lens[:, None]).sum(axis=0) / total


# ----------------------------------------------------------------------
# Mark outlines
# ----------------------------------------------------------------------

def normalize_outline(points: np.ndarray, pip: np.ndarray):
    """Scale and translate so the bounding box is centered at the origin
    with max dimension exactly 1; the pip anchor rides along."""
    pts = np.asarray(points, dtype=float)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    dim = float(span.max())
    if dim <= 0:
        raise ValueError("outline has zero extent")
    center = 0.5 * (lo + hi)
    if dim == 1.0 and center[0] == 0.0 and center[1] == 0.0:
        # Already normalized; keep bit-identical so reloading a
        # serialized palette is a fixed point.
        return pts, np.asarray(pip, dtype=float)
    return (pts - center) / dim, (np.asarray(pip, dtype=float) - center) / dim


def _drop_outline():
    """Teardrop: apex at north, round bottom; rotationally asymmetric."""
    apex = np.array([0.0, -0.5])
    center = np.array([0.0, 0.2])
    r = 0.3
    d = float(np.linalg.norm(apex - center))
    spread = math.acos(r / d)  # angle at circle center to tangent points
    # Arc from the right tangent point through the circle's bottom to the
    # left tangent point; theta is measured from the bottom of the circle.
    span = math.pi - spread
    theta = np.linspace(span, -span, 48)
    arc = center + r * np.column_stack([np.sin(theta), np.cos(theta)])
    pts = np.vstack([apex, arc])
    return pts, np.array([0.0, -0.15])


def _houndstooth_outline():
    """Pied-de-poule check unit on a 4x4 grid."""
    grid = [
        (0, 0), (1, 0), (2, 1), (2, 0), (4, 0), (4, 1), (3, 1), (4, 2),
        (4, 4), (3, 4), (2, 3), (2, 4), (0, 4), (0, 3), (1, 3), (0, 2),
    ]
    pts = np.array(grid, dtype=float) / 4.0 - 0.5
    return pts, np.array([0.0, 0.0])


def _star_outline():
    outer, inner = 0.5, 0.21
    theta = math.pi * np.arange(10) / 5.0
    radii = np.where(np.arange(10) % 2 == 0, outer, inner)
    pts = np.column_stack([radii * np.sin(theta), -radii * np.cos(theta)])
    return pts, np.array([0.0, -0.27])


def _builtin_marks():
    marks = {
        "circle": (_circle_points(MARK_CIRCLE_SEGMENTS), np.array([0.0, -0.33])),
        "square": (np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]),
                   np.array([0.0, -0.33])),
        "triangle": (_regular_polygon(3), np.array([0.0, -0.2])),
        "hexagon": (_regular_polygon(6), np.array([0.0, -0.3])),
        "star": _star_outline(),
        "drop": _drop_outline(),
        "houndstooth": _houndstooth_outline(),
        "diamond": (np.array([[0.0, -0.5], [0.3, 0.0], [0.0, 0.5], [-0.3, 0.0]]),
                    np.array([0.0, -0.22])),
    }
    return {name: normalize_outline(pts, pip) for name, (pts, pip) in marks.items()}


_BUILTIN_MARKS = _builtin_marks()
BUILTIN_MARK_IDS = tuple(_BUILTIN_MARKS)


def builtin_mark_geometry(mark_id: str):
    """(outline points, pip anchor) in normalized unit coordinates."""
    pts, pip = _BUILTIN_MARKS[mark_id]
    return pts.copy(), pip.copy()


def mark_outline(shape, size: float, rotation: float,
                 glyph_width: float = 1.0):
    """Concrete outline for a polygon-class mark.

    The outline is scaled so its unrotated bounding-box max dimension is
    size * glyph_width, then rotated about its center; the pip anchor
    rotates rigidly with it.  Returns (Path, pip point).
    """
    if shape.shape_class != "polygon":
        raise WaveShapePassedToPolygonOp(
            f"shape {shape.id!r} is not polygon-class")
    if shape.path is not None:
        pts, pip = shape.path.points, shape.pip_anchor
    else:
        pts, pip = builtin_mark_geometry(shape.geometry)
    scale = size * glyph_width
    rot = rotation_matrix(rotation)
    out = (pts * scale) @ rot.T
    pip_pt = rot @ (np.asarray(pip) * scale)
    return Path(out, closed=True), pip_pt


def wave_polyline(frequency: float, amplitude: float, length: float,
                  rotation: float, glyph_width: float = 1.0) -> Path:
    """Sine polyline y = A*sin(2*pi*f*u), u in [0,1], centered on the
    origin (the caller translates it to the mark anchor)."""
    segments = max(96, int(round(frequency * WAVE_SAMPLES_PER_PERIOD)))
    u = np.linspace(0.0, 1.0, segments + 1)
    x = (u - 0.5) * length * glyph_width
    y = amplitude * glyph_width * np.sin(2.0 * math.pi * frequency * u)
    pts = np.column_stack([x, y])
    if rotation:
        pts = pts @ rotation_matrix(rotation).T
    return Path(pts, closed=False)


def wave_pip_anchor(length: float, rotation: float,
                    glyph_width: float = 1.0) -> np.ndarray:
    """Pip anchor for a wave mark: the wave's start endpoint."""
    start = np.array([-0.5 * length * glyph_width, 0.0])
    return rotation_matrix(rotation) @ start


# ----------------------------------------------------------------------
# Custom path data (palette files)
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"([MmLlHhVvCcQqZz])|(-?\d*\.?\d+(?:[eE][-+]?\d+)?)")


def parse_path_data(d: str):
    """Parse a small SVG path-data subset (M L H V C Q Z, abs and rel)
    into (points, closed).  Curves are flattened.  One subpath only."""
    tokens = []
    pos = 0
    for m in _TOKEN.finditer(d):
        between = d[pos:m.start()]
        if between.strip(" ,\t\r\n"):
            raise ValueError(f"unsupported path data near {between.strip()!r}")
        tokens.append(m.group(0))
        pos = m.end()
    if d[pos:].strip(" ,\t\r\n"):
        raise ValueError(f"unsupported path data near {d[pos:].strip()!r}")
    if not tokens:
        raise ValueError("empty path data")
    if tokens[0] not in ("M", "m"):
        raise ValueError("path data must start with a moveto")

    pts: list[tuple[float, float]] = []
    closed = False
    cur = (0.0, 0.0)
    i = 0
    cmd = None

    def take(k: int) -> list[float]:
        nonlocal i
        vals = [float(t) for t in tokens[i:i + k]]
        if len(vals) != k:
            raise ValueError("truncated path data")
        i += k
        return vals

    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            cmd = tok
            i += 1
            if cmd in "Zz":
                closed = True
                break
            continue
        if cmd is None:
            raise ValueError("path data must start with a command")
        rel = cmd.islower()
        op = cmd.upper()
        if op == "M" or op == "L":
            x, y = take(2)
            cur = (cur[0] + x, cur[1] + y) if rel else (x, y)
            if op == "M" and pts:
                raise ValueError("multiple subpaths are not supported")
            pts.append(cur)
            if op == "M":
                cmd = "l" if rel else "L"
        elif op == "H":
            (x,) = take(1)
            cur = (cur[0] + x if rel else x, cur[1])
            pts.append(cur)
        elif op == "V":
            (y,) = take(1)
            cur = (cur[0], cur[1] + y if rel else y)
            pts.append(cur)
        elif op in ("C", "Q"):
            k = 6 if op == "C" else 4
            vals = take(k)
            ctrl = [(vals[j], vals[j + 1]) for j in range(0, k, 2)]
            if rel:
                ctrl = [(cur[0] + cx, cur[1] + cy) for cx, cy in ctrl]
            nodes = [cur] + ctrl
            for step in range(1, CURVE_FLATTEN_STEPS + 1):
                t = step / CURVE_FLATTEN_STEPS
                pts.append(_bezier_point(nodes, t))
            cur = nodes[-1]
        else:
            raise ValueError(f"unsupported path command {cmd!r}")
    if len(pts) < 2:
        raise ValueError("path data yields fewer than two points")
    points = np.array(pts, dtype=float)
    if closed and np.allclose(points[0], points[-1]):
        points = points[:-1]
    return points, closed


def _bezier_point(nodes, t: float):
    pts = [np.asarray(p, dtype=float) for p in nodes]
    while len(pts) > 1:
        pts = [(1 - t) * a + t * b for a, b in zip(pts[:-1], pts[1:])]
    return (float(pts[0][0]), float(pts[0][1]))


def polygon_is_simple(points: np.ndarray) -> bool:
    """True when no two non-adjacent edges of the closed polygon cross."""
    n = len(points)
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]

    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return 0 if abs(v) < 1e-12 else (1 if v > 0 else -1)

    def crosses(a, b):
        p1, p2 = a
        p3, p4 = b
        o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
        o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
        return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)

    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if crosses(edges[i], edges[j]):
                return False
    return True
