"""Flat-top hexagonal lattice geometry and planar polygon primitives.

Lattice convention (fixed for the whole package): flat-top hexagons addressed
by (col, row) offset coordinates. Column pitch is 1.5*h, row pitch is
sqrt(3)*h, and odd columns sit half a row pitch below even columns, so the
cell (0, 0) is centred on the origin. Two cells are face-adjacent exactly when
their centres are sqrt(3)*h apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

SQRT3 = math.sqrt(3.0)

# Absolute geometric tolerance in a unit-normalized frame (h on the order of 1).
GEOM_TOL = 1e-9


class InvalidParameterError(ValueError):
    pass


class InvalidGeometryError(ValueError):
    pass


class OffsetCoord(NamedTuple):
    col: int
    row: int


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class HexCell:
    coord: OffsetCoord
    center: Point
    circumradius: float


# Neighbor offsets depend on column parity (odd columns are shifted down).
_EVEN_COL_NEIGHBORS = ((0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, 1))
_ODD_COL_NEIGHBORS = ((0, 1), (0, -1), (1, 0), (-1, 0), (1, -1), (-1, -1))


def offset_to_center(c: OffsetCoord, h: float) -> Point:
    """Centre of lattice cell `c` for circumradius `h`, origin cell at (0,0)."""
    if h <= 0:
        raise InvalidParameterError(f"circumradius must be positive, got {h}")
    x = 1.5 * h * c[0]
    y = SQRT3 * h * (c[1] - 0.5 * (c[0] & 1))
    return Point(x, y)


def face_neighbors(c: OffsetCoord) -> list[OffsetCoord]:
    """The 6 face-adjacent lattice coordinates of `c`."""
    col, row = c
    offsets = _ODD_COL_NEIGHBORS if (col & 1) else _EVEN_COL_NEIGHBORS
    return [OffsetCoord(col + dc, row + dr) for dc, dr in offsets]


def hex_vertices(cell: HexCell) -> list[Point]:
    """The 6 vertices in counterclockwise order, first vertex at angle 0."""
    cx, cy = cell.center
    r = cell.circumradius
    return [
        Point(cx + r * math.cos(k * math.pi / 3.0), cy + r * math.sin(k * math.pi / 3.0))
        for k in range(6)
    ]


def hexagon_ring(center: Point, h: float) -> list[Point]:
    """Vertex ring of a flat-top hexagon without building a HexCell."""
    return hex_vertices(HexCell(OffsetCoord(0, 0), center, h))


HEX_AREA_UNIT = 1.5 * SQRT3  # area of a hexagon with circumradius 1


def hexagon_area(h: float) -> float:
    return HEX_AREA_UNIT * h * h


# ---------------------------------------------------------------------------
# Ring primitives


def ring_signed_area(ring: Sequence[Point]) -> float:
    """Shoelace signed area; positive for counterclockwise rings."""
    acc = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def ring_perimeter(ring: Sequence[Point]) -> float:
    acc = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        acc += math.hypot(x1 - x0, y1 - y0)
    return acc


def point_in_ring(pt: Point, ring: Sequence[Point]) -> bool:
    """Even-odd rule point-in-polygon test (boundary points are undefined)."""
    x, y = pt
    inside = False
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            t = (y - y0) / (y1 - y0)
            if x < x0 + t * (x1 - x0):
                inside = not inside
    return inside


def segments_cross(p0: Point, p1: Point, q0: Point, q1: Point) -> bool:
    """Proper-intersection test for open segments."""
    d1 = _orient(q0, q1, p0)
    d2 = _orient(q0, q1, p1)
    d3 = _orient(p0, p1, q0)
    d4 = _orient(p0, p1, q1)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2 and d3 != d4


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def ring_is_simple(ring: Sequence[Point]) -> bool:
    """Quadratic non-self-intersection check; fine for generator-sized rings."""
    n = len(ring)
    for i in range(n):
        a0, a1 = ring[i], ring[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            b0, b1 = ring[j], ring[(j + 1) % n]
            if segments_cross(a0, a1, b0, b1):
                return False
    return True


def segment_ring_crossing_params(p0: Point, p1: Point, ring: Sequence[Point]) -> list[float]:
    """Parameters t in (0,1) where segment p0->p1 properly crosses ring edges."""
    params: list[float] = []
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        d0 = _orient(a, b, p0)
        d1 = _orient(a, b, p1)
        if (d0 > 0) == (d1 > 0) or d0 == d1:
            continue
        e0 = _orient(p0, p1, a)
        e1 = _orient(p0, p1, b)
        if (e0 > 0) == (e1 > 0) or e0 == e1:
            continue
        params.append(d0 / (d0 - d1))
    return params


@dataclass(frozen=True)
class PolygonWithHoles:
    """Simple outer ring (counterclockwise) with disjoint interior holes (clockwise)."""

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()

    def __post_init__(self) -> None:
        for ring in (self.outer, *self.holes):
            for p in ring:
                if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                    raise InvalidGeometryError("non-finite coordinate in ring")
        if len(self.outer) < 3:
            raise InvalidGeometryError("outer ring needs at least 3 vertices")
        if ring_signed_area(self.outer) <= 0:
            raise InvalidGeometryError("outer ring must be counterclockwise")
        for hole in self.holes:
            if len(hole) < 3 or ring_signed_area(hole) >= 0:
                raise InvalidGeometryError("holes must be clockwise rings")

    def validate(self) -> None:
        """Full structural check: simplicity, containment, hole disjointness."""
        if not ring_is_simple(self.outer):
            raise InvalidGeometryError("outer ring self-intersects")
        for hole in self.holes:
            if not ring_is_simple(hole):
                raise InvalidGeometryError("hole ring self-intersects")
            for p in hole:
                if not point_in_ring(p, self.outer):
                    raise InvalidGeometryError("hole vertex outside outer ring")
            for i in range(len(hole)):
                a, b = hole[i], hole[(i + 1) % len(hole)]
                for j in range(len(self.outer)):
                    c, d = self.outer[j], self.outer[(j + 1) % len(self.outer)]
                    if segments_cross(a, b, c, d):
                        raise InvalidGeometryError("hole crosses outer ring")
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                if _rings_interact(self.holes[i], self.holes[j]):
                    raise InvalidGeometryError("holes are not pairwise disjoint")

    def contains(self, pt: Point) -> bool:
        """Point lies in free space: inside outer, outside every hole."""
        if not point_in_ring(pt, self.outer):
            return False
        return not any(point_in_ring(pt, hole) for hole in self.holes)


def _rings_interact(a: Sequence[Point], b: Sequence[Point]) -> bool:
    if any(point_in_ring(p, b) for p in a) or any(point_in_ring(p, a) for p in b):
        return True
    for i in range(len(a)):
        for j in range(len(b)):
            if segments_cross(a[i], a[(i + 1) % len(a)], b[j], b[(j + 1) % len(b)]):
                return True
    return False


# ---------------------------------------------------------------------------
# Convex hull and minimum rotated rectangle


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Monotone-chain hull in counterclockwise order, collinear points dropped."""
    pts = sorted(set((float(p[0]), float(p[1])) for p in points))
    if len(pts) < 3:
        return [Point(*p) for p in pts]
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [Point(*p) for p in lower[:-1] + upper[:-1]]


@dataclass(frozen=True)
class MinRotatedRect:
    center: Point
    axis: Point  # unit direction of the long side, angle normalized to [0, pi)
    long_side: float
    short_side: float

    @property
    def aspect(self) -> float:
        if self.short_side <= 0:
            raise InvalidGeometryError("degenerate rectangle has no aspect ratio")
        return self.long_side / self.short_side

    @property
    def angle(self) -> float:
        return math.atan2(self.axis[1], self.axis[0])


def min_rotated_rect(points: Sequence[Point]) -> MinRotatedRect:
    """Minimum-area enclosing rectangle via rotating calipers on the hull.

    Deterministic: ties on area keep the first hull edge in hull order.
    """
    hull = convex_hull(points)
    if len(hull) < 3:
        raise InvalidGeometryError("rotated rectangle needs non-collinear input")
    best = None
    m = len(hull)
    for i in range(m):
        px, py = hull[i]
        qx, qy = hull[(i + 1) % m]
        ex, ey = qx - px, qy - py
        norm = math.hypot(ex, ey)
        if norm == 0:
            continue
        ux, uy = ex / norm, ey / norm
        smin = smax = hull[0][0] * ux + hull[0][1] * uy
        tmin = tmax = -hull[0][0] * uy + hull[0][1] * ux
        for x, y in hull[1:]:
            s = x * ux + y * uy
            t = -x * uy + y * ux
            smin, smax = min(smin, s), max(smax, s)
            tmin, tmax = min(tmin, t), max(tmax, t)
        area = (smax - smin) * (tmax - tmin)
        if best is None or area < best[0]:
            best = (area, ux, uy, smin, smax, tmin, tmax)
    assert best is not None
    _, ux, uy, smin, smax, tmin, tmax = best
    sc, tc = 0.5 * (smin + smax), 0.5 * (tmin + tmax)
    center = Point(sc * ux - tc * uy, sc * uy + tc * ux)
    ds, dt = smax - smin, tmax - tmin
    if ds >= dt:
        axis, long_side, short_side = (ux, uy), ds, dt
    else:
        axis, long_side, short_side = (-uy, ux), dt, ds
    ax, ay = axis
    if ay < 0 or (ay == 0 and ax < 0):
        ax, ay = -ax, -ay
    return MinRotatedRect(center, Point(ax, ay), long_side, short_side)


def polygon_metrics(p: PolygonWithHoles) -> tuple[float, float, float]:
    """(area, perimeter, aspect_ratio).

    Area subtracts holes; perimeter and aspect ratio come from the outer ring
    alone, so hole insertion never alters the outline compactness inputs.
    """
    area = ring_signed_area(p.outer) + sum(ring_signed_area(h) for h in p.holes)
    perimeter = ring_perimeter(p.outer)
    if area <= GEOM_TOL * GEOM_TOL or perimeter <= GEOM_TOL:
        raise InvalidGeometryError("degenerate polygon")
    rect = min_rotated_rect(p.outer)
    return area, perimeter, rect.aspect


# ---------------------------------------------------------------------------
# Convex clipping (used for cell/free-space overlap areas)


def clip_area_convex(subject: Sequence[Point], clip: Sequence[Point]) -> float:
    """Area of subject ∩ clip where `clip` is convex and counterclockwise.

    Sutherland-Hodgman against each clip edge; the possibly-degenerate
    output ring still carries the exact intersection area, which is all
    callers need.
    """
    if ring_signed_area(subject) < 0:
        subject = list(reversed(subject))
    ring = list(subject)
    m = len(clip)
    for i in range(m):
        if not ring:
            return 0.0
        a = clip[i]
        b = clip[(i + 1) % m]
        ring = _clip_halfplane(ring, a, b)
    if len(ring) < 3:
        return 0.0
    return max(ring_signed_area(ring), 0.0)


def _clip_halfplane(ring: list[Point], a: Point, b: Point) -> list[Point]:
    out: list[Point] = []
    n = len(ring)
    sides = [_orient(a, b, p) for p in ring]
    for i in range(n):
        p, q = ring[i], ring[(i + 1) % n]
        ps, qs = sides[i], sides[(i + 1) % n]
        if ps >= 0:
            out.append(p)
            if qs < 0:
                out.append(_edge_line_point(p, q, ps, qs))
        elif qs >= 0:
            out.append(_edge_line_point(p, q, ps, qs))
    return out


def _edge_line_point(p: Point, q: Point, ps: float, qs: float) -> Point:
    t = ps / (ps - qs)
    return Point(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def free_overlap_area(center: Point, h: float, polygon: PolygonWithHoles) -> float:
    """Area of the hexagon at `center` covered by free space (outer minus holes)."""
    hexagon = hexagon_ring(center, h)
    area = clip_area_convex(polygon.outer, hexagon)
    if area == 0.0:
        return 0.0
    for hole in polygon.holes:
        area -= clip_area_convex(list(reversed(hole)), hexagon)
    return max(area, 0.0)
