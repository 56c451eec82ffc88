"""Synthetic area-of-interest sampling and morphology classification.

Three generator families produce outer rings as radial polygons around the
origin; obstacle holes are inserted afterwards. Everything is driven by a
single 64-bit seed split into independent Philox sub-streams, one per
generation stage, so each stage is reproducible in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hexcover.hexgeom import (
    InvalidParameterError,
    Point,
    PolygonWithHoles,
    hexagon_area,
    point_in_ring,
    polygon_metrics,
    ring_signed_area,
)

FAMILY_COMPACT = "compact"
FAMILY_ELONGATED = "elongated"
FAMILY_IRREGULAR = "irregular"
FAMILIES = (FAMILY_COMPACT, FAMILY_ELONGATED, FAMILY_IRREGULAR)

LABEL_COMPACT = "Compact"
LABEL_ELONGATED = "Elongated"
LABEL_IRREGULAR = "Irregular"

# Philox sub-stream indices (counter-based derivation from one seed).
STREAM_FAMILY = 0
STREAM_POLYGON = 1
STREAM_HOLES = 2
STREAM_BASE = 3

_RING_VERTICES = 44
_HOLE_VERTICES = 14
_HOLE_RETRIES = 12
# Hole-free instances are disproportionately easy for every heuristic, so
# they are drawn less often than holed ones.
_HOLE_COUNT_WEIGHTS = (0.15, 0.35, 0.25, 0.25)

# Cells drawn per instance before boundary and hole losses; the size band
# [28, 46] is enforced downstream by rejection.
_TARGET_CELLS = (30.0, 50.0)


def substream(seed: int, stage: int) -> np.random.Generator:
    """Independent deterministic RNG stream for one generation stage."""
    if seed < 0:
        raise InvalidParameterError("seed must be a non-negative integer")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, stage]))


@dataclass(frozen=True)
class MorphologyClass:
    label: str
    compactness: float
    aspect: float


@dataclass(frozen=True)
class AoiShape:
    polygon: PolygonWithHoles
    morphology: MorphologyClass
    seed: int
    family_hint: str


def label_from(compactness: float, aspect: float) -> str:
    """Threshold partition: elongation wins, then compactness splits the rest."""
    if aspect >= 2.0:
        return LABEL_ELONGATED
    if compactness > 0.6:
        return LABEL_COMPACT
    return LABEL_IRREGULAR


def classify_morphology(p: PolygonWithHoles) -> MorphologyClass:
    area, perimeter, aspect = polygon_metrics(p)
    c = 4.0 * math.pi * area / (perimeter * perimeter)
    return MorphologyClass(label_from(c, aspect), c, aspect)


def _radial_ring(rng: np.random.Generator, base_r: float, harmonics) -> tuple[Point, ...]:
    """Counterclockwise radial polygon r(theta) = base_r * (1 + sum of cosines)."""
    thetas = np.linspace(0.0, 2.0 * math.pi, _RING_VERTICES, endpoint=False)
    radii = np.full(_RING_VERTICES, 1.0)
    for k, amp in harmonics:
        phase = rng.uniform(0.0, 2.0 * math.pi)
        radii += amp * np.cos(k * thetas + phase)
    radii = np.maximum(radii, 0.25) * base_r
    return tuple(Point(float(r * math.cos(t)), float(r * math.sin(t))) for r, t in zip(radii, thetas))


def sample_aoi(family_hint: str, seed: int, scale: float) -> AoiShape:
    """Draw one outer polygon from the requested family.

    Deterministic per (family_hint, seed, scale). The polygon is sized so
    that tessellation at circumradius `scale` lands near the benchmark cell
    band; exact conformance is checked downstream, not here.
    """
    if scale <= 0:
        raise InvalidParameterError("scale must be positive")
    if family_hint not in FAMILIES:
        raise InvalidParameterError(f"unknown family hint {family_hint!r}")
    rng = substream(seed, STREAM_POLYGON)
    n_target = rng.uniform(*_TARGET_CELLS)
    area_target = n_target * hexagon_area(scale)

    if family_hint == FAMILY_COMPACT:
        base_r = math.sqrt(area_target / math.pi)
        harmonics = [(k, rng.uniform(0.02, 0.09) * 2.0 / k) for k in (2, 3, 4)]
        ring = _radial_ring(rng, base_r, harmonics)
    elif family_hint == FAMILY_IRREGULAR:
        base_r = math.sqrt(area_target / math.pi)
        ks = rng.choice(np.arange(3, 8), size=3, replace=False)
        harmonics = [(int(k), rng.uniform(0.10, 0.24)) for k in ks]
        ring = _radial_ring(rng, base_r, harmonics)
    else:
        aspect_t = rng.uniform(2.15, 3.1)
        b = math.sqrt(area_target / (math.pi * aspect_t))
        a = aspect_t * b
        thetas = np.linspace(0.0, 2.0 * math.pi, _RING_VERTICES, endpoint=False)
        radii = np.full(_RING_VERTICES, 1.0)
        for k in (3, 4, 5):
            amp = rng.uniform(0.01, 0.05)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            radii += amp * np.cos(k * thetas + phase)
        ring = tuple(
            Point(float(a * r * math.cos(t)), float(b * r * math.sin(t)))
            for r, t in zip(radii, thetas)
        )

    polygon = PolygonWithHoles(ring)
    polygon.validate()
    return AoiShape(polygon, classify_morphology(polygon), seed, family_hint)


def insert_obstacles(shape: AoiShape, seed: int) -> AoiShape:
    """Punch up to 3 obstacle holes into the AOI; the outer ring never changes.

    Each hole is a perturbed circle sized to swallow roughly one to three
    hexagonal cells. Candidate holes violating containment or disjointness
    are re-sampled a bounded number of times and then skipped, so the result
    always satisfies the polygon invariants.
    """
    rng = substream(seed, STREAM_HOLES)
    count = int(rng.choice(4, p=_HOLE_COUNT_WEIGHTS))
    if count == 0:
        return shape

    outer = shape.polygon.outer
    outer_area = ring_signed_area(outer)
    cell_proxy = math.sqrt(outer_area / (math.pi * 30.0))  # rough circumradius unit
    xs = [p.x for p in outer]
    ys = [p.y for p in outer]
    holes = list(shape.polygon.holes)

    for _ in range(count):
        for _attempt in range(_HOLE_RETRIES):
            cells_eaten = rng.uniform(1.0, 3.2)
            rho = math.sqrt(cells_eaten * hexagon_area(cell_proxy) / math.pi)
            cx = rng.uniform(min(xs), max(xs))
            cy = rng.uniform(min(ys), max(ys))
            wobble = rng.uniform(0.88, 1.12, _HOLE_VERTICES)
            ring = tuple(
                Point(
                    cx + rho * w * math.cos(-2.0 * math.pi * k / _HOLE_VERTICES),
                    cy + rho * w * math.sin(-2.0 * math.pi * k / _HOLE_VERTICES),
                )
                for k, w in enumerate(wobble)
            )
            # Clearance tuned so shoreline-hugging holes carve narrow rim
            # corridors without strangling audit feasibility.
            if _hole_admissible(ring, outer, holes, clearance=0.65 * cell_proxy):
                holes.append(ring)
                break

    if len(holes) == len(shape.polygon.holes):
        return shape
    polygon = PolygonWithHoles(outer, tuple(holes))
    polygon.validate()
    return AoiShape(polygon, classify_morphology(polygon), shape.seed, shape.family_hint)


def _hole_admissible(ring, outer, holes, clearance: float) -> bool:
    for p in ring:
        if not point_in_ring(p, outer):
            return False
        if _dist_to_ring(p, outer) < clearance:
            return False
    for other in holes:
        for p in ring:
            if point_in_ring(p, other) or _dist_to_ring(p, other) < clearance:
                return False
        if any(point_in_ring(q, ring) for q in other):
            return False
    return True


def _dist_to_ring(p: Point, ring) -> float:
    best = math.inf
    n = len(ring)
    for i in range(n):
        best = min(best, _dist_point_segment(p, ring[i], ring[(i + 1) % n]))
    return best


def _dist_point_segment(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))
