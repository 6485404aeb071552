"""The convex frontier over classifier operating points in ROC space.

The frontier (upper convex hull from (0,0) to (1,1)) contains exactly the
operating points that can minimize expected cost under some prior/cost
conditions, so only these classifiers need to be kept.  Vertices carry
provenance back to a runnable decision rule; points that fall on a hull
segment without being a corner are kept in an auxiliary list rather than
discarded, since they tie the segment's endpoints under the conditions that
make that segment optimal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .curves import RocCurve, RocPoint
from .validation import check_unit_interval

# Absolute tolerance for the cross-product turn test and for matching points,
# on unit-square coordinates.  Empirical rates have O(1/n) granularity, so no
# exact arithmetic is needed.
COLLINEAR_EPS = 1e-12


class DegenerateRule(enum.Enum):
    """The two always-available trivial classifiers anchoring the frontier."""

    NEVER_ALARM = "never-alarm"
    ALWAYS_ALARM = "always-alarm"


@dataclass(frozen=True, slots=True)
class Provenance:
    """Which classifier, at which threshold, realizes a point.

    ``threshold`` is None for single-point (binary) classifiers that expose
    no score sweep.
    """

    classifier_id: str
    threshold: float | None


@dataclass(frozen=True, slots=True)
class HullVertex:
    point: RocPoint
    provenance: Provenance | DegenerateRule

    @property
    def fp(self) -> float:
        return self.point.fp

    @property
    def tp(self) -> float:
        return self.point.tp


@dataclass(frozen=True, slots=True)
class VertexMixture:
    """Randomized blend of two adjacent frontier vertices.

    Acting on ``right`` with probability ``weight`` (else ``left``) attains
    every rate pair on the segment between the two vertices in expectation.
    """

    left: HullVertex
    right: HullVertex
    weight: float


@dataclass(frozen=True, slots=True)
class RocchHull:
    """Immutable convex frontier: corner vertices plus on-segment extras.

    ``slopes[i]`` is the slope of the segment from ``vertices[i]`` to
    ``vertices[i+1]``; slopes are strictly decreasing (a vertical first
    segment contributes ``inf``).
    """

    vertices: tuple[HullVertex, ...]
    slopes: tuple[float, ...]
    aux_points: tuple[HullVertex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "slopes", tuple(self.slopes))
        object.__setattr__(self, "aux_points", tuple(self.aux_points))
        vs = self.vertices
        if len(vs) < 2:
            raise ValueError("a hull needs at least the two degenerate endpoints")
        if (vs[0].fp, vs[0].tp) != (0.0, 0.0) or (vs[-1].fp, vs[-1].tp) != (1.0, 1.0):
            raise ValueError("hull must span (0, 0) .. (1, 1)")
        if len(self.slopes) != len(vs) - 1:
            raise ValueError("need exactly one slope per segment")
        for a, b in zip(vs, vs[1:]):
            if (b.fp, b.tp) <= (a.fp, a.tp):
                raise ValueError("vertices must advance in (fp, tp) order")
        for s, t in zip(self.slopes, self.slopes[1:]):
            if not s > t:
                raise ValueError("segment slopes must be strictly decreasing")
        if self.slopes and self.slopes[-1] < 0:
            raise ValueError("hull slopes must be non-negative")

    def vertex_points(self) -> tuple[RocPoint, ...]:
        return tuple(v.point for v in self.vertices)

    def segments(self):
        """Yield (left vertex, right vertex, slope) triples."""
        for a, b, s in zip(self.vertices, self.vertices[1:], self.slopes):
            yield a, b, s


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _upper_chain(positions: list[tuple[float, float]]) -> list[tuple[float, float]]:
    # Monotone chain restricted to the upper hull; ties on fp are sorted by
    # tp so an initial vertical rise at fp=0 survives as two chain points.
    chain: list[tuple[float, float]] = []
    for pos in sorted(positions):
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pos) >= -COLLINEAR_EPS:
            chain.pop()
        chain.append(pos)
    return chain


def _claims(inputs) -> list[tuple[RocPoint, Provenance]]:
    claims: list[tuple[RocPoint, Provenance]] = []
    for item in inputs:
        if isinstance(item, RocCurve):
            for cp in item.points:
                claims.append((cp.point, Provenance(item.classifier_id, cp.threshold)))
        else:
            try:
                classifier_id, point = item
            except (TypeError, ValueError):
                raise TypeError(
                    "hull inputs must be RocCurve objects or (classifier_id, RocPoint) pairs"
                ) from None
            if not isinstance(point, RocPoint):
                raise TypeError(f"expected a RocPoint, got {point!r}")
            claims.append((point, Provenance(str(classifier_id), None)))
    return claims


def _provenance_sort_key(prov: Provenance):
    threshold = prov.threshold
    return (prov.classifier_id, threshold is None, -(threshold if threshold is not None else 0.0))


def _interp_chain(chain, fp: float) -> float:
    lo = 0
    for i, pos in enumerate(chain):
        if pos[0] <= fp:
            lo = i
        else:
            break
    if chain[lo][0] == fp:
        return chain[lo][1]
    left, right = chain[lo], chain[lo + 1]
    frac = (fp - left[0]) / (right[0] - left[0])
    return left[1] + frac * (right[1] - left[1])


def _assemble(claims: list[tuple[RocPoint, Provenance]]) -> RocchHull:
    positions = {(0.0, 0.0), (1.0, 1.0)}
    positions.update((p.fp, p.tp) for p, _ in claims)
    chain = _upper_chain(list(positions))

    # Attach provenance: the lexicographically first claimant names each
    # vertex, every other on-frontier claim is kept as an auxiliary point.
    by_position: dict[tuple[float, float], list[Provenance]] = {}
    aux: list[tuple[tuple[float, float], Provenance]] = []
    for point, prov in claims:
        pos = (point.fp, point.tp)
        matched = None
        for cpos in chain:
            if abs(cpos[0] - pos[0]) <= COLLINEAR_EPS and abs(cpos[1] - pos[1]) <= COLLINEAR_EPS:
                matched = cpos
                break
        if matched is not None:
            by_position.setdefault(matched, []).append(prov)
            continue
        if pos[0] <= COLLINEAR_EPS:
            on_boundary = pos[1] <= _interp_chain(chain, 0.0) + COLLINEAR_EPS
        else:
            on_boundary = abs(_interp_chain(chain, pos[0]) - pos[1]) <= COLLINEAR_EPS
        if on_boundary:
            aux.append((pos, prov))

    vertices: list[HullVertex] = []
    endpoints = {(0.0, 0.0): DegenerateRule.NEVER_ALARM, (1.0, 1.0): DegenerateRule.ALWAYS_ALARM}
    for pos in chain:
        point = RocPoint(pos[0], pos[1])
        claimants = sorted(by_position.get(pos, []), key=_provenance_sort_key)
        if pos in endpoints:
            vertices.append(HullVertex(point, endpoints[pos]))
            aux.extend((pos, prov) for prov in claimants)
        else:
            vertices.append(HullVertex(point, claimants[0]))
            aux.extend((pos, prov) for prov in claimants[1:])

    slopes = []
    for a, b in zip(chain, chain[1:]):
        dx = b[0] - a[0]
        slopes.append(math.inf if dx == 0.0 else (b[1] - a[1]) / dx)

    aux_vertices = tuple(
        HullVertex(RocPoint(pos[0], pos[1]), prov)
        for pos, prov in sorted(aux, key=lambda item: (item[0], _provenance_sort_key(item[1])))
    )
    return RocchHull(tuple(vertices), tuple(slopes), aux_vertices)


def build_hull(inputs=()) -> RocchHull:
    """Build the frontier over curves and (classifier_id, RocPoint) pairs.

    The degenerate endpoints are always included, so with no inputs the hull
    is the random-guess diagonal.
    """
    return _assemble(_claims(inputs))


def insert(hull: RocchHull, item) -> tuple[RocchHull, bool]:
    """Fold one more curve or labeled point into an existing frontier.

    Only the stored frontier (vertices plus auxiliary on-segment points) is
    consulted, which is equivalent to rebuilding over every point ever seen.
    Returns the new hull and whether the addition changed the vertex set.
    """
    retained = [
        (v.point, v.provenance)
        for v in (*hull.vertices, *hull.aux_points)
        if isinstance(v.provenance, Provenance)
    ]
    rebuilt = _assemble(retained + _claims([item]))
    extended = [(v.fp, v.tp) for v in rebuilt.vertices] != [(v.fp, v.tp) for v in hull.vertices]
    return rebuilt, extended


def hull_tp_at(hull: RocchHull, fp: float) -> float:
    """True positive rate of the frontier at a false positive rate.

    When the frontier starts with a vertical segment the value at fp=0 is the
    top of that segment.
    """
    check_unit_interval("fp", fp)
    vs = hull.vertices
    lo = 0
    for i, v in enumerate(vs):
        if v.fp <= fp:
            lo = i
        else:
            break
    if vs[lo].fp == fp:
        return vs[lo].tp
    left, right = vs[lo], vs[lo + 1]
    frac = (fp - left.fp) / (right.fp - left.fp)
    return left.tp + frac * (right.tp - left.tp)


def resolve_operating_point(hull: RocchHull, x: float) -> tuple[RocPoint, HullVertex | VertexMixture]:
    """Resolve a target false positive rate to frontier machinery.

    An ``x`` matching a vertex (within tolerance) resolves to that vertex; at
    fp=0 with a vertical first segment the topmost vertex wins.  Any other
    ``x`` resolves to the two adjacent vertices and the blend weight placing
    their mixture at ``x``.
    """
    check_unit_interval("x", x)
    vs = hull.vertices
    matches = [v for v in vs if abs(v.fp - x) <= COLLINEAR_EPS]
    if matches:
        vertex = matches[-1]
        return vertex.point, vertex
    lo = 0
    for i, v in enumerate(vs):
        if v.fp < x:
            lo = i
        else:
            break
    left, right = vs[lo], vs[lo + 1]
    weight = (x - left.fp) / (right.fp - left.fp)
    tp = left.tp + weight * (right.tp - left.tp)
    tp = min(1.0, max(0.0, tp))
    return RocPoint(x, tp), VertexMixture(left, right, weight)


def slope_vertex(hull: RocchHull, m: float) -> HullVertex:
    """The frontier vertex optimal for iso-performance lines of slope ``m``.

    If some segment has exactly slope ``m`` its left endpoint is returned
    (deterministic tie-break toward fewer alarms); otherwise the unique
    vertex whose left segment is steeper and right segment shallower than
    ``m``.  The leftmost vertex acts as if backed by an infinite-slope
    segment and the rightmost by a zero-slope one, so every m >= 0 resolves.
    """
    if m < 0:
        raise ValueError(f"slope must be >= 0, got {m!r}")
    for j, s in enumerate(hull.slopes):
        if s == m:
            return hull.vertices[j]
    if math.isinf(m):
        return hull.vertices[0]
    n_slopes = len(hull.slopes)
    for i, v in enumerate(hull.vertices):
        left = hull.slopes[i - 1] if i > 0 else math.inf
        right = hull.slopes[i] if i < n_slopes else -1.0
        if left > m > right:
            return v
    raise AssertionError("unreachable: slopes are strictly decreasing")


def auc(curve_or_hull) -> float:
    """Trapezoidal area under a curve or under the frontier.

    For curves built by the ranked sweep this equals the weighted
    probability that a random positive outscores a random negative, ties
    counted half.
    """
    if isinstance(curve_or_hull, RocchHull):
        pts = curve_or_hull.vertex_points()
    elif isinstance(curve_or_hull, RocCurve):
        pts = curve_or_hull.roc_points()
    else:
        raise TypeError(f"expected a RocCurve or RocchHull, got {curve_or_hull!r}")
    area = 0.0
    for a, b in zip(pts, pts[1:]):
        area += (b.fp - a.fp) * (a.tp + b.tp) / 2.0
    return area
