"""Planar similarity algebra and robust triangle contact classification.

Everything here works on plain floats.  Exact rational arithmetic is not an
option for this family of systems (the central map is a rotation by an
irrational angle and one contraction ratio comes out of a root finder), so
all downstream certification carries an explicit tolerance ``eps`` instead.

Conventions:

* similarities are orientation preserving, ``z -> ratio * e^{i angle} * z + t``;
* angles are stored wrapped to ``(-pi, pi]`` so composition is deterministic;
* triangles keep their vertices in counterclockwise order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator


class DegenerateCorrespondence(ValueError):
    """Raised when a point correspondence cannot define a similarity."""


class EpsTooLarge(ValueError):
    """Raised when a contact tolerance is too coarse for the triangles at hand."""


@dataclass(frozen=True)
class Point2:
    """Immutable planar point."""

    x: float
    y: float

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, factor: float) -> "Point2":
        return Point2(self.x * factor, self.y * factor)

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


ORIGIN = Point2(0.0, 0.0)


def distance(p: Point2, q: Point2) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def wrap_angle(theta: float) -> float:
    """Wrap an angle into ``(-pi, pi]``."""

    wrapped = math.fmod(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving contraction ``z -> ratio * e^{i angle} * z + translation``."""

    ratio: float
    angle: float
    translation: Point2

    def __post_init__(self) -> None:
        if not (0.0 < self.ratio < 1.0) and self.ratio != 1.0:
            raise ValueError(f"similarity ratio must lie in (0, 1], got {self.ratio}")
        if not (math.isfinite(self.ratio) and math.isfinite(self.angle)):
            raise ValueError("similarity parameters must be finite")

    def coefficients(self) -> tuple[float, float]:
        """Real and imaginary part of the linear coefficient ``ratio * e^{i angle}``."""

        return (self.ratio * math.cos(self.angle), self.ratio * math.sin(self.angle))


def similarity_apply(s: Similarity, p: Point2) -> Point2:
    a_re, a_im = s.coefficients()
    return Point2(
        a_re * p.x - a_im * p.y + s.translation.x,
        a_im * p.x + a_re * p.y + s.translation.y,
    )


def similarity_compose(s: Similarity, t: Similarity) -> Similarity:
    """Composition ``s o t``: apply ``t`` first, then ``s``."""

    shifted = similarity_apply(s, t.translation)
    return Similarity(s.ratio * t.ratio, wrap_angle(s.angle + t.angle), shifted)


def similarity_fixed_point(s: Similarity) -> Point2:
    """Solve ``(I - A) p = translation`` for ``A = ratio * R(angle)``.

    The matrix is invertible for every ratio below one, so no pivoting care
    is required beyond writing out the 2x2 inverse.
    """

    a_re, a_im = s.coefficients()
    m00 = 1.0 - a_re
    m01 = a_im
    m10 = -a_im
    m11 = 1.0 - a_re
    det = m00 * m11 - m01 * m10
    x = (m11 * s.translation.x - m01 * s.translation.y) / det
    y = (m00 * s.translation.y - m10 * s.translation.x) / det
    return Point2(x, y)


def similarity_from_correspondence(a1: Point2, b1: Point2, a2: Point2, b2: Point2) -> Similarity:
    """Unique orientation-preserving similarity mapping ``a1 -> b1`` and ``a2 -> b2``."""

    da = a2 - a1
    db = b2 - b1
    la = da.norm()
    lb = db.norm()
    if la == 0.0 or lb == 0.0:
        raise DegenerateCorrespondence("correspondence needs two distinct source and target points")
    ratio = lb / la
    angle = wrap_angle(math.atan2(da.cross(db), da.dot(db)))
    a_re = ratio * math.cos(angle)
    a_im = ratio * math.sin(angle)
    translation = Point2(
        b1.x - (a_re * a1.x - a_im * a1.y),
        b1.y - (a_im * a1.x + a_re * a1.y),
    )
    return Similarity(ratio, angle, translation)


@dataclass(frozen=True)
class Triangle:
    """Non-degenerate triangle with counterclockwise vertices and cached diameter."""

    vertices: tuple[Point2, Point2, Point2]
    diameter: float

    @staticmethod
    def from_vertices(v1: Point2, v2: Point2, v3: Point2) -> "Triangle":
        area2 = (v2 - v1).cross(v3 - v1)
        if area2 <= 0.0:
            raise ValueError("triangle vertices must be counterclockwise and non-degenerate")
        diam = max(distance(v1, v2), distance(v2, v3), distance(v3, v1))
        return Triangle((v1, v2, v3), diam)

    def edges(self) -> Iterator[tuple[Point2, Point2]]:
        v1, v2, v3 = self.vertices
        yield (v1, v2)
        yield (v2, v3)
        yield (v3, v1)

    def bounding_box(self) -> tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))


def transform_triangle(s: Similarity, tri: Triangle) -> Triangle:
    v1, v2, v3 = tri.vertices
    return Triangle(
        (similarity_apply(s, v1), similarity_apply(s, v2), similarity_apply(s, v3)),
        s.ratio * tri.diameter,
    )


def triangle_contains(tri: Triangle, p: Point2, eps: float) -> bool:
    """Point-in-triangle test with an ``eps`` fringe on the outside."""

    return _signed_clearance(tri, p) >= -eps


def _signed_clearance(tri: Triangle, p: Point2) -> float:
    """Signed distance to the boundary: positive inside, negative outside.

    For a counterclockwise triangle the inside is to the left of every edge.
    """

    worst = math.inf
    for a, b in tri.edges():
        e = b - a
        worst = min(worst, e.cross(p - a) / e.norm())
    return worst


def point_triangle_distance(p: Point2, tri: Triangle) -> float:
    if _signed_clearance(tri, p) >= 0.0:
        return 0.0
    return min(_point_segment_distance(p, a, b) for a, b in tri.edges())


def _point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return distance(p, a)
    t = (p - a).dot(ab) / denom
    t = max(0.0, min(1.0, t))
    return distance(p, a + ab.scaled(t))


def _segment_closest_pair(
    a0: Point2, a1: Point2, b0: Point2, b1: Point2
) -> tuple[float, Point2, Point2]:
    """Closest points of two segments; collinear overlap collapses to one witness pair."""

    u = a1 - a0
    v = b1 - b0
    w = a0 - b0
    a = u.dot(u)
    b = u.dot(v)
    c = v.dot(v)
    d = u.dot(w)
    e = v.dot(w)
    denom = a * c - b * b
    if denom > 1e-30:
        s = (b * e - c * d) / denom
        t = (a * e - b * d) / denom
        s = max(0.0, min(1.0, s))
        t = max(0.0, min(1.0, t))
        # clamped parameters are not jointly optimal in general; fix one and re-solve
        t = max(0.0, min(1.0, (b * s + e) / c)) if c > 0.0 else 0.0
        s = max(0.0, min(1.0, (b * t - d) / a)) if a > 0.0 else 0.0
    else:
        s = 0.0
        t = max(0.0, min(1.0, e / c)) if c > 0.0 else 0.0
    pa = a0 + u.scaled(s)
    pb = b0 + v.scaled(t)
    best = (distance(pa, pb), pa, pb)
    # endpoint sweeps guard against the clamped stationary point missing the optimum
    for p, q0, q1 in ((a0, b0, b1), (a1, b0, b1)):
        dist = _point_segment_distance(p, q0, q1)
        if dist < best[0]:
            qv = q1 - q0
            tt = 0.0 if qv.dot(qv) == 0.0 else max(0.0, min(1.0, (p - q0).dot(qv) / qv.dot(qv)))
            best = (dist, p, q0 + qv.scaled(tt))
    for p, q0, q1 in ((b0, a0, a1), (b1, a0, a1)):
        dist = _point_segment_distance(p, q0, q1)
        if dist < best[0]:
            qv = q1 - q0
            tt = 0.0 if qv.dot(qv) == 0.0 else max(0.0, min(1.0, (p - q0).dot(qv) / qv.dot(qv)))
            best = (dist, q0 + qv.scaled(tt), p)
    return best


def _collinear_overlap(
    a0: Point2, a1: Point2, b0: Point2, b1: Point2, eps: float
) -> tuple[Point2, Point2] | None:
    """Endpoints of the shared stretch when two segments run along one line."""

    u = a1 - a0
    lu = u.norm()
    if lu == 0.0:
        return None
    if abs(u.cross(b0 - a0)) / lu > eps or abs(u.cross(b1 - a0)) / lu > eps:
        return None
    t0 = (b0 - a0).dot(u) / (lu * lu)
    t1 = (b1 - a0).dot(u) / (lu * lu)
    lo = max(0.0, min(t0, t1))
    hi = min(1.0, max(t0, t1))
    if hi <= lo:
        return None
    return (a0 + u.scaled(lo), a0 + u.scaled(hi))


EMPTY = "empty"
SINGLE_VERTEX = "single_vertex"
OVERLAP = "overlap"


@dataclass(frozen=True)
class IntersectionClass:
    """Outcome of a pairwise triangle contact test.

    ``kind`` is one of ``empty``, ``single_vertex``, ``overlap``.  A single
    vertex contact carries the contact point and flags saying which of the two
    triangles hold it as a vertex (at least one always does).  ``detail`` is a
    short human-readable justification for overlap verdicts.
    """

    kind: str
    point: Point2 | None = None
    vertex_of_first: bool = False
    vertex_of_second: bool = False
    detail: str = ""

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    @property
    def is_single_vertex(self) -> bool:
        return self.kind == SINGLE_VERTEX

    @property
    def is_overlap(self) -> bool:
        return self.kind == OVERLAP


def _near_any_vertex(p: Point2, tri: Triangle, eps: float) -> bool:
    return any(distance(p, v) <= eps for v in tri.vertices)


def classify_triangle_intersection(t1: Triangle, t2: Triangle, eps: float) -> IntersectionClass:
    """Classify the intersection of two triangles as empty, one vertex, or overlap.

    The verdict is deliberately conservative: a contact that is not witnessed
    by a vertex of either triangle (within ``eps``), or any evidence of more
    than a single touching point, is reported as ``overlap``.  A false overlap
    shows up loudly in downstream certification, while a false empty or
    single-vertex verdict would silently accept a broken parameter set.
    """

    if eps <= 0.0:
        raise EpsTooLarge("eps must be positive")
    if eps >= 0.1 * min(t1.diameter, t2.diameter):
        raise EpsTooLarge(
            f"eps={eps} too coarse for triangles with diameters "
            f"{t1.diameter} and {t2.diameter}"
        )

    x0a, y0a, x1a, y1a = t1.bounding_box()
    x0b, y0b, x1b, y1b = t2.bounding_box()
    if x0a > x1b + eps or x0b > x1a + eps or y0a > y1b + eps or y0b > y1a + eps:
        return IntersectionClass(EMPTY)

    for v in t1.vertices:
        if _signed_clearance(t2, v) > eps:
            return IntersectionClass(OVERLAP, detail="vertex of first inside second")
    for v in t2.vertices:
        if _signed_clearance(t1, v) > eps:
            return IntersectionClass(OVERLAP, detail="vertex of second inside first")

    contacts: list[Point2] = []
    for v in t1.vertices:
        if point_triangle_distance(v, t2) <= eps:
            contacts.append(v)
    for v in t2.vertices:
        if point_triangle_distance(v, t1) <= eps:
            contacts.append(v)

    for e1 in t1.edges():
        for e2 in t2.edges():
            shared = _collinear_overlap(*e1, *e2, eps)
            if shared is not None and distance(*shared) > 3.0 * eps:
                return IntersectionClass(OVERLAP, detail="edges share a segment")
            dist, pa, pb = _segment_closest_pair(*e1, *e2)
            if dist <= eps:
                q = Point2(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y))
                if not (_near_any_vertex(q, t1, eps) or _near_any_vertex(q, t2, eps)):
                    return IntersectionClass(OVERLAP, detail="edge contact away from all vertices")
                contacts.append(q)

    if not contacts:
        return IntersectionClass(EMPTY)

    spread = max(distance(p, q) for p in contacts for q in contacts)
    if spread > 3.0 * eps:
        return IntersectionClass(OVERLAP, detail="contact set is not a single point")

    point = contacts[0]
    for v in t1.vertices + t2.vertices:
        if all(distance(v, c) <= 2.0 * eps for c in contacts):
            point = v
            break
    return IntersectionClass(
        SINGLE_VERTEX,
        point=point,
        vertex_of_first=_near_any_vertex(point, t1, eps),
        vertex_of_second=_near_any_vertex(point, t2, eps),
    )
