"""Downward-closed convex polygons in the (R1, R2) rate plane.

A region is a list of halfspaces ``a1*R1 + a2*R2 <= b`` with nonnegative
coefficients, intersected with the first quadrant. Geometric predicates use
an absolute tolerance of 1e-9 bits.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "HalfSpace",
    "RateRegion",
    "Containment",
    "UnboundedRegionError",
    "vertices",
    "conv_union",
    "inflate",
    "contains",
    "same_region",
    "max_weighted",
    "region_from_points",
    "GEOM_TOL",
]

GEOM_TOL = 1e-9

Point = Tuple[float, float]


class UnboundedRegionError(ValueError):
    pass


@dataclass(frozen=True)
class HalfSpace:
    a1: float
    a2: float
    b: float
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        a1, a2, b = float(self.a1), float(self.a2), float(self.b)
        if not (math.isfinite(a1) and math.isfinite(a2) and math.isfinite(b)):
            raise ValueError(f"halfspace coefficients must be finite: {self}")
        if a1 < 0.0 or a2 < 0.0 or (a1 == 0.0 and a2 == 0.0):
            raise ValueError(f"halfspace needs a1, a2 >= 0, not both zero: {self}")
        if b < 0.0:
            if b < -GEOM_TOL:
                raise ValueError(f"halfspace with negative bound excludes the origin: {self}")
            b = 0.0
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "b", b)

    def slack(self, point: Point) -> float:
        """Normalized violation in bits; positive means the point is outside."""
        return (self.a1 * point[0] + self.a2 * point[1] - self.b) / max(self.a1, self.a2)

    def shifted(self, amount: float) -> "HalfSpace":
        return HalfSpace(self.a1, self.a2, self.b + amount, self.label)

    def mirrored(self) -> "HalfSpace":
        return HalfSpace(self.a2, self.a1, self.b, self.label)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"a1": self.a1, "a2": self.a2, "b": self.b}
        if self.label:
            out["label"] = self.label
        return out

    def __str__(self) -> str:
        text = f"{self.a1:g}*R1 + {self.a2:g}*R2 <= {self.b:.12g}"
        return f"{text}  [{self.label}]" if self.label else text


class RateRegion:
    """Immutable downward-closed polygon; vertices are computed lazily."""

    __slots__ = ("_halfspaces", "_vertices")

    def __init__(self, halfspaces: Iterable[HalfSpace]) -> None:
        hs = tuple(halfspaces)
        for h in hs:
            if not isinstance(h, HalfSpace):
                raise TypeError(f"expected HalfSpace, got {type(h).__name__}")
        self._halfspaces = hs
        self._vertices: Optional[Tuple[Point, ...]] = None

    @property
    def halfspaces(self) -> Tuple[HalfSpace, ...]:
        return self._halfspaces

    def vertices(self) -> List[Point]:
        if self._vertices is None:
            self._vertices = tuple(_enumerate_vertices(self._halfspaces))
        return list(self._vertices)

    def mirrored(self) -> "RateRegion":
        """Swap the roles of the two users."""
        return RateRegion(h.mirrored() for h in self._halfspaces)

    def contains_point(self, point: Point, tol: float = GEOM_TOL) -> bool:
        if point[0] < -tol or point[1] < -tol:
            return False
        return all(h.slack(point) <= tol for h in self._halfspaces)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "halfspaces": [h.to_dict() for h in self._halfspaces],
            "vertices": [[x, y] for x, y in self.vertices()],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RateRegion":
        try:
            rows = data["halfspaces"]
        except (KeyError, TypeError):
            raise ValueError("region JSON needs a 'halfspaces' list") from None
        return cls(HalfSpace(r["a1"], r["a2"], r["b"], r.get("label", "")) for r in rows)

    @classmethod
    def from_json(cls, text: str) -> "RateRegion":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"RateRegion({len(self._halfspaces)} halfspaces)"


def _enumerate_vertices(halfspaces: Sequence[HalfSpace]) -> List[Point]:
    """Walk the lower envelope of the boundary lines from R1 = 0 to max R1.

    Lines with a2 > 0 are read as R2 <= c - m*R1 with m = a1/a2; the
    envelope is built by the usual convex-hull trick after sorting by slope.
    """
    with_r1 = [h.b / h.a1 for h in halfspaces if h.a1 > 0.0]
    lines = [(h.a1 / h.a2, h.b / h.a2) for h in halfspaces if h.a2 > 0.0]
    if not with_r1 or not lines:
        raise UnboundedRegionError("region is unbounded: need a halfspace bounding each rate")
    r1_max = min(with_r1)

    # Flattest first; among equal slopes only the lowest intercept matters.
    lines.sort(key=lambda mc: (mc[0], mc[1]))
    dedup: List[Tuple[float, float]] = []
    for m, c in lines:
        if dedup and m == dedup[-1][0]:
            continue
        dedup.append((m, c))

    def cross_x(l1: Tuple[float, float], l2: Tuple[float, float]) -> float:
        # R1 where two lines meet; slopes are strictly increasing.
        return (l2[1] - l1[1]) / (l2[0] - l1[0])

    hull: List[Tuple[float, float]] = []
    for line in dedup:
        # A steeper line with a lower intercept is below everywhere on R1 >= 0.
        while hull and line[1] <= hull[-1][1]:
            hull.pop()
        while len(hull) >= 2 and cross_x(hull[-2], hull[-1]) >= cross_x(hull[-1], line):
            hull.pop()
        hull.append(line)

    points: List[Point] = []
    x = 0.0
    idx = 0
    # Skip envelope pieces that end before R1 = 0.
    while idx + 1 < len(hull) and cross_x(hull[idx], hull[idx + 1]) <= 0.0:
        idx += 1
    points.append((0.0, hull[idx][1]))
    while idx + 1 < len(hull):
        x_next = cross_x(hull[idx], hull[idx + 1])
        if x_next >= r1_max:
            break
        idx += 1
        x = x_next
        m, c = hull[idx]
        points.append((x, c - m * x))
    m, c = hull[idx]
    points.append((r1_max, max(c - m * r1_max, 0.0)))
    points.append((r1_max, 0.0))
    return _merge_close(points)


def _merge_close(points: Sequence[Point], tol: float = GEOM_TOL) -> List[Point]:
    """Clip to the quadrant, merge near-duplicates and drop points lying on a straight run."""
    out: List[Point] = []
    for p in points:
        p = (max(p[0], 0.0), max(p[1], 0.0))
        if out and abs(out[-1][0] - p[0]) <= tol and abs(out[-1][1] - p[1]) <= tol:
            continue
        while len(out) >= 2 and _off_line(out[-2], out[-1], p) <= tol:
            out.pop()
        out.append(p)
    return out


def _off_line(o: Point, a: Point, b: Point) -> float:
    """How far ``a`` bulges outward past the segment from ``o`` to ``b``."""
    span = math.hypot(b[0] - o[0], b[1] - o[1])
    if span == 0.0:
        return 0.0
    return -_cross(o, a, b) / span


def vertices(region: RateRegion) -> List[Point]:
    """Extreme points counterclockwise from (0, max R2) to (max R1, 0)."""
    return region.vertices()


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def region_from_points(points: Iterable[Point]) -> RateRegion:
    """Smallest downward-closed convex region containing the given points."""
    pts = [(max(float(x), 0.0), max(float(y), 0.0)) for x, y in points]
    if not pts:
        raise ValueError("need at least one point")
    x_max = max(p[0] for p in pts)
    y_max = max(p[1] for p in pts)
    pts.extend([(0.0, y_max), (x_max, 0.0)])
    pts.sort(key=lambda p: (p[0], -p[1]))
    chain: List[Point] = []
    for p in pts:
        while len(chain) >= 2 and _off_line(chain[-2], chain[-1], p) <= GEOM_TOL:
            chain.pop()
        if chain and abs(chain[-1][0] - p[0]) <= GEOM_TOL and abs(chain[-1][1] - p[1]) <= GEOM_TOL:
            continue
        chain.append(p)
    halfspaces = []
    for p, q in zip(chain, chain[1:]):
        a1, a2 = p[1] - q[1], q[0] - p[0]
        scale = max(a1, a2)
        if scale <= GEOM_TOL * GEOM_TOL:
            continue
        a1, a2 = max(a1 / scale, 0.0), max(a2 / scale, 0.0)
        if a1 < 1e-15:
            a1 = 0.0
        if a2 < 1e-15:
            a2 = 0.0
        halfspaces.append(HalfSpace(a1, a2, max(a1 * p[0] + a2 * p[1], a1 * q[0] + a2 * q[1])))
    if not any(h.a2 > 0 for h in halfspaces):
        halfspaces.append(HalfSpace(0.0, 1.0, y_max))
    if not any(h.a1 > 0 for h in halfspaces):
        halfspaces.append(HalfSpace(1.0, 0.0, x_max))
    return RateRegion(halfspaces)


def conv_union(ra: RateRegion, rb: RateRegion) -> RateRegion:
    """Convex hull of the union, rebuilt as halfspaces."""
    return region_from_points(ra.vertices() + rb.vertices())


def inflate(region: RateRegion, g: float) -> RateRegion:
    """Minkowski sum with the box [0, g] x [0, g]."""
    if g < 0.0:
        raise ValueError(f"inflation must be >= 0, got {g!r}")
    return RateRegion(h.shifted(g * (h.a1 + h.a2)) for h in region.halfspaces)


@dataclass(frozen=True)
class Containment:
    """Result of a containment test; the witness is the worst inner vertex."""

    holds: bool
    excess: float
    witness: Optional[Point] = None
    halfspace: Optional[HalfSpace] = None

    def __bool__(self) -> bool:
        return self.holds


def contains(outer_candidate: RateRegion, inner: RateRegion, tol: float = GEOM_TOL) -> Containment:
    """Check every vertex of ``inner`` against every halfspace of ``outer_candidate``.

    ``excess`` is the largest normalized slack found, so it is negative when
    the containment has room to spare. Ties go to the vertex nearest the R1
    axis, i.e. the last one along the boundary.
    """
    worst = -math.inf
    witness: Optional[Point] = None
    worst_h: Optional[HalfSpace] = None
    for v in inner.vertices():
        for h in outer_candidate.halfspaces:
            s = h.slack(v)
            if s > worst or (s == worst and v != witness):
                worst, witness, worst_h = s, v, h
    return Containment(worst <= tol, worst, witness, worst_h)


def same_region(ra: RateRegion, rb: RateRegion, tol: float = GEOM_TOL) -> bool:
    return bool(contains(ra, rb, tol)) and bool(contains(rb, ra, tol))


def max_weighted(region: RateRegion, mu1: float, mu2: float) -> Tuple[float, Point]:
    if mu1 < 0.0 or mu2 < 0.0 or (mu1 == 0.0 and mu2 == 0.0):
        raise ValueError("weights must be nonnegative and not both zero")
    best = max(region.vertices(), key=lambda v: mu1 * v[0] + mu2 * v[1])
    return mu1 * best[0] + mu2 * best[1], best
