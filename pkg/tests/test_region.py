import itertools
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from coopic.region import (
    HalfSpace,
    RateRegion,
    UnboundedRegionError,
    conv_union,
    contains,
    inflate,
    max_weighted,
    region_from_points,
    same_region,
    vertices,
)


def box(x, y):
    return RateRegion([HalfSpace(1, 0, x), HalfSpace(0, 1, y)])


def brute_vertices(region, tol=1e-9):
    """Pairwise intersections of all boundary lines and axes, filtered and hulled."""
    lines = [(h.a1, h.a2, h.b) for h in region.halfspaces] + [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)]
    pts = []
    for (a1, a2, b), (c1, c2, d) in itertools.combinations(lines, 2):
        det = a1 * c2 - a2 * c1
        if abs(det) < 1e-12:
            continue
        x = (b * c2 - a2 * d) / det
        y = (a1 * d - b * c1) / det
        if region.contains_point((x, y), tol):
            pts.append((max(x, 0.0), max(y, 0.0)))
    return extreme_points(pts)


def extreme_points(pts, tol=1e-9):
    """Upper-right boundary from (0, ymax) to (xmax, 0), collinear points dropped."""
    pts = sorted(set((round(x, 9), round(y, 9)) for x, y in pts), key=lambda p: (p[0], -p[1]))
    xmax = max(p[0] for p in pts)
    ymax = max(p[1] for p in pts)
    pts = [p for p in pts if p != (0.0, 0.0) or (xmax == 0.0 and ymax == 0.0)]
    chain = []
    for p in [(0.0, ymax)] + pts + [(xmax, 0.0)]:
        while len(chain) >= 2:
            o, a = chain[-2], chain[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross >= -tol:
                chain.pop()
            else:
                break
        if not chain or abs(chain[-1][0] - p[0]) > tol or abs(chain[-1][1] - p[1]) > tol:
            chain.append(p)
    return chain


def assert_same_points(got, expected, tol=1e-7):
    assert len(got) == len(expected), (got, expected)
    for (x1, y1), (x2, y2) in zip(got, expected):
        assert x1 == pytest.approx(x2, abs=tol) and y1 == pytest.approx(y2, abs=tol)


coef = st.integers(min_value=0, max_value=4)
rhs = st.integers(min_value=0, max_value=12)


@st.composite
def regions(draw):
    rows = draw(st.lists(st.tuples(coef, coef, rhs).filter(lambda r: r[0] or r[1]), min_size=0, max_size=6))
    rows = [HalfSpace(*r) for r in rows]
    rows += [HalfSpace(1, 0, draw(rhs)), HalfSpace(0, 1, draw(rhs))]
    return RateRegion(rows)


def test_unit_box():
    assert vertices(box(1, 1)) == [(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]


def test_clipped_box():
    r = RateRegion([HalfSpace(1, 0, 2), HalfSpace(0, 1, 2), HalfSpace(1, 1, 3)])
    assert_same_points(vertices(r), [(0, 2), (1, 2), (2, 1), (2, 0)])


def test_pentagon_against_brute_force():
    r = RateRegion(
        [HalfSpace(1, 0, 3), HalfSpace(0, 1, 3), HalfSpace(1, 1, 4), HalfSpace(2, 1, 6), HalfSpace(1, 2, 6)]
    )
    assert_same_points(vertices(r), brute_vertices(r))
    assert_same_points(vertices(r), [(0, 3), (2, 2), (3, 0)])


@given(regions())
def test_vertices_match_brute_force(r):
    assert_same_points(vertices(r), brute_vertices(r))


@given(regions())
def test_vertices_are_feasible(r):
    for v in r.vertices():
        assert r.contains_point(v)


def test_unbounded_region_is_rejected():
    with pytest.raises(UnboundedRegionError):
        RateRegion([HalfSpace(1, 0, 1)]).vertices()


@pytest.mark.parametrize("args", [(-1, 1, 1), (0, 0, 1), (1, 1, -0.5), (1, math.nan, 1)])
def test_bad_halfspaces(args):
    with pytest.raises(ValueError):
        HalfSpace(*args)


def test_tiny_negative_bound_is_clamped():
    assert HalfSpace(1, 1, -1e-12).b == 0.0


def test_conv_union_examples():
    a, b = box(2, 1), box(1, 2)
    u = conv_union(a, b)
    assert u.contains_point((1.5, 1.5))
    assert not u.contains_point((1.6, 1.6))
    assert same_region(conv_union(a, a), a)


@given(regions(), regions())
def test_conv_union_contains_both(a, b):
    u = conv_union(a, b)
    assert contains(u, a, 1e-7)
    assert contains(u, b, 1e-7)
    # Every hull vertex comes from one of the two regions.
    for v in u.vertices():
        assert a.contains_point(v, 1e-7) or b.contains_point(v, 1e-7) or _on_segment_between(v, a, b)


def _on_segment_between(v, a, b):
    return any(
        abs((q[0] - p[0]) * (v[1] - p[1]) - (q[1] - p[1]) * (v[0] - p[0])) < 1e-7
        for p in a.vertices()
        for q in b.vertices()
    )


def test_inflate_examples():
    assert inflate(RateRegion([HalfSpace(1, 1, 3)]), 2).halfspaces[0].b == 7
    assert inflate(RateRegion([HalfSpace(2, 1, 6)]), 1).halfspaces[0].b == 9
    r = box(1, 2)
    assert same_region(inflate(r, 0), r)
    with pytest.raises(ValueError):
        inflate(r, -1)


@given(regions(), st.floats(min_value=0, max_value=5))
def test_inflate_is_minkowski_sum_with_box(r, g):
    grown = inflate(r, g)
    for v in r.vertices():
        assert grown.contains_point((v[0] + g, v[1] + g), 1e-7)
    assert contains(grown, r)


def test_contains_examples():
    unit = box(1, 1)
    assert contains(inflate(unit, 1), unit, 0.0)
    result = contains(unit, RateRegion([HalfSpace(1, 0, 2), HalfSpace(0, 1, 0.5)]), 1e-9)
    assert not result
    assert result.witness == (2.0, 0.0)
    assert result.excess == pytest.approx(1.0)


@given(regions(), regions(), regions())
def test_contains_is_transitive(a, b, c):
    tol = 1e-9
    # Nest the draws so that both premises hold; random triples rarely do.
    b = conv_union(b, c)
    a = conv_union(a, b)
    assert contains(a, b, tol) and contains(b, c, tol)
    assert contains(a, c, 2 * tol)


def test_max_weighted_examples():
    assert max_weighted(box(1, 1), 1, 1) == (2.0, (1.0, 1.0))
    r = RateRegion([HalfSpace(1, 1, 3), HalfSpace(1, 0, 2), HalfSpace(0, 1, 2)])
    assert max_weighted(r, 2, 1) == (5.0, (2.0, 1.0))
    with pytest.raises(ValueError):
        max_weighted(r, 0, 0)


@given(regions(), st.floats(min_value=0.1, max_value=10), st.floats(min_value=0.1, max_value=10), st.floats(min_value=0.1, max_value=10))
def test_max_weighted_scaling(r, m1, m2, c):
    value, _ = max_weighted(r, m1, m2)
    scaled, _ = max_weighted(r, c * m1, c * m2)
    assert scaled == pytest.approx(c * value, rel=1e-9, abs=1e-9)


@given(regions())
def test_json_round_trip(r):
    back = RateRegion.from_json(r.to_json())
    assert back.halfspaces == r.halfspaces
    assert same_region(back, r)


def test_from_dict_needs_halfspaces():
    with pytest.raises(ValueError):
        RateRegion.from_dict({"vertices": []})


def test_mirrored_swaps_rates():
    r = RateRegion([HalfSpace(1, 0, 1), HalfSpace(0, 1, 3), HalfSpace(2, 1, 4)])
    assert_same_points(r.mirrored().vertices(), [(y, x) for x, y in reversed(r.vertices())])


def test_region_from_points_single_point():
    r = region_from_points([(2.0, 3.0)])
    assert_same_points(r.vertices(), [(0, 3), (2, 3), (2, 0)])


@given(regions())
def test_vertex_halfspace_round_trip(r):
    rebuilt = region_from_points(r.vertices())
    assert_same_points(rebuilt.vertices(), r.vertices(), tol=1e-9)


@given(regions(), regions(), regions())
def test_conv_union_commutes_and_associates(a, b, c):
    assert_same_points(conv_union(a, b).vertices(), conv_union(b, a).vertices(), tol=1e-9)
    left = conv_union(conv_union(a, b), c)
    right = conv_union(a, conv_union(b, c))
    assert_same_points(left.vertices(), right.vertices(), tol=1e-9)


@given(regions(), regions(), st.floats(min_value=0, max_value=5), st.floats(min_value=0, max_value=5))
def test_support_of_union_is_max_of_supports(a, b, m1, m2):
    assume(m1 > 0 or m2 > 0)
    value, _ = max_weighted(conv_union(a, b), m1, m2)
    expected = max(max_weighted(a, m1, m2)[0], max_weighted(b, m1, m2)[0])
    assert value == pytest.approx(expected, abs=1e-9)


@given(regions(), st.floats(min_value=0, max_value=5))
def test_inflated_region_contains_original_exactly(r, g):
    assert contains(inflate(r, g), r, 0.0)


def test_collinear_points_are_not_vertices():
    r = region_from_points([(0, 3), (1, 2.5), (2, 2), (3, 0)])
    assert_same_points(r.vertices(), [(0, 3), (2, 2), (3, 0)])
    # Two rows of slope -1/2 that differ only by rounding produce one edge.
    r = RateRegion([HalfSpace(1, 2, 6), HalfSpace(1, 2 + 1e-15, 6), HalfSpace(1, 0, 2), HalfSpace(0, 1, 3)])
    assert_same_points(r.vertices(), [(0, 3), (2, 2), (2, 0)])
