import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coopic.bounds import StrategyOrder, build_two_round, two_round_rate_system
from coopic.channel import Regime, classify
from coopic.fm import IneqSystem, Row, eliminate, reduce, to_region
from coopic.region import contains, same_region
from conftest import random_params


def rows_of(system):
    return {(r.coeffs, r.rhs) for r in system.rows}


def test_single_pair():
    s = IneqSystem(("x", "y")).add({"x": 1, "y": 1}, 2).add({"x": -1}, 0)
    out = eliminate(s, "x")
    assert out.variables == ("y",)
    assert rows_of(out) == {((1.0,), 2.0)}


def test_infeasibility_survives():
    s = IneqSystem(("x",)).add({"x": 1}, 1).add({"x": -1}, -3)
    out = eliminate(s, "x")
    assert rows_of(out) == {((), -2.0)}


def test_unknown_variable_and_bad_rows():
    s = IneqSystem(("x", "y"))
    with pytest.raises(ValueError):
        s.add({"z": 1}, 0)
    with pytest.raises(ValueError):
        s.add({"x": float("inf")}, 0)
    with pytest.raises(KeyError):
        eliminate(s, "z")
    with pytest.raises(ValueError):
        IneqSystem(("x", "x"))
    with pytest.raises(ValueError):
        IneqSystem(("x",), [Row((1.0, 2.0), 0.0)])


def test_duplicate_rows_keep_the_tightest():
    s = IneqSystem(("x", "y")).add({"x": 1, "y": 1}, 5).add({"x": 2, "y": 2}, 6).add({"x": -1}, 0)
    out = eliminate(s, "y")
    assert rows_of(out) == {((-1.0,), 0.0)}


def test_substitute():
    s = IneqSystem(("R1", "R1c", "R1p")).add({"R1c": 1, "R1p": 1}, 4)
    out = s.substitute("R1p", {"R1": 1, "R1c": -1})
    assert rows_of(out) == {((1.0, 0.0), 4.0)}


small = st.integers(min_value=-3, max_value=3)


@st.composite
def systems(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    s = IneqSystem(("x", "y", "z"))
    for _ in range(n):
        s.add({"x": draw(small), "y": draw(small), "z": draw(small)}, draw(st.integers(min_value=-5, max_value=10)))
    return s


def z_interval(system, point):
    lo, hi = -np.inf, np.inf
    k = system.index("z")
    for r in system.rows:
        rest = sum(c * point[v] for c, v in zip(r.coeffs, system.variables) if v != "z")
        c = r.coeffs[k]
        if c > 0:
            hi = min(hi, (r.rhs - rest) / c)
        elif c < 0:
            lo = max(lo, (r.rhs - rest) / c)
        elif rest > r.rhs + 1e-9:
            return 1.0, 0.0
    return lo, hi


@given(systems(), st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=20))
def test_projection_is_exact_on_grid_points(system, pts):
    projected = eliminate(system, "z")
    for x, y in pts:
        lo, hi = z_interval(system, {"x": x, "y": y})
        extendable = lo <= hi + 1e-9
        assert projected.satisfied_by({"x": x, "y": y}, 1e-9) == extendable


@given(systems())
def test_elimination_order_does_not_matter(system):
    a = eliminate(eliminate(system, "z"), "y")
    b = eliminate(eliminate(system, "y"), "z")
    for x in np.linspace(-6, 6, 49):
        assert a.satisfied_by({"x": x}) == b.satisfied_by({"x": x})


def test_reduce_examples():
    s = IneqSystem(("R1", "R2")).add({"R1": 1}, 1).add({"R1": 1}, 2)
    out = reduce(s)
    assert [r for r in out.rows if r.label != "nonnegative"] == [Row((1.0, 0.0), 1.0)]

    s = IneqSystem(("R1", "R2")).add({"R1": 1, "R2": 1}, 4).add({"R1": 1}, 2).add({"R2": 1}, 2)
    out = reduce(s)
    assert len([r for r in out.rows if r.label != "nonnegative"]) == 3


def test_to_region_rejects_cutting_rows():
    s = IneqSystem(("R1", "R2")).add({"R1": 1}, 2).add({"R2": 1}, 2).add({"R1": 1, "R2": -1}, 0)
    with pytest.raises(ValueError):
        to_region(s)


def _project(params):
    system = two_round_rate_system(params)
    for v in system.variables:
        if v not in ("R1", "R2"):
            system = eliminate(system, v)
    return system


def test_projection_matches_direct_region(rng):
    seen = set()
    for p in random_params(rng, 400):
        regime = classify(p)
        if regime is Regime.MIXED21:
            p, regime = p.swapped(), Regime.MIXED12
        if regime not in (Regime.WEAK, Regime.MIXED12):
            continue
        seen.add(regime)
        projected = to_region(_project(p))
        direct = build_two_round(p, StrategyOrder.TWO_ROUND_2_1_2)
        assert same_region(projected, direct, 1e-6), p
    assert seen == {Regime.WEAK, Regime.MIXED12}


def test_weak_projection_row_count(rng):
    # After reduction the surviving facets all come from the directly listed rows.
    for p in random_params(rng, 300):
        if classify(p) is not Regime.WEAK:
            continue
        direct = build_two_round(p, StrategyOrder.TWO_ROUND_2_1_2)
        reduced = reduce(_project(p))
        facets = [r for r in reduced.rows if r.label != "nonnegative"]
        slopes = {(h.a1 / max(h.a1, h.a2), h.a2 / max(h.a1, h.a2)) for h in direct.halfspaces}
        assert len(facets) <= len(direct.halfspaces)
        for r in facets:
            scale = max(r.coeffs)
            assert any(np.allclose((r.coeffs[0] / scale, r.coeffs[1] / scale), s) for s in slopes)


def test_projection_has_no_leftover_variables():
    system = IneqSystem(("R1", "R2", "a", "b"))
    for coeffs in itertools.product((0, 1), repeat=4):
        if any(coeffs):
            system.add(dict(zip(system.variables, coeffs)), 3)
    out = eliminate(eliminate(system, "a"), "b")
    assert out.variables == ("R1", "R2")
    assert contains(to_region(out), to_region(reduce(out)), 1e-9)
