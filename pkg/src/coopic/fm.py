"""Fourier-Motzkin elimination on small systems of linear inequalities.

Rows read ``sum(coeffs[v] * v) <= rhs``. Systems here have a handful of
variables and a few dozen rows, so plain pairwise combination with exact
duplicate pruning is enough.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .region import HalfSpace, RateRegion, contains

__all__ = ["Row", "IneqSystem", "eliminate", "reduce", "to_region", "RATE_VARS"]

RATE_VARS = ("R1", "R2")
_ZERO = 1e-12


@dataclass(frozen=True)
class Row:
    coeffs: Tuple[float, ...]
    rhs: float
    label: str = ""


class IneqSystem:
    """Named variables and rows ``<c, x> <= rhs``."""

    def __init__(self, variables: Sequence[str], rows: Iterable[Row] = ()) -> None:
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        self.variables: Tuple[str, ...] = tuple(variables)
        self.rows: List[Row] = []
        for r in rows:
            self._append(r)

    def _append(self, row: Row) -> None:
        if len(row.coeffs) != len(self.variables):
            raise ValueError("row length does not match the variable list")
        if not all(math.isfinite(c) for c in row.coeffs) or not math.isfinite(row.rhs):
            raise ValueError("rows must be finite")
        self.rows.append(row)

    def add(self, coeffs: Mapping[str, float], rhs: float, label: str = "") -> "IneqSystem":
        unknown = set(coeffs) - set(self.variables)
        if unknown:
            raise ValueError(f"unknown variables: {sorted(unknown)}")
        self._append(Row(tuple(float(coeffs.get(v, 0.0)) for v in self.variables), float(rhs), label))
        return self

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"variable {var!r} is not in the system") from None

    def substitute(self, var: str, expression: Mapping[str, float]) -> "IneqSystem":
        """Replace ``var`` by a linear expression in the other variables."""
        k = self.index(var)
        remaining = [v for v in self.variables if v != var]
        unknown = set(expression) - set(remaining)
        if unknown:
            raise ValueError(f"expression uses unknown variables: {sorted(unknown)}")
        out = IneqSystem(remaining)
        for r in self.rows:
            coeffs = {v: c for v, c in zip(self.variables, r.coeffs) if v != var}
            for v, c in expression.items():
                coeffs[v] = coeffs.get(v, 0.0) + r.coeffs[k] * c
            out.add(coeffs, r.rhs, r.label)
        return out

    def satisfied_by(self, point: Mapping[str, float], tol: float = 1e-9) -> bool:
        x = [point[v] for v in self.variables]
        return all(sum(c * xi for c, xi in zip(r.coeffs, x)) <= r.rhs + tol for r in self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __str__(self) -> str:
        lines = []
        for r in self.rows:
            terms = " ".join(f"{c:+g}*{v}" for c, v in zip(r.coeffs, self.variables) if c != 0.0) or "0"
            lines.append(f"{terms} <= {r.rhs:.12g}" + (f"  [{r.label}]" if r.label else ""))
        return "\n".join(lines)


def _normalize(coeffs: Sequence[float], rhs: float) -> Tuple[Tuple[float, ...], float]:
    scale = max((abs(c) for c in coeffs), default=0.0)
    if scale <= _ZERO:
        return tuple(0.0 for _ in coeffs), rhs
    return tuple(0.0 if abs(c / scale) <= _ZERO else c / scale for c in coeffs), rhs / scale


def _prune(rows: Iterable[Row]) -> List[Row]:
    # Rows with the same normalized coefficients: only the tightest survives.
    best: Dict[Tuple[float, ...], Row] = {}
    order: List[Tuple[float, ...]] = []
    for r in rows:
        coeffs, rhs = _normalize(r.coeffs, r.rhs)
        key = tuple(round(c, 12) for c in coeffs)
        if key not in best:
            order.append(key)
            best[key] = Row(coeffs, rhs, r.label)
        elif rhs < best[key].rhs:
            best[key] = Row(coeffs, rhs, r.label)
    return [best[k] for k in order]


def eliminate(system: IneqSystem, var: str) -> IneqSystem:
    """Project ``var`` out of the system."""
    k = system.index(var)
    keep, pos, neg = [], [], []
    for r in system.rows:
        c = r.coeffs[k]
        if c > _ZERO:
            pos.append(r)
        elif c < -_ZERO:
            neg.append(r)
        else:
            keep.append(r)
    combined = list(keep)
    for p in pos:
        for n in neg:
            wp, wn = -n.coeffs[k], p.coeffs[k]
            coeffs = [wp * a + wn * b for a, b in zip(p.coeffs, n.coeffs)]
            coeffs[k] = 0.0
            label = f"{p.label}+{n.label}" if p.label or n.label else ""
            combined.append(Row(tuple(coeffs), wp * p.rhs + wn * n.rhs, label))
    remaining = [v for i, v in enumerate(system.variables) if i != k]
    rows = [Row(tuple(c for i, c in enumerate(r.coeffs) if i != k), r.rhs, r.label) for r in _prune(combined)]
    return IneqSystem(remaining, rows)


def to_region(system: IneqSystem, tol: float = 1e-9) -> RateRegion:
    """Read a system over (R1, R2) as a downward-closed rate region.

    Rows with only nonpositive coefficients must hold on the whole quadrant,
    and rows with mixed signs must be implied by the others; anything else
    means the projection is not a downward-closed region.
    """
    if set(system.variables) != set(RATE_VARS) or len(system.variables) != 2:
        raise ValueError(f"expected a system over {RATE_VARS}, got {system.variables}")
    i1, i2 = system.index("R1"), system.index("R2")
    positive: List[HalfSpace] = []
    mixed: List[Row] = []
    for r in system.rows:
        a1, a2 = r.coeffs[i1], r.coeffs[i2]
        if a1 >= 0.0 and a2 >= 0.0 and (a1 > 0.0 or a2 > 0.0):
            if r.rhs < -tol:
                raise ValueError(f"projection is empty: row {r} excludes the origin")
            positive.append(HalfSpace(a1, a2, max(r.rhs, 0.0), r.label))
        elif a1 <= 0.0 and a2 <= 0.0:
            # Constant rows and lower bounds; the origin must satisfy them.
            if r.rhs < -tol:
                raise ValueError(f"projection is empty or excludes the origin: row {r}")
        else:
            mixed.append(r)
    region = RateRegion(positive)
    for r in mixed:
        for v in region.vertices():
            lhs = r.coeffs[i1] * v[0] + r.coeffs[i2] * v[1]
            if lhs > r.rhs + tol * max(1.0, max(abs(c) for c in r.coeffs)):
                raise ValueError(f"row {r} cuts the region; it is not downward-closed")
    return region


def reduce(system: IneqSystem, tol: float = 1e-9) -> IneqSystem:
    """Keep only rows that are tight at some vertex, plus R1 >= 0 and R2 >= 0.

    A row touching the region at a single corner is kept even though the
    others already imply it; among parallel rows only the tightest is kept.

    A rate left unbounded by the system is capped by a temporary far-away
    bound so that the remaining rows can still be checked.
    """
    region = _capped_region(system, tol)
    verts = region.vertices()
    i1, i2 = system.index("R1"), system.index("R2")
    kept: List[HalfSpace] = []
    seen = set()
    for h in region.halfspaces:
        if h.label == _CAP_LABEL:
            continue
        if not any(abs(h.slack(v)) <= tol for v in verts):
            continue
        scale = max(h.a1, h.a2)
        key = (round(h.a1 / scale, 9), round(h.a2 / scale, 9))
        if key in seen:
            continue
        seen.add(key)
        kept.append(h)
    check = RateRegion(kept + [h for h in region.halfspaces if h.label == _CAP_LABEL])
    if not (contains(check, region, tol) and contains(region, check, tol)):
        raise AssertionError("row reduction changed the region")  # pragma: no cover
    out = IneqSystem(system.variables)
    for h in kept:
        coeffs = [0.0, 0.0]
        coeffs[i1], coeffs[i2] = h.a1, h.a2
        out._append(Row(tuple(coeffs), h.b, h.label))
    for i in (i1, i2):
        coeffs = [0.0, 0.0]
        coeffs[i] = -1.0
        out._append(Row(tuple(coeffs), 0.0, "nonnegative"))
    return out


_CAP_LABEL = "__cap__"


def _capped_region(system: IneqSystem, tol: float) -> RateRegion:
    region = to_region(system, tol) if _bounded(system) else None
    if region is not None:
        return region
    cap = 1e6 * (1.0 + max((abs(r.rhs) for r in system.rows), default=0.0))
    capped = IneqSystem(system.variables, system.rows)
    capped.add({"R1": 1.0}, cap, _CAP_LABEL)
    capped.add({"R2": 1.0}, cap, _CAP_LABEL)
    return to_region(capped, tol)


def _bounded(system: IneqSystem) -> bool:
    i1, i2 = system.index("R1"), system.index("R2")
    rows = [r for r in system.rows if r.coeffs[i1] >= 0.0 and r.coeffs[i2] >= 0.0]
    return any(r.coeffs[i1] > 0.0 for r in rows) and any(r.coeffs[i2] > 0.0 for r in rows)
