"""Seeded random sweeps over channel parameters.

Powers are drawn uniformly in dB, conferencing capacities uniformly in bits
and the aggregate phase uniformly in [0, 2*pi). A regime filter is applied
by redrawing, with a cap on the number of draws per accepted sample.
Reports are plain dicts that serialize to byte-stable JSON.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Tuple

import numpy as np

from .bounds import (
    GAP_BITS,
    CMAC_GAP_BITS,
    StrategyOrder,
    build_cmac,
    build_inner,
    build_outer,
    build_two_round,
    sym_one_round,
    sym_upper,
    two_round_rate_system,
)
from .channel import ChannelParams, Regime, classify, db_to_linear, power_split
from .fm import eliminate, to_region
from .mi import distortion_and_xi
from .region import RateRegion, contains, inflate

__all__ = [
    "TARGETS",
    "SweepConfig",
    "Violation",
    "GapReport",
    "SamplingError",
    "sample_params",
    "gap_sweep",
    "recheck_violation",
    "regions_for",
    "emit_region",
    "fm_crosscheck",
    "xi_sweep",
    "sym_gap_sweep",
    "to_json",
    "GENERATOR_NAME",
    "default_gap",
]

GENERATOR_NAME = "numpy.random.PCG64"
TARGETS = ("weak", "mixed", "strong", "cmac", "any")

_REGIME_MATCH: Dict[str, Callable[[Regime], bool]] = {
    "weak": lambda r: r is Regime.WEAK,
    "mixed": lambda r: r.is_mixed,
    "strong": lambda r: r is Regime.STRONG,
    "cmac": lambda r: True,
    "any": lambda r: True,
}


class SamplingError(RuntimeError):
    """The regime filter rejected too many draws in a row."""


def default_gap(target: str) -> float:
    if target == "cmac":
        return float(CMAC_GAP_BITS)
    if target == "mixed":
        return float(GAP_BITS[Regime.MIXED12])
    if target in ("weak", "strong"):
        return float(GAP_BITS[Regime(target)])
    raise ValueError(f"no stated gap for target {target!r}")


@dataclass(frozen=True)
class SweepConfig:
    count: int
    seed: int = 0
    target: str = "any"
    gap_bits: float = 0.0
    tol_bits: float = 1e-6
    snr_db_range: Tuple[float, float] = (0.0, 80.0)
    inr_db_range: Tuple[float, float] = (0.0, 80.0)
    cb_bits_range: Tuple[float, float] = (0.0, 40.0)
    symmetric: bool = False
    max_draws_per_sample: int = 10_000

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, got {self.target!r}")
        if not (self.gap_bits >= 0.0 and math.isfinite(self.gap_bits)):
            raise ValueError("gap_bits must be finite and >= 0")
        if not self.tol_bits >= 0.0:
            raise ValueError("tol_bits must be >= 0")
        for name in ("snr_db_range", "inr_db_range", "cb_bits_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"{name} must be a finite interval with lo <= hi")
        if self.cb_bits_range[0] < 0.0:
            raise ValueError("conferencing capacities cannot be negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.max_draws_per_sample < 1:
            raise ValueError("max_draws_per_sample must be >= 1")

    def header(self) -> Dict[str, Any]:
        return {
            "generator": GENERATOR_NAME,
            "seed": self.seed,
            "count": self.count,
            "target": self.target,
            "gap_bits": self.gap_bits,
            "tol_bits": self.tol_bits,
            "snr_db_range": list(self.snr_db_range),
            "inr_db_range": list(self.inr_db_range),
            "cb_bits_range": list(self.cb_bits_range),
            "symmetric": self.symmetric,
            "max_draws_per_sample": self.max_draws_per_sample,
        }


def _draw(rng: np.random.Generator, cfg: SweepConfig) -> ChannelParams:
    snr = rng.uniform(*cfg.snr_db_range, size=2)
    inr = rng.uniform(*cfg.inr_db_range, size=2)
    cb = rng.uniform(*cfg.cb_bits_range, size=2)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    if cfg.symmetric:
        snr[1], inr[1], cb[1] = snr[0], inr[0], cb[0]
    return ChannelParams(
        db_to_linear(float(snr[0])),
        db_to_linear(float(snr[1])),
        db_to_linear(float(inr[0])),
        db_to_linear(float(inr[1])),
        float(theta),
        float(cb[0]),
        float(cb[1]),
    )


def sample_params(cfg: SweepConfig) -> Iterator[Tuple[int, ChannelParams]]:
    """Yield ``(draws_used, params)`` for ``cfg.count`` accepted samples."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    match = _REGIME_MATCH[cfg.target]
    for _ in range(cfg.count):
        for draws in range(1, cfg.max_draws_per_sample + 1):
            params = _draw(rng, cfg)
            if match(classify(params)):
                yield draws, params
                break
        else:
            raise SamplingError(f"no {cfg.target} sample within {cfg.max_draws_per_sample} draws")


def regions_for(params: ChannelParams, target: str) -> Tuple[RateRegion, RateRegion]:
    """(inner, outer) for a sample: the conferencing pair, or both-decode for ``cmac``."""
    if target == "cmac":
        return build_cmac(params)
    return build_inner(params), build_outer(params)


@dataclass(frozen=True)
class Violation:
    index: int
    kind: str  # "gap" or "inner_outside_outer"
    params: Dict[str, float]
    witness: Tuple[float, float]
    halfspace: Dict[str, Any]
    excess_bits: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "kind": self.kind,
            "params": self.params,
            "regime": classify(ChannelParams(**self.params)).value,
            "witness": list(self.witness),
            "halfspace": self.halfspace,
            "excess_bits": self.excess_bits,
        }


@dataclass
class GapReport:
    config: SweepConfig
    samples_checked: int = 0
    total_draws: int = 0
    violations: List[Violation] = field(default_factory=list)
    containment_failures: List[Violation] = field(default_factory=list)
    max_observed_excess: float = -math.inf
    max_required_gap: float = -math.inf
    regime_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.containment_failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "header": self.config.header(),
            "samples_checked": self.samples_checked,
            "total_draws": self.total_draws,
            "regime_counts": dict(sorted(self.regime_counts.items())),
            "violations": [v.to_dict() for v in self.violations],
            "containment_failures": [v.to_dict() for v in self.containment_failures],
            "max_observed_excess": self.max_observed_excess,
            "max_required_gap": self.max_required_gap,
        }

    def summary(self) -> str:
        return (
            f"{self.config.target}: {self.samples_checked} samples, gap {self.config.gap_bits:g} bits, "
            f"{len(self.violations)} gap violations, {len(self.containment_failures)} inner-outside-outer, "
            f"max excess {self.max_observed_excess:.3g} bits, largest gap needed {self.max_required_gap:.3g} bits"
        )


def _required_gap(inner: RateRegion, outer: RateRegion) -> float:
    """Smallest g with outer inside inflate(inner, g): each halfspace moves by g*(a1+a2)."""
    need = 0.0
    for v in outer.vertices():
        for h in inner.halfspaces:
            over = h.a1 * v[0] + h.a2 * v[1] - h.b
            need = max(need, over / (h.a1 + h.a2))
    return need


def gap_sweep(cfg: SweepConfig) -> GapReport:
    """Check outer inside inner inflated by ``gap_bits``, and inner inside outer, for every sample."""
    report = GapReport(cfg)
    for index, (draws, params) in enumerate(sample_params(cfg)):
        report.total_draws += draws
        regime = classify(params).value
        report.regime_counts[regime] = report.regime_counts.get(regime, 0) + 1
        inner, outer = regions_for(params, cfg.target)
        check = contains(inflate(inner, cfg.gap_bits), outer, cfg.tol_bits)
        report.max_observed_excess = max(report.max_observed_excess, check.excess)
        report.max_required_gap = max(report.max_required_gap, _required_gap(inner, outer))
        if not check:
            report.violations.append(
                Violation(index, "gap", params.to_dict(), check.witness, check.halfspace.to_dict(), check.excess)
            )
        sanity = contains(outer, inner, cfg.tol_bits)
        if not sanity:
            report.containment_failures.append(
                Violation(
                    index, "inner_outside_outer", params.to_dict(), sanity.witness, sanity.halfspace.to_dict(), sanity.excess
                )
            )
        report.samples_checked += 1
    return report


def recheck_violation(record: Dict[str, Any], target: str, gap_bits: float) -> float:
    """Rebuild the regions of a violation record and return the excess of its witness."""
    params = ChannelParams(**record["params"])
    inner, outer = regions_for(params, target)
    witness = tuple(record["witness"])
    if record["kind"] == "gap":
        outer_candidate = inflate(inner, gap_bits)
    else:
        outer_candidate = outer
    return max(h.slack(witness) for h in outer_candidate.halfspaces)


_WHICH = ("inner", "outer", "cmac-inner", "cmac-outer")


def emit_region(params: ChannelParams, which: str) -> Dict[str, Any]:
    if which == "inner":
        region = build_inner(params)
    elif which == "outer":
        region = build_outer(params)
    elif which == "cmac-inner":
        region = build_cmac(params)[0]
    elif which == "cmac-outer":
        region = build_cmac(params)[1]
    else:
        raise ValueError(f"which must be one of {_WHICH}, got {which!r}")
    out = region.to_dict()
    out["which"] = which
    out["regime"] = classify(params).value
    out["scenario"] = params.to_scenario()
    return out


def _fm_region(params: ChannelParams) -> RateRegion:
    system = two_round_rate_system(params)
    for var in [v for v in system.variables if v not in ("R1", "R2")]:
        system = eliminate(system, var)
    return to_region(system)


def fm_crosscheck(target: str, count: int, seed: int, tol_bits: float = 1e-6) -> Dict[str, Any]:
    """Compare the projected rate-splitting system with the directly built two-round region.

    The rate-splitting system is written for the order where receiver 2
    quantizes first. With user 1 all-common the users are relabelled, and
    weak samples are checked in both orders the same way.
    """
    if target not in ("weak", "mixed"):
        raise ValueError("fm cross-check is defined for the weak and mixed regimes")
    cfg = SweepConfig(count=count, seed=seed, target=target, tol_bits=tol_bits)
    results = []
    for index, (_, params) in enumerate(sample_params(cfg)):
        regime = classify(params)
        views = []
        if regime in (Regime.WEAK, Regime.MIXED12):
            views.append(("2-1-2", params))
        if regime in (Regime.WEAK, Regime.MIXED21):
            views.append(("1-2-1", params.swapped()))
        for order, view in views:
            direct = build_two_round(view, StrategyOrder.TWO_ROUND_2_1_2)
            projected = _fm_region(view)
            a = contains(direct, projected, tol_bits)
            b = contains(projected, direct, tol_bits)
            results.append(
                {
                    "index": index,
                    "order": order,
                    "regime": regime.value,
                    "params": params.to_dict(),
                    "projected_in_direct_excess": a.excess,
                    "direct_in_projected_excess": b.excess,
                    "pass": bool(a) and bool(b),
                }
            )
    return {
        "header": cfg.header(),
        "checks": len(results),
        "failures": sum(not r["pass"] for r in results),
        "results": results,
    }


def xi_sweep(cfg: SweepConfig) -> Dict[str, Any]:
    """Rate loss at receiver 1 (receiver 2 quantizes) over the sampled channels."""
    values = []
    for _, params in sample_params(cfg):
        split = power_split(params)
        q = distortion_and_xi(params, split, 2)
        values.append({"xi1": q.xi, "user2_all_common": params.snr2 <= params.inr1})
    return {"header": cfg.header(), "values": values}


def sym_gap_sweep(cfg: SweepConfig) -> Dict[str, Any]:
    """Symmetric upper bound minus the one-round symmetric rate; needs ``symmetric=True``."""
    if not cfg.symmetric:
        raise ValueError("symmetric sweep needs SweepConfig(symmetric=True)")
    rows = []
    for _, params in sample_params(cfg):
        upper, achieved = sym_upper(params), sym_one_round(params)
        rows.append({"regime": classify(params).value, "upper": upper, "one_round": achieved, "gap": upper - achieved})
    return {
        "header": cfg.header(),
        "max_gap": max(r["gap"] for r in rows),
        "rows": rows,
    }


def to_json(obj: Dict[str, Any]) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
