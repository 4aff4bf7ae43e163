"""Inner and outer rate regions for the interference channel and compound MAC.

Inner regions are assembled from :mod:`coopic.mi` terms exactly as the
achievability lists state them; every ``min{A, B}`` becomes two rows.
Outer regions are the genie-aided and cut-set bounds written directly in
terms of the channel powers.
"""
from __future__ import annotations

import enum
import math
from typing import List, Tuple

from .channel import ChannelParams, PowerSplit, Regime, classify, det_term, power_split
from .fm import IneqSystem
from .mi import MiId, MiTerm, QuantizerConfig, distortion_and_xi, eval_mi, positive_part
from .region import HalfSpace, RateRegion, conv_union

__all__ = [
    "StrategyOrder",
    "GAP_BITS",
    "build_outer",
    "build_inner",
    "build_two_round",
    "build_one_round",
    "build_cmac",
    "two_round_rate_system",
    "sym_upper",
    "sym_one_round",
]


class StrategyOrder(enum.Enum):
    """Who quantizes first. ``TWO_ROUND_2_1_2``: receiver 2 quantizes, receiver 1
    decodes and forwards, receiver 2 decodes last."""

    TWO_ROUND_2_1_2 = "2-1-2"
    TWO_ROUND_1_2_1 = "1-2-1"
    ONE_ROUND = "one-round"


# Per-user gap each regime's inner region is expected to reach.
GAP_BITS = {
    Regime.WEAK: 2.0,
    Regime.MIXED12: 1.5,
    Regime.MIXED21: 1.5,
    Regime.STRONG: 1.0,
}
CMAC_GAP_BITS = 1.0


def _log2_1p(x: float) -> float:
    return math.log1p(x) / math.log(2.0)


def build_outer(params: ChannelParams) -> RateRegion:
    s1, s2, i1, i2 = params.snr1, params.snr2, params.inr1, params.inr2
    c12, c21 = params.cb12, params.cb21
    det = det_term(params)
    lg = _log2_1p
    rows = [
        HalfSpace(1, 0, lg(s1) + min(c21, lg(i2 / (1 + s1))), "cut-set R1"),
        HalfSpace(0, 1, lg(s2) + min(c12, lg(i1 / (1 + s2))), "cut-set R2"),
        HalfSpace(1, 1, lg(i1 + s1 / (1 + i2)) + lg(i2 + s2 / (1 + i1)) + c21 + c12, "sum, genie"),
        HalfSpace(1, 1, lg(s2 + i2) + lg(s1 / (1 + i2)) + c12, "sum, Z-channel 1"),
        HalfSpace(1, 1, lg(s1 + i1) + lg(s2 / (1 + i1)) + c21, "sum, Z-channel 2"),
        HalfSpace(1, 1, lg(s1 + s2 + i1 + i2 + det), "sum, cut-set"),
        HalfSpace(
            2, 1, lg(i2 + s2 / (1 + i1)) + lg(s1 / (1 + i2)) + lg(s1 + i1) + c21 + c12, "2R1+R2, genie"
        ),
        HalfSpace(
            1, 2, lg(i1 + s1 / (1 + i2)) + lg(s2 / (1 + i1)) + lg(s2 + i2) + c12 + c21, "R1+2R2, genie"
        ),
        HalfSpace(
            2, 1, lg(s2 / (1 + i1) + i2 + s1 + i1 / (1 + i1) + det / (1 + i1)) + lg(s1 + i1) + c21, "2R1+R2, cut-set"
        ),
        HalfSpace(
            1, 2, lg(s1 / (1 + i2) + i1 + s2 + i2 / (1 + i2) + det / (1 + i2)) + lg(s2 + i2) + c12, "R1+2R2, cut-set"
        ),
    ]
    return RateRegion(rows)


class _TermSource:
    """Evaluates catalogued terms for one channel, split and pair of quantizers."""

    def __init__(self, params: ChannelParams, split: PowerSplit) -> None:
        self.params = params
        self.split = split
        # quant[j] is the quantizer at receiver j.
        self.quant = {j: distortion_and_xi(params, split, j) for j in (1, 2)}

    def __call__(self, mi_id: MiId, direction: int = 1) -> float:
        quant: QuantizerConfig = self.quant[3 - direction]
        return eval_mi(MiTerm(mi_id, direction), self.params, self.split, quant)

    def loss(self, decoding_receiver: int) -> float:
        """Usable conferencing bits toward ``decoding_receiver`` after the rate loss."""
        cb = self.params.cb21 if decoding_receiver == 1 else self.params.cb12
        return positive_part(cb - self.quant[3 - decoding_receiver].xi)


def _weak_rows_212(t: _TermSource) -> List[HalfSpace]:
    c12 = t.params.cb12
    loss = t.loss(1)
    priv1 = t(MiId.X1_Y1__X1C_X2C)  # I(x1;y1|x1c,x2c)
    priv2 = t(MiId.X1_Y1__X1C_X2C, 2)  # I(x2;y2|x1c,x2c)
    comm2_at1 = t(MiId.X2C_Y1__X1)  # I(x2c;y1|x1)
    r1_given_x1c = t(MiId.X1_X2C_Y1__X1C)  # I(x1,x2c;y1|x1c)
    r1q_given_x1c = t(MiId.X1_X2C_Y1Q2__X1C)  # I(x1,x2c;y1,yq2|x1c)
    r1_all = t(MiId.X1_X2C_Y1)  # I(x1,x2c;y1)
    r1q_all = t(MiId.X1_X2C_Y1Q2)  # I(x1,x2c;y1,yq2)
    r2_given_x2c = t(MiId.X1_X2C_Y1__X1C, 2)  # I(x1c,x2;y2|x2c)
    r2_all = t(MiId.X1_X2C_Y1, 2)  # I(x1c,x2;y2)
    return [
        HalfSpace(1, 0, t(MiId.X1_Y1__X2C), "R1: I(x1;y1|x2c)"),
        HalfSpace(1, 0, priv1 + r2_given_x2c + c12, "R1: private + relayed common"),
        HalfSpace(0, 1, t(MiId.X1_Y1__X2C, 2) + c12, "R2: I(x2;y2|x1c) + C12"),
        HalfSpace(0, 1, comm2_at1 + priv2, "R2: common at rx1 + private"),
        HalfSpace(1, 1, r1_all + priv2 + loss, "sum 1"),
        HalfSpace(1, 1, r1q_all + priv2, "sum 1, quantized"),
        HalfSpace(1, 1, r1_given_x1c + r2_given_x2c + c12 + loss, "sum 2"),
        HalfSpace(1, 1, r1q_given_x1c + r2_given_x2c + c12, "sum 2, quantized"),
        HalfSpace(1, 1, priv1 + r2_all + c12, "sum 3"),
        HalfSpace(1, 1, priv1 + comm2_at1 + r2_given_x2c + c12, "sum 4"),
        HalfSpace(2, 1, r1_all + priv1 + r2_given_x2c + c12 + loss, "2R1+R2"),
        HalfSpace(2, 1, r1q_all + priv1 + r2_given_x2c + c12, "2R1+R2, quantized (absorbed by time sharing)"),
        HalfSpace(1, 2, r1_given_x1c + r2_all + priv2 + c12 + loss, "R1+2R2 a"),
        HalfSpace(1, 2, r1_given_x1c + comm2_at1 + r2_given_x2c + priv2 + c12 + loss, "R1+2R2 b"),
        HalfSpace(1, 2, r1q_given_x1c + r2_all + priv2 + c12, "R1+2R2 a, quantized"),
        HalfSpace(1, 2, r1q_given_x1c + comm2_at1 + r2_given_x2c + priv2 + c12, "R1+2R2 b, quantized"),
    ]


def _mixed_rows_212(t: _TermSource) -> List[HalfSpace]:
    # User 2 sends only a common message.
    c12 = t.params.cb12
    loss = t.loss(1)
    priv1 = t(MiId.X1_Y1__X1C_X2)  # I(x1;y1|x1c,x2)
    comm1_at2 = t(MiId.X2C_Y1__X1, 2)  # I(x1c;y2|x2)
    both_given_x1c = t(MiId.X1_X2_Y1__X1C)  # I(x1,x2;y1|x1c)
    bothq_given_x1c = t(MiId.X1_X2_Y1Q2__X1C)  # I(x1,x2;y1,yq2|x1c)
    r2_all = t(MiId.X1_X2C_Y1, 2)  # I(x1c,x2;y2)
    return [
        HalfSpace(1, 0, t(MiId.X1_Y1__X2), "R1: I(x1;y1|x2)"),
        HalfSpace(1, 0, priv1 + comm1_at2 + c12, "R1: private + relayed common"),
        HalfSpace(0, 1, t(MiId.X2_Y1__X1), "R2: I(x2;y1|x1)"),
        HalfSpace(0, 1, t(MiId.X1_Y1__X2C, 2) + c12, "R2: I(x2;y2|x1c) + C12"),
        HalfSpace(1, 1, t(MiId.X1_X2_Y1) + loss, "sum 1"),
        HalfSpace(1, 1, t(MiId.X1_X2_Y1Q2), "sum 1, quantized"),
        HalfSpace(1, 1, priv1 + r2_all + c12, "sum 2"),
        HalfSpace(1, 1, both_given_x1c + comm1_at2 + c12 + loss, "sum 3"),
        HalfSpace(1, 1, bothq_given_x1c + comm1_at2 + c12, "sum 3, quantized"),
        HalfSpace(1, 2, both_given_x1c + r2_all + c12 + loss, "R1+2R2 a"),
        HalfSpace(1, 2, bothq_given_x1c + r2_all + c12, "R1+2R2 a, quantized"),
    ]


def _check_two_round(params: ChannelParams, order: StrategyOrder) -> Regime:
    regime = classify(params)
    if order is StrategyOrder.ONE_ROUND:
        raise ValueError("build_two_round needs a two-round order")
    if regime is Regime.STRONG:
        raise ValueError("no two-round region is defined when both links are strong")
    if regime is Regime.MIXED12 and order is not StrategyOrder.TWO_ROUND_2_1_2:
        raise ValueError("with user 2 all-common, only the order where receiver 2 quantizes first is defined")
    if regime is Regime.MIXED21 and order is not StrategyOrder.TWO_ROUND_1_2_1:
        raise ValueError("with user 1 all-common, only the order where receiver 1 quantizes first is defined")
    return regime


def build_two_round(params: ChannelParams, order: StrategyOrder) -> RateRegion:
    regime = _check_two_round(params, order)
    if order is StrategyOrder.TWO_ROUND_1_2_1:
        return build_two_round(params.swapped(), StrategyOrder.TWO_ROUND_2_1_2).mirrored()
    t = _TermSource(params, power_split(params))
    rows = _weak_rows_212(t) if regime is Regime.WEAK else _mixed_rows_212(t)
    return RateRegion(rows)


def _one_round_rows(t: _TermSource) -> List[HalfSpace]:
    rows: List[HalfSpace] = []
    for rx in (1, 2):
        loss = t.loss(rx)
        # Receiver-1 orientation: own rate uses X1_*, the other user's X2_*.
        own = (1, 0) if rx == 1 else (0, 1)
        other = (0, 1) if rx == 1 else (1, 0)
        rows += [
            HalfSpace(*other, t(MiId.X2_Y1__X1, rx) + loss, f"rx{rx}: other user"),
            HalfSpace(*other, t(MiId.X2_Y1Q2__X1, rx), f"rx{rx}: other user, quantized"),
            HalfSpace(*own, t(MiId.X1_Y1__X2, rx) + loss, f"rx{rx}: own user"),
            HalfSpace(*own, t(MiId.X1_Y1Q2__X2, rx), f"rx{rx}: own user, quantized"),
            HalfSpace(1, 1, t(MiId.X1_X2_Y1, rx) + loss, f"rx{rx}: sum"),
            HalfSpace(1, 1, t(MiId.X1_X2_Y1Q2, rx), f"rx{rx}: sum, quantized"),
        ]
    return rows


def build_one_round(params: ChannelParams) -> RateRegion:
    """One exchange in each direction with all-common codewords at both users."""
    return RateRegion(_one_round_rows(_TermSource(params, PowerSplit.all_common(params))))


def build_inner(params: ChannelParams) -> RateRegion:
    regime = classify(params)
    if regime is Regime.WEAK:
        return conv_union(
            build_two_round(params, StrategyOrder.TWO_ROUND_2_1_2),
            build_two_round(params, StrategyOrder.TWO_ROUND_1_2_1),
        )
    if regime is Regime.MIXED12:
        return build_two_round(params, StrategyOrder.TWO_ROUND_2_1_2)
    if regime is Regime.MIXED21:
        return build_two_round(params, StrategyOrder.TWO_ROUND_1_2_1)
    return build_one_round(params)


def build_cmac_outer(params: ChannelParams) -> RateRegion:
    s1, s2, i1, i2 = params.snr1, params.snr2, params.inr1, params.inr2
    c12, c21 = params.cb12, params.cb21
    lg = _log2_1p
    rows = [
        HalfSpace(1, 0, lg(s1) + c21, "R1: rx1 side"),
        HalfSpace(1, 0, lg(i2) + c12, "R1: rx2 side"),
        HalfSpace(1, 0, lg(s1 + i2), "R1: both receivers"),
        HalfSpace(0, 1, lg(s2) + c12, "R2: rx2 side"),
        HalfSpace(0, 1, lg(i1) + c21, "R2: rx1 side"),
        HalfSpace(0, 1, lg(s2 + i1), "R2: both receivers"),
        HalfSpace(1, 1, lg(s1 + i1) + c21, "sum: rx1 side"),
        HalfSpace(1, 1, lg(s2 + i2) + c12, "sum: rx2 side"),
        HalfSpace(1, 1, lg(s1 + i1 + s2 + i2 + det_term(params)), "sum: both receivers"),
    ]
    return RateRegion(rows)


def build_cmac(params: ChannelParams) -> Tuple[RateRegion, RateRegion]:
    """Inner and outer regions when both receivers must decode both messages."""
    return build_one_round(params), build_cmac_outer(params)


def _loss_row(system: IneqSystem, coeffs, b_plain: float, b_quant: float, loss: float, label: str) -> None:
    system.add(coeffs, b_plain + loss, label)
    system.add(coeffs, b_quant, label + ", quantized")


def two_round_rate_system(params: ChannelParams) -> IneqSystem:
    """Rate-splitting constraints of the 2-1-2 order over (R1, R2, R1c, R2c).

    The three receiver-1 constraints the achievability argument relaxes to
    their first arguments are relaxed the same way; the other min-forms
    become two rows each. Private rates are written as ``R_i - R_ic``.
    """
    regime = _check_two_round(params, StrategyOrder.TWO_ROUND_2_1_2)
    t = _TermSource(params, power_split(params))
    c12 = params.cb12
    loss = t.loss(1)
    if regime is Regime.WEAK:
        sys = IneqSystem(("R1", "R2", "R1c", "R2c"))
        r1p = {"R1": 1.0, "R1c": -1.0}
        r2p = {"R2": 1.0, "R2c": -1.0}

        def plus(*parts):
            out = {}
            for p in parts:
                for k, v in p.items():
                    out[k] = out.get(k, 0.0) + v
            return out

        sys.add(r1p, t(MiId.X1_Y1__X1C_X2C), "R1p")
        sys.add({"R2c": 1.0}, t(MiId.X2C_Y1__X1), "R2c")
        _loss_row(sys, plus({"R2c": 1.0}, r1p), t(MiId.X1_X2C_Y1__X1C), t(MiId.X1_X2C_Y1Q2__X1C), loss, "R2c+R1p")
        sys.add({"R1": 1.0}, t(MiId.X1_Y1__X2C), "R1c+R1p")
        _loss_row(sys, {"R1": 1.0, "R2c": 1.0}, t(MiId.X1_X2C_Y1), t(MiId.X1_X2C_Y1Q2), loss, "R1c+R2c+R1p")
        sys.add(r2p, t(MiId.X1_Y1__X1C_X2C, 2), "R2p")
        sys.add(plus({"R1c": 1.0}, r2p), t(MiId.X1_X2C_Y1__X1C, 2) + c12, "R1c+R2p")
        sys.add({"R2": 1.0}, t(MiId.X1_Y1__X2C, 2) + c12, "R2c+R2p")
        sys.add({"R2": 1.0, "R1c": 1.0}, t(MiId.X1_X2C_Y1, 2) + c12, "R2c+R1c+R2p")
        for name, row in (("R1c", {"R1c": -1.0}), ("R2c", {"R2c": -1.0})):
            sys.add(row, 0.0, f"{name} >= 0")
        sys.add({"R1": -1.0, "R1c": 1.0}, 0.0, "R1p >= 0")
        sys.add({"R2": -1.0, "R2c": 1.0}, 0.0, "R2p >= 0")
        return sys
    sys = IneqSystem(("R1", "R2", "R1c"))
    r1p = {"R1": 1.0, "R1c": -1.0}
    sys.add(r1p, t(MiId.X1_Y1__X1C_X2), "R1p")
    sys.add({"R2": 1.0}, t(MiId.X2_Y1__X1), "R2")
    _loss_row(sys, {"R2": 1.0, "R1": 1.0, "R1c": -1.0}, t(MiId.X1_X2_Y1__X1C), t(MiId.X1_X2_Y1Q2__X1C), loss, "R2+R1p")
    sys.add({"R1": 1.0}, t(MiId.X1_Y1__X2), "R1c+R1p")
    _loss_row(sys, {"R1": 1.0, "R2": 1.0}, t(MiId.X1_X2_Y1), t(MiId.X1_X2_Y1Q2), loss, "R1c+R2+R1p")
    sys.add({"R1c": 1.0}, t(MiId.X2C_Y1__X1, 2) + c12, "R1c")
    sys.add({"R2": 1.0}, t(MiId.X1_Y1__X2C, 2) + c12, "R2")
    sys.add({"R2": 1.0, "R1c": 1.0}, t(MiId.X1_X2C_Y1, 2) + c12, "R2+R1c")
    sys.add({"R1c": -1.0}, 0.0, "R1c >= 0")
    sys.add({"R1": -1.0, "R1c": 1.0}, 0.0, "R1p >= 0")
    sys.add({"R2": -1.0}, 0.0, "R2 >= 0")
    return sys


def _require_symmetric(params: ChannelParams) -> None:
    if not params.is_symmetric():
        raise ValueError("symmetric-rate bounds need snr1 == snr2, inr1 == inr2 and cb12 == cb21")


def sym_upper(params: ChannelParams) -> float:
    """Upper bound on the symmetric capacity: the smallest of four terms."""
    _require_symmetric(params)
    s, i, cb = params.snr1, params.inr1, params.cb12
    det = det_term(params)
    lg = _log2_1p
    return min(
        lg(s) + min(cb, lg(i / (1 + s))),
        lg(i + s / (1 + i)) + cb,
        0.5 * lg(s + i) + 0.5 * lg(s / (1 + i)) + 0.5 * cb,
        0.5 * lg(2 * s + 2 * i + det),
    )


def sym_one_round(params: ChannelParams) -> float:
    """Symmetric rate reached by the one-round strategy.

    With strong interference this is the symmetric point of the all-common
    one-round region; otherwise the three sufficient conditions obtained by
    setting both users' rates equal.
    """
    _require_symmetric(params)
    if params.snr1 <= params.inr2:
        # Largest R with (R, R) in the region: each row caps R at b / (a1 + a2).
        return min(h.b / (h.a1 + h.a2) for h in build_one_round(params).halfspaces)
    t = _TermSource(params, power_split(params))
    loss = t.loss(1)
    return min(
        t(MiId.X1_X2C_Y1__X1C) + loss,
        t(MiId.X1_X2C_Y1Q2__X1C),
        t(MiId.X1_Y1__X2C),
        0.5 * min(t(MiId.X1_X2C_Y1) + loss, t(MiId.X1_X2C_Y1Q2)) + 0.5 * t(MiId.X1_Y1__X1C_X2C),
    )

