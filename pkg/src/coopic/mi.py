"""Closed-form Gaussian mutual-information terms used by the rate regions.

Every term is written in receiver-1 orientation: receiver 1 decodes, and the
quantized observation (``yq2``) comes from receiver 2. A term evaluated with
``direction=2`` is the same expression with the user labels exchanged.

Symbols: ``x1c`` is the common part of user 1's codeword, ``x1`` the whole
codeword, ``y1`` receiver 1's output and ``yq2`` receiver 2's quantized
output. Inputs carry unit power, split as ``x_i = x_ic + x_ip``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Optional, Tuple

from .channel import ChannelParams, PowerSplit, det_term

__all__ = [
    "MiId",
    "MiTerm",
    "QuantizerConfig",
    "distortion_and_xi",
    "eval_mi",
    "mirror_symbol",
    "positive_part",
]

LOG2E = 1.0 / math.log(2.0)


def _log2_1p(x: float) -> float:
    return math.log1p(x) * LOG2E


def _log2_ratio(num: float, den: float) -> float:
    return math.log2(num / den)


def positive_part(x: float) -> float:
    return x if x > 0.0 else 0.0


class MiId(enum.Enum):
    """Catalogued expressions as (targets, observations, conditioning, all-common sides).

    The last field names the users whose codewords must carry no private
    part for the expression to be the one the regions use: ``"other"`` is
    user 2 and ``"own"`` is user 1 in receiver-1 orientation.
    """

    # Superposition forms.
    X1_Y1__X1C_X2C = (("x1",), ("y1",), ("x1c", "x2c"), ())
    X2C_Y1__X1 = (("x2c",), ("y1",), ("x1",), ())
    X1_X2C_Y1__X1C = (("x1", "x2c"), ("y1",), ("x1c",), ())
    X1_Y1__X2C = (("x1",), ("y1",), ("x2c",), ())
    X1_X2C_Y1 = (("x1", "x2c"), ("y1",), (), ())
    X1_X2C_Y1Q2 = (("x1", "x2c"), ("y1", "yq2"), (), ())
    X1_X2C_Y1Q2__X1C = (("x1", "x2c"), ("y1", "yq2"), ("x1c",), ())
    # Forms where the other user sends only a common message.
    X1_Y1__X2 = (("x1",), ("y1",), ("x2",), ("other",))
    X1_Y1__X1C_X2 = (("x1",), ("y1",), ("x1c", "x2"), ("other",))
    X2_Y1__X1 = (("x2",), ("y1",), ("x1",), ("other",))
    X1_X2_Y1 = (("x1", "x2"), ("y1",), (), ("other",))
    X1_X2_Y1__X1C = (("x1", "x2"), ("y1",), ("x1c",), ("other",))
    X1_X2_Y1Q2 = (("x1", "x2"), ("y1", "yq2"), (), ("other",))
    X1_X2_Y1Q2__X1C = (("x1", "x2"), ("y1", "yq2"), ("x1c",), ("other",))
    # Forms where both users send only common messages.
    X1_Y1Q2__X2 = (("x1",), ("y1", "yq2"), ("x2",), ("own", "other"))
    X2_Y1Q2__X1 = (("x2",), ("y1", "yq2"), ("x1",), ("own", "other"))

    @property
    def targets(self) -> Tuple[str, ...]:
        return self.value[0]

    @property
    def observations(self) -> Tuple[str, ...]:
        return self.value[1]

    @property
    def given(self) -> Tuple[str, ...]:
        return self.value[2]

    @property
    def all_common(self) -> Tuple[str, ...]:
        return self.value[3]

    @property
    def uses_quantized(self) -> bool:
        return "yq2" in self.observations


def mirror_symbol(symbol: str) -> str:
    return symbol.translate(str.maketrans("12", "21"))


@dataclass(frozen=True)
class MiTerm:
    id: MiId
    direction: int = 1

    def __post_init__(self) -> None:
        if self.direction not in (1, 2):
            raise ValueError(f"direction must be 1 or 2, got {self.direction!r}")

    def symbols(self) -> Tuple[Tuple[str, ...], Tuple[str, ...], Tuple[str, ...]]:
        """Targets, observations and conditioning in the original labelling."""
        parts = (self.id.targets, self.id.observations, self.id.given)
        if self.direction == 1:
            return parts
        return tuple(tuple(mirror_symbol(s) for s in part) for part in parts)  # type: ignore[return-value]

    def __str__(self) -> str:
        targets, obs, given = self.symbols()
        text = f"I({','.join(targets)};{','.join(obs)}"
        if given:
            text += f"|{','.join(given)}"
        return text + ")"


@dataclass(frozen=True)
class QuantizerConfig:
    """Quantizer used by ``receiver``: distortion ``delta`` and rate loss ``xi`` in bits."""

    receiver: int
    delta: float
    xi: float


def distortion_and_xi(params: ChannelParams, split: PowerSplit, quantizing_receiver: int) -> QuantizerConfig:
    """Distortion at the private-signal level and the resulting rate loss.

    The rate loss is the extra description cost paid by the decoding
    receiver for the quantization noise.
    """
    if quantizing_receiver == 2:
        snr_q, snrp_q, inr_d, inrp_d = params.snr2, split.snr2p, params.inr1, split.inr1p
    elif quantizing_receiver == 1:
        snr_q, snrp_q, inr_d, inrp_d = params.snr1, split.snr1p, params.inr2, split.inr2p
    else:
        raise ValueError(f"quantizing_receiver must be 1 or 2, got {quantizing_receiver!r}")
    delta = max(snrp_q, 1.0)
    ratio = (1.0 + delta) / delta
    if snr_q > inr_d:
        ratio += snrp_q / ((1.0 + inrp_d) * delta)
    return QuantizerConfig(quantizing_receiver, delta, math.log2(ratio))


@dataclass(frozen=True)
class _Oriented:
    s1: float
    s2: float
    i1: float
    i2: float
    det: float
    q1p: float
    q2p: float
    s1p: float
    s2p: float
    i1p: float
    i2p: float
    delta: float


def _den_quantized(v: _Oriented) -> float:
    # Receiver pair with user 1 and user 2's common part known.
    return (1.0 + v.delta) * (1.0 + v.i1p) + v.s2p


_CLOSED_FORMS: Dict[MiId, Callable[[_Oriented], float]] = {
    MiId.X1_Y1__X1C_X2C: lambda v: _log2_1p(v.s1p / (1.0 + v.i1p)),
    MiId.X2C_Y1__X1: lambda v: _log2_ratio(1.0 + v.i1, 1.0 + v.i1p),
    MiId.X1_X2C_Y1__X1C: lambda v: _log2_ratio(1.0 + v.s1p + v.i1, 1.0 + v.i1p),
    MiId.X1_Y1__X2C: lambda v: _log2_1p(v.s1 / (1.0 + v.i1p)),
    MiId.X1_X2C_Y1: lambda v: _log2_ratio(1.0 + v.s1 + v.i1, 1.0 + v.i1p),
    MiId.X1_X2C_Y1Q2: lambda v: _log2_ratio(
        (1.0 + v.delta) * (1.0 + v.s1 + v.i1) + v.s2 + v.i2 + v.det, _den_quantized(v)
    ),
    MiId.X1_X2C_Y1Q2__X1C: lambda v: _log2_ratio(
        (1.0 + v.delta) * (1.0 + v.s1p + v.i1) + v.s2 + v.i2p + v.det * v.q1p, _den_quantized(v)
    ),
    MiId.X1_Y1__X2: lambda v: _log2_1p(v.s1),
    MiId.X1_Y1__X1C_X2: lambda v: _log2_1p(v.s1p),
    MiId.X2_Y1__X1: lambda v: _log2_1p(v.i1),
    MiId.X1_X2_Y1: lambda v: _log2_1p(v.s1 + v.i1),
    MiId.X1_X2_Y1__X1C: lambda v: _log2_1p(v.s1p + v.i1),
    MiId.X1_X2_Y1Q2: lambda v: _log2_ratio(
        (1.0 + v.delta) * (1.0 + v.s1 + v.i1) + v.s2 + v.i2 + v.det, 1.0 + v.delta
    ),
    MiId.X1_X2_Y1Q2__X1C: lambda v: _log2_ratio(
        (1.0 + v.delta) * (1.0 + v.s1p + v.i1) + v.s2 + v.i2p + v.det * v.q1p, 1.0 + v.delta
    ),
    MiId.X1_Y1Q2__X2: lambda v: _log2_ratio((1.0 + v.delta) * (1.0 + v.s1) + v.i2, 1.0 + v.delta),
    MiId.X2_Y1Q2__X1: lambda v: _log2_ratio((1.0 + v.delta) * (1.0 + v.i1) + v.s2, 1.0 + v.delta),
}


def _orient(params: ChannelParams, split: PowerSplit, direction: int, delta: float) -> _Oriented:
    if direction == 2:
        params, split = params.swapped(), split.swapped()
    return _Oriented(
        s1=params.snr1,
        s2=params.snr2,
        i1=params.inr1,
        i2=params.inr2,
        det=det_term(params),
        q1p=split.q1p,
        q2p=split.q2p,
        s1p=split.snr1p,
        s2p=split.snr2p,
        i1p=split.inr1p,
        i2p=split.inr2p,
        delta=delta,
    )


def _check_split(params: ChannelParams, split: PowerSplit) -> None:
    expected = PowerSplit.from_fractions(params, split.q1p, split.q2p)
    for name in ("snr1p", "snr2p", "inr1p", "inr2p"):
        if not math.isclose(getattr(split, name), getattr(expected, name), rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError(f"power split field {name} is inconsistent with the channel parameters")


def eval_mi(
    term: MiTerm,
    params: ChannelParams,
    split: PowerSplit,
    quant: Optional[QuantizerConfig] = None,
) -> float:
    """Value in bits of a catalogued term.

    Terms that observe a quantized output need the quantizer of the
    receiver opposite to ``term.direction``.
    """
    _check_split(params, split)
    own_q, other_q = (split.q1p, split.q2p) if term.direction == 1 else (split.q2p, split.q1p)
    sides = {"own": own_q, "other": other_q}
    for side in term.id.all_common:
        if sides[side] != 0.0:
            raise ValueError(f"{term} assumes an all-common codeword on the {side} side, but the split has a private part")
    delta = 1.0
    if term.id.uses_quantized:
        if quant is None:
            raise ValueError(f"{term} needs a quantizer configuration")
        if quant.receiver != 3 - term.direction:
            raise ValueError(f"{term} needs the quantizer of receiver {3 - term.direction}, got receiver {quant.receiver}")
        delta = quant.delta
    value = _CLOSED_FORMS[term.id](_orient(params, split, term.direction, delta))
    # Ratios of equal quantities can round a hair below zero.
    return max(value, 0.0)


def all_common_ids() -> FrozenSet[MiId]:
    return frozenset(m for m in MiId if m.all_common)
