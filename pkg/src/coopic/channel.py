"""Channel scenarios, derived powers and interference-regime classification.

A scenario is fully described by four linear power ratios, the aggregate
phase of the four complex gains and the two conferencing-link capacities.
Rates are in bits (log base 2) throughout the package.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, Mapping

__all__ = [
    "ChannelParams",
    "Regime",
    "PowerSplit",
    "classify",
    "power_split",
    "det_term",
    "db_to_linear",
    "linear_to_db",
]

TWO_PI = 2.0 * math.pi

SCENARIO_KEYS = (
    "snr1_db",
    "snr2_db",
    "inr1_db",
    "inr2_db",
    "theta_rad",
    "cb12_bits",
    "cb21_bits",
)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0.0:
        return -math.inf
    return 10.0 * math.log10(x)


def _check_nonneg_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class ChannelParams:
    """One scenario of the two-user channel with conferencing receivers.

    ``snr_i`` is the direct-link power at receiver i, ``inr_i`` the power of
    the other user's signal at receiver i. ``cb12`` is the capacity of the
    link from receiver 1 to receiver 2, ``cb21`` the reverse direction.
    """

    snr1: float
    snr2: float
    inr1: float
    inr2: float
    theta: float = math.pi / 2
    cb12: float = 0.0
    cb21: float = 0.0

    def __post_init__(self) -> None:
        for name in ("snr1", "snr2", "inr1", "inr2", "cb12", "cb21"):
            object.__setattr__(self, name, _check_nonneg_finite(name, getattr(self, name)))
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValueError(f"theta must be finite, got {theta!r}")
        theta = math.fmod(theta, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_db(
        cls,
        snr1_db: float,
        snr2_db: float,
        inr1_db: float,
        inr2_db: float,
        theta: float = math.pi / 2,
        cb12: float = 0.0,
        cb21: float = 0.0,
    ) -> "ChannelParams":
        return cls(
            db_to_linear(snr1_db),
            db_to_linear(snr2_db),
            db_to_linear(inr1_db),
            db_to_linear(inr2_db),
            theta,
            cb12,
            cb21,
        )

    @classmethod
    def from_gains(
        cls, h11: complex, h12: complex, h21: complex, h22: complex, cb12: float = 0.0, cb21: float = 0.0
    ) -> "ChannelParams":
        """Build from complex gains, where ``h_ij`` carries user j to receiver i."""
        theta = cmath.phase(h11) + cmath.phase(h22) - cmath.phase(h12) - cmath.phase(h21)
        return cls(abs(h11) ** 2, abs(h22) ** 2, abs(h12) ** 2, abs(h21) ** 2, theta, cb12, cb21)

    @classmethod
    def from_scenario(cls, data: Mapping[str, Any]) -> "ChannelParams":
        missing = [k for k in SCENARIO_KEYS if k not in data]
        if missing:
            raise ValueError(f"scenario is missing keys: {', '.join(missing)}")
        return cls.from_db(
            float(data["snr1_db"]),
            float(data["snr2_db"]),
            float(data["inr1_db"]),
            float(data["inr2_db"]),
            float(data["theta_rad"]),
            float(data["cb12_bits"]),
            float(data["cb21_bits"]),
        )

    def to_scenario(self) -> Dict[str, float]:
        return {
            "snr1_db": linear_to_db(self.snr1),
            "snr2_db": linear_to_db(self.snr2),
            "inr1_db": linear_to_db(self.inr1),
            "inr2_db": linear_to_db(self.inr2),
            "theta_rad": self.theta,
            "cb12_bits": self.cb12,
            "cb21_bits": self.cb21,
        }

    def to_dict(self) -> Dict[str, float]:
        return {
            "snr1": self.snr1,
            "snr2": self.snr2,
            "inr1": self.inr1,
            "inr2": self.inr2,
            "theta": self.theta,
            "cb12": self.cb12,
            "cb21": self.cb21,
        }

    def swapped(self) -> "ChannelParams":
        """Relabel the users. The aggregate phase is unchanged by relabelling."""
        return replace(
            self,
            snr1=self.snr2,
            snr2=self.snr1,
            inr1=self.inr2,
            inr2=self.inr1,
            cb12=self.cb21,
            cb21=self.cb12,
        )

    def is_symmetric(self, rel_tol: float = 1e-12) -> bool:
        return (
            math.isclose(self.snr1, self.snr2, rel_tol=rel_tol)
            and math.isclose(self.inr1, self.inr2, rel_tol=rel_tol)
            and math.isclose(self.cb12, self.cb21, rel_tol=rel_tol, abs_tol=1e-15)
        )


class Regime(enum.Enum):
    WEAK = "weak"
    MIXED12 = "mixed12"
    MIXED21 = "mixed21"
    STRONG = "strong"

    @property
    def is_mixed(self) -> bool:
        return self in (Regime.MIXED12, Regime.MIXED21)


def classify(params: ChannelParams) -> Regime:
    # Equality goes to the "<=" side: SNR1 == INR2 makes user 1 all-common.
    split1 = params.snr1 > params.inr2
    split2 = params.snr2 > params.inr1
    if split1 and split2:
        return Regime.WEAK
    if split1:
        return Regime.MIXED12
    if split2:
        return Regime.MIXED21
    return Regime.STRONG


@dataclass(frozen=True)
class PowerSplit:
    """Private power fractions and the private powers they induce.

    ``inr1p`` is the private part of user 2 as heard at receiver 1, so it is
    scaled by ``q2p``.
    """

    q1p: float
    q2p: float
    snr1p: float
    snr2p: float
    inr1p: float
    inr2p: float

    @classmethod
    def from_fractions(cls, params: ChannelParams, q1p: float, q2p: float) -> "PowerSplit":
        for name, q in (("q1p", q1p), ("q2p", q2p)):
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {q!r}")
        return cls(
            q1p=q1p,
            q2p=q2p,
            snr1p=params.snr1 * q1p,
            snr2p=params.snr2 * q2p,
            inr1p=params.inr1 * q2p,
            inr2p=params.inr2 * q1p,
        )

    @classmethod
    def all_common(cls, params: ChannelParams) -> "PowerSplit":
        return cls.from_fractions(params, 0.0, 0.0)

    @property
    def q1c(self) -> float:
        return 1.0 - self.q1p

    @property
    def q2c(self) -> float:
        return 1.0 - self.q2p

    def swapped(self) -> "PowerSplit":
        return PowerSplit(self.q2p, self.q1p, self.snr2p, self.snr1p, self.inr2p, self.inr1p)


def _private_fraction(snr: float, inr_other: float) -> float:
    if snr > inr_other:
        return 1.0 if inr_other <= 1.0 else 1.0 / inr_other
    return 0.0


def power_split(params: ChannelParams) -> PowerSplit:
    """Private power is set so it arrives at the other receiver at noise level."""
    q1p = _private_fraction(params.snr1, params.inr2)
    q2p = _private_fraction(params.snr2, params.inr1)
    return PowerSplit.from_fractions(params, q1p, q2p)


def det_term(params: ChannelParams) -> float:
    """Squared magnitude of the determinant of the 2x2 gain matrix."""
    # S1 S2 + I1 I2 - 2 cos(theta) a b, rewritten with a = sqrt(S1 S2) and
    # b = sqrt(I1 I2) so that the rank-one case cancels exactly.
    a = math.sqrt(params.snr1 * params.snr2)
    b = math.sqrt(params.inr1 * params.inr2)
    half_sin = math.sin(params.theta / 2.0)
    return (a - b) ** 2 + 4.0 * half_sin * half_sin * a * b
