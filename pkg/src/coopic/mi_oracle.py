"""Generic Gaussian mutual information from the channel equations.

This evaluator knows nothing about the closed forms in :mod:`coopic.mi`. It
assembles the joint covariance of any set of channel symbols from complex
gains with the requested aggregate phase, conditions by successive Schur
complements in extended precision and returns log-determinant ratios. It
is slow and meant as a test oracle.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional

import mpmath

from .channel import ChannelParams, PowerSplit

__all__ = ["GaussianChannelModel", "oracle_mi", "oracle_xi"]

_SOURCES = ("x1c", "x1p", "x2c", "x2p", "z1", "z2", "zq1", "zq2", "zt1", "zt2")
_PRECISION = 40


class GaussianChannelModel:
    """Linear model of both receivers, with optional quantization noise.

    ``deltas`` maps a receiver index to the variance of the quantization
    noise added to that receiver's output. All other noises have unit
    variance, so ``conditional_logdet`` of received signals given the inputs
    is zero and differential entropies reduce to log-determinants.
    """

    def __init__(self, params: ChannelParams, split: PowerSplit, deltas: Optional[Dict[int, float]] = None) -> None:
        deltas = dict(deltas or {})
        with mpmath.workdps(_PRECISION):
            mpf = mpmath.mpf
            h11 = mpmath.sqrt(mpf(params.snr1))
            h22 = mpmath.sqrt(mpf(params.snr2))
            h21 = mpmath.sqrt(mpf(params.inr2))
            # Put the whole aggregate phase on the cross gain into receiver 1.
            h12 = mpmath.sqrt(mpf(params.inr1)) * mpmath.expjpi(-mpf(params.theta) / mpmath.pi)
            q1p, q2p = mpf(split.q1p), mpf(split.q2p)
            self._var = [
                1 - q1p,
                q1p,
                1 - q2p,
                q2p,
                mpf(1),
                mpf(1),
                mpf(deltas.get(1, 0.0)),
                mpf(deltas.get(2, 0.0)),
                mpf(1),
                mpf(1),
            ]
            zero = mpmath.mpc(0)
            one = mpmath.mpc(1)

            def vec(**coeffs) -> List:
                return [mpmath.mpc(coeffs.get(name, zero)) for name in _SOURCES]

            symbols = {
                "x1c": vec(x1c=one),
                "x1": vec(x1c=one, x1p=one),
                "x2c": vec(x2c=one),
                "x2": vec(x2c=one, x2p=one),
                "y1": vec(x1c=h11, x1p=h11, x2c=h12, x2p=h12, z1=one),
                "y2": vec(x1c=h21, x1p=h21, x2c=h22, x2p=h22, z2=one),
                "yq1": vec(x1c=h11, x1p=h11, x2c=h12, x2p=h12, z1=one, zq1=one),
                "yq2": vec(x1c=h21, x1p=h21, x2c=h22, x2p=h22, z2=one, zq2=one),
                # Genie signals: what each user leaves at the other receiver,
                # with that receiver's noise (s) or with independent noise (st).
                "s1": vec(x1c=h21, x1p=h21, z2=one),
                "s2": vec(x2c=h12, x2p=h12, z1=one),
                "st1": vec(x1c=h21, x1p=h21, zt1=one),
                "st2": vec(x2c=h12, x2p=h12, zt2=one),
            }
            var = self._var
            self._cov = {
                (a, b): mpmath.fsum(ai * mpmath.conj(bi) * v for ai, bi, v in zip(symbols[a], symbols[b], var) if v != 0)
                for a in symbols
                for b in symbols
            }

    def conditional_logdet(self, observed: Iterable[str], given: Iterable[str]) -> mpmath.mpf:
        """log2 det of the covariance of ``observed`` given ``given``."""
        observed, given = list(observed), list(given)
        names = given + observed
        n, k = len(names), len(given)
        with mpmath.workdps(_PRECISION):
            cov = [[self._cov[a, b] for b in names] for a in names]
            scale = max([abs(cov[i][i]) for i in range(n)] + [mpmath.mpf(1)])
            floor = scale * mpmath.mpf(10) ** (-(_PRECISION - 8))
            # Condition on one scalar at a time; a vanishing pivot means the
            # variable is already determined by earlier ones.
            for p in range(k):
                pivot = cov[p][p]
                if abs(pivot) <= floor:
                    continue
                for i in range(p + 1, n):
                    factor = cov[i][p] / pivot
                    if factor == 0:
                        continue
                    for j in range(p + 1, n):
                        cov[i][j] -= factor * cov[p][j]
            block = mpmath.matrix([[cov[i][j] for j in range(k, n)] for i in range(k, n)])
            det = mpmath.re(mpmath.det(block))
            return mpmath.log(det, 2)

    def mutual_information(self, targets: Iterable[str], observed: Iterable[str], given: Iterable[str] = ()) -> float:
        targets, observed, given = list(targets), list(observed), list(given)
        with mpmath.workdps(_PRECISION):
            value = self.conditional_logdet(observed, given) - self.conditional_logdet(observed, given + targets)
            return float(value)

    def term(self, term) -> float:
        """Evaluate an :class:`coopic.mi.MiTerm`."""
        targets, observed, given = term.symbols()
        return self.mutual_information(targets, observed, given)


def oracle_mi(term, params: ChannelParams, split: PowerSplit, quant=None) -> float:
    """One-off evaluation of an :class:`coopic.mi.MiTerm` through the covariance model."""
    deltas = {}
    if quant is not None:
        deltas[quant.receiver] = quant.delta
    return GaussianChannelModel(params, split, deltas).term(term)


def oracle_xi(params: ChannelParams, split: PowerSplit, quant) -> float:
    """Rate loss of the quantizer at ``quant.receiver``, seen by the other receiver."""
    j = quant.receiver
    i = 3 - j
    model = GaussianChannelModel(params, split, {j: quant.delta})
    return model.mutual_information([f"y{j}"], [f"yq{j}"], [f"x{i}", f"x{j}c", f"y{i}"])

