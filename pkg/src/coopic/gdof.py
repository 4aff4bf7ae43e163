"""Generalized degrees of freedom of the symmetric channel.

With INR = SNR^alpha and conferencing capacity kappa * log2(SNR), the
symmetric capacity normalized by log2(SNR) tends to ``d(alpha, kappa)``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from numbers import Real
from typing import Iterable, List, Sequence

from .bounds import sym_upper
from .channel import ChannelParams, db_to_linear, det_term

__all__ = ["GdofQuery", "d", "cut_set_term", "verify_limit", "ConvergenceReport", "ConvergenceRow", "curve_csv", "convergence_csv"]


@dataclass(frozen=True)
class GdofQuery:
    """Exponents of INR and of the conferencing capacity relative to SNR.

    Values keep their numeric type, so ``Fraction`` inputs give exact results.
    """

    alpha: Real
    kappa: Real

    def __post_init__(self) -> None:
        for name in ("alpha", "kappa"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, Real):
                raise ValueError(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")


def d(query: GdofQuery) -> Real:
    """Degrees of freedom per user."""
    a, k = query.alpha, query.kappa
    if a < 1:
        return min(1, max(a, 1 - a) + k, 1 - (a - k) / 2)
    return min(a, 1 + k, (a + k) / 2)


def cut_set_term(params: ChannelParams) -> float:
    """The phase-dependent term of the symmetric bound, 0.5*log2(1 + 2 SNR + 2 INR + det).

    Divided by log2(SNR) it tends to max(1, alpha) whenever the aggregate
    phase is nonzero; at alpha = 1 and zero phase it tends to 1/2 instead.
    """
    return 0.5 * math.log2(1.0 + 2.0 * params.snr1 + 2.0 * params.inr1 + det_term(params))


@dataclass(frozen=True)
class ConvergenceRow:
    snr_db: float
    csym_over_logsnr: float
    d_formula: float
    cut_set_over_logsnr: float = math.nan

    @property
    def deviation(self) -> float:
        return self.csym_over_logsnr - self.d_formula


@dataclass(frozen=True)
class ConvergenceReport:
    query: GdofQuery
    theta: float
    rows: List[ConvergenceRow]

    @property
    def terminal_deviation(self) -> float:
        return self.rows[-1].deviation

    def deviations_shrinking(self, from_db: float = 100.0, tol: float = 1e-12) -> bool:
        """Whether |deviation| never grows along the grid from ``from_db`` on."""
        devs = [abs(r.deviation) for r in self.rows if r.snr_db >= from_db]
        return all(b <= a + tol for a, b in zip(devs, devs[1:]))


def verify_limit(query: GdofQuery, snr_db_grid: Sequence[float], theta: float = math.pi / 2) -> ConvergenceReport:
    """Evaluate the symmetric upper bound over an SNR grid and compare with ``d``.

    At alpha = 1 the limit needs a nonzero aggregate phase: with theta = 0
    the gain matrix is singular and the limit can differ.
    """
    if not snr_db_grid:
        raise ValueError("snr_db_grid must not be empty")
    if query.alpha == 1 and math.isclose(math.remainder(theta, 2 * math.pi), 0.0, abs_tol=1e-12):
        raise ValueError("theta = 0 is excluded at alpha = 1: the gain matrix is singular there")
    target = float(d(query))
    alpha, kappa = float(query.alpha), float(query.kappa)
    rows = []
    for snr_db in sorted(snr_db_grid):
        if snr_db <= 0.0:
            raise ValueError("grid points must be positive in dB so that log2(SNR) > 0")
        snr = db_to_linear(snr_db)
        log_snr = math.log2(snr)
        params = ChannelParams(snr, snr, snr**alpha, snr**alpha, theta, kappa * log_snr, kappa * log_snr)
        rows.append(ConvergenceRow(snr_db, sym_upper(params) / log_snr, target, cut_set_term(params) / log_snr))
    return ConvergenceReport(query, theta, rows)


def curve_csv(alpha_grid: Iterable[float], kappas: Iterable[float]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "kappa", "d"])
    kappas = list(kappas)
    for alpha in alpha_grid:
        for kappa in kappas:
            writer.writerow([repr(float(alpha)), repr(float(kappa)), repr(float(d(GdofQuery(alpha, kappa))))])
    return buf.getvalue()


def convergence_csv(report: ConvergenceReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "kappa", "snr_db", "csym_over_logsnr", "d_formula", "deviation"])
    for r in report.rows:
        writer.writerow(
            [float(report.query.alpha), float(report.query.kappa), r.snr_db, repr(r.csym_over_logsnr), repr(r.d_formula), repr(r.deviation)]
        )
    return buf.getvalue()
