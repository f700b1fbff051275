"""Bisection-style refinement: re-run an estimator on the index range it brackets.

BESE narrows to ``[j_r, j_l]`` from ESE; BEDE narrows to ``[j_1, j_2]`` from EDE
and records ESE on each subinterval alongside. Only the original data points
are ever used.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .estimators import ede, ese
from .model import MIN_POINTS, SampledCurve

DEFAULT_TOL = 1e-8

STOP_COLLAPSED = "interval-collapsed"
STOP_TOLERANCE = "tolerance-met"
STOP_NON_DETECTION = "non-detection"
STOP_MIN_POINTS = "min-points"


@dataclass(frozen=True)
class TraceRow:
    """One pass on the grid points ``lo..hi`` (indices into the original curve).

    ``j_*`` are likewise indices into the original curve.
    """

    k: int
    lo: int
    hi: int
    j_r: int
    j_l: int
    chi_r: float
    chi_l: float
    chi_S: float
    j_1: int | None = None
    j_2: int | None = None
    chi_F1: float | None = None
    chi_F2: float | None = None
    chi_D: float | None = None


@dataclass(frozen=True)
class IterationTrace:
    method: str
    rows: tuple
    stop_reason: str
    estimate: float | None

    def to_dict(self):
        return {
            "method": self.method,
            "estimate": self.estimate,
            "stop_reason": self.stop_reason,
            "rows": [asdict(r) for r in self.rows],
        }


def _check(e, min_points):
    if not e > 0:
        raise ValueError("tolerance e must be positive")
    if min_points < MIN_POINTS:
        raise ValueError(f"min_points must be at least {MIN_POINTS}")


def _row(k, lo, hi, sub, with_ede):
    s = ese(sub)
    fields = dict(
        k=k, lo=lo, hi=hi,
        j_r=lo + s.j_r, j_l=lo + s.j_l,
        chi_r=s.chi_r, chi_l=s.chi_l, chi_S=s.chi_S,
    )
    if with_ede:
        d = ede(sub)
        fields.update(j_1=lo + d.j_1, j_2=lo + d.j_2, chi_F1=d.chi_F1, chi_F2=d.chi_F2, chi_D=d.chi_D)
    return TraceRow(**fields)


def bese(curve: SampledCurve, e: float = DEFAULT_TOL, min_points: int = MIN_POINTS):
    """Iterate ESE on its own bracket until it collapses, stalls within ``e`` or runs out of points.

    Returns ``(estimate, trace)`` with ``estimate`` the last ``chi_S``.
    """
    _check(e, min_points)
    return _iterate(curve, e, min_points, "bese")


def bede(curve: SampledCurve, e: float = DEFAULT_TOL, min_points: int = MIN_POINTS):
    """Iterate on the EDE bracket ``[j_1, j_2]``; ESE is reported per row but never steers.

    Stops on non-detection, on successive ``chi_D`` within ``e``, or when the
    next bracket would hold fewer than ``min_points`` points. The estimate is the
    last ``chi_D`` that was available, or None if the first pass already failed.
    """
    _check(e, min_points)
    return _iterate(curve, e, min_points, "bede")


def _iterate(curve, e, min_points, method):
    with_ede = method == "bede"
    lo, hi = 0, curve.n
    rows = []
    estimate = None
    prev = None
    k = 0
    while True:
        row = _row(k, lo, hi, curve.subcurve(lo, hi), with_ede)
        rows.append(row)
        if with_ede:
            if row.chi_D is None:
                reason = STOP_NON_DETECTION
                break
            value = row.chi_D
            nlo, nhi = row.j_1, row.j_2
        else:
            value = row.chi_S
            nlo, nhi = row.j_r, row.j_l
        estimate = value
        if nhi <= nlo:
            reason = STOP_COLLAPSED
            break
        if prev is not None and abs(value - prev) < e:
            reason = STOP_TOLERANCE
            break
        if nhi - nlo + 1 < min_points:
            reason = STOP_MIN_POINTS
            break
        if (nlo, nhi) == (lo, hi):
            # identical data would reproduce this row exactly: zero change
            reason = STOP_TOLERANCE
            break
        prev = value
        lo, hi = nlo, nhi
        k += 1
    return estimate, IterationTrace(method, tuple(rows), reason, estimate)
