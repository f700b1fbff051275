"""Extremum-surface (ESE) and extremum-distance (EDE) inflection estimators,
plus the analytic reference solver used as their oracle on catalog curves.

All estimators assume convex-then-concave data; run :func:`orient` first when
the orientation is unknown.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .chords import surface_profiles, total_residuals
from .errors import OrientationUndeterminedError, RootNotBracketedError
from .model import CurveSpec, SampledCurve, evaluate, evaluate_d1
from .roots import find_roots

WINDOW_FRACTION = 0.1
ORIENT_ATOL = 1e-12
# both residual extremes must reach this share of the larger one before
# their ordering is trusted over the sign of the dominant extreme
ORIENT_BALANCE = 0.1


@dataclass(frozen=True)
class EseReport:
    j_r: int
    j_l: int
    chi_r: float
    chi_l: float
    chi_S: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class EdeReport:
    j_1: int
    j_2: int
    chi_F1: float
    chi_F2: float
    chi_D: float | None

    @property
    def detected(self) -> bool:
        return self.chi_D is not None

    def to_dict(self):
        return asdict(self)


def ese(curve: SampledCurve) -> EseReport:
    """Midpoint of the left-profile trough and the right-profile crest.

    ``j_l`` minimises the left profile over ``1..n`` and ``j_r`` maximises the
    right profile over ``0..n-1``; ties go to the smaller index. When the
    tangency point lies outside the data the extreme pins to the window edge.
    """
    prof = surface_profiles(curve)
    n = curve.n
    j_l = 1 + int(np.argmin(prof.left[1:]))
    j_r = int(np.argmax(prof.right[:n]))
    chi_l = float(curve.xs[j_l])
    chi_r = float(curve.xs[j_r])
    return EseReport(j_r, j_l, chi_r, chi_l, 0.5 * (chi_l + chi_r))


def ede(curve: SampledCurve) -> EdeReport:
    """Midpoint of the most negative and most positive residuals from the total chord.

    ``chi_D`` is None when the maximum precedes the minimum, which is what
    convex-only or concave-only data produces.
    """
    resid = total_residuals(curve)
    j_1 = int(np.argmin(resid))
    j_2 = int(np.argmax(resid))
    chi_F1 = float(curve.xs[j_1])
    chi_F2 = float(curve.xs[j_2])
    chi_D = 0.5 * (chi_F1 + chi_F2) if chi_F2 >= chi_F1 else None
    return EdeReport(j_1, j_2, chi_F1, chi_F2, chi_D)


def orient(curve: SampledCurve, shape: str = "auto") -> tuple[SampledCurve, bool]:
    """Return the curve in convex-then-concave orientation and whether it was negated.

    In ``auto`` mode, when both residual extremes are interior and of comparable
    size, a minimum preceding the maximum means convex-concave. Otherwise the
    sign of the dominant extreme decides: a curve sitting mostly below its
    chord is treated as convex-first, so convex-only data keeps its orientation
    and EDE reports it as a non-detection.
    """
    if shape == "convex-concave":
        return curve, False
    if shape == "concave-convex":
        return curve.negated(), True
    if shape != "auto":
        raise ValueError(f"shape must be convex-concave, concave-convex or auto, got {shape!r}")
    resid = total_residuals(curve)
    scale = max(1.0, float(np.max(np.abs(curve.ys))))
    lo, hi = float(resid.min()), float(resid.max())
    big = max(-lo, hi)
    if big < ORIENT_ATOL * scale:
        raise OrientationUndeterminedError("data is indistinguishable from its total chord")
    j_min, j_max = int(np.argmin(resid)), int(np.argmax(resid))
    n = curve.n
    interior = 0 < j_min < n and 0 < j_max < n
    if interior and min(-lo, hi) >= ORIENT_BALANCE * big:
        flipped = j_max < j_min
    else:
        flipped = hi > -lo
    return (curve.negated(), True) if flipped else (curve, False)


@dataclass(frozen=True)
class TheoreticalPoints:
    """Exact tangency and parallel-tangent abscissae of an analytic curve on [a, b].

    ``x_S`` follows the three-case rule (an out-of-window tangency point is
    replaced by the nearer window edge); ``x_mid`` is the plain midpoint of the
    two tangency points regardless of containment. ``x_D`` is the plain midpoint
    of the parallel-tangent points and ``x_D_limit`` the midpoint after clipping
    them to [a, b], which is what data-based EDE converges to.
    Points that could not be bracketed are None and listed in ``errors``.
    """

    a: float
    b: float
    x_l: float | None
    x_r: float | None
    x_F1: float | None
    x_F2: float | None
    x_S: float
    x_mid: float | None
    x_D: float | None
    x_D_limit: float | None
    contains_l: bool
    contains_r: bool
    contains_F1: bool
    contains_F2: bool
    errors: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _pick(roots, direction, last=False):
    hits = [r for r, d in roots if d == direction]
    if not hits:
        return None
    return hits[-1] if last else hits[0]


def reference_points(
    spec: CurveSpec,
    a: float,
    b: float,
    delta1: float | None = None,
    delta2: float | None = None,
) -> TheoreticalPoints:
    """Solve the tangency conditions of ``spec`` on [a, b] by scan-and-bisect.

    * ``x_l``: f'(x) (x - a) = f(x) - f(a) on (a, b + delta1]
    * ``x_r``: f'(x) (b - x) = f(b) - f(x) on [a - delta2, b)
    * ``x_F1``, ``x_F2``: f'(x) = total-chord slope on [a - delta2, b + delta1],
      at the local minimum and maximum of the distance from the total chord.

    ``delta1`` and ``delta2`` default to 10% of the window width.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    w = WINDOW_FRACTION * (b - a)
    d1 = w if delta1 is None else delta1
    d2 = w if delta2 is None else delta2
    fa, fb = float(evaluate(spec, a)), float(evaluate(spec, b))
    slope = (fb - fa) / (b - a)

    def f(x):
        return evaluate(spec, x)

    def df(x):
        return evaluate_d1(spec, x)

    # positive just right of a on convex data, crosses downward at x_l
    left = find_roots(lambda x: df(x) * (x - a) - (f(x) - fa), a, b + d1)
    # crosses upward at x_r, the root nearest b
    right = find_roots(lambda x: df(x) * (b - x) - (fb - f(x)), a - d2, b)
    par = find_roots(lambda x: df(x) - slope, a - d2, b + d1)

    errors = {}
    x_l = _pick(left, -1)
    x_r = _pick(right, +1, last=True)
    x_F1 = _pick(par, +1)
    x_F2 = _pick(par, -1, last=True)
    for name, val, lo, hi in (
        ("x_l", x_l, a, b + d1),
        ("x_r", x_r, a - d2, b),
        ("x_F1", x_F1, a - d2, b + d1),
        ("x_F2", x_F2, a - d2, b + d1),
    ):
        if val is None:
            errors[name] = str(RootNotBracketedError(f"no sign change for {name} on [{lo}, {hi}]"))

    def inside(x):
        return x is not None and a <= x <= b

    # a missing tangency point lies beyond its search window, hence beyond the data edge
    cl = min(x_l, b) if x_l is not None else b
    cr = max(x_r, a) if x_r is not None else a
    x_S = 0.5 * (cl + cr)
    x_mid = 0.5 * (x_l + x_r) if x_l is not None and x_r is not None else None
    x_D = x_D_limit = None
    if x_F1 is not None and x_F2 is not None:
        x_D = 0.5 * (x_F1 + x_F2)
        x_D_limit = 0.5 * (min(max(x_F1, a), b) + min(max(x_F2, a), b))
    return TheoreticalPoints(
        a=float(a),
        b=float(b),
        x_l=x_l,
        x_r=x_r,
        x_F1=x_F1,
        x_F2=x_F2,
        x_S=x_S,
        x_mid=x_mid,
        x_D=x_D,
        x_D_limit=x_D_limit,
        contains_l=inside(x_l),
        contains_r=inside(x_r),
        contains_F1=inside(x_F1),
        contains_F2=inside(x_F2),
        errors=errors,
    )
