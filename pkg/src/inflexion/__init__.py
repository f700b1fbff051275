"""Inflection point estimation for convex/concave sampled data by chord geometry."""

__version__ = "0.1.0"

from .chords import (
    ChordLine,
    SurfaceProfiles,
    chord,
    composite_trapezoid,
    surface_profiles,
    total_residuals,
    trapezoid,
)
from .cubic import CubicCoefficients, cubic_corrected_p, cubic_tangency
from .estimators import EdeReport, EseReport, TheoreticalPoints, ede, ese, orient, reference_points
from .model import (
    CUBIC,
    FISHER_PRY,
    GOMPERTZ,
    CurveSpec,
    NoiseSpec,
    SampledCurve,
    SymmetryClass,
    add_noise,
    capacity_points,
    classify_data_symmetry,
    evaluate,
    evaluate_d1,
    sample,
    symmetry_defect,
)
from .refine import IterationTrace, bede, bese
