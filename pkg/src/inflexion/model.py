"""Sampled curves, the analytic curve catalog, noise injection and symmetry checks.

Every downstream estimator assumes data that is convex left of the inflection
point and concave right of it (see :func:`inflexion.estimators.orient` for the
mirrored case).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidCurveError,
    InvalidIntervalError,
    TooFewPointsError,
    UnsupportedFamilyError,
)
from .roots import bisect

MIN_POINTS = 4
SYMMETRY_ATOL = 1e-12
SYMMETRY_PROBES = 10_000

FAMILIES = ("fisher-pry", "gompertz", "cubic")
SIGMOIDS = ("fisher-pry", "gompertz")


def _frozen(a):
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Data ``(xs[i], ys[i])`` on a strictly increasing grid of at least four points.

    The grid need not be equally spaced. Arrays are copied and made read-only.
    """

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = _frozen(self.xs)
        ys = _frozen(self.ys)
        if xs.ndim != 1 or ys.ndim != 1:
            raise InvalidCurveError("xs and ys must be one-dimensional")
        if xs.shape != ys.shape:
            raise InvalidCurveError(f"length mismatch: {xs.size} abscissae, {ys.size} ordinates")
        if xs.size < MIN_POINTS:
            raise TooFewPointsError(f"need at least {MIN_POINTS} points, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise InvalidCurveError("non-finite value in data")
        if np.any(np.diff(xs) <= 0):
            raise InvalidCurveError("abscissae must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        """Number of subintervals (one less than the number of points)."""
        return self.xs.size - 1

    @property
    def a(self) -> float:
        return float(self.xs[0])

    @property
    def b(self) -> float:
        return float(self.xs[-1])

    def __len__(self):
        return self.xs.size

    def __eq__(self, other):
        if not isinstance(other, SampledCurve):
            return NotImplemented
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.ys, other.ys)

    __hash__ = None

    def subcurve(self, lo: int, hi: int) -> SampledCurve:
        """Points ``lo..hi`` inclusive."""
        return SampledCurve(self.xs[lo : hi + 1], self.ys[lo : hi + 1])

    def negated(self) -> SampledCurve:
        return SampledCurve(self.xs, -self.ys)

    def with_ys(self, ys) -> SampledCurve:
        return SampledCurve(self.xs, ys)


@dataclass(frozen=True)
class CurveSpec:
    """An analytic test curve with a known inflection abscissa.

    Sigmoids are parameterised by capacity ``L``, inflection ``p`` and rate ``k``:

    * fisher-pry: ``L/2 * (1 + tanh(k (x - p)))``
    * gompertz:   ``L * exp(-exp(-k (x - p)))``

    Cubics ``alpha x^3 + beta x^2 + gamma x + delta`` have ``p = -beta / (3 alpha)``.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamilyError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        params = {k: float(v) for k, v in self.params.items()}
        if self.family == "cubic":
            missing = {"alpha", "beta", "gamma", "delta"} - params.keys()
            if missing:
                raise ValueError(f"cubic needs coefficients {sorted(missing)}")
            if params["alpha"] == 0.0:
                raise ValueError("cubic leading coefficient alpha must be non-zero")
        else:
            missing = {"L", "p", "k"} - params.keys()
            if missing:
                raise ValueError(f"{self.family} needs parameters {sorted(missing)}")
            if params["L"] <= 0.0:
                raise ValueError("sigmoid capacity L must be positive")
            if params["k"] <= 0.0:
                raise ValueError("sigmoid rate k must be positive")
        object.__setattr__(self, "params", params)

    @classmethod
    def fisher_pry(cls, L=10.0, p=5.0, k=1.0):
        return cls("fisher-pry", {"L": L, "p": p, "k": k})

    @classmethod
    def gompertz(cls, L=10.0, p=5.0, k=1.0):
        return cls("gompertz", {"L": L, "p": p, "k": k})

    @classmethod
    def cubic(cls, alpha=-1.0 / 3.0, beta=2.5, gamma=-4.0, delta=0.5):
        return cls("cubic", {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta})

    @classmethod
    def named(cls, name: str) -> CurveSpec:
        """Catalog curve by family name with default parameters."""
        makers = {"fisher-pry": cls.fisher_pry, "gompertz": cls.gompertz, "cubic": cls.cubic}
        try:
            return makers[name]()
        except KeyError:
            raise UnsupportedFamilyError(f"unknown family {name!r}; choose from {FAMILIES}") from None

    @property
    def p(self) -> float:
        if self.family == "cubic":
            return -self.params["beta"] / (3.0 * self.params["alpha"])
        return self.params["p"]

    @property
    def L(self) -> float | None:
        return self.params.get("L")

    @property
    def is_sigmoid(self) -> bool:
        return self.family in SIGMOIDS

    def __call__(self, x):
        return evaluate(self, x)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "p": self.p}


FISHER_PRY = CurveSpec.fisher_pry()
GOMPERTZ = CurveSpec.gompertz()
CUBIC = CurveSpec.cubic()


def evaluate(spec: CurveSpec, x):
    """f(x) for scalars or arrays."""
    q = spec.params
    with np.errstate(over="ignore"):
        if spec.family == "fisher-pry":
            return 0.5 * q["L"] * (1.0 + np.tanh(q["k"] * (x - q["p"])))
        if spec.family == "gompertz":
            return q["L"] * np.exp(-np.exp(-q["k"] * (x - q["p"])))
    return ((q["alpha"] * x + q["beta"]) * x + q["gamma"]) * x + q["delta"]


def evaluate_d1(spec: CurveSpec, x):
    """Closed-form first derivative f'(x)."""
    q = spec.params
    with np.errstate(over="ignore"):
        if spec.family == "fisher-pry":
            return 0.5 * q["L"] * q["k"] / np.cosh(q["k"] * (x - q["p"])) ** 2
        if spec.family == "gompertz":
            u = np.exp(-q["k"] * (x - q["p"]))
            return q["L"] * q["k"] * u * np.exp(-u)
    return (3.0 * q["alpha"] * x + 2.0 * q["beta"]) * x + q["gamma"]


def evaluate_d2(spec: CurveSpec, x):
    """Closed-form second derivative f''(x)."""
    q = spec.params
    with np.errstate(over="ignore"):
        if spec.family == "fisher-pry":
            t = q["k"] * (x - q["p"])
            return -q["L"] * q["k"] ** 2 * np.tanh(t) / np.cosh(t) ** 2
        if spec.family == "gompertz":
            u = np.exp(-q["k"] * (x - q["p"]))
            return q["L"] * q["k"] ** 2 * u * np.exp(-u) * (u - 1.0)
    return 6.0 * q["alpha"] * x + 2.0 * q["beta"]


def capacity_points(spec: CurveSpec) -> tuple[float, float]:
    """Abscissae where a sigmoid reaches 1% and 99% of its capacity."""
    if not spec.is_sigmoid:
        raise UnsupportedFamilyError(f"{spec.family} has no capacity")
    L, p, k = spec.params["L"], spec.params["p"], spec.params["k"]
    lo, hi = p - 60.0 / k, p + 60.0 / k
    out = []
    for frac in (0.01, 0.99):
        target = frac * L
        out.append(float(bisect(lambda x: float(evaluate(spec, x)) - target, lo, hi, xtol=1e-14)))
    return out[0], out[1]


def sample(spec: CurveSpec, a: float, b: float, n: int) -> SampledCurve:
    """Noiseless samples on the equal-spaced grid ``x_i = a + i (b - a) / n``."""
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    if n < MIN_POINTS - 1:
        raise TooFewPointsError(f"need n >= {MIN_POINTS - 1} subintervals, got {n}")
    xs = a + np.arange(n + 1) * ((b - a) / n)
    xs[-1] = b
    return SampledCurve(xs, evaluate(spec, xs))


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean additive noise: U(-scale, scale) or N(0, scale^2)."""

    distribution: str = "uniform"
    scale: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in ("uniform", "normal"):
            raise ValueError(f"distribution must be 'uniform' or 'normal', got {self.distribution!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("noise scale must be positive and finite")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")

    @property
    def variance(self) -> float:
        """Per-point error variance (r^2/3 for uniform half-width r)."""
        if self.distribution == "uniform":
            return self.scale**2 / 3.0
        return self.scale**2

    def with_seed(self, seed: int) -> NoiseSpec:
        return NoiseSpec(self.distribution, self.scale, seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> NoiseSpec:
        """Parse ``"uniform:0.05"`` or ``"normal:0.1"``."""
        try:
            dist, scale = text.split(":")
            return cls(dist.strip(), float(scale), seed)
        except ValueError as exc:
            raise ValueError(f"bad noise spec {text!r}, expected DIST:SCALE ({exc})") from None


def noise_draws(noise: NoiseSpec, size: int) -> np.ndarray:
    """Errors from a PCG64 stream seeded with ``noise.seed``.

    Uniform errors are ``scale * (2u - 1)``; normal errors use Box-Muller on
    pairs of unit uniforms (cosine branch only), so both depend only on the
    PCG64 unit-uniform stream and are reproducible across platforms.
    """
    gen = np.random.Generator(np.random.PCG64(noise.seed))
    if noise.distribution == "uniform":
        return noise.scale * (2.0 * gen.random(size) - 1.0)
    u = gen.random((2, size))
    radius = np.sqrt(-2.0 * np.log1p(-u[0]))  # 1 - u in (0, 1]
    return noise.scale * radius * np.cos(2.0 * np.pi * u[1])


def add_noise(curve: SampledCurve, noise: NoiseSpec) -> SampledCurve:
    return curve.with_ys(curve.ys + noise_draws(noise, len(curve)))


class SymmetryClass(str, enum.Enum):
    SYMMETRIC = "data-symmetric"
    LEFT_ASYMMETRIC = "data-left-asymmetric"
    RIGHT_ASYMMETRIC = "data-right-asymmetric"


def classify_data_symmetry(a: float, b: float, p: float) -> SymmetryClass:
    """Placement of the window [a, b] relative to p.

    Left asymmetry is ``p - b < a - p`` and right asymmetry ``p - b > a - p``,
    exactly as the inequalities are conventionally printed; note this labels a
    window reaching further right of p than left of it as *left* asymmetric.
    """
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    lhs, rhs = p - b, a - p
    if abs(lhs - rhs) <= SYMMETRY_ATOL:
        return SymmetryClass.SYMMETRIC
    return SymmetryClass.LEFT_ASYMMETRIC if lhs < rhs else SymmetryClass.RIGHT_ASYMMETRIC


def symmetry_defect(spec: CurveSpec, delta: float, probes: int = SYMMETRY_PROBES) -> float:
    """max |f(p+x) + f(p-x) - 2 f(p)| over ``probes`` points of the open interval (0, delta).

    The curve is (eps, delta) asymptotically symmetric about p iff the result is < eps.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    x = delta * np.arange(1, probes + 1) / (probes + 1)
    p = spec.p
    return float(np.max(np.abs(evaluate(spec, p + x) + evaluate(spec, p - x) - 2.0 * evaluate(spec, p))))
