import numpy as np
import pytest

from inflexion.model import CUBIC, FISHER_PRY, GOMPERTZ, NoiseSpec, add_noise, sample

# (spec, a, b) windows used throughout the published experiments
CATALOG = {
    "fisher-pry-sym": (FISHER_PRY, 2.0, 8.0),
    "fisher-pry-left": (FISHER_PRY, 4.2, 8.0),
    "gompertz": (GOMPERTZ, 3.5, 8.0),
    "cubic-sym": (CUBIC, -2.0, 7.0),
    "cubic-right": (CUBIC, -2.0, 8.0),
}


@pytest.fixture(params=sorted(CATALOG))
def catalog_case(request):
    return CATALOG[request.param]


@pytest.fixture
def fp_curve():
    return sample(FISHER_PRY, 2.0, 8.0, 500)


def noisy(spec, a, b, n=500, r=0.05, seed=0):
    return add_noise(sample(spec, a, b, n), NoiseSpec("uniform", r, seed))


def random_curve(rng, n):
    xs = np.cumsum(rng.uniform(0.01, 1.0, n + 1)) + rng.uniform(-5, 5)
    ys = rng.normal(0, 1, n + 1) + rng.uniform(-3, 3) * xs
    return xs, ys
