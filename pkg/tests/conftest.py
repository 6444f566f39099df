import numpy as np
import pytest

from foxwright import FWParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def disc_points(rng, n, rmax):
    """n points uniform in angle, radius uniform in (0, rmax]."""
    r = rmax * np.sqrt(rng.uniform(1e-4, 1.0, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def random_params(rng, p, q, lo=0.2, hi=5.0, wlo=0.3, whi=2.0, min_delta=-1.0):
    """Random positive parameters, redrawn until the series converges somewhere."""
    while True:
        params = FWParams(
            [(rng.uniform(lo, hi), rng.uniform(wlo, whi)) for _ in range(p)],
            [(rng.uniform(lo, hi), rng.uniform(wlo, whi)) for _ in range(q)],
        )
        if params.B.sum() - params.A.sum() > min_delta:
            return params
