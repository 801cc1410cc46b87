import numpy as np
import pytest

from warpedeinstein import Signature, classify_direction, random_smooth_field


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


def random_signature(rng, n, min_dim=3):
    return Signature(tuple(int(s) for s in rng.choice([-1, 1], n)), min_dim=min_dim)


def random_unit_direction(rng, eps):
    while True:
        d = classify_direction(rng.normal(size=eps.n), eps)
        if not d.is_null:
            return d


def random_trial(rng, n, margin=0.2):
    """Random smooth (phi, f) and a point where both exceed ``margin``."""
    phi = random_smooth_field(rng, n)
    f = random_smooth_field(rng, n)
    while True:
        p = rng.uniform(-1, 1, n)
        if phi.value(p) > margin and f.value(p) > margin:
            return phi, f, p
