import random

import pytest

from frobgen import PolyRing


@pytest.fixture
def rng():
    return random.Random(20240913)


def make_ring(p, d, **kw):
    return PolyRing(p, d, **kw)


def rand_poly(rng, ring, max_degree=4, max_terms=4, nonzero=False):
    """Random sparse polynomial with bounded total degree."""
    while True:
        terms = []
        for _ in range(rng.randint(0 if not nonzero else 1, max_terms)):
            while True:
                e = tuple(rng.randint(0, max_degree) for _ in range(ring.d))
                if sum(e) <= max_degree:
                    break
            c = rng.randint(1, ring.p - 1) if ring.p > 2 else 1
            terms.append((e, c))
        f = ring.from_terms(terms)
        if not nonzero or not f.is_zero():
            return f
