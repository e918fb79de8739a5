import functools

import pytest

from trispectrum import build_tiling_ball


@functools.lru_cache(maxsize=None)
def _ball(p, q, radius):
    return build_tiling_ball((p, q), radius)


@pytest.fixture(scope="session")
def ball():
    """Session-cached tiling balls: ``ball(p, q, radius)``."""
    return _ball
